//! Exact Hall algebra computations for derived categories of type A quivers
//! over small prime fields.
//!
//! The crate is organized in layers. `coeff` provides the exact coefficient
//! rings (big rationals, the quadratic extension by a square root of the
//! field size, and rational functions in the Lefschetz symbol `L`). `fq` is
//! dense linear algebra over F_p with affine-space enumeration. `quiver`
//! builds the module-theoretic catalog of a type A quiver: interval
//! indecomposables, Hom/Ext tables, submodule enumeration, extension
//! middles, automorphism counts. `dcat` lifts that to two-term complexes of
//! projectives and implements the homotopy-category calculus: morphism
//! classes, cones, distinguished triangles, brace factors, triangle orbits.
//! `based`, `ringel`, `dhall`, `et` and `motivic` assemble the structure
//! constants into based algebras, their duals, the twisted extension by the
//! Grothendieck group, and the motivic variant, together with the identity
//! checkers (associativity, Riedtmann-Peng, orbit-sum equalities, octahedron
//! symmetries, pairing compatibilities, basis-change isomorphisms).
//!
//! All arithmetic is exact; nothing in the crate uses floating point.

pub mod based;
pub mod coeff;
pub mod dcat;
pub mod dhall;
pub mod error;
pub mod et;
pub mod fq;
pub mod motivic;
pub mod oct;
pub mod quiver;
pub mod ringel;

pub use based::{Coeff, Elt};
pub use coeff::{PolyL, QuadExt, RatFuncL, Rational};
pub use dcat::{DCtx, DMorphism, DObj, ShiftedIndec};
pub use dhall::{DerivedDualHall, DerivedHall};
pub use error::{Error, Result};
pub use et::{EtAlgebra, EtVariant};
pub use motivic::{AutMotive, CountingPolynomial, MotCats, MotCtx, MotElt};
pub use quiver::{ModCatalog, ModClass, Quiver};
pub use ringel::HallAlgebra;
