//! Formal linear combinations over an exact coefficient ring, with sparse
//! canonical storage: zero coefficients are never kept, so equality is
//! structural. Products are assembled from basis-level structure constants
//! supplied by the caller.

use crate::coeff::{QuadExt, RatFuncL, Rational};
use crate::error::Result;
use num_traits::Zero;
use std::collections::BTreeMap;

/// Coefficient rings usable in a based algebra.
pub trait Coeff: Clone + PartialEq {
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
}

impl Coeff for Rational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

impl Coeff for QuadExt {
    fn is_zero(&self) -> bool {
        QuadExt::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

impl Coeff for RatFuncL {
    fn is_zero(&self) -> bool {
        RatFuncL::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

/// Sparse element of a based algebra with basis keys K.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Elt<K: Ord + Clone, R: Coeff> {
    terms: BTreeMap<K, R>,
}

impl<K: Ord + Clone, R: Coeff> Default for Elt<K, R> {
    fn default() -> Self {
        Elt { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone, R: Coeff> Elt<K, R> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(k: K, one: R) -> Self {
        let mut e = Self::zero();
        e.add_term(k, one);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (K, R)>) -> Self {
        let mut e = Self::zero();
        for (k, r) in terms {
            e.add_term(k, r);
        }
        e
    }

    pub fn add_term(&mut self, k: K, r: R) {
        if r.is_zero() {
            return;
        }
        match self.terms.remove(&k) {
            None => {
                self.terms.insert(k, r);
            }
            Some(prev) => {
                let sum = prev.add(&r);
                if !sum.is_zero() {
                    self.terms.insert(k, sum);
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, r) in &other.terms {
            out.add_term(k.clone(), r.clone());
        }
        out
    }

    pub fn scale(&self, s: &R) -> Self {
        let mut out = Self::zero();
        for (k, r) in &self.terms {
            out.add_term(k.clone(), r.mul(s));
        }
        out
    }

    /// Rebuild with every basis key and coefficient transformed; used for
    /// basis-change maps.
    pub fn map_terms<K2: Ord + Clone, R2: Coeff>(
        &self,
        mut f: impl FnMut(&K, &R) -> (K2, R2),
    ) -> Elt<K2, R2> {
        let mut out = Elt::zero();
        for (k, r) in &self.terms {
            let (k2, r2) = f(k, r);
            out.add_term(k2, r2);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: &K) -> Option<&R> {
        self.terms.get(k)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&K, &R)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Bilinear extension of a basis-level product. The closure returns the
/// expansion of (a, b) as a term list; it may fail (cap exceeded), which
/// aborts the whole product.
pub fn bilinear<K: Ord + Clone, R: Coeff>(
    x: &Elt<K, R>,
    y: &Elt<K, R>,
    mut basis_mul: impl FnMut(&K, &K) -> Result<Vec<(K, R)>>,
) -> Result<Elt<K, R>> {
    let mut out = Elt::zero();
    for (a, ca) in x.terms() {
        for (b, cb) in y.terms() {
            let scale = ca.mul(cb);
            if scale.is_zero() {
                continue;
            }
            for (k, r) in basis_mul(a, b)? {
                out.add_term(k, r.mul(&scale));
            }
        }
    }
    Ok(out)
}

impl<K: Ord + Clone + std::fmt::Display, R: Coeff + std::fmt::Display> std::fmt::Display
    for Elt<K, R>
{
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, r) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({r})*[{k}]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;

    #[test]
    fn zero_coefficients_vanish_structurally() {
        let mut e: Elt<&str, Rational> = Elt::zero();
        e.add_term("a", rat(2));
        e.add_term("a", rat(-2));
        assert!(e.is_zero());
        assert_eq!(e, Elt::zero());
        e.add_term("b", rat(0));
        assert!(e.is_zero());
    }

    #[test]
    fn bilinear_expands_structure_constants() {
        // Two-element "algebra": x*x = y, x*y = y*x = 0, y*y = y.
        let mul = |a: &&str, b: &&str| -> Result<Vec<(&'static str, Rational)>> {
            Ok(match (*a, *b) {
                ("x", "x") => vec![("y", rat(1))],
                ("y", "y") => vec![("y", rat(1))],
                _ => vec![],
            })
        };
        let x = Elt::basis("x", rat(2));
        let xy = Elt::from_terms([("x", rat(1)), ("y", rat(3))]);
        let prod = bilinear(&x, &xy, mul).unwrap();
        assert_eq!(prod, Elt::from_terms([("y", rat(2))]));
    }

    #[test]
    fn display_orders_by_key() {
        let e = Elt::from_terms([("b", rat(1)), ("a", rat_half())]);
        assert_eq!(e.to_string(), "(1/2)*[a] + (1)*[b]");
    }

    fn rat_half() -> Rational {
        crate::coeff::rat_frac(1, 2)
    }
}
