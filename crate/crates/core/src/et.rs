//! Lattice-extended twisted Hall algebras over Q(v) with v^2 = q.
//!
//! Basis keys pair a lattice class alpha (an integer vector over the
//! vertices) with an object class X; elements represent K_alpha u_X. The
//! same key type carries three products: the plus algebra, its minus-variant
//! dual, and a Drinfeld-style product on theta keys that embeds into the
//! minus algebra via phi. A bilinear pairing couples the plus and minus
//! sides; the comultiplication side of the pairing identity is evaluated
//! per key pair, where the pairing collapses the sum over triangles.

use crate::based::{Coeff, Elt};
use crate::coeff::{QuadExt, Rational};
use crate::dcat::{DCtx, DObj};
use crate::dhall::{h_const, DerivedHall};
use crate::error::Result;

pub type KClass = Vec<i64>;

pub fn kclass_add(a: &KClass, b: &KClass) -> KClass {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub type EtElt = Elt<(KClass, DObj), QuadExt>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtVariant {
    Plus,
    Minus,
}

pub struct EtAlgebra<'c, 'a> {
    pub ctx: &'c DCtx<'a>,
    hall: DerivedHall<'c, 'a>,
    q: u64,
    n: usize,
}

impl<'c, 'a> EtAlgebra<'c, 'a> {
    pub fn new(ctx: &'c DCtx<'a>) -> Self {
        EtAlgebra {
            ctx,
            hall: DerivedHall::new(ctx),
            q: ctx.cat.p,
            n: ctx.cat.quiver.n_vertices(),
        }
    }

    pub fn kclass_of(&self, x: &DObj) -> KClass {
        x.kclass(self.n)
    }

    pub fn euler_form(&self, a: &KClass, b: &KClass) -> i64 {
        self.ctx.cat.quiver.euler_form(a, b)
    }

    pub fn sym_form(&self, a: &KClass, b: &KClass) -> i64 {
        self.ctx.cat.quiver.sym_form(a, b)
    }

    /// Alternating sum over i of dim Hom(X, Y[i]), the object-level route
    /// to the lattice Euler form.
    pub fn euler_form_on_objects(&self, x: &DObj, y: &DObj) -> i64 {
        let xs = x.shifts_present();
        let ys = y.shifts_present();
        if xs.is_empty() || ys.is_empty() {
            return 0;
        }
        let lo = xs.first().unwrap() - ys.last().unwrap();
        let hi = xs.last().unwrap() - ys.first().unwrap() + 1;
        let mut acc = 0i64;
        for i in lo..=hi {
            let d = self.ctx.graded_hom_dim(x, y, i) as i64;
            if i.rem_euclid(2) == 0 {
                acc += d;
            } else {
                acc -= d;
            }
        }
        acc
    }

    pub fn v_pow(&self, e: i64) -> QuadExt {
        QuadExt::v_pow(self.q, e)
    }

    fn lift(&self, r: &Rational) -> QuadExt {
        QuadExt::from_rational(r.clone(), self.q)
    }

    pub fn basis(&self, alpha: KClass, x: &DObj) -> EtElt {
        assert_eq!(alpha.len(), self.n);
        Elt::basis((alpha, x.clone()), QuadExt::one(self.q))
    }

    pub fn one(&self) -> EtElt {
        self.basis(vec![0; self.n], &DObj::zero())
    }

    /// K_alpha u_X . K_beta u_Y = v^{<[X],[Y]> -+ (beta,[X])} K_{alpha+beta}
    /// u_X u_Y, minus sign of the pairing term in the plus algebra.
    pub fn mul(&self, a: &EtElt, b: &EtElt, variant: EtVariant) -> Result<EtElt> {
        let mut out = EtElt::zero();
        for ((alpha, x), ca) in a.terms() {
            let cx = self.kclass_of(x);
            for ((beta, y), cb) in b.terms() {
                let mut e = self.euler_form(&cx, &self.kclass_of(y));
                let tw = self.sym_form(beta, &cx);
                e += match variant {
                    EtVariant::Plus => -tw,
                    EtVariant::Minus => tw,
                };
                let scale = ca.mul(cb).mul(&self.v_pow(e));
                let gamma = kclass_add(alpha, beta);
                for (l, f) in self.hall.basis_mul(x, y)? {
                    out.add_term((gamma.clone(), l), scale.mul(&self.lift(&f)));
                }
            }
        }
        Ok(out)
    }

    /// (K_alpha u_X, K_beta u-_Y) = v^{-(alpha,beta)-(beta,[X])+(alpha,[Y])}
    /// delta_{X,Y} / (|Aut X| {X,X}), extended bilinearly.
    pub fn pairing(&self, a: &EtElt, b: &EtElt) -> QuadExt {
        let mut acc = QuadExt::zero(self.q);
        for ((alpha, x), ca) in a.terms() {
            for ((beta, y), cb) in b.terms() {
                if x != y {
                    continue;
                }
                let cx = self.kclass_of(x);
                let e = -self.sym_form(alpha, beta) - self.sym_form(beta, &cx)
                    + self.sym_form(alpha, &cx);
                let t = self.lift(&self.ctx.t_weight(x));
                acc = acc.add(&ca.mul(cb).mul(&self.v_pow(e)).mul(&t));
            }
        }
        acc
    }

    /// (a, bc) = (delta(a), b (x) c) on basis keys a = K_gamma u_L,
    /// b = K_alpha u-_X, c = K_beta u-_Y. The right side is the single
    /// surviving term of the comultiplication
    /// delta(K_gamma u_L) = sum v^{<X,Y>} h_L^{XY} (K_gamma u_X K_{[Y]})
    /// (x) (K_gamma u_Y), with u_X K_{[Y]} normalized to
    /// v^{-([Y],[X])} K_{[Y]} u_X.
    pub fn pairing_identity_check(
        &self,
        gamma: &KClass,
        l: &DObj,
        alpha: &KClass,
        x: &DObj,
        beta: &KClass,
        y: &DObj,
    ) -> Result<bool> {
        let lhs = self.pairing(
            &self.basis(gamma.clone(), l),
            &self.mul(
                &self.basis(alpha.clone(), x),
                &self.basis(beta.clone(), y),
                EtVariant::Minus,
            )?,
        );
        let cx = self.kclass_of(x);
        let cy = self.kclass_of(y);
        let e = self.euler_form(&cx, &cy) - self.sym_form(&cy, &cx);
        let h = h_const(self.ctx, l, x, y)?;
        let first = self.pairing(
            &self.basis(kclass_add(gamma, &cy), x),
            &self.basis(alpha.clone(), x),
        );
        let second = self.pairing(&self.basis(gamma.clone(), y), &self.basis(beta.clone(), y));
        let rhs = self
            .v_pow(e)
            .mul(&self.lift(&h))
            .mul(&first)
            .mul(&second);
        Ok(lhs == rhs)
    }

    /// K_alpha th_X * K_beta th_Y = v^{(beta,[X])-2(alpha,beta)}
    /// sum_L v^{<[X],[Y]>} h_L^{XY} K_{alpha+beta} th_L.
    pub fn dr_mul(&self, a: &EtElt, b: &EtElt) -> Result<EtElt> {
        let mut out = EtElt::zero();
        for ((alpha, x), ca) in a.terms() {
            let cx = self.kclass_of(x);
            for ((beta, y), cb) in b.terms() {
                let e = self.sym_form(beta, &cx) - 2 * self.sym_form(alpha, beta)
                    + self.euler_form(&cx, &self.kclass_of(y));
                let scale = ca.mul(cb).mul(&self.v_pow(e));
                let gamma = kclass_add(alpha, beta);
                let mut support: Vec<DObj> = self
                    .ctx
                    .hom_cone_tally(y, &x.shift(1))?
                    .keys()
                    .map(|c| c.shift(-1))
                    .collect();
                support.sort();
                support.dedup();
                for l in support {
                    let h = h_const(self.ctx, &l, x, y)?;
                    out.add_term((gamma.clone(), l), scale.mul(&self.lift(&h)));
                }
            }
        }
        Ok(out)
    }

    /// phi(K_alpha th_X) = v^{(alpha,alpha)} (|Aut X| {X,X}) K_alpha u-_X.
    pub fn dr_phi(&self, a: &EtElt) -> EtElt {
        let mut out = EtElt::zero();
        for ((alpha, x), c) in a.terms() {
            let e = self.sym_form(alpha, alpha);
            let t_inv = self.ctx.daut_order(x) * self.ctx.braces(x, x);
            out.add_term(
                (alpha.clone(), x.clone()),
                c.mul(&self.v_pow(e)).mul(&self.lift(&t_inv)),
            );
        }
        out
    }

    /// phi intertwines the theta product with the minus product.
    pub fn dr_phi_check(
        &self,
        alpha: &KClass,
        x: &DObj,
        beta: &KClass,
        y: &DObj,
    ) -> Result<bool> {
        let a = self.basis(alpha.clone(), x);
        let b = self.basis(beta.clone(), y);
        let lhs = self.dr_phi(&self.dr_mul(&a, &b)?);
        let rhs = self.mul(&self.dr_phi(&a), &self.dr_phi(&b), EtVariant::Minus)?;
        Ok(lhs == rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{ModCatalog, Quiver};

    fn a2(p: u64) -> ModCatalog {
        ModCatalog::new(Quiver::from_spec("A2").unwrap(), p).unwrap()
    }

    fn d(s: &str) -> DObj {
        DObj::parse(s).unwrap()
    }

    #[test]
    fn kclass_values() {
        let cat = a2(2);
        let ctx = DCtx::new(&cat);
        let et = EtAlgebra::new(&ctx);
        assert_eq!(et.kclass_of(&d("I[1,2]")), vec![1, 1]);
        assert_eq!(et.kclass_of(&d("I[1,1][1]")), vec![-1, 0]);
        assert_eq!(et.kclass_of(&d("I[1,1]+I[1,1][1]")), vec![0, 0]);
    }

    #[test]
    fn euler_form_values_and_object_route() {
        let cat = a2(2);
        let ctx = DCtx::new(&cat);
        let et = EtAlgebra::new(&ctx);
        let s1 = et.kclass_of(&d("I[1,1]"));
        let s2 = et.kclass_of(&d("I[2,2]"));
        assert_eq!(et.euler_form(&s1, &s2), -1);
        assert_eq!(et.euler_form(&s2, &s1), 0);
        assert_eq!(et.sym_form(&s1, &s1), 2);
        for xs in ["I[1,1]", "I[2,2]", "I[1,2]", "I[1,1]+I[2,2][1]", "I[1,2][-1]"] {
            for ys in ["I[1,1]", "I[2,2]", "I[1,2]", "2*I[1,1]", "I[2,2][1]"] {
                let (x, y) = (d(xs), d(ys));
                assert_eq!(
                    et.euler_form(&et.kclass_of(&x), &et.kclass_of(&y)),
                    et.euler_form_on_objects(&x, &y),
                    "({xs}, {ys})"
                );
            }
        }
    }

    #[test]
    fn kclass_additive_on_cones() {
        let cat = a2(2);
        let ctx = DCtx::new(&cat);
        let et = EtAlgebra::new(&ctx);
        for xs in ["I[1,1]", "I[2,2]", "I[1,2][1]"] {
            for ls in ["I[1,1]", "I[1,2]", "I[2,2]+I[1,1]"] {
                let (x, l) = (d(xs), d(ls));
                for y in ctx.hom_cone_tally(&x, &l).unwrap().keys() {
                    assert_eq!(
                        et.kclass_of(&l),
                        kclass_add(&et.kclass_of(&x), &et.kclass_of(y)),
                        "cone additivity at ({xs}, {ls})"
                    );
                }
            }
        }
    }

    #[test]
    fn product_frozen_values() {
        let cat = a2(2);
        let ctx = DCtx::new(&cat);
        let et = EtAlgebra::new(&ctx);
        // unit on the lattice part alone
        let ka = et.basis(vec![1, 0], &DObj::zero());
        let kb = et.basis(vec![0, 1], &DObj::zero());
        let prod = et.mul(&ka, &kb, EtVariant::Plus).unwrap();
        assert_eq!(prod, et.basis(vec![1, 1], &DObj::zero()));
        // v^{-3} from <[S1],[S2]> = -1 and ((1,0),[S1]) = 2
        let a = et.basis(vec![0, 0], &d("I[1,1]"));
        let b = et.basis(vec![1, 0], &d("I[2,2]"));
        let prod = et.mul(&a, &b, EtVariant::Plus).unwrap();
        let expect = et
            .basis(vec![1, 0], &d("I[1,1]+I[2,2]"))
            .scale(&et.v_pow(-3));
        assert_eq!(prod, expect);
        // exponent 0: plain structure constants survive
        let a = et.basis(vec![0, 0], &d("I[2,2]"));
        let b = et.basis(vec![0, 0], &d("I[1,1]"));
        let prod = et.mul(&a, &b, EtVariant::Plus).unwrap();
        let expect = et
            .basis(vec![0, 0], &d("I[1,1]+I[2,2]"))
            .add(&et.basis(vec![0, 0], &d("I[1,2]")));
        assert_eq!(prod, expect);
    }

    #[test]
    fn commutation_normalization_is_derived() {
        let cat = a2(2);
        let ctx = DCtx::new(&cat);
        let et = EtAlgebra::new(&ctx);
        for xs in ["I[1,1]", "I[2,2]", "I[1,2][1]"] {
            let x = d(xs);
            for beta in [vec![1i64, 0], vec![0, 1], vec![-1, 1]] {
                let u_then_k = et
                    .mul(
                        &et.basis(vec![0, 0], &x),
                        &et.basis(beta.clone(), &DObj::zero()),
                        EtVariant::Plus,
                    )
                    .unwrap();
                let e = -et.sym_form(&beta, &et.kclass_of(&x));
                let k_then_u = et.basis(beta, &x).scale(&et.v_pow(e));
                assert_eq!(u_then_k, k_then_u, "normalization at {xs}");
            }
        }
    }

    #[test]
    fn pairing_frozen_values() {
        let cat = a2(2);
        let ctx = DCtx::new(&cat);
        let et = EtAlgebra::new(&ctx);
        let zero = vec![0i64, 0];
        let p = et.pairing(
            &et.basis(zero.clone(), &d("I[1,1]")),
            &et.basis(zero.clone(), &d("I[2,2]")),
        );
        assert!(p.is_zero());
        let p = et.pairing(
            &et.basis(zero.clone(), &d("I[1,1]")),
            &et.basis(zero.clone(), &d("I[1,1]")),
        );
        assert_eq!(p, QuadExt::one(2));
        let p = et.pairing(
            &et.basis(vec![1, 0], &d("I[1,1]")),
            &et.basis(vec![1, 0], &d("I[1,1]")),
        );
        assert_eq!(p, et.v_pow(-2));
    }

    #[test]
    fn pairing_identity_instances() {
        let cat = a2(2);
        let ctx = DCtx::new(&cat);
        let et = EtAlgebra::new(&ctx);
        let zero = vec![0i64, 0];
        assert!(et
            .pairing_identity_check(&zero, &DObj::zero(), &zero, &DObj::zero(), &zero, &DObj::zero())
            .unwrap());
        assert!(et
            .pairing_identity_check(&zero, &d("I[1,2]"), &zero, &d("I[2,2]"), &zero, &d("I[1,1]"))
            .unwrap());
        assert!(et
            .pairing_identity_check(
                &vec![1, 0],
                &d("I[1,2]"),
                &vec![0, 0],
                &d("I[2,2]"),
                &vec![0, 1],
                &d("I[1,1]"),
            )
            .unwrap());
    }

    #[test]
    fn dr_phi_instances() {
        let cat = a2(2);
        let ctx = DCtx::new(&cat);
        let et = EtAlgebra::new(&ctx);
        let zero = vec![0i64, 0];
        assert!(et.dr_phi_check(&zero, &DObj::zero(), &zero, &DObj::zero()).unwrap());
        assert!(et.dr_phi_check(&zero, &d("I[2,2]"), &zero, &d("I[1,1]")).unwrap());
        assert!(et
            .dr_phi_check(&vec![1, 0], &d("I[2,2]"), &vec![0, 1], &d("I[1,1]"))
            .unwrap());
    }

    #[test]
    fn plus_associativity_small() {
        let cat = a2(2);
        let ctx = DCtx::new(&cat);
        let et = EtAlgebra::new(&ctx);
        let keys: Vec<(KClass, DObj)> = [
            (vec![0, 0], "0"),
            (vec![1, 0], "I[1,1]"),
            (vec![0, -1], "I[2,2]"),
            (vec![1, 1], "I[1,2][1]"),
        ]
        .into_iter()
        .map(|(k, s)| (k, d(s)))
        .collect();
        for (ka, xa) in &keys {
            let a = et.basis(ka.clone(), xa);
            for (kb, xb) in &keys {
                let b = et.basis(kb.clone(), xb);
                for (kc, xc) in &keys {
                    let c = et.basis(kc.clone(), xc);
                    let ab_c = et
                        .mul(&et.mul(&a, &b, EtVariant::Plus).unwrap(), &c, EtVariant::Plus)
                        .unwrap();
                    let a_bc = et
                        .mul(&a, &et.mul(&b, &c, EtVariant::Plus).unwrap(), EtVariant::Plus)
                        .unwrap();
                    assert_eq!(ab_c, a_bc);
                }
            }
        }
    }
}
