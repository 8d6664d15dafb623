//! Exact coefficient arithmetic: arbitrary-precision rationals, the
//! quadratic extension Q(v) with v^2 = q, polynomials and rational functions
//! in the Lefschetz symbol L.
//!
//! Everything here is canonical-on-construction: rationals are reduced,
//! polynomials carry no trailing zero coefficients, rational functions are
//! reduced with monic denominator. Equality is therefore structural.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational n/d. Panics if d = 0.
pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Rational from an unsigned count.
pub fn rat_u64(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exact q^e for integer e; negative exponents give 1/q^|e|. Panics if
/// q = 0 and e < 0.
pub fn qpow(q: u64, e: i64) -> Rational {
    let base = Rational::from_integer(BigInt::from(q));
    match e.cmp(&0) {
        std::cmp::Ordering::Equal => Rational::one(),
        std::cmp::Ordering::Greater => pow_nonneg(&base, e as u64),
        std::cmp::Ordering::Less => {
            assert!(q != 0, "qpow: 0^negative");
            pow_nonneg(&base, e.unsigned_abs()).recip()
        }
    }
}

fn pow_nonneg(base: &Rational, mut e: u64) -> Rational {
    let mut acc = Rational::one();
    let mut sq = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &sq;
        }
        sq = &sq * &sq;
        e >>= 1;
    }
    acc
}

// ---- quadratic extension Q(v), v^2 = q ----

/// Element a + b*v of Q(v) with v^2 = q. The field size q travels with the
/// element; mixing elements over different q panics.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    pub a: Rational,
    pub b: Rational,
    pub q: u64,
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational, q: u64) -> Self {
        QuadExt { a, b, q }
    }

    pub fn zero(q: u64) -> Self {
        QuadExt::new(Rational::zero(), Rational::zero(), q)
    }

    pub fn one(q: u64) -> Self {
        QuadExt::new(Rational::one(), Rational::zero(), q)
    }

    pub fn from_rational(a: Rational, q: u64) -> Self {
        QuadExt::new(a, Rational::zero(), q)
    }

    /// v^e. Even exponents land in Q: v^(2k) = q^k.
    pub fn v_pow(q: u64, e: i64) -> Self {
        let half = e.div_euclid(2);
        let rem = e.rem_euclid(2);
        let scalar = qpow(q, half);
        if rem == 0 {
            QuadExt::from_rational(scalar, q)
        } else {
            QuadExt::new(Rational::zero(), scalar, q)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Multiplicative inverse via the conjugate: (a + bv)^-1 =
    /// (a - bv)/(a^2 - b^2 q). None for zero. The norm a^2 - b^2 q never
    /// vanishes on nonzero elements because q is not a rational square
    /// (q is prime wherever this crate constructs a QuadExt).
    pub fn inv(&self) -> Option<QuadExt> {
        if self.is_zero() {
            return None;
        }
        let qr = rat(self.q as i64);
        let norm = &self.a * &self.a - &self.b * &self.b * qr;
        assert!(!norm.is_zero(), "QuadExt::inv: zero norm on nonzero element (q a square?)");
        Some(QuadExt::new(&self.a / &norm, -(&self.b / &norm), self.q))
    }

    fn same_q(&self, other: &QuadExt) -> u64 {
        assert_eq!(self.q, other.q, "QuadExt arithmetic across different q");
        self.q
    }
}

impl std::ops::Add for &QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: &QuadExt) -> QuadExt {
        let q = self.same_q(rhs);
        QuadExt::new(&self.a + &rhs.a, &self.b + &rhs.b, q)
    }
}

impl std::ops::Sub for &QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: &QuadExt) -> QuadExt {
        let q = self.same_q(rhs);
        QuadExt::new(&self.a - &rhs.a, &self.b - &rhs.b, q)
    }
}

impl std::ops::Mul for &QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: &QuadExt) -> QuadExt {
        let q = self.same_q(rhs);
        let qr = rat(q as i64);
        QuadExt::new(
            &self.a * &rhs.a + (&self.b * &rhs.b) * qr,
            &self.a * &rhs.b + &self.b * &rhs.a,
            q,
        )
    }
}

impl std::ops::Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt::new(-self.a.clone(), -self.b.clone(), self.q)
    }
}

macro_rules! forward_binop {
    ($t:ty, $tr:ident, $m:ident) => {
        impl std::ops::$tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
        impl std::ops::$tr<&$t> for $t {
            type Output = $t;
            fn $m(self, rhs: &$t) -> $t {
                (&self).$m(rhs)
            }
        }
        impl std::ops::$tr<$t> for &$t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                self.$m(&rhs)
            }
        }
    };
}

forward_binop!(QuadExt, Add, add);
forward_binop!(QuadExt, Sub, sub);
forward_binop!(QuadExt, Mul, mul);

impl std::fmt::Display for QuadExt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let vpart = if self.b.abs() == Rational::one() {
            "v".to_string()
        } else {
            format!("{}*v", self.b.abs())
        };
        if self.a.is_zero() {
            if self.b.is_negative() {
                write!(f, "-{vpart}")
            } else {
                write!(f, "{vpart}")
            }
        } else if self.b.is_negative() {
            write!(f, "{}-{vpart}", self.a)
        } else {
            write!(f, "{}+{vpart}", self.a)
        }
    }
}

// ---- polynomials in L ----

/// Polynomial in the symbol L with rational coefficients, stored in
/// ascending degree with no trailing zeros (zero polynomial = empty vector).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyL {
    coeffs: Vec<Rational>,
}

impl PolyL {
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PolyL { coeffs }
    }

    pub fn zero() -> Self {
        PolyL { coeffs: vec![] }
    }

    pub fn one() -> Self {
        PolyL::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        PolyL::from_coeffs(vec![c])
    }

    /// The symbol L itself.
    pub fn l() -> Self {
        PolyL::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    /// L^k.
    pub fn l_pow(k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = Rational::one();
        PolyL::from_coeffs(coeffs)
    }

    /// L^k - 1, the ubiquitous unipotent-group factor.
    pub fn l_pow_minus_one(k: usize) -> Self {
        &PolyL::l_pow(k) - &PolyL::one()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, at: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * at + c;
        }
        acc
    }

    pub fn scale(&self, s: &Rational) -> PolyL {
        PolyL::from_coeffs(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn make_monic(&self) -> PolyL {
        if self.is_zero() {
            return PolyL::zero();
        }
        self.scale(&self.leading_coeff().recip())
    }

    /// Euclidean division: self = q * div + r with deg r < deg div.
    /// Panics if div is zero.
    pub fn divrem(&self, div: &PolyL) -> (PolyL, PolyL) {
        assert!(!div.is_zero(), "PolyL::divrem by zero");
        let dd = div.degree().unwrap();
        let lead_inv = div.leading_coeff().recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let factor = rem.last().unwrap() * &lead_inv;
            if !factor.is_zero() {
                for (i, c) in div.coeffs.iter().enumerate() {
                    let val = &rem[k + i] - &(c * &factor);
                    rem[k + i] = val;
                }
                quot[k] = factor;
            }
            // The leading entry is exactly zero now; drop it and any new
            // zero tail below it.
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (PolyL::from_coeffs(quot), PolyL::from_coeffs(rem))
    }

    /// Monic gcd via the Euclidean algorithm; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &PolyL) -> PolyL {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }
}

impl std::ops::Add for &PolyL {
    type Output = PolyL;
    fn add(self, rhs: &PolyL) -> PolyL {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        PolyL::from_coeffs(coeffs)
    }
}

impl std::ops::Sub for &PolyL {
    type Output = PolyL;
    fn sub(self, rhs: &PolyL) -> PolyL {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        PolyL::from_coeffs(coeffs)
    }
}

impl std::ops::Mul for &PolyL {
    type Output = PolyL;
    fn mul(self, rhs: &PolyL) -> PolyL {
        if self.is_zero() || rhs.is_zero() {
            return PolyL::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let val = &coeffs[i + j] + &(a * b);
                coeffs[i + j] = val;
            }
        }
        PolyL::from_coeffs(coeffs)
    }
}

impl std::ops::Neg for &PolyL {
    type Output = PolyL;
    fn neg(self) -> PolyL {
        PolyL::from_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

forward_binop!(PolyL, Add, add);
forward_binop!(PolyL, Sub, sub);
forward_binop!(PolyL, Mul, mul);

impl std::fmt::Display for PolyL {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let show_coeff = k == 0 || mag != Rational::one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            if k > 0 {
                if show_coeff {
                    write!(f, "*")?;
                }
                if k == 1 {
                    write!(f, "L")?;
                } else {
                    write!(f, "L^{k}")?;
                }
            }
        }
        Ok(())
    }
}

// ---- rational functions in L ----

/// Reduced fraction of polynomials in L. Invariants: gcd(num, den) = 1,
/// den is monic, zero is 0/1. Equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFuncL {
    num: PolyL,
    den: PolyL,
}

impl RatFuncL {
    /// Reduce and normalize. Panics if den is zero.
    pub fn new(num: PolyL, den: PolyL) -> Self {
        assert!(!den.is_zero(), "RatFuncL: zero denominator");
        if num.is_zero() {
            return RatFuncL { num: PolyL::zero(), den: PolyL::one() };
        }
        let g = num.gcd(&den);
        let (num, r1) = num.divrem(&g);
        debug_assert!(r1.is_zero());
        let (den, r2) = den.divrem(&g);
        debug_assert!(r2.is_zero());
        let lead = den.leading_coeff().recip();
        RatFuncL { num: num.scale(&lead), den: den.scale(&lead) }
    }

    pub fn from_poly(p: PolyL) -> Self {
        RatFuncL { num: p, den: PolyL::one() }
    }

    pub fn from_rational(c: Rational) -> Self {
        RatFuncL::from_poly(PolyL::constant(c))
    }

    pub fn zero() -> Self {
        RatFuncL::from_poly(PolyL::zero())
    }

    pub fn one() -> Self {
        RatFuncL::from_poly(PolyL::one())
    }

    /// L^e for any integer e; negative e gives 1/L^|e|.
    pub fn l_pow(e: i64) -> Self {
        if e >= 0 {
            RatFuncL::from_poly(PolyL::l_pow(e as usize))
        } else {
            RatFuncL { num: PolyL::one(), den: PolyL::l_pow(e.unsigned_abs() as usize) }
        }
    }

    pub fn num(&self) -> &PolyL {
        &self.num
    }

    pub fn den(&self) -> &PolyL {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den == PolyL::one()
    }

    pub fn inv(&self) -> Option<RatFuncL> {
        if self.is_zero() {
            return None;
        }
        Some(RatFuncL::new(self.den.clone(), self.num.clone()))
    }

    /// Evaluate at L = at; None if the denominator vanishes there.
    pub fn eval(&self, at: &Rational) -> Option<Rational> {
        let d = self.den.eval(at);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(at) / d)
    }
}

impl std::ops::Add for &RatFuncL {
    type Output = RatFuncL;
    fn add(self, rhs: &RatFuncL) -> RatFuncL {
        RatFuncL::new(&self.num * &rhs.den + &rhs.num * &self.den, &self.den * &rhs.den)
    }
}

impl std::ops::Sub for &RatFuncL {
    type Output = RatFuncL;
    fn sub(self, rhs: &RatFuncL) -> RatFuncL {
        RatFuncL::new(&self.num * &rhs.den - &rhs.num * &self.den, &self.den * &rhs.den)
    }
}

impl std::ops::Mul for &RatFuncL {
    type Output = RatFuncL;
    fn mul(self, rhs: &RatFuncL) -> RatFuncL {
        RatFuncL::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl std::ops::Div for &RatFuncL {
    type Output = RatFuncL;
    fn div(self, rhs: &RatFuncL) -> RatFuncL {
        assert!(!rhs.is_zero(), "RatFuncL division by zero");
        RatFuncL::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl std::ops::Neg for &RatFuncL {
    type Output = RatFuncL;
    fn neg(self) -> RatFuncL {
        RatFuncL { num: -&self.num, den: self.den.clone() }
    }
}

forward_binop!(RatFuncL, Add, add);
forward_binop!(RatFuncL, Sub, sub);
forward_binop!(RatFuncL, Mul, mul);
forward_binop!(RatFuncL, Div, div);

impl std::fmt::Display for RatFuncL {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_polynomial() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})/({})", self.num, self.den)
    }
}

// ---- interpolation ----

/// Recover the polynomial of degree <= degree_bound through the sample
/// points (x, y), then verify it against every remaining sample. At least
/// one sample beyond degree_bound + 1 is required so the verification is
/// never vacuous. Duplicate sample x's are rejected.
pub fn interpolate_poly(
    samples: &[(Rational, Rational)],
    degree_bound: usize,
) -> crate::error::Result<PolyL> {
    use crate::error::Error;
    let need = degree_bound + 2;
    if samples.len() < need {
        return Err(Error::Config(format!(
            "interpolate_poly: need at least {need} samples for degree bound {degree_bound}, got {}",
            samples.len()
        )));
    }
    for i in 0..samples.len() {
        for j in (i + 1)..samples.len() {
            if samples[i].0 == samples[j].0 {
                return Err(Error::Config(format!(
                    "interpolate_poly: duplicate sample point L = {}",
                    samples[i].0
                )));
            }
        }
    }
    let fit = &samples[..degree_bound + 1];
    let mut poly = PolyL::zero();
    for (i, (xi, yi)) in fit.iter().enumerate() {
        let mut basis = PolyL::constant(yi.clone());
        for (j, (xj, _)) in fit.iter().enumerate() {
            if i == j {
                continue;
            }
            let denom = xi - xj;
            let factor = PolyL::from_coeffs(vec![-xj / &denom, denom.recip()]);
            basis = &basis * &factor;
        }
        poly = &poly + &basis;
    }
    for (x, y) in samples {
        let got = poly.eval(x);
        if &got != y {
            return Err(Error::Inconsistent(format!(
                "interpolate_poly: fitted polynomial {poly} gives {got} at L = {x}, sample says {y}"
            )));
        }
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q2(a: (i64, i64), b: (i64, i64)) -> QuadExt {
        QuadExt::new(rat_frac(a.0, a.1), rat_frac(b.0, b.1), 2)
    }

    #[test]
    fn qpow_handles_negative_exponents() {
        assert_eq!(qpow(2, -3), rat_frac(1, 8));
        assert_eq!(qpow(5, 0), rat(1));
        assert_eq!(qpow(3, 4), rat(81));
        assert_eq!(qpow(2, 10), rat(1024));
    }

    #[test]
    fn quadext_squares_to_q() {
        let v = QuadExt::v_pow(2, 1);
        assert_eq!(&v * &v, QuadExt::from_rational(rat(2), 2));
        assert_eq!(QuadExt::v_pow(2, -2), QuadExt::from_rational(rat_frac(1, 2), 2));
        assert_eq!(QuadExt::v_pow(3, 5), QuadExt::new(rat(0), rat(9), 3));
        assert_eq!(QuadExt::v_pow(2, -1), QuadExt::new(rat(0), rat_frac(1, 2), 2));
    }

    #[test]
    fn quadext_inverse_roundtrips() {
        let x = q2((1, 1), (1, 1));
        let inv = x.inv().unwrap();
        assert_eq!(&x * &inv, QuadExt::one(2));
        assert_eq!(inv, q2((-1, 1), (1, 1)));
        assert!(QuadExt::zero(7).inv().is_none());
        let y = QuadExt::new(rat_frac(2, 3), rat_frac(-1, 5), 5);
        assert_eq!(&y * &y.inv().unwrap(), QuadExt::one(5));
    }

    #[test]
    fn quadext_display_is_compact() {
        assert_eq!(q2((1, 2), (0, 1)).to_string(), "1/2");
        assert_eq!(q2((0, 1), (1, 1)).to_string(), "v");
        assert_eq!(q2((0, 1), (-3, 2)).to_string(), "-3/2*v");
        assert_eq!(q2((1, 1), (-1, 1)).to_string(), "1-v");
        assert_eq!(q2((2, 1), (5, 1)).to_string(), "2+5*v");
        assert_eq!(QuadExt::zero(2).to_string(), "0");
    }

    #[test]
    fn poly_product_difference_of_squares() {
        let lm1 = PolyL::from_coeffs(vec![rat(-1), rat(1)]);
        let lp1 = PolyL::from_coeffs(vec![rat(1), rat(1)]);
        assert_eq!(&lm1 * &lp1, PolyL::l_pow_minus_one(2));
    }

    #[test]
    fn poly_divrem_and_gcd() {
        let a = PolyL::l_pow_minus_one(2);
        let b = PolyL::from_coeffs(vec![rat(-1), rat(1)]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q, PolyL::from_coeffs(vec![rat(1), rat(1)]));
        assert!(r.is_zero());

        let sq = &b * &b;
        assert_eq!(a.gcd(&sq), b);

        let c = PolyL::from_coeffs(vec![rat(1), rat(0), rat(1)]);
        assert_eq!(a.gcd(&c), PolyL::one());
    }

    #[test]
    fn poly_display_descending_terms() {
        assert_eq!(PolyL::l_pow_minus_one(2).to_string(), "L^2-1");
        let p = PolyL::from_coeffs(vec![rat_frac(1, 2), rat(-1), rat(0), rat(2)]);
        assert_eq!(p.to_string(), "2*L^3-L+1/2");
        assert_eq!(PolyL::zero().to_string(), "0");
        assert_eq!(PolyL::l().to_string(), "L");
    }

    #[test]
    fn ratfunc_reduces_and_normalizes() {
        let f = RatFuncL::new(PolyL::l_pow_minus_one(2), PolyL::from_coeffs(vec![rat(-1), rat(1)]));
        assert!(f.is_polynomial());
        assert_eq!(f.num(), &PolyL::from_coeffs(vec![rat(1), rat(1)]));

        let g = RatFuncL::new(
            PolyL::from_coeffs(vec![rat(2), rat(2)]),
            PolyL::constant(rat(4)),
        );
        assert!(g.is_polynomial());
        assert_eq!(g.num(), &PolyL::from_coeffs(vec![rat_frac(1, 2), rat_frac(1, 2)]));

        let h = RatFuncL::new(PolyL::one(), PolyL::from_coeffs(vec![rat(-2), rat(2)]));
        assert_eq!(h.den(), &PolyL::from_coeffs(vec![rat(-1), rat(1)]));
        assert_eq!(h.num(), &PolyL::constant(rat_frac(1, 2)));
    }

    #[test]
    fn ratfunc_eval_detects_poles() {
        let h = RatFuncL::new(PolyL::one(), PolyL::from_coeffs(vec![rat(-1), rat(1)]));
        assert_eq!(h.eval(&rat(3)), Some(rat_frac(1, 2)));
        assert_eq!(h.eval(&rat(1)), None);
    }

    #[test]
    fn ratfunc_l_pow_negative() {
        let f = RatFuncL::l_pow(-2);
        assert_eq!(f.eval(&rat(2)), Some(rat_frac(1, 4)));
        assert_eq!(&f * &RatFuncL::l_pow(2), RatFuncL::one());
        assert_eq!(f.to_string(), "(1)/(L^2)");
    }

    #[test]
    fn interpolate_recovers_polynomial_with_held_out_check() {
        let target = PolyL::from_coeffs(vec![rat(1), rat(0), rat(1)]);
        let samples: Vec<_> =
            [2i64, 3, 5, 7].iter().map(|&x| (rat(x), target.eval(&rat(x)))).collect();
        let got = interpolate_poly(&samples, 2).unwrap();
        assert_eq!(got, target);
    }

    #[test]
    fn interpolate_rejects_bad_held_out_sample() {
        let target = PolyL::from_coeffs(vec![rat(1), rat(0), rat(1)]);
        let mut samples: Vec<_> =
            [2i64, 3, 5, 7].iter().map(|&x| (rat(x), target.eval(&rat(x)))).collect();
        samples[3].1 += rat(1);
        let err = interpolate_poly(&samples, 2).unwrap_err();
        assert!(matches!(err, crate::error::Error::Inconsistent(_)));
    }

    #[test]
    fn interpolate_rejects_insufficient_samples() {
        let samples = vec![(rat(2), rat(5)), (rat(3), rat(10))];
        let err = interpolate_poly(&samples, 1).unwrap_err();
        assert!(matches!(err, crate::error::Error::Config(_)));
        let dup = vec![(rat(2), rat(5)), (rat(2), rat(5)), (rat(3), rat(10))];
        assert!(matches!(interpolate_poly(&dup, 1), Err(crate::error::Error::Config(_))));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_rat() -> impl Strategy<Value = Rational> {
            (-20i64..=20, 1i64..=7).prop_map(|(n, d)| rat_frac(n, d))
        }

        fn arb_quad() -> impl Strategy<Value = QuadExt> {
            (arb_rat(), arb_rat()).prop_map(|(a, b)| QuadExt::new(a, b, 3))
        }

        fn arb_poly() -> impl Strategy<Value = PolyL> {
            proptest::collection::vec(arb_rat(), 0..5).prop_map(PolyL::from_coeffs)
        }

        proptest! {
            #[test]
            fn quadext_field_laws(x in arb_quad(), y in arb_quad(), z in arb_quad()) {
                prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
                prop_assert_eq!(&x * &y, &y * &x);
                prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
                if let Some(inv) = x.inv() {
                    prop_assert_eq!(&x * &inv, QuadExt::one(3));
                }
            }

            #[test]
            fn poly_ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!(&a * &b, &b * &a);
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                prop_assert_eq!(&a - &a, PolyL::zero());
            }

            #[test]
            fn poly_divrem_reconstructs(a in arb_poly(), b in arb_poly()) {
                prop_assume!(!b.is_zero());
                let (q, r) = a.divrem(&b);
                prop_assert_eq!(&(&q * &b) + &r, a);
                if let (Some(rd), Some(bd)) = (r.degree(), b.degree()) {
                    prop_assert!(rd < bd);
                }
            }

            #[test]
            fn ratfunc_field_laws(a in arb_poly(), b in arb_poly(), c in arb_poly(), d in arb_poly()) {
                prop_assume!(!b.is_zero() && !d.is_zero());
                let x = RatFuncL::new(a, b.clone());
                let y = RatFuncL::new(c, d);
                prop_assert_eq!(&(&x + &y) - &y, x.clone());
                if let Some(inv) = y.inv() {
                    prop_assert_eq!(&(&x * &y) * &inv, x.clone());
                }
                prop_assert_eq!(&x * &y, &y * &x);
            }

            #[test]
            fn ratfunc_eval_is_a_homomorphism(a in arb_poly(), b in arb_poly(), c in arb_poly(), d in arb_poly()) {
                prop_assume!(!b.is_zero() && !d.is_zero());
                let x = RatFuncL::new(a, b);
                let y = RatFuncL::new(c, d);
                let at = rat(11);
                if let (Some(xv), Some(yv)) = (x.eval(&at), y.eval(&at)) {
                    if let Some(sv) = (&x * &y).eval(&at) {
                        prop_assert_eq!(sv, &xv * &yv);
                    }
                    if let Some(sv) = (&x + &y).eval(&at) {
                        prop_assert_eq!(sv, xv + yv);
                    }
                }
            }
        }
    }
}
