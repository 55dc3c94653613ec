use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::float::ratio_to_f64;
use super::Sign;

/// The field ℚ(√r) for a square-free-reduced, non-square integer radicand `r > 1`.
#[derive(Clone, Debug)]
pub struct QuadField {
    radicand: Arc<BigInt>,
    sqrt_approx: f64,
}

impl PartialEq for QuadField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.radicand, &other.radicand) || self.radicand == other.radicand
    }
}

impl Eq for QuadField {}

impl QuadField {
    /// Field with radicand `r`; `None` when `r` is a perfect square or `r < 2`.
    pub fn new(r: BigInt) -> Option<Self> {
        if r < BigInt::from(2) {
            return None;
        }
        let s = r.sqrt();
        if &s * &s == r {
            return None;
        }
        let sqrt_approx = r.to_f64().unwrap_or(f64::INFINITY).sqrt();
        Some(QuadField { radicand: Arc::new(r), sqrt_approx })
    }

    pub fn radicand(&self) -> &BigInt {
        &self.radicand
    }

    pub(crate) fn sqrt_approx(&self) -> f64 {
        self.sqrt_approx
    }
}

const SMALL_PRIMES_LIMIT: u32 = 2000;

/// Write `sqrt(x)` for rational `x ≥ 0` as `c * sqrt(r)` with rational `c` and
/// integer `r ≥ 1`, removing square factors found by trial division.
pub fn split_sqrt(x: &BigRational) -> (BigRational, BigInt) {
    assert!(!x.is_negative(), "square root of a negative rational");
    if x.is_zero() {
        return (BigRational::zero(), BigInt::one());
    }
    let mut m = x.numer() * x.denom();
    let mut outside = BigInt::one();
    let mut p = 2u32;
    while p <= SMALL_PRIMES_LIMIT {
        let pp = BigInt::from(p * p);
        while (&m % &pp).is_zero() {
            m /= &pp;
            outside *= p;
        }
        if BigInt::from(p * p) > m {
            break;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let s = m.sqrt();
    if &s * &s == m {
        outside *= s;
        m = BigInt::one();
    }
    (BigRational::new(outside, x.denom().clone()), m)
}

/// `(p + q·√r) / d` with `d > 0`, `gcd(p, q, d) = 1` and `q ≠ 0`.
#[derive(Clone, Debug)]
pub struct Quadratic {
    pub(crate) p: BigInt,
    pub(crate) q: BigInt,
    pub(crate) d: BigInt,
    pub(crate) field: QuadField,
}

impl PartialEq for Quadratic {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.q == other.q && self.d == other.d && self.field == other.field
    }
}

impl Eq for Quadratic {}

impl Hash for Quadratic {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.p.hash(state);
        self.q.hash(state);
        self.d.hash(state);
    }
}

/// Either a reduced quadratic or a value that collapsed to a rational.
pub(crate) enum QuadOrRational {
    Quad(Quadratic),
    Rational(BigRational),
}

pub(crate) fn normalize(p: BigInt, q: BigInt, d: BigInt, field: &QuadField) -> QuadOrRational {
    assert!(!d.is_zero(), "zero denominator");
    let (p, q, d) = if d.is_negative() { (-p, -q, -d) } else { (p, q, d) };
    if q.is_zero() {
        return QuadOrRational::Rational(BigRational::new(p, d));
    }
    let g = p.gcd(&q).gcd(&d);
    let (p, q, d) = if g.is_one() { (p, q, d) } else { (p / &g, q / &g, d / &g) };
    QuadOrRational::Quad(Quadratic { p, q, d, field: field.clone() })
}

impl Quadratic {
    pub fn field(&self) -> &QuadField {
        &self.field
    }

    /// Rational part.
    pub fn p(&self) -> BigRational {
        BigRational::new(self.p.clone(), self.d.clone())
    }

    /// Coefficient of `√r`.
    pub fn q(&self) -> BigRational {
        BigRational::new(self.q.clone(), self.d.clone())
    }

    pub fn delta(&self) -> &BigInt {
        self.field.radicand()
    }

    pub(crate) fn parts(&self) -> (&BigInt, &BigInt, &BigInt) {
        (&self.p, &self.q, &self.d)
    }

    pub fn bit_size(&self) -> u64 {
        self.p.bits() + self.q.bits() + self.d.bits()
    }

    /// `f64` approximation together with an absolute error bound.
    pub fn approx(&self) -> (f64, f64) {
        let a = ratio_to_f64(&self.p, &self.d);
        let c = ratio_to_f64(&self.q, &self.d) * self.field.sqrt_approx();
        let v = a + c;
        let scale = a.abs() + c.abs();
        (v, scale * 1e-15 + 1e-300)
    }

    pub fn sign(&self) -> Sign {
        let (v, e) = self.approx();
        if v.is_finite() && e.is_finite() && v.abs() > e {
            return if v > 0.0 { Sign::Positive } else { Sign::Negative };
        }
        self.sign_exact()
    }

    pub(crate) fn sign_exact(&self) -> Sign {
        let sp = Sign::of_int(&self.p);
        let sq = Sign::of_int(&self.q);
        if sp == Sign::Zero || sp == sq {
            return sq;
        }
        let lhs = &self.p * &self.p;
        let rhs = &self.q * &self.q * self.field.radicand();
        if lhs > rhs {
            sp
        } else {
            sq
        }
    }

    pub(crate) fn add_parts(a: (&BigInt, &BigInt, &BigInt), b: (&BigInt, &BigInt, &BigInt), field: &QuadField) -> QuadOrRational {
        if a.2 == b.2 {
            return normalize(a.0 + b.0, a.1 + b.1, a.2.clone(), field);
        }
        normalize(a.0 * b.2 + b.0 * a.2, a.1 * b.2 + b.1 * a.2, a.2 * b.2, field)
    }

    pub(crate) fn mul_parts(a: (&BigInt, &BigInt, &BigInt), b: (&BigInt, &BigInt, &BigInt), field: &QuadField) -> QuadOrRational {
        let r = field.radicand();
        let p = if a.1.is_zero() || b.1.is_zero() { a.0 * b.0 } else { a.0 * b.0 + a.1 * b.1 * r };
        let q = a.0 * b.1 + a.1 * b.0;
        normalize(p, q, a.2 * b.2, field)
    }

    /// `a / b`; `b` must be nonzero.
    pub(crate) fn div_parts(a: (&BigInt, &BigInt, &BigInt), b: (&BigInt, &BigInt, &BigInt), field: &QuadField) -> QuadOrRational {
        let r = field.radicand();
        let norm = b.0 * b.0 - b.1 * b.1 * r;
        assert!(!norm.is_zero(), "division by zero");
        let p = (a.0 * b.0 - a.1 * b.1 * r) * b.2;
        let q = (a.1 * b.0 - a.0 * b.1) * b.2;
        normalize(p, q, a.2 * norm, field)
    }
}

impl fmt::Display for Quadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}*sqrt({}))", self.p(), self.q(), self.field.radicand())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn split_sqrt_strips_squares() {
        let (c, m) = split_sqrt(&r(12, 1));
        assert_eq!((c, m), (r(2, 1), BigInt::from(3)));
        let (c, m) = split_sqrt(&r(9, 4));
        assert_eq!((c, m), (r(3, 2), BigInt::one()));
        // 1.06^2 + 4*0.96 = 12409/2500
        let (c, m) = split_sqrt(&r(12409, 2500));
        assert_eq!(m, BigInt::from(12409));
        assert_eq!(c, r(1, 50));
    }

    #[test]
    fn perfect_squares_have_no_field() {
        assert!(QuadField::new(BigInt::from(49)).is_none());
        assert!(QuadField::new(BigInt::from(1)).is_none());
        assert!(QuadField::new(BigInt::from(3)).is_some());
    }

    #[test]
    fn exact_sign_handles_near_cancellation() {
        let f = QuadField::new(BigInt::from(2)).unwrap();
        // 665857/470832 is a convergent of sqrt(2); difference ~1.6e-12
        let x = Quadratic { p: BigInt::from(665857), q: BigInt::from(-470832), d: BigInt::one(), field: f };
        assert_eq!(x.sign_exact(), Sign::Positive);
        assert_eq!(x.sign(), Sign::Positive);
    }
}
