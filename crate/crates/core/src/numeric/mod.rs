//! Scalar tower: exact rationals, exact elements of ℚ(√r), and binary floats
//! carrying an absolute error bound.

mod float;
mod quadratic;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

pub use float::BigFloat;
pub(crate) use float::ratio_to_f64;
pub use quadratic::{split_sqrt, QuadField, Quadratic};
use quadratic::QuadOrRational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different quadratic fields (sqrt {left} vs sqrt {right})")]
    MixedFields { left: String, right: String },
    #[error("sign undecidable at current precision: value {value:e}, error bound {error:e}")]
    UncertainSign { value: f64, error: f64 },
    #[error("square root of a negative number")]
    NegativeRadicand,
    #[error("cannot parse number {0:?}")]
    Parse(String),
    #[error("precision must be at least 53 bits, got {0}")]
    PrecisionTooLow(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of_int(n: &BigInt) -> Sign {
        if n.is_zero() {
            Sign::Zero
        } else if n.is_negative() {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }

    pub fn of_f64(x: f64) -> Sign {
        if x > 0.0 {
            Sign::Positive
        } else if x < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn to_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn to_ordering(self) -> Ordering {
        match self {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, o: Sign) -> Sign {
        match self.to_i8() * o.to_i8() {
            1 => Sign::Positive,
            -1 => Sign::Negative,
            _ => Sign::Zero,
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

/// Result of [`scalar_sign`]: in float mode a `Zero` may be uncertain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignResult {
    pub sign: Sign,
    pub certain: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone)]
pub enum Scalar {
    Rational(BigRational),
    Quadratic(Quadratic),
    Float(BigFloat),
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a == b,
            (Scalar::Quadratic(a), Scalar::Quadratic(b)) => a == b,
            (Scalar::Float(a), Scalar::Float(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Scalar::Rational(r) => {
                0u8.hash(state);
                r.hash(state);
            }
            Scalar::Quadratic(q) => {
                1u8.hash(state);
                q.hash(state);
            }
            Scalar::Float(f) => {
                2u8.hash(state);
                f.mantissa().hash(state);
                f.exponent().hash(state);
            }
        }
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Rational(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(n.into()))
    }
}

impl From<BigFloat> for Scalar {
    fn from(f: BigFloat) -> Self {
        Scalar::Float(f)
    }
}

impl From<QuadOrRational> for Scalar {
    fn from(v: QuadOrRational) -> Self {
        match v {
            QuadOrRational::Quad(q) => Scalar::Quadratic(q),
            QuadOrRational::Rational(r) => Scalar::Rational(r),
        }
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(BigRational::one())
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::Rational(BigRational::new(n.into(), d.into()))
    }

    /// Build `p + q·√(field radicand)`, normalizing to a rational when `q = 0`.
    pub fn quadratic(p: &BigRational, q: &BigRational, field: &QuadField) -> Self {
        let d = p.denom() * q.denom();
        let pn = p.numer() * q.denom();
        let qn = q.numer() * p.denom();
        quadratic::normalize(pn, qn, d, field).into()
    }

    /// `√x` for a nonnegative rational, together with the field it lives in
    /// (`None` when the root is rational).
    pub fn sqrt_rational(x: &BigRational) -> Result<(Scalar, Option<QuadField>), NumericError> {
        if x.is_negative() {
            return Err(NumericError::NegativeRadicand);
        }
        let (c, r) = split_sqrt(x);
        match QuadField::new(r) {
            None => Ok((Scalar::Rational(c), None)),
            Some(f) => Ok((Scalar::quadratic(&BigRational::zero(), &c, &f), Some(f))),
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Scalar::Float(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn field(&self) -> Option<&QuadField> {
        match self {
            Scalar::Quadratic(q) => Some(q.field()),
            _ => None,
        }
    }

    /// True only for an exact zero (a float zero with a nonzero error bound is not).
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Quadratic(_) => false,
            Scalar::Float(f) => f.mantissa().is_zero() && f.error_bound() == 0.0,
        }
    }

    /// Storage size in bits of all integers involved.
    pub fn bit_size(&self) -> u64 {
        match self {
            Scalar::Rational(r) => r.numer().bits() + r.denom().bits(),
            Scalar::Quadratic(q) => q.bit_size(),
            Scalar::Float(f) => f.mantissa().bits(),
        }
    }

    /// `f64` approximation with an absolute error bound.
    pub fn approx(&self) -> (f64, f64) {
        match self {
            Scalar::Rational(r) => {
                let v = ratio_to_f64(r.numer(), r.denom());
                (v, v.abs() * 5e-16 + if v == 0.0 { 0.0 } else { 1e-300 })
            }
            Scalar::Quadratic(q) => q.approx(),
            Scalar::Float(f) => {
                let v = f.to_f64();
                (v, f.error_bound() + v.abs() * 3e-16 + 1e-300)
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.approx().0
    }

    /// Sign, failing in float mode when `|value| ≤ error bound`.
    pub fn sign(&self) -> Result<Sign, NumericError> {
        match self {
            Scalar::Rational(r) => Ok(Sign::of_int(r.numer())),
            Scalar::Quadratic(q) => Ok(q.sign()),
            Scalar::Float(f) => f.sign(),
        }
    }

    pub fn cmp_to(&self, other: &Scalar) -> Result<Ordering, NumericError> {
        if let (Scalar::Rational(a), Scalar::Rational(b)) = (self, other) {
            return Ok(a.cmp(b));
        }
        Ok(scalar_arith(self, other, ArithOp::Sub)?.sign()?.to_ordering())
    }

    pub fn abs(&self) -> Result<Scalar, NumericError> {
        Ok(match self {
            Scalar::Float(f) => Scalar::Float(f.abs()),
            other => {
                if other.sign()? == Sign::Negative {
                    -other
                } else {
                    other.clone()
                }
            }
        })
    }

    /// Multiply by a rational (the common case for map coefficients).
    pub fn scale(&self, r: &BigRational) -> Scalar {
        match self {
            Scalar::Rational(x) => Scalar::Rational(x * r),
            _ => self * &Scalar::Rational(r.clone()),
        }
    }

    pub fn to_float(&self, precision_bits: u32) -> BigFloat {
        match self {
            Scalar::Rational(r) => BigFloat::from_rational(r, precision_bits),
            Scalar::Float(f) => f.clone(),
            Scalar::Quadratic(q) => quadratic_to_float(q, precision_bits),
        }
    }

    pub fn checked_add(&self, o: &Scalar) -> Result<Scalar, NumericError> {
        scalar_arith(self, o, ArithOp::Add)
    }

    pub fn checked_sub(&self, o: &Scalar) -> Result<Scalar, NumericError> {
        scalar_arith(self, o, ArithOp::Sub)
    }

    pub fn checked_mul(&self, o: &Scalar) -> Result<Scalar, NumericError> {
        scalar_arith(self, o, ArithOp::Mul)
    }

    pub fn checked_div(&self, o: &Scalar) -> Result<Scalar, NumericError> {
        scalar_arith(self, o, ArithOp::Div)
    }

    /// Exact decimal-or-float text used in CSV output.
    pub fn to_decimal_string(&self, precision_bits: u32, digits: usize) -> String {
        self.to_float(precision_bits).to_decimal_string(digits)
    }
}

fn quadratic_to_float(x: &Quadratic, prec: u32) -> BigFloat {
    let (p, q, d) = x.parts();
    let r = x.field().radicand();
    let qa = q.abs();
    let mut k = (prec as u64 + 16 + qa.bits() + d.bits()) as usize;
    loop {
        let s = num_integer::Roots::sqrt(&(r << (2 * k)));
        let n = (p << k) + q * &s;
        // true numerator lies between n and n + q
        if n.abs().bits() >= qa.bits() + prec as u64 + 4 {
            let den = d << k;
            let base = BigFloat::from_ratio(&n, &den, prec);
            let slack = float::int_to_f64_scaled(&qa, 0) / float::int_to_f64_scaled(d, k as i64);
            return base.with_error(slack * (1.0 + 1e-12));
        }
        k *= 2;
    }
}

fn parts_of_rational(r: &BigRational) -> (BigInt, BigInt, BigInt) {
    (r.numer().clone(), BigInt::zero(), r.denom().clone())
}

fn quad_op(a: (&BigInt, &BigInt, &BigInt), b: (&BigInt, &BigInt, &BigInt), op: ArithOp, f: &QuadField) -> Result<Scalar, NumericError> {
    Ok(match op {
        ArithOp::Add => Quadratic::add_parts(a, b, f).into(),
        ArithOp::Sub => {
            let nb = (-b.0, -b.1, b.2.clone());
            Quadratic::add_parts(a, (&nb.0, &nb.1, &nb.2), f).into()
        }
        ArithOp::Mul => Quadratic::mul_parts(a, b, f).into(),
        ArithOp::Div => {
            if b.0.is_zero() && b.1.is_zero() {
                return Err(NumericError::DivisionByZero);
            }
            Quadratic::div_parts(a, b, f).into()
        }
    })
}

fn float_op(a: &BigFloat, b: &BigFloat, op: ArithOp) -> Result<Scalar, NumericError> {
    Ok(Scalar::Float(match op {
        ArithOp::Add => a.add(b),
        ArithOp::Sub => a.sub(b),
        ArithOp::Mul => a.mul(b),
        ArithOp::Div => a.div(b)?,
    }))
}

/// Checked arithmetic with coercion along ℚ ⊂ ℚ(√r) ⊂ Float.
pub fn scalar_arith(x: &Scalar, y: &Scalar, op: ArithOp) -> Result<Scalar, NumericError> {
    match (x, y) {
        (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(match op {
            ArithOp::Add => a + b,
            ArithOp::Sub => a - b,
            ArithOp::Mul => a * b,
            ArithOp::Div => {
                if b.is_zero() {
                    return Err(NumericError::DivisionByZero);
                }
                a / b
            }
        })),
        (Scalar::Float(a), Scalar::Float(b)) => float_op(a, b, op),
        (Scalar::Float(a), e) => float_op(a, &e.to_float(a.precision()), op),
        (e, Scalar::Float(b)) => float_op(&e.to_float(b.precision()), b, op),
        (Scalar::Quadratic(a), Scalar::Quadratic(b)) => {
            if a.field() != b.field() {
                return Err(NumericError::MixedFields {
                    left: a.field().radicand().to_string(),
                    right: b.field().radicand().to_string(),
                });
            }
            quad_op(a.parts(), b.parts(), op, a.field())
        }
        (Scalar::Quadratic(a), Scalar::Rational(b)) => {
            let pb = parts_of_rational(b);
            quad_op(a.parts(), (&pb.0, &pb.1, &pb.2), op, a.field())
        }
        (Scalar::Rational(a), Scalar::Quadratic(b)) => {
            let pa = parts_of_rational(a);
            quad_op((&pa.0, &pa.1, &pa.2), b.parts(), op, b.field())
        }
    }
}

/// Three-way sign with an explicit certainty flag (float zeros are uncertain).
pub fn scalar_sign(x: &Scalar) -> SignResult {
    match x.sign() {
        Ok(sign) => SignResult { sign, certain: true },
        Err(_) => SignResult { sign: Sign::Zero, certain: false },
    }
}

/// Convert to a float of `precision_bits` significant bits.
pub fn scalar_to_float(x: &Scalar, precision_bits: u32) -> Result<BigFloat, NumericError> {
    if precision_bits < 53 {
        return Err(NumericError::PrecisionTooLow(precision_bits));
    }
    Ok(x.to_float(precision_bits))
}

/// Exact parse of decimal (`-1.06`, `2.5e-3`) or fraction (`53/50`) text.
pub fn parse_rational(text: &str) -> Result<BigRational, NumericError> {
    let s = text.trim();
    let bad = || NumericError::Parse(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse().map_err(|_| bad())?;
    let digits = digits / BigInt::from(10);
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        BigRational::from_integer(digits * ten.pow(scale as u32))
    } else {
        BigRational::new(digits, ten.pow((-scale) as u32))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $op:expr) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            /// Panics on mixed quadratic fields or division by zero; use the
            /// `checked_*` methods where that can happen.
            fn $method(self, o: &Scalar) -> Scalar {
                match scalar_arith(self, o, $op) {
                    Ok(v) => v,
                    Err(e) => panic!("scalar arithmetic failed: {e}"),
                }
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, o: Scalar) -> Scalar {
                (&self).$method(&o)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, o: &Scalar) -> Scalar {
                (&self).$method(o)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, o: Scalar) -> Scalar {
                self.$method(&o)
            }
        }
    };
}

forward_binop!(Add, add, ArithOp::Add);
forward_binop!(Sub, sub, ArithOp::Sub);
forward_binop!(Mul, mul, ArithOp::Mul);
forward_binop!(Div, div, ArithOp::Div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Quadratic(q) => Scalar::Quadratic(Quadratic {
                p: -&q.p,
                q: -&q.q,
                d: q.d.clone(),
                field: q.field.clone(),
            }),
            Scalar::Float(f) => Scalar::Float(f.neg()),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Quadratic(q) => write!(f, "{q}"),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Rational(r) => {
                let mut st = ser.serialize_struct("Scalar", 3)?;
                st.serialize_field("p", &r.to_string())?;
                st.serialize_field("q", "0")?;
                st.serialize_field("delta", "0")?;
                st.end()
            }
            Scalar::Quadratic(q) => {
                let mut st = ser.serialize_struct("Scalar", 3)?;
                st.serialize_field("p", &q.p().to_string())?;
                st.serialize_field("q", &q.q().to_string())?;
                st.serialize_field("delta", &q.delta().to_string())?;
                st.end()
            }
            Scalar::Float(x) => {
                let mut st = ser.serialize_struct("Scalar", 3)?;
                st.serialize_field("value", &format!("{:e}", x.to_f64()))?;
                st.serialize_field("error", &format!("{:e}", x.error_bound()))?;
                st.serialize_field("precision_bits", &x.precision())?;
                st.end()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    fn sqrt3() -> (Scalar, QuadField) {
        let (s, f) = Scalar::sqrt_rational(&BigRational::from_integer(3.into())).unwrap();
        (s, f.unwrap())
    }

    #[test]
    fn rational_sum() {
        assert_eq!(&r(1, 2) + &r(1, 3), r(5, 6));
    }

    #[test]
    fn conjugate_product_is_rational() {
        let (s, _) = sqrt3();
        let x = &r(1, 1) + &s;
        let y = &r(1, 1) - &s;
        assert_eq!(&x * &y, r(-2, 1));
    }

    #[test]
    fn eigenvalue_product_at_one_half() {
        let (s, _) = sqrt3();
        let lu = (&r(-1, 1) - &s) / r(2, 1);
        let ls = (&r(-1, 1) + &s) / r(2, 1);
        assert_eq!(&lu * &ls, r(-1, 2));
        assert_eq!(&lu + &ls, r(-1, 1));
    }

    #[test]
    fn signs() {
        assert_eq!(r(0, 1).sign().unwrap(), Sign::Zero);
        let (s, _) = sqrt3();
        assert_eq!((&r(2, 1) - &s).sign().unwrap(), Sign::Positive);
        assert_eq!((&s - &r(2, 1)).sign().unwrap(), Sign::Negative);
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let (s3, _) = sqrt3();
        let (s2, _) = Scalar::sqrt_rational(&BigRational::from_integer(2.into())).unwrap();
        assert!(matches!(scalar_arith(&s3, &s2, ArithOp::Add), Err(NumericError::MixedFields { .. })));
        assert_eq!(scalar_arith(&r(1, 1), &r(0, 1), ArithOp::Div), Err(NumericError::DivisionByZero));
    }

    #[test]
    fn quadratic_with_zero_q_is_rational() {
        let (s, _) = sqrt3();
        let z = &(&s + &r(1, 1)) - &s;
        assert_eq!(z, r(1, 1));
        assert!(matches!(z, Scalar::Rational(_)));
    }

    #[test]
    fn parse_exact_decimal() {
        let p = |s| parse_rational(s).unwrap();
        assert_eq!(p("1.06"), BigRational::new(53.into(), 50.into()));
        assert_eq!(p("0.96"), BigRational::new(24.into(), 25.into()));
        assert_eq!(p("-0.5"), BigRational::new((-1).into(), 2.into()));
        assert_eq!(p("2.5e-3"), BigRational::new(1.into(), 400.into()));
        assert_eq!(p("61/100"), BigRational::new(61.into(), 100.into()));
        assert_eq!(p("3"), BigRational::from_integer(3.into()));
        assert_eq!(p(".5"), BigRational::new(1.into(), 2.into()));
        assert!(parse_rational("1.0.0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn sqrt_delta_at_figure_one_parameters() {
        // a = 53/50, b = 24/25: delta = 12409/2500
        let delta = BigRational::new(12409.into(), 2500.into());
        let (s, f) = Scalar::sqrt_rational(&delta).unwrap();
        assert!(f.is_some());
        let v = scalar_to_float(&s, 53).unwrap().to_f64();
        assert!((v - 2.227_913_822_390_803).abs() < 1e-15, "{v}");
        assert_eq!(&s * &s, Scalar::Rational(delta));
    }

    #[test]
    fn float_passthrough_and_low_precision() {
        let f = Scalar::Float(BigFloat::from_f64(0.25, 80));
        assert_eq!(scalar_to_float(&f, 60).unwrap(), BigFloat::from_f64(0.25, 80));
        assert!(scalar_to_float(&r(1, 3), 20).is_err());
        let t = scalar_to_float(&r(10, 11), 53).unwrap();
        assert_eq!(t.to_f64(), 10.0 / 11.0);
    }

    #[test]
    fn quadratic_to_float_is_within_one_ulp() {
        let (s, _) = sqrt3();
        let x = &s - &r(1732050807568877, 1000000000000000);
        let f = x.to_float(200);
        let exact_ish = 2.9352e-16;
        assert!((f.to_f64() - exact_ish).abs() < 1e-19, "{}", f.to_f64());
        assert!(f.error_bound() <= f.to_f64().abs() * 2f64.powi(-190));
    }

    #[test]
    fn float_mixed_with_exact() {
        let f = Scalar::Float(BigFloat::from_f64(0.5, 64));
        let (s, _) = sqrt3();
        let v = &f * &s;
        assert!(matches!(v, Scalar::Float(_)));
        assert!((v.to_f64() - 0.866_025_403_784_438_6).abs() < 1e-15);
    }

    #[test]
    fn serializes_as_p_q_delta() {
        let (s, _) = sqrt3();
        let v = &(&s + &r(1, 2)) / r(3, 1);
        let j = serde_json::to_value(&v).unwrap();
        assert_eq!(j["p"], "1/6");
        assert_eq!(j["q"], "1/3");
        assert_eq!(j["delta"], "3");
        let j = serde_json::to_value(r(53, 50)).unwrap();
        assert_eq!(j["p"], "53/50");
    }
}
