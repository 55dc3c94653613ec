use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign as BigSign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::NumericError;

/// Binary floating-point value `mant * 2^exp` with `prec` significant bits
/// and an absolute error bound `err` on the distance to the true value.
#[derive(Clone, Debug, PartialEq)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
    prec: u32,
    err: f64,
}

pub(crate) fn bits(n: &BigInt) -> u64 {
    n.bits()
}

/// `x * 2^k` without intermediate overflow for moderate `k`.
pub(crate) fn ldexp(mut x: f64, mut k: i64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    while k > 1000 {
        x *= 2f64.powi(1000);
        k -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while k < -1000 {
        x *= 2f64.powi(-1000);
        k += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(k as i32)
}

/// Upper bound for `2^k`, never zero.
fn pow2_up(k: i64) -> f64 {
    let v = ldexp(1.0, k);
    if v == 0.0 {
        f64::from_bits(1)
    } else {
        v
    }
}

fn up(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else if x <= 0.0 {
        x.max(0.0)
    } else {
        x.next_up()
    }
}

/// Approximate `n * 2^k` in `f64`, relative error below 2^-62 before the final conversion.
pub(crate) fn int_to_f64_scaled(n: &BigInt, k: i64) -> f64 {
    let b = bits(n) as i64;
    if b <= 64 {
        let v = n.to_i128().expect("fits") as f64;
        return ldexp(v, k);
    }
    let s = b - 64;
    let top = (n >> (s as usize)).to_i128().expect("fits") as f64;
    ldexp(top, k + s)
}

/// Approximate `n / d` in `f64` with relative error below 3 units in the last place.
pub(crate) fn ratio_to_f64(n: &BigInt, d: &BigInt) -> f64 {
    if n.is_zero() {
        return 0.0;
    }
    let sn = (bits(n) as i64 - 64).max(0);
    let sd = (bits(d) as i64 - 64).max(0);
    let fnum = (n >> (sn as usize)).to_i128().expect("fits") as f64;
    let fden = (d >> (sd as usize)).to_i128().expect("fits") as f64;
    ldexp(fnum / fden, sn - sd)
}

/// Round `mant * 2^exp` to at most `prec` bits, half to even. `sticky` marks a
/// nonzero discarded tail below the current last bit. Returns the rounded
/// value and a bound on the rounding error.
fn round_to(mant: BigInt, exp: i64, prec: u32, sticky: bool) -> (BigInt, i64, f64) {
    let b = bits(&mant);
    if b <= prec as u64 {
        let e = if sticky { pow2_up(exp) } else { 0.0 };
        return (mant, exp, e);
    }
    let s = (b - prec as u64) as usize;
    let neg = mant.is_negative();
    let mag = mant.abs();
    let q: BigInt = &mag >> s;
    let rem: BigInt = &mag - (&q << s);
    let half = BigInt::one() << (s - 1);
    let round_up = match rem.cmp(&half) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => sticky || q.is_odd(),
    };
    let rem_zero = rem.is_zero();
    let mut q = if round_up { q + 1 } else { q };
    let mut exp = exp + s as i64;
    if bits(&q) > prec as u64 {
        q >>= 1;
        exp += 1;
    }
    let q = if neg { -q } else { q };
    let e = if rem_zero && !sticky { 0.0 } else { pow2_up(exp - 1) };
    (q, exp, e)
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        BigFloat { mant: BigInt::zero(), exp: 0, prec, err: 0.0 }
    }

    /// Exact conversion of an `f64` (rounded if `prec < 53`).
    pub fn from_f64(x: f64, prec: u32) -> Self {
        assert!(x.is_finite(), "non-finite value");
        if x == 0.0 {
            return Self::zero(prec);
        }
        let b = x.to_bits();
        let neg = (b >> 63) != 0;
        let e = ((b >> 52) & 0x7ff) as i64;
        let frac = b & ((1u64 << 52) - 1);
        let (m, ex) = if e == 0 { (frac, -1074) } else { (frac | (1u64 << 52), e - 1075) };
        let m = BigInt::from(m);
        let m = if neg { -m } else { m };
        let (mant, exp, err) = round_to(m, ex, prec, false);
        BigFloat { mant, exp, prec, err }
    }

    /// Correctly rounded conversion of a rational.
    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        Self::from_ratio(r.numer(), r.denom(), prec)
    }

    pub(crate) fn from_ratio(n: &BigInt, d: &BigInt, prec: u32) -> Self {
        if n.is_zero() {
            return Self::zero(prec);
        }
        let (n, d) = if d.is_negative() { (-n, -d) } else { (n.clone(), d.clone()) };
        let sh = prec as i64 + 2 + bits(&d) as i64 - bits(&n) as i64;
        let (q, r) = if sh >= 0 {
            (n << (sh as usize)).div_rem(&d)
        } else {
            n.div_rem(&(d << ((-sh) as usize)))
        };
        let (mant, exp, err) = round_to(q, -sh, prec, !r.is_zero());
        BigFloat { mant, exp, prec, err }
    }

    pub fn with_error(mut self, extra: f64) -> Self {
        self.err = up(self.err + extra.abs());
        self
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Absolute error bound.
    pub fn error_bound(&self) -> f64 {
        self.err
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    /// Nearest `f64` (may overflow to infinity for huge values).
    pub fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        int_to_f64_scaled(&self.mant, self.exp)
    }

    /// Upper bound on `|self|` including the error.
    pub fn magnitude_bound(&self) -> f64 {
        up(up(self.to_f64().abs() * (1.0 + 1e-15)) + self.err)
    }

    fn abs_upper(&self) -> f64 {
        up(self.to_f64().abs() * (1.0 + 1e-15))
    }

    fn abs_lower(&self) -> f64 {
        self.to_f64().abs() * (1.0 - 1e-15)
    }

    /// Exact value of the stored approximation.
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << (self.exp as usize))
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << ((-self.exp) as usize))
        }
    }

    pub fn sign(&self) -> Result<super::Sign, NumericError> {
        if self.mant.is_zero() {
            if self.err == 0.0 {
                return Ok(super::Sign::Zero);
            }
            return Err(NumericError::UncertainSign { value: 0.0, error: self.err });
        }
        if self.abs_lower() > self.err {
            Ok(if self.mant.is_negative() { super::Sign::Negative } else { super::Sign::Positive })
        } else {
            Err(NumericError::UncertainSign { value: self.to_f64(), error: self.err })
        }
    }

    pub fn neg(&self) -> Self {
        BigFloat { mant: -&self.mant, exp: self.exp, prec: self.prec, err: self.err }
    }

    pub fn abs(&self) -> Self {
        BigFloat { mant: self.mant.abs(), exp: self.exp, prec: self.prec, err: self.err }
    }

    fn top(&self) -> i64 {
        self.exp + bits(&self.mant) as i64
    }

    pub fn add(&self, o: &BigFloat) -> BigFloat {
        let prec = self.prec.max(o.prec);
        let err_in = up(self.err + o.err);
        if self.mant.is_zero() {
            return BigFloat { mant: o.mant.clone(), exp: o.exp, prec, err: err_in };
        }
        if o.mant.is_zero() {
            return BigFloat { mant: self.mant.clone(), exp: self.exp, prec, err: err_in };
        }
        let (hi, lo) = if self.top() >= o.top() { (self, o) } else { (o, self) };
        if hi.top() - lo.top() > prec as i64 + 4 {
            return BigFloat {
                mant: hi.mant.clone(),
                exp: hi.exp,
                prec,
                err: up(err_in + lo.abs_upper()),
            };
        }
        let e = self.exp.min(o.exp);
        let a = &self.mant << ((self.exp - e) as usize);
        let b = &o.mant << ((o.exp - e) as usize);
        let (mant, exp, r) = round_to(a + b, e, prec, false);
        BigFloat { mant, exp, prec, err: up(err_in + r) }
    }

    pub fn sub(&self, o: &BigFloat) -> BigFloat {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &BigFloat) -> BigFloat {
        let prec = self.prec.max(o.prec);
        let (mant, exp, r) = round_to(&self.mant * &o.mant, self.exp + o.exp, prec, false);
        let prop = up(up(self.abs_upper() * o.err) + up(o.abs_upper() * self.err));
        let prop = up(prop + up(self.err * o.err));
        BigFloat { mant, exp, prec, err: up(prop + r) }
    }

    pub fn div(&self, o: &BigFloat) -> Result<BigFloat, NumericError> {
        let prec = self.prec.max(o.prec);
        let lower = o.abs_lower() - o.err;
        if o.mant.is_zero() || lower <= 0.0 {
            return Err(NumericError::DivisionByZero);
        }
        let sh = (prec as i64 + 2 + bits(&o.mant) as i64 - bits(&self.mant) as i64).max(0);
        let (q, rem) = (&self.mant << (sh as usize)).div_rem(&o.mant);
        let (mant, exp, r) = round_to(q, self.exp - o.exp - sh, prec, !rem.is_zero());
        let quot = ratio_to_f64(&self.mant, &o.mant).abs() * pow2_up(self.exp - o.exp) * (1.0 + 1e-15);
        let prop = up(up(self.err + up(quot * o.err)) / lower);
        Ok(BigFloat { mant, exp, prec, err: up(prop + r) })
    }

    /// Square root; the operand must be certainly nonnegative.
    pub fn sqrt(&self) -> Result<BigFloat, NumericError> {
        if self.mant.is_negative() && self.abs_lower() > self.err {
            return Err(NumericError::NegativeRadicand);
        }
        let prec = self.prec;
        if self.mant.is_zero() || self.mant.is_negative() {
            let e = up(self.err.sqrt() * (1.0 + 1e-15));
            return Ok(BigFloat { mant: BigInt::zero(), exp: 0, prec, err: e });
        }
        let want = 2 * prec as i64 + 4;
        let mut s = (want - bits(&self.mant) as i64).max(0);
        if (self.exp - s) % 2 != 0 {
            s += 1;
        }
        let m = &self.mant << (s as usize);
        let root = m.sqrt();
        let sticky = &root * &root != m;
        let (mant, exp, r) = round_to(root, (self.exp - s) / 2, prec, sticky);
        let v = self.abs_lower();
        let prop = if self.err == 0.0 {
            0.0
        } else if v > self.err {
            up(self.err / (v - self.err).sqrt())
        } else {
            up(self.err.sqrt() * 2.0)
        };
        Ok(BigFloat { mant, exp, prec, err: up(prop + r) })
    }

    /// Fixed-point decimal rendering with `digits` fractional digits, rounded half away from zero.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        decimal_from_dyadic(&self.mant, self.exp, digits)
    }
}

pub(crate) fn decimal_from_dyadic(mant: &BigInt, exp: i64, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = if exp >= 0 {
        (mant << (exp as usize)) * &scale
    } else {
        let den = BigInt::one() << ((-exp) as usize);
        round_half_away(&(mant * &scale), &den)
    };
    format_scaled(&scaled, digits)
}

pub(crate) fn round_half_away(n: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = n.abs().div_rem(d);
    let q = if (r << 1usize) >= *d { q + 1 } else { q };
    if n.is_negative() {
        -q
    } else {
        q
    }
}

pub(crate) fn format_scaled(scaled: &BigInt, digits: usize) -> String {
    let neg = scaled.sign() == BigSign::Minus;
    let s = scaled.abs().to_string();
    let body = if digits == 0 {
        s
    } else if s.len() > digits {
        format!("{}.{}", &s[..s.len() - digits], &s[s.len() - digits..])
    } else {
        format!("0.{}{}", "0".repeat(digits - s.len()), s)
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}±{:e}", self.to_f64(), self.err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_rounding_is_correct() {
        let x = BigFloat::from_rational(&r(10, 11), 53);
        assert_eq!(x.to_f64(), 10.0 / 11.0);
        assert!(x.error_bound() <= 2f64.powi(-53));
        let exact = BigFloat::from_rational(&r(3, 4), 53);
        assert_eq!(exact.error_bound(), 0.0);
    }

    #[test]
    fn error_bound_covers_true_value() {
        let third = BigFloat::from_rational(&r(1, 3), 60);
        let sum = third.add(&third).add(&third);
        let diff = sum.to_rational() - BigRational::one();
        let d = diff.numer().to_f64().unwrap() / diff.denom().to_f64().unwrap();
        assert!(d.abs() <= sum.error_bound());
    }

    #[test]
    fn division_and_sqrt() {
        let two = BigFloat::from_f64(2.0, 80);
        let s = two.sqrt().unwrap();
        assert!((s.to_f64() - std::f64::consts::SQRT_2).abs() <= 1e-16);
        let q = BigFloat::from_f64(1.0, 80).div(&s).unwrap();
        assert!((q.to_f64() - std::f64::consts::FRAC_1_SQRT_2).abs() <= 1e-16);
        assert!(BigFloat::zero(53).div(&BigFloat::zero(53)).is_err());
    }

    #[test]
    fn sign_is_uncertain_inside_error() {
        let x = BigFloat::from_f64(1e-20, 53).with_error(1e-10);
        assert!(x.sign().is_err());
        let y = BigFloat::from_f64(-3.0, 53).with_error(1e-10);
        assert_eq!(y.sign().unwrap(), super::super::Sign::Negative);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(BigFloat::from_f64(-0.125, 53).to_decimal_string(2), "-0.13");
        assert_eq!(BigFloat::from_f64(1.5, 53).to_decimal_string(0), "2");
        assert_eq!(BigFloat::from_f64(3.0, 53).to_decimal_string(3), "3.000");
    }
}
