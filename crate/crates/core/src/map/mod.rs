//! The Lozi map `L(x, y) = (1 + y − a|x|, b x)`, its inverse and derived constants.

mod orbits;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::geom::Point;
use crate::numeric::{parse_rational, BigFloat, QuadField, Scalar, Sign};

pub use orbits::{orbit_manifold_seed, periodic_orbits, MAX_PERIOD, Multiplier, OrbitRecord, OrbitSeed, Stability};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NumericMode {
    Exact,
    Float { precision_bits: u32 },
}

/// Parameter-regime flags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RegimeFlags {
    /// `0 < b < 1`.
    pub b_in_unit_interval: bool,
    /// `a + b > 1`.
    pub a_plus_b_exceeds_one: bool,
    /// `1 − b < a < 1 + b`: the attracting 2-cycle exists.
    pub period_two: bool,
}

impl RegimeFlags {
    pub fn standard(&self) -> bool {
        self.b_in_unit_interval && self.a_plus_b_exceeds_one
    }
}

/// Eigenvalues and eigen-directions `(λ, b)` at the fixed point `X`.
#[derive(Clone, Debug, Serialize)]
pub struct EigenData {
    pub lambda_u: Scalar,
    pub lambda_s: Scalar,
    pub v_u: (Scalar, Scalar),
    pub v_s: (Scalar, Scalar),
}

/// Validated `(a, b)` with cached derived constants.
#[derive(Clone, Debug)]
pub struct Params {
    a_exact: BigRational,
    b_exact: BigRational,
    a: Scalar,
    b: Scalar,
    mode: NumericMode,
    delta: Scalar,
    sqrt_delta: Option<Scalar>,
    field: Option<QuadField>,
    flags: RegimeFlags,
}

impl Params {
    pub fn new(a: BigRational, b: BigRational, mode: NumericMode) -> Result<Self> {
        if b.is_zero() {
            return Err(LabError::InvalidParameters("b must be nonzero".into()));
        }
        if let NumericMode::Float { precision_bits } = mode {
            if precision_bits < 53 {
                return Err(LabError::InvalidParameters(format!("precision must be at least 53 bits, got {precision_bits}")));
            }
        }
        let one = BigRational::one();
        let flags = RegimeFlags {
            b_in_unit_interval: b.is_positive() && b < one,
            a_plus_b_exceeds_one: &a + &b > one,
            period_two: &one - &b < a && a < &one + &b,
        };
        let delta_exact = &a * &a + BigRational::from_integer(4.into()) * &b;
        let (sa, sb, delta, sqrt_delta, field) = match mode {
            NumericMode::Exact => {
                let (sqrt_delta, field) = if delta_exact.is_negative() {
                    (None, None)
                } else {
                    let (s, f) = Scalar::sqrt_rational(&delta_exact)?;
                    (Some(s), f)
                };
                (Scalar::Rational(a.clone()), Scalar::Rational(b.clone()), Scalar::Rational(delta_exact), sqrt_delta, field)
            }
            NumericMode::Float { precision_bits } => {
                let fa = BigFloat::from_rational(&a, precision_bits);
                let fb = BigFloat::from_rational(&b, precision_bits);
                let fd = fa.mul(&fa).add(&BigFloat::from_f64(4.0, precision_bits).mul(&fb));
                let sqrt_delta = if delta_exact.is_negative() { None } else { Some(Scalar::Float(fd.sqrt()?)) };
                (Scalar::Float(fa), Scalar::Float(fb), Scalar::Float(fd), sqrt_delta, None)
            }
        };
        Ok(Params { a_exact: a, b_exact: b, a: sa, b: sb, mode, delta, sqrt_delta, field, flags })
    }

    /// Exact parse of decimal or fraction text (`"1.06"` is `53/50`).
    pub fn from_text(a: &str, b: &str, mode: NumericMode) -> Result<Self> {
        Params::new(parse_rational(a)?, parse_rational(b)?, mode)
    }

    pub fn a(&self) -> &Scalar {
        &self.a
    }

    pub fn b(&self) -> &Scalar {
        &self.b
    }

    pub fn a_rational(&self) -> &BigRational {
        &self.a_exact
    }

    pub fn b_rational(&self) -> &BigRational {
        &self.b_exact
    }

    pub fn mode(&self) -> NumericMode {
        self.mode
    }

    pub fn is_exact(&self) -> bool {
        self.mode == NumericMode::Exact
    }

    pub fn flags(&self) -> RegimeFlags {
        self.flags
    }

    /// `Δ = a² + 4b`.
    pub fn delta(&self) -> &Scalar {
        &self.delta
    }

    pub fn sqrt_delta(&self) -> Result<&Scalar> {
        self.sqrt_delta.as_ref().ok_or_else(|| LabError::Precondition("a² + 4b < 0".into()))
    }

    /// The field `ℚ(√Δ)`, or `None` if `√Δ` is rational or the mode is float.
    pub fn field(&self) -> Option<&QuadField> {
        self.field.as_ref()
    }

    /// A rational constant in this parameter set's numeric mode.
    pub fn constant(&self, r: &BigRational) -> Scalar {
        match self.mode {
            NumericMode::Exact => Scalar::Rational(r.clone()),
            NumericMode::Float { precision_bits } => Scalar::Float(BigFloat::from_rational(r, precision_bits)),
        }
    }

    pub fn int(&self, n: i64) -> Scalar {
        self.constant(&BigRational::from_integer(n.into()))
    }

    pub fn point(&self, x: &BigRational, y: &BigRational) -> Point {
        Point::new(self.constant(x), self.constant(y))
    }

    pub fn require_standard(&self) -> Result<()> {
        if !self.flags.standard() {
            return Err(LabError::Precondition(format!(
                "standard mode needs 0 < b < 1 and a + b > 1 (a = {}, b = {})",
                self.a_exact, self.b_exact
            )));
        }
        Ok(())
    }

    /// One forward step. Points on the y-axis take the `x ≥ 0` branch.
    pub fn step(&self, p: &Point) -> Result<Point> {
        let ax = &self.a * p.x();
        let ax = if p.x_sign()? == Sign::Negative { -ax } else { ax };
        let nx = &(p.y() - &ax) + &Scalar::one();
        let ny = &self.b * p.x();
        Ok(Point::new(nx, ny))
    }

    /// One backward step: `(y/b, x − 1 + a|y|/b)`.
    pub fn step_inverse(&self, p: &Point) -> Result<Point> {
        let u = p.y().checked_div(&self.b)?;
        let au = &self.a * &u;
        let au = if p.y_sign()? == Sign::Negative { -au } else { au };
        let nx = u;
        let ny = &(p.x() - &Scalar::one()) + &au;
        Ok(Point::new(nx, ny))
    }

    /// `L^k(p)`; negative `k` iterates the inverse.
    pub fn apply(&self, p: &Point, k: i64) -> Result<Point> {
        let mut q = p.clone();
        for _ in 0..k.unsigned_abs() {
            q = if k > 0 { self.step(&q)? } else { self.step_inverse(&q)? };
        }
        Ok(q)
    }

    /// Saddle fixed points `X` (first quadrant) and `Y` (third quadrant).
    pub fn fixed_points(&self) -> Result<(Point, Point)> {
        let one = Scalar::one();
        let dx = &(&one + &self.a) - &self.b;
        let dy = &(&one - &self.a) - &self.b;
        if dx.sign()? == Sign::Zero || dy.sign()? == Sign::Zero {
            return Err(LabError::Degenerate("1 + a − b = 0 or 1 − a − b = 0".into()));
        }
        let x = Point::new(one.checked_div(&dx)?, self.b.checked_div(&dx)?);
        let y = Point::new(one.checked_div(&dy)?, self.b.checked_div(&dy)?);
        Ok((x, y))
    }

    pub fn fixed_point_x(&self) -> Result<Point> {
        Ok(self.fixed_points()?.0)
    }

    pub fn eigen_data(&self) -> Result<EigenData> {
        self.require_standard()?;
        let s = self.sqrt_delta()?;
        let half = Scalar::ratio(1, 2);
        let lambda_u = &(&(-&self.a) - s) * &half;
        let lambda_s = &(&(-&self.a) + s) * &half;
        Ok(EigenData {
            v_u: (lambda_u.clone(), self.b.clone()),
            v_s: (lambda_s.clone(), self.b.clone()),
            lambda_u,
            lambda_s,
        })
    }

    /// The 2-cycle `P` (fourth quadrant), `P′ = L(P)` (second quadrant).
    pub fn period_two_orbit(&self) -> Result<(Point, Point)> {
        if !self.flags.period_two {
            return Err(LabError::Precondition("the 2-cycle needs 1 − b < a < 1 + b".into()));
        }
        let one = Scalar::one();
        let omb = &one - &self.b;
        let den = &(&self.a * &self.a) + &(&omb * &omb);
        let s1 = &(&one + &self.a) - &self.b;
        let s2 = &(&one - &self.a) - &self.b;
        let p = Point::new(s1.checked_div(&den)?, (&self.b * &s2).checked_div(&den)?);
        let pp = Point::new(s2.checked_div(&den)?, (&self.b * &s1).checked_div(&den)?);
        Ok((p, pp))
    }

    /// `Z = (2 / (2 + a − √Δ), 0)`, where `W^{u+}` first meets the positive x-axis.
    pub fn point_z(&self) -> Result<Point> {
        self.require_standard()?;
        let s = self.sqrt_delta()?;
        let den = &(&self.int(2) + &self.a) - s;
        Ok(Point::new(self.int(2).checked_div(&den)?, Scalar::zero()))
    }

    /// `Z⁻¹ = L⁻¹(Z) = (0, Z_x − 1)`.
    pub fn point_z_inverse(&self) -> Result<Point> {
        let z = self.point_z()?;
        Ok(Point::new(Scalar::zero(), z.x() - &Scalar::one()))
    }

    /// `V`: where the stable line through `X` meets the y-axis.
    pub fn point_v(&self) -> Result<Point> {
        let x = self.fixed_point_x()?;
        let e = self.eigen_data()?;
        let t = x.x().checked_div(&e.lambda_s)?;
        Ok(Point::new(Scalar::zero(), x.y() - &(&t * &self.b)))
    }
}

/// `L^k(p)`.
pub fn apply(params: &Params, p: &Point, k: i64) -> Result<Point> {
    params.apply(p, k)
}

pub fn fixed_points(params: &Params) -> Result<(Point, Point)> {
    params.fixed_points()
}

pub fn eigen_data(params: &Params) -> Result<EigenData> {
    params.eigen_data()
}

pub fn period_two_orbit(params: &Params) -> Result<(Point, Point)> {
    params.period_two_orbit()
}

pub fn point_z(params: &Params) -> Result<Point> {
    params.point_z()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a: &str, b: &str) -> Params {
        Params::from_text(a, b, NumericMode::Exact).unwrap()
    }

    #[test]
    fn origin_maps_to_one_zero() {
        let p = params("1.06", "0.96");
        assert_eq!(p.apply(&Point::from_ints(0, 0), 1).unwrap(), Point::from_ints(1, 0));
    }

    #[test]
    fn fixed_points_at_figure_one_parameters() {
        let p = params("1.06", "0.96");
        let (x, y) = p.fixed_points().unwrap();
        assert_eq!(x, Point::from_ratios(10, 11, 48, 55));
        assert_eq!(y, Point::from_ratios(-50, 51, -16, 17));
        assert_eq!(p.apply(&x, 1).unwrap(), x);
        assert_eq!(p.apply(&y, 1).unwrap(), y);
    }

    #[test]
    fn eigenvalues_at_one_half() {
        let p = params("1", "0.5");
        let e = p.eigen_data().unwrap();
        let (s3, _) = Scalar::sqrt_rational(&BigRational::from_integer(3.into())).unwrap();
        assert_eq!(e.lambda_u, (&Scalar::from(-1) - &s3) / Scalar::from(2));
        assert_eq!(e.lambda_s, (&Scalar::from(-1) + &s3) / Scalar::from(2));
        assert_eq!(&e.lambda_u + &e.lambda_s, Scalar::from(-1));
        assert_eq!(&e.lambda_u * &e.lambda_s, Scalar::ratio(-1, 2));
    }

    #[test]
    fn two_cycle_at_one_half() {
        let p = params("1", "0.5");
        let (a, b) = p.period_two_orbit().unwrap();
        assert_eq!(a, Point::from_ratios(6, 5, -1, 5));
        assert_eq!(b, Point::from_ratios(-2, 5, 3, 5));
        assert_eq!(p.apply(&a, 1).unwrap(), b);
        assert_eq!(p.apply(&b, 1).unwrap(), a);
        assert_eq!(p.apply(&a, 2).unwrap(), a);
    }

    #[test]
    fn z_is_on_unstable_ray() {
        let p = params("1.06", "0.96");
        let z = p.point_z().unwrap();
        assert!(z.y().is_zero());
        assert!((z.x().to_f64() - 2.4035).abs() < 1e-4);
        // Z = X + t (λu, b): t from the y equation, then the x equation must hold
        let x = p.fixed_point_x().unwrap();
        let e = p.eigen_data().unwrap();
        let t = (z.y() - x.y()) / p.b().clone();
        assert_eq!(x.x() + &(&t * &e.lambda_u), z.x().clone());
        assert_eq!(t.sign().unwrap(), Sign::Negative);
    }

    #[test]
    fn inverse_round_trip() {
        let p = params("1.4", "0.3");
        let q = Point::from_ratios(-7, 3, 5, 11);
        assert_eq!(p.apply(&p.apply(&q, 1).unwrap(), -1).unwrap(), q);
        assert_eq!(p.apply(&p.apply(&q, -3).unwrap(), 3).unwrap(), q);
    }

    #[test]
    fn v_is_on_stable_line_and_y_axis() {
        let p = params("1", "0.5");
        let v = p.point_v().unwrap();
        assert!(v.x().is_zero());
        let x = p.fixed_point_x().unwrap();
        let e = p.eigen_data().unwrap();
        let (dx, dy) = v.sub(&x);
        assert!((&(&dx * &e.v_s.1) - &(&dy * &e.v_s.0)).is_zero());
    }

    #[test]
    fn float_mode_tracks_exact_values() {
        let p = Params::from_text("1.06", "0.96", NumericMode::Float { precision_bits: 120 }).unwrap();
        let z = p.point_z().unwrap();
        let exact = params("1.06", "0.96").point_z().unwrap();
        assert!((z.x().to_f64() - exact.x().to_f64()).abs() < 1e-15);
        assert!(Params::from_text("1", "0", NumericMode::Exact).is_err());
    }
}
