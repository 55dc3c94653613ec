use crate::numeric::{NumericError, Scalar, Sign};

use super::{GeomError, Point, Polyline};

/// Locus where a single map step stops being affine.
#[derive(Clone, Debug, PartialEq)]
pub enum Fold {
    /// `x = 0`, the fold of the forward map.
    YAxis,
    /// `y = 0`, the fold of the inverse map.
    XAxis,
    /// `y = a|x| − 1`, the preimage of the y-axis.
    PreimageOfYAxis { a: Scalar },
}

/// Value of the piece of the fold function on the side `sx` of the y-axis.
fn piece_value(fold: &Fold, p: &Point, sx: Sign) -> Scalar {
    match fold {
        Fold::YAxis => p.x().clone(),
        Fold::XAxis => p.y().clone(),
        Fold::PreimageOfYAxis { a } => {
            let ax = a * p.x();
            let ax = if sx == Sign::Negative { -ax } else { ax };
            &(p.y() - &ax) + &Scalar::one()
        }
    }
}

/// Zero of the affine function `f` on `[u, v]` given its endpoint values.
fn zero_between(u: &Point, v: &Point, fu: &Scalar, fv: &Scalar) -> Result<Point, NumericError> {
    let t = fu.checked_div(&fu.checked_sub(fv)?)?;
    Ok(u.lerp(v, &t))
}

/// Points strictly inside `[u, v]` where the fold is crossed, in order from `u`.
fn crossings_on_segment(fold: &Fold, u: &Point, v: &Point) -> Result<Vec<Point>, NumericError> {
    match fold {
        Fold::YAxis => {
            let (su, sv) = (u.x().sign()?, v.x().sign()?);
            if su * sv != Sign::Negative {
                return Ok(vec![]);
            }
            let t = u.x().checked_div(&u.x().checked_sub(v.x())?)?;
            let y = u.y() + &(&t * &(v.y() - u.y()));
            Ok(vec![Point::new(Scalar::zero(), y)])
        }
        Fold::XAxis => {
            let (su, sv) = (u.y().sign()?, v.y().sign()?);
            if su * sv != Sign::Negative {
                return Ok(vec![]);
            }
            let t = u.y().checked_div(&u.y().checked_sub(v.y())?)?;
            let x = u.x() + &(&t * &(v.x() - u.x()));
            Ok(vec![Point::new(x, Scalar::zero())])
        }
        Fold::PreimageOfYAxis { .. } => {
            let (sxu, sxv) = (u.x().sign()?, v.x().sign()?);
            let mut pieces: Vec<(Point, Point, Sign)> = Vec::new();
            if sxu * sxv == Sign::Negative {
                let t = u.x().checked_div(&u.x().checked_sub(v.x())?)?;
                let y = u.y() + &(&t * &(v.y() - u.y()));
                let m = Point::new(Scalar::zero(), y);
                pieces.push((u.clone(), m.clone(), sxu));
                pieces.push((m, v.clone(), sxv));
            } else {
                let side = if sxu == Sign::Zero { sxv } else { sxu };
                pieces.push((u.clone(), v.clone(), side));
            }
            let mut out = Vec::new();
            for (a, b, side) in pieces {
                let fa = piece_value(fold, &a, side);
                let fb = piece_value(fold, &b, side);
                if fa.sign()? * fb.sign()? == Sign::Negative {
                    out.push(zero_between(&a, &b, &fa, &fb)?);
                }
            }
            Ok(out)
        }
    }
}

/// Insert the exact fold intersections so every segment lies in one closed
/// linearity region.
pub fn split_at_fold(line: &Polyline, fold: &Fold) -> Result<Polyline, GeomError> {
    let v = line.vertices_slice();
    let mut out = Vec::with_capacity(v.len() + 4);
    out.push(v[0].clone());
    for w in v.windows(2) {
        for c in crossings_on_segment(fold, &w[0], &w[1])? {
            if &c != out.last().unwrap() && c != w[1] {
                out.push(c);
            }
        }
        out.push(w[1].clone());
    }
    Ok(Polyline::new_unchecked(out))
}

impl Polyline {
    pub(crate) fn vertices_slice(&self) -> &[Point] {
        use super::Chain;
        self.vertices()
    }
}
