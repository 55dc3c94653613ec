use serde::Serialize;

use crate::error::{LabError, Result};
use crate::geom::{on_segment, orient, point_segment_distance_f64, BBox, Point, SegmentIndex};
use crate::map::Params;
use crate::numeric::Sign;

use super::{unstable_manifold_with_budget, Branch};
use crate::budget::Budget;

type Seg = [f64; 4];

fn seg_of(a: &Point, b: &Point) -> Seg {
    let (ax, ay) = a.approx();
    let (bx, by) = b.approx();
    [ax, ay, bx, by]
}

fn seg_box(s: &Seg) -> BBox {
    BBox::new(s[0].min(s[2]), s[0].max(s[2]), s[1].min(s[3]), s[1].max(s[3]))
}

fn cross(ox: f64, oy: f64, ax: f64, ay: f64, bx: f64, by: f64) -> f64 {
    (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)
}

fn seg_seg_distance(p: &Seg, q: &Seg) -> f64 {
    let d1 = cross(p[0], p[1], p[2], p[3], q[0], q[1]);
    let d2 = cross(p[0], p[1], p[2], p[3], q[2], q[3]);
    let d3 = cross(q[0], q[1], q[2], q[3], p[0], p[1]);
    let d4 = cross(q[0], q[1], q[2], q[3], p[2], p[3]);
    if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
        return 0.0;
    }
    point_segment_distance_f64(p[0], p[1], q[0], q[1], q[2], q[3])
        .min(point_segment_distance_f64(p[2], p[3], q[0], q[1], q[2], q[3]))
        .min(point_segment_distance_f64(q[0], q[1], p[0], p[1], p[2], p[3]))
        .min(point_segment_distance_f64(q[2], q[3], p[0], p[1], p[2], p[3]))
}

struct Core {
    segs: Vec<Seg>,
    index: SegmentIndex,
}

impl Core {
    fn new(segs: Vec<Seg>) -> Self {
        let index = SegmentIndex::new(segs.iter().map(seg_box).collect());
        Core { segs, index }
    }

    /// `min(d(s, core), cap)`.
    fn distance(&self, s: &Seg, cap: f64) -> f64 {
        let mut best = cap;
        for i in self.index.query(&seg_box(s).inflate(cap)) {
            best = best.min(seg_seg_distance(s, &self.segs[i]));
        }
        best
    }

    fn point_distance(&self, x: f64, y: f64, cap: f64) -> f64 {
        self.distance(&[x, y, x, y], cap)
    }
}

/// Does the chain, after its germ near the core (up to the first vertex at
/// distance `≥ 2ε`), stay at distance `≥ 2ε` from the core?
fn chain_clear(core: &Core, v: &[(f64, f64)], eps: f64) -> bool {
    let r = 2.0 * eps;
    let Some(start) = v.iter().position(|p| core.point_distance(p.0, p.1, r) >= r) else {
        return v.len() < 2;
    };
    v[start..].windows(2).all(|w| core.distance(&[w[0].0, w[0].1, w[1].0, w[1].1], r) >= r)
}

/// A positive `ε` with `B_ε((X, Q)^u)` meeting the computed `W^u_X` only in
/// `(X, Q)^u` and its continuation germs; at most half the distance from
/// `(X, Q)^u` to the rest of the computed manifold.
pub fn local_arc_epsilon(params: &Params, q: &Point, depth: usize) -> Result<f64> {
    let m = unstable_manifold_with_budget(params, depth, &Budget::default(), false)?;
    let x = &m.x;
    if q == x {
        return Err(LabError::Precondition("Q must differ from X".into()));
    }
    let mut found = None;
    for b in [Branch::UPlus, Branch::UMinus] {
        let chain = m.branch_chain(b);
        let v = &chain.vertices;
        for i in 0..v.len() - 1 {
            if on_segment(q, &v[i], &v[i + 1])? {
                found = Some((b, chain, i));
                break;
            }
        }
        if found.is_some() {
            break;
        }
    }
    let Some((branch, chain, i)) = found else {
        return Err(LabError::Precondition("Q is not on the computed unstable manifold".into()));
    };
    let v = &chain.vertices;
    let mut core_pts: Vec<&Point> = v[..=i].iter().collect();
    if &v[i] != q {
        core_pts.push(q);
    }
    let core = Core::new(core_pts.windows(2).map(|w| seg_of(w[0], w[1])).collect());
    let mut beyond: Vec<(f64, f64)> = vec![q.approx()];
    beyond.extend(v[i + 1..].iter().filter(|p| *p != q).map(Point::approx));
    let other_branch = if branch == Branch::UPlus { Branch::UMinus } else { Branch::UPlus };
    let other: Vec<(f64, f64)> = m.branch_chain(other_branch).vertices.iter().map(Point::approx).collect();

    let mut eps = x.dist_f64(q) / 2.0;
    for _ in 0..80 {
        if chain_clear(&core, &beyond, eps) && chain_clear(&core, &other, eps) {
            return Ok(eps);
        }
        eps /= 2.0;
    }
    Err(LabError::Inconsistency("no positive ε separates the local arc".into()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EscapeResult {
    /// `A^m` is the first iterate outside the closed first quadrant.
    Escaped { m: usize, quadrant: u8, predicted_bound: Option<u64> },
    StillInside { iterations: usize, predicted_bound: Option<u64> },
    /// `A` is on the stable line through `X` and `V`.
    OnStableManifold { distance: f64 },
}

fn quadrant(p: &Point) -> Result<u8> {
    let sx = p.x_sign()?;
    let sy = p.y_sign()?;
    Ok(match (sx, sy) {
        (Sign::Negative, Sign::Negative) => 3,
        (Sign::Negative, _) => 2,
        (_, Sign::Negative) => 4,
        _ => 1,
    })
}

fn line_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    ((p.0 - a.0) * dy - (p.1 - a.1) * dx).abs() / dx.hypot(dy)
}

/// Iterate `A` from the triangle `O Z Z⁻¹` until it leaves the first quadrant.
pub fn escape_from_triangle(params: &Params, a: &Point, max_iter: usize) -> Result<EscapeResult> {
    if max_iter == 0 {
        return Err(LabError::Precondition("max_iter must be at least 1".into()));
    }
    let z = params.point_z()?;
    let zi = params.point_z_inverse()?;
    let o = Point::from_ints(0, 0);
    if zi.y_sign()? != Sign::Positive {
        return Err(LabError::Precondition("Z⁻¹ is not above the origin".into()));
    }
    let inside = a.x_sign()? != Sign::Negative && a.y_sign()? != Sign::Negative && orient(&z, &zi, a)? != Sign::Negative;
    if !inside {
        return Err(LabError::Precondition("A is not in the triangle O Z Z⁻¹".into()));
    }
    let x = params.fixed_point_x()?;
    let v = params.point_v()?;
    if orient(&x, &v, a)? == Sign::Zero {
        return Ok(EscapeResult::OnStableManifold { distance: 0.0 });
    }
    let lu = params.eigen_data()?.lambda_u.to_f64().abs();
    let d0 = line_distance(a.approx(), x.approx(), v.approx());
    let d_tri = [o.approx(), z.approx(), zi.approx()]
        .iter()
        .map(|p| line_distance(*p, x.approx(), v.approx()))
        .fold(0.0, f64::max);
    let predicted_bound = if d0 > 0.0 { Some((d_tri / d0).ln().div_euclid(lu.ln()).max(0.0) as u64 + 1) } else { None };
    let mut p = a.clone();
    for m in 1..=max_iter {
        p = params.step(&p)?;
        let qd = quadrant(&p)?;
        if qd != 1 {
            return Ok(EscapeResult::Escaped { m, quadrant: qd, predicted_bound });
        }
    }
    Ok(EscapeResult::StillInside { iterations: max_iter, predicted_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::NumericMode;

    fn params(a: &str, b: &str) -> Params {
        Params::from_text(a, b, NumericMode::Exact).unwrap()
    }

    #[test]
    fn epsilon_for_z_at_one_half() {
        let p = params("1", "0.5");
        let z = p.point_z().unwrap();
        let e = local_arc_epsilon(&p, &z, 6).unwrap();
        assert!(e > 0.0);
    }

    #[test]
    fn epsilon_does_not_grow_with_depth() {
        let p = params("1.06", "0.96");
        let q = p.apply(&p.point_z().unwrap(), 2).unwrap();
        let e1 = local_arc_epsilon(&p, &q, 3).unwrap();
        let e2 = local_arc_epsilon(&p, &q, 7).unwrap();
        assert!(e2 <= e1 && e2 > 0.0);
    }

    #[test]
    fn x_is_on_stable_manifold() {
        let p = params("1.06", "0.96");
        let x = p.fixed_point_x().unwrap();
        assert_eq!(escape_from_triangle(&p, &x, 50).unwrap(), EscapeResult::OnStableManifold { distance: 0.0 });
    }

    #[test]
    fn near_stable_point_escapes_to_second_quadrant() {
        let p = params("1.06", "0.96");
        let x = p.fixed_point_x().unwrap();
        let z = p.point_z().unwrap();
        // a hair from X toward Z
        let a = x.lerp(&z, &crate::numeric::Scalar::ratio(1, 1_000_000));
        match escape_from_triangle(&p, &a, 200).unwrap() {
            EscapeResult::Escaped { m, quadrant, predicted_bound } => {
                assert_eq!(quadrant, 2);
                let b = predicted_bound.unwrap() as usize;
                assert!(m.abs_diff(b) <= 3, "m = {m}, bound = {b}");
            }
            r => panic!("{r:?}"),
        }
    }

    #[test]
    fn outside_triangle_is_rejected() {
        let p = params("1.06", "0.96");
        assert!(escape_from_triangle(&p, &Point::from_ints(5, 5), 10).is_err());
    }
}
