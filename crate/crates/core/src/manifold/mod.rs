//! Stable and unstable manifolds of the fixed point `X` as exact polygonal lines.

mod crossings;
mod homoclinic;
mod local;

use serde::Serialize;

use crate::budget::Budget;
use crate::error::{LabError, Result};
use crate::geom::{is_simple, split_at_fold, Chain, Fold, GeomError, Point, Polyline};
use crate::map::Params;
use crate::numeric::Scalar;

pub use crossings::{axis_crossings, crossings_of, polyline_axis_points, Axis, AxisPoint, Crossing, CrossingKind, CrossingList};
pub use homoclinic::{
    homoclinic_search, homoclinic_search_with_budget, periodic_homoclinic_search, HomoclinicResult, HomoclinicWitness,
};
pub use local::{escape_from_triangle, local_arc_epsilon, EscapeResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Branch {
    UPlus,
    UMinus,
    SPlus,
    SMinus,
}

/// Arc `n` of a branch: the `L^{±2n}` image of the branch's fundamental arc.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ManifoldArc {
    pub branch: Branch,
    pub depth: usize,
    pub polyline: Polyline,
}

/// `L^k(line)`, one step at a time, splitting at the fold of each step first.
pub fn image_of_polyline(params: &Params, line: &Polyline, k: i64) -> Result<Polyline> {
    let mut cur = line.clone();
    for _ in 0..k.unsigned_abs() {
        cur = step_polyline(params, &cur, k > 0)?;
    }
    Ok(cur)
}

fn step_polyline(params: &Params, line: &Polyline, forward: bool) -> Result<Polyline> {
    let fold = if forward { Fold::YAxis } else { Fold::XAxis };
    let split = split_at_fold(line, &fold)?;
    let mut out = Vec::with_capacity(split.len());
    for p in split.vertices() {
        out.push(if forward { params.step(p)? } else { params.step_inverse(p)? });
    }
    Ok(Polyline::new(out)?)
}

/// Both branches of `W^u_X` out to arc `depth`.
#[derive(Clone, Debug, Serialize)]
pub struct UnstableManifold {
    pub depth: usize,
    pub x: Point,
    pub z: Point,
    pub z_inverse: Point,
    /// `[X, Z]`, then arcs `[Z^{2n}, Z^{2n+2}]`.
    pub plus: Vec<ManifoldArc>,
    /// `[X, Z⁻¹]`, then arcs `[Z^{2n−1}, Z^{2n+1}]`.
    pub minus: Vec<ManifoldArc>,
}

impl UnstableManifold {
    pub fn arcs(&self) -> impl Iterator<Item = &ManifoldArc> {
        self.plus.iter().chain(self.minus.iter())
    }

    pub fn branch(&self, b: Branch) -> &[ManifoldArc] {
        match b {
            Branch::UPlus => &self.plus,
            Branch::UMinus => &self.minus,
            _ => &[],
        }
    }

    pub fn initial_segment(&self, b: Branch) -> Polyline {
        let end = if b == Branch::UMinus { &self.z_inverse } else { &self.z };
        Polyline::new_unchecked(vec![self.x.clone(), end.clone()])
    }

    /// The branch as one chain from `X`, with the arc index of each segment
    /// (`None` for the initial segment).
    pub fn branch_chain(&self, b: Branch) -> BranchChain {
        BranchChain::build(self.initial_segment(b), self.branch(b))
    }

    pub fn vertex_count(&self) -> usize {
        self.arcs().map(|a| a.polyline.len()).sum()
    }
}

/// A branch flattened into one vertex list.
#[derive(Clone, Debug)]
pub struct BranchChain {
    pub vertices: Vec<Point>,
    /// `segment_arc[i]` is the arc holding segment `[v_i, v_{i+1}]`.
    pub segment_arc: Vec<Option<usize>>,
}

impl BranchChain {
    fn build(initial: Polyline, arcs: &[ManifoldArc]) -> Self {
        let mut vertices = initial.into_vertices();
        let mut segment_arc = vec![None; vertices.len() - 1];
        for a in arcs {
            let v = a.polyline.vertices();
            for p in &v[1..] {
                vertices.push(p.clone());
                segment_arc.push(Some(a.depth));
            }
        }
        BranchChain { vertices, segment_arc }
    }

    pub fn polyline(&self) -> Polyline {
        Polyline::new_unchecked(self.vertices.clone())
    }

    /// Index of the first vertex that starts arc `n`.
    pub fn arc_start(&self, n: usize) -> Option<usize> {
        self.segment_arc.iter().position(|a| *a == Some(n))
    }
}

pub fn unstable_manifold(params: &Params, depth: usize) -> Result<UnstableManifold> {
    unstable_manifold_with_budget(params, depth, &Budget::default(), true)
}

/// As [`unstable_manifold`]; `verify` runs the exact simplicity check on the
/// whole manifold.
pub fn unstable_manifold_with_budget(
    params: &Params,
    depth: usize,
    budget: &Budget,
    verify: bool,
) -> Result<UnstableManifold> {
    params.require_standard()?;
    let x = params.fixed_point_x()?;
    let z = params.point_z()?;
    let z_inverse = params.point_z_inverse()?;
    let z1 = params.step(&z)?;
    let mut minus_line = Polyline::new(vec![z_inverse.clone(), z1])?;
    let mut plus = Vec::with_capacity(depth + 1);
    let mut minus = Vec::with_capacity(depth + 1);
    for n in 0..=depth {
        let plus_line = step_polyline(params, &minus_line, true)?;
        budget.check(plus_line.vertices(), "unstable manifold", n)?;
        let next_minus = step_polyline(params, &plus_line, true)?;
        budget.check(next_minus.vertices(), "unstable manifold", n)?;
        minus.push(ManifoldArc { branch: Branch::UMinus, depth: n, polyline: minus_line });
        plus.push(ManifoldArc { branch: Branch::UPlus, depth: n, polyline: plus_line });
        minus_line = next_minus;
    }
    let m = UnstableManifold { depth, x, z, z_inverse, plus, minus };
    if verify {
        verify_simple(&m)?;
    }
    Ok(m)
}

/// Exact check that the two branches joined at `X` form a simple curve.
pub fn verify_simple(m: &UnstableManifold) -> Result<()> {
    let plus = m.branch_chain(Branch::UPlus).vertices;
    let mut all = m.branch_chain(Branch::UMinus).vertices;
    all.reverse();
    all.extend(plus.into_iter().skip(1));
    if let Some((i, j)) = is_simple(&all, false)? {
        return Err(LabError::Geom(GeomError::NotSimple(i, j)));
    }
    Ok(())
}

/// `W^s_X`: the upward ray and the lower branch out to arc `depth`.
#[derive(Clone, Debug, Serialize)]
pub struct StableManifold {
    pub depth: usize,
    pub x: Point,
    /// First crossing of the lower branch with the y-axis.
    pub v: Point,
    /// `L(V)`, on the x-axis.
    pub w: Point,
    /// Upward direction `(λs, b)` of the ray.
    pub plus_direction: (Scalar, Scalar),
    /// `[X, W]`, then arcs `L^{−2n}([W, V, V⁻¹])`.
    pub minus: Vec<ManifoldArc>,
}

impl StableManifold {
    pub fn minus_chain(&self) -> BranchChain {
        BranchChain::build(Polyline::new_unchecked(vec![self.x.clone(), self.w.clone()]), &self.minus)
    }

    /// Segment from `X` along the ray, long enough to leave `bbox_radius`.
    pub fn plus_segment(&self, radius: f64) -> Polyline {
        let (dx, dy) = &self.plus_direction;
        let m = dx.to_f64().min(dy.to_f64()).max(1e-12);
        let t = ((radius + 1.0) * 2.0 / m).ceil().min(1e15) as i64 + 1;
        let t = Scalar::from(t);
        let far = Point::new(self.x.x() + &(&t * dx), self.x.y() + &(&t * dy));
        Polyline::new_unchecked(vec![self.x.clone(), far])
    }
}

pub fn stable_manifold(params: &Params, depth: usize) -> Result<StableManifold> {
    stable_manifold_with_budget(params, depth, &Budget::default())
}

pub fn stable_manifold_with_budget(params: &Params, depth: usize, budget: &Budget) -> Result<StableManifold> {
    params.require_standard()?;
    let x = params.fixed_point_x()?;
    let e = params.eigen_data()?;
    let v = params.point_v()?;
    let w = params.step(&v)?;
    let v_inv = params.step_inverse(&v)?;
    let mut arc = Polyline::new(vec![w.clone(), v.clone(), v_inv])?;
    let mut minus = Vec::with_capacity(depth + 1);
    for n in 0..=depth {
        let next = if n < depth { Some(image_of_polyline(params, &arc, -2)?) } else { None };
        minus.push(ManifoldArc { branch: Branch::SMinus, depth: n, polyline: arc });
        match next {
            Some(a) => {
                budget.check(a.vertices(), "stable manifold", n + 1)?;
                arc = a;
            }
            None => break,
        }
    }
    Ok(StableManifold { depth, x, v, w, plus_direction: e.v_s, minus })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::NumericMode;
    use crate::numeric::Sign;

    fn params(a: &str, b: &str) -> Params {
        Params::from_text(a, b, NumericMode::Exact).unwrap()
    }

    #[test]
    fn first_plus_arc_runs_from_z_to_z2() {
        let p = params("1.06", "0.96");
        let m = unstable_manifold(&p, 2).unwrap();
        let z = p.point_z().unwrap();
        assert_eq!(m.plus[0].polyline.first(), &z);
        assert_eq!(m.plus[0].polyline.last(), &p.apply(&z, 2).unwrap());
        assert_eq!(m.minus[0].polyline.first(), &p.point_z_inverse().unwrap());
    }

    #[test]
    fn arcs_follow_the_recurrence() {
        let p = params("1.06", "0.96");
        let m = unstable_manifold(&p, 5).unwrap();
        for b in [Branch::UPlus, Branch::UMinus] {
            let arcs = m.branch(b);
            for n in 0..arcs.len() - 1 {
                assert_eq!(image_of_polyline(&p, &arcs[n].polyline, 2).unwrap(), arcs[n + 1].polyline);
                assert_eq!(arcs[n].polyline.last(), arcs[n + 1].polyline.first());
            }
        }
    }

    #[test]
    fn inverse_image_has_same_vertices_up_to_insertions() {
        let p = params("1.06", "0.96");
        let m = unstable_manifold(&p, 1).unwrap();
        let line = &m.minus[1].polyline;
        let back = image_of_polyline(&p, &image_of_polyline(&p, line, 1).unwrap(), -1).unwrap();
        assert_eq!(back.first(), line.first());
        assert_eq!(back.last(), line.last());
        for q in line.vertices() {
            assert!(back.vertices().contains(q));
        }
    }

    #[test]
    fn stable_pieces_converge_to_x() {
        let p = params("1", "0.5");
        let s = stable_manifold(&p, 3).unwrap();
        assert!(s.v.x().is_zero());
        assert!(s.w.y().is_zero());
        assert_eq!(s.plus_direction.1.sign().unwrap(), Sign::Positive);
        let x = p.fixed_point_x().unwrap();
        let far = s.minus[3].polyline.last().clone();
        let d0 = far.dist_f64(&x);
        let d = p.apply(&far, 40).unwrap().dist_f64(&x);
        assert!(d < d0 * 1e-3, "{d0} -> {d}");
    }

    #[test]
    fn simple_to_depth_twelve_near_one_half() {
        for (a, b) in [("1", "0.5"), ("1.05", "0.5"), ("1", "0.55")] {
            let p = params(a, b);
            unstable_manifold(&p, 12).unwrap();
        }
    }
}
