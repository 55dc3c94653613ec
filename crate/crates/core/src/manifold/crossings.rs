use serde::Serialize;

use crate::error::Result;
use crate::geom::{Chain, Point, Polyline};
use crate::map::Params;
use crate::numeric::{Scalar, Sign};

use super::{unstable_manifold, Branch, BranchChain, UnstableManifold};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Axis {
    Ox,
    Oy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossingKind {
    Crossing,
    /// A vertex on the axis with both neighbours strictly on one side.
    Touch,
    /// On the axis at the last computed vertex; continuation unknown.
    ChainEnd,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Crossing {
    pub point: Point,
    pub axis: Axis,
    pub kind: CrossingKind,
    pub branch: Branch,
    /// `None` for the initial segment from `X`.
    pub arc: Option<usize>,
    /// Arc length from `X` (float).
    pub position: f64,
}

/// Axis intersections of both unstable branches, in traversal order from `X`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossingList {
    pub depth: usize,
    pub entries: Vec<Crossing>,
}

impl CrossingList {
    pub fn crossings(&self, branch: Branch, axis: Axis) -> impl Iterator<Item = &Crossing> {
        self.entries
            .iter()
            .filter(move |c| c.branch == branch && c.axis == axis && c.kind != CrossingKind::Touch)
    }

    pub fn touches(&self) -> impl Iterator<Item = &Crossing> {
        self.entries.iter().filter(|c| c.kind == CrossingKind::Touch)
    }

    /// Count of non-touch entries.
    pub fn crossing_count(&self) -> usize {
        self.entries.iter().filter(|c| c.kind != CrossingKind::Touch).count()
    }

    /// Every non-touch entry is `Z` on `Ox` or `Z⁻¹` on `Oy`.
    pub fn only_z_and_z_inverse(&self, z: &Point, z_inverse: &Point) -> bool {
        self.entries.iter().filter(|c| c.kind != CrossingKind::Touch).all(|c| {
            (c.axis == Axis::Ox && &c.point == z) || (c.axis == Axis::Oy && &c.point == z_inverse)
        })
    }

    /// Largest arc index holding a non-touch entry.
    pub fn last_arc(&self) -> Option<usize> {
        self.entries.iter().filter(|c| c.kind != CrossingKind::Touch).filter_map(|c| c.arc).max()
    }
}

/// Where a polyline meets an axis: a vertex index, or a point strictly inside
/// segment `segment`.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisPoint {
    pub point: Point,
    pub segment: usize,
    /// The point is vertex `segment` itself.
    pub at_vertex: bool,
    pub kind: CrossingKind,
}

fn coord(p: &Point, axis: Axis) -> &Scalar {
    match axis {
        Axis::Ox => p.y(),
        Axis::Oy => p.x(),
    }
}

fn coord_sign(p: &Point, axis: Axis) -> Result<Sign> {
    Ok(match axis {
        Axis::Ox => p.y_sign()?,
        Axis::Oy => p.x_sign()?,
    })
}

/// All meetings of the chain `v` with an axis, in order.
pub(crate) fn chain_axis_points(v: &[Point], axis: Axis) -> Result<Vec<AxisPoint>> {
    let signs: Vec<Sign> = v.iter().map(|p| coord_sign(p, axis)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for i in 0..v.len() {
        if signs[i] == Sign::Zero {
            let before = signs[..i].iter().rev().find(|s| **s != Sign::Zero);
            let after = signs[i + 1..].iter().find(|s| **s != Sign::Zero);
            let kind = match (before, after) {
                (Some(a), Some(b)) if a != b => CrossingKind::Crossing,
                (Some(_), Some(_)) => CrossingKind::Touch,
                (None, Some(_)) if i == 0 => CrossingKind::ChainEnd,
                (_, None) => CrossingKind::ChainEnd,
                _ => CrossingKind::Crossing,
            };
            out.push(AxisPoint { point: v[i].clone(), segment: i, at_vertex: true, kind });
        }
        if i + 1 < v.len() && signs[i] * signs[i + 1] == Sign::Negative {
            let (a, b) = (&v[i], &v[i + 1]);
            let (ca, cb) = (coord(a, axis), coord(b, axis));
            let t = ca.checked_div(&ca.checked_sub(cb)?)?;
            let mut p = a.lerp(b, &t);
            p = match axis {
                Axis::Ox => Point::new(p.x().clone(), Scalar::zero()),
                Axis::Oy => Point::new(Scalar::zero(), p.y().clone()),
            };
            out.push(AxisPoint { point: p, segment: i, at_vertex: false, kind: CrossingKind::Crossing });
        }
    }
    Ok(out)
}

/// Axis meetings of a single polyline.
pub fn polyline_axis_points(line: &Polyline, axis: Axis) -> Result<Vec<AxisPoint>> {
    chain_axis_points(line.vertices(), axis)
}

fn branch_crossings(chain: &BranchChain, branch: Branch, out: &mut Vec<Crossing>) -> Result<()> {
    let v = &chain.vertices;
    let mut cum = vec![0.0f64; v.len()];
    for i in 1..v.len() {
        cum[i] = cum[i - 1] + v[i - 1].dist_f64(&v[i]);
    }
    let mut found = Vec::new();
    for axis in [Axis::Ox, Axis::Oy] {
        for ap in chain_axis_points(v, axis)? {
            let pos = if ap.at_vertex { cum[ap.segment] } else { cum[ap.segment] + v[ap.segment].dist_f64(&ap.point) };
            let arc = if ap.at_vertex {
                // a shared arc endpoint belongs to the arc it starts
                chain.segment_arc.get(ap.segment).copied().unwrap_or_else(|| chain.segment_arc.last().copied().flatten())
            } else {
                chain.segment_arc[ap.segment]
            };
            let key = (ap.segment, !ap.at_vertex, axis);
            found.push((key, Crossing { point: ap.point, axis, kind: ap.kind, branch, arc, position: pos }));
        }
    }
    found.sort_by(|a, b| a.0.cmp(&b.0));
    out.extend(found.into_iter().map(|(_, c)| c));
    Ok(())
}

/// Crossing census of an already computed manifold.
pub fn crossings_of(m: &UnstableManifold) -> Result<CrossingList> {
    let mut entries = Vec::new();
    branch_crossings(&m.branch_chain(Branch::UPlus), Branch::UPlus, &mut entries)?;
    branch_crossings(&m.branch_chain(Branch::UMinus), Branch::UMinus, &mut entries)?;
    Ok(CrossingList { depth: m.depth, entries })
}

pub fn axis_crossings(params: &Params, depth: usize) -> Result<CrossingList> {
    crossings_of(&unstable_manifold(params, depth)?)
}
