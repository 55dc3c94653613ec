use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::numeric::BigFloat;

use super::Chain;

/// Distance from `(px, py)` to the segment `[(ax, ay), (bx, by)]` in floats.
pub fn point_segment_distance_f64(px: f64, py: f64, ax: f64, ay: f64, bx: f64, by: f64) -> f64 {
    let (dx, dy) = (bx - ax, by - ay);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 { (((px - ax) * dx + (py - ay) * dy) / len2).clamp(0.0, 1.0) } else { 0.0 };
    (px - ax - t * dx).hypot(py - ay - t * dy)
}

/// Float result with an absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct DistanceEstimate {
    pub value: f64,
    pub error_bound: f64,
}

fn segments(c: &dyn Chain) -> Vec<[f64; 4]> {
    (0..c.edge_count())
        .map(|i| {
            let (a, b) = c.edge(i);
            let (ax, ay) = a.approx();
            let (bx, by) = b.approx();
            [ax, ay, bx, by]
        })
        .collect()
}

fn dist_to(segs: &[[f64; 4]], x: f64, y: f64) -> f64 {
    segs.iter()
        .map(|s| point_segment_distance_f64(x, y, s[0], s[1], s[2], s[3]))
        .fold(f64::INFINITY, f64::min)
}

/// Upper bound of `d(·, B)` on `[a, b]`: each segment's distance is convex along
/// `[a, b]`, so it is bounded by its endpoint values.
fn convex_bound(segs: &[[f64; 4]], a: (f64, f64), b: (f64, f64)) -> f64 {
    segs.iter()
        .map(|s| {
            point_segment_distance_f64(a.0, a.1, s[0], s[1], s[2], s[3])
                .max(point_segment_distance_f64(b.0, b.1, s[0], s[1], s[2], s[3]))
        })
        .fold(f64::INFINITY, f64::min)
}

struct Piece {
    bound: f64,
    a: (f64, f64),
    b: (f64, f64),
    da: f64,
    db: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.bound == o.bound
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.bound.total_cmp(&o.bound)
    }
}

/// Directed distance `sup_{a ∈ A} d(a, B)` by Lipschitz branch and bound.
fn directed(a: &[[f64; 4]], b: &[[f64; 4]], tol: f64) -> f64 {
    let mut best = 0.0f64;
    let mut heap = BinaryHeap::new();
    for s in a {
        let (pa, pb) = ((s[0], s[1]), (s[2], s[3]));
        let da = dist_to(b, pa.0, pa.1);
        let db = dist_to(b, pb.0, pb.1);
        best = best.max(da).max(db);
        let len = (pb.0 - pa.0).hypot(pb.1 - pa.1);
        let bound = ((da + db + len) / 2.0).min(convex_bound(b, pa, pb));
        heap.push(Piece { bound, a: pa, b: pb, da, db });
    }
    let mut steps = 0usize;
    while let Some(p) = heap.pop() {
        if p.bound <= best + tol || steps > 2_000_000 {
            break;
        }
        steps += 1;
        let m = ((p.a.0 + p.b.0) / 2.0, (p.a.1 + p.b.1) / 2.0);
        let dm = dist_to(b, m.0, m.1);
        best = best.max(dm);
        let half = (p.b.0 - p.a.0).hypot(p.b.1 - p.a.1) / 2.0;
        let b1 = ((p.da + dm + half) / 2.0).min(convex_bound(b, p.a, m));
        let b2 = ((dm + p.db + half) / 2.0).min(convex_bound(b, m, p.b));
        heap.push(Piece { bound: b1, a: p.a, b: m, da: p.da, db: dm });
        heap.push(Piece { bound: b2, a: m, b: p.b, da: dm, db: p.db });
    }
    best
}

/// Symmetric Hausdorff distance between two chains (vertices and edges).
pub fn hausdorff_distance(a: &dyn Chain, b: &dyn Chain, precision_bits: u32) -> BigFloat {
    let est = hausdorff_estimate(a, b);
    BigFloat::from_f64(est.value, precision_bits.max(53)).with_error(est.error_bound)
}

pub(crate) fn hausdorff_estimate(a: &dyn Chain, b: &dyn Chain) -> DistanceEstimate {
    let sa = segments(a);
    let sb = segments(b);
    let scale = sa
        .iter()
        .chain(sb.iter())
        .flat_map(|s| s.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = scale * 1e-9 + 1e-300;
    let coord_err = a
        .vertices()
        .iter()
        .chain(b.vertices().iter())
        .map(|p| {
            let (ex, ey) = p.approx_error();
            ex.max(ey)
        })
        .fold(0.0f64, f64::max);
    let v = directed(&sa, &sb, tol).max(directed(&sb, &sa, tol));
    DistanceEstimate { value: v, error_bound: tol + 2.0 * coord_err + scale * 1e-14 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Point, Polyline, SimplePolygon};

    fn square(dx: i64, dy: i64) -> SimplePolygon {
        let p = |x: i64, y: i64| Point::from_ints(x + dx, y + dy);
        SimplePolygon::new(vec![p(0, 0), p(1, 0), p(1, 1), p(0, 1)]).unwrap()
    }

    #[test]
    fn identical_is_zero() {
        let d = hausdorff_distance(&square(0, 0), &square(0, 0), 53);
        assert_eq!(d.to_f64(), 0.0);
    }

    #[test]
    fn translation_distance() {
        let moved = SimplePolygon::new(
            [(0, 0), (1, 0), (1, 1), (0, 1)]
                .iter()
                .map(|&(x, y)| Point::from_ratios(4 * x + 1, 4, y, 1))
                .collect(),
        )
        .unwrap();
        let d = hausdorff_distance(&square(0, 0), &moved, 53);
        assert!((d.to_f64() - 0.25).abs() <= d.error_bound() + 1e-12);
    }

    #[test]
    fn interior_edge_maximum_is_found() {
        // directed distance A to B peaks inside an edge of A
        let a = Polyline::new(vec![Point::from_ints(0, 0), Point::from_ints(10, 0)]).unwrap();
        let b = Polyline::new(vec![Point::from_ints(0, 0), Point::from_ints(5, 3), Point::from_ints(10, 0)]).unwrap();
        let d = hausdorff_estimate(&a, &b);
        let brute = (0..=100_000)
            .map(|i| {
                let x = i as f64 / 10_000.0;
                point_segment_distance_f64(x, 0.0, 0.0, 0.0, 5.0, 3.0).min(point_segment_distance_f64(x, 0.0, 5.0, 3.0, 10.0, 0.0))
            })
            .fold(0.0f64, f64::max);
        assert!((d.value - brute.max(3.0)).abs() < 1e-6, "{} vs {}", d.value, brute);
    }
}
