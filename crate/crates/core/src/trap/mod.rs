//! The point `T`, the eventually trapping polygon `𝒟`, the polygon `𝒦` and
//! nested iterates approximating the accumulation set `ℓ`.

use serde::Serialize;

use crate::error::{LabError, Result};
use crate::geom::{
    closest_on_segment, contains_polygon, dist2, interiors_disjoint, intersection_kind, on_segment, point_in_polygon,
    segment_intersection, split_at_fold, Chain, Containment, Fold, GeomError, Intersection, IntersectionKind, Point,
    Polyline, SegmentIndex, SimplePolygon,
};
use crate::geom::hausdorff_distance;
use crate::manifold::{
    image_of_polyline, polyline_axis_points, unstable_manifold, Axis, Branch, UnstableManifold,
};
use crate::map::Params;
use crate::numeric::{Scalar, Sign};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum TrapCase {
    /// `W^{u+}` meets `Ox` away from `Z`.
    Case1UPlusCrossesOx { i: usize, k: usize },
    /// `W^{u+}` meets `Ox` only at `Z`.
    Case2OnlyZ { b1: Point, b2: Point, b3: Point, t_inverse: Point },
}

#[derive(Clone, Debug, Serialize)]
pub struct TrapConstruction {
    pub case: TrapCase,
    pub s: Point,
    pub t: Point,
    pub z: Point,
    /// `W^{u+}` arc holding `T`.
    pub t_arc: usize,
    /// Segment of that arc holding `T`.
    pub t_segment: usize,
    pub depth: usize,
    pub d: Option<SimplePolygon>,
    pub k: Option<SimplePolygon>,
}

/// Sign of `1 + y − a|x|`, the x-coordinate of `L(p)`.
fn preimage_side(params: &Params, p: &Point) -> Result<Sign> {
    let ax = params.a() * p.x();
    let ax = if p.x_sign()? == Sign::Negative { -ax } else { ax };
    Ok((&(p.y() - &ax) + &Scalar::one()).sign()?)
}

/// Does the polyline meet the curve `y = a|x| − 1`?
pub fn meets_preimage_of_y_axis(params: &Params, line: &Polyline) -> Result<bool> {
    let split = split_at_fold(line, &Fold::YAxis)?;
    let signs: Vec<Sign> = split.vertices().iter().map(|p| preimage_side(params, p)).collect::<Result<_>>()?;
    Ok(signs.iter().any(|s| *s == Sign::Zero) || signs.windows(2).any(|w| w[0] != w[1]))
}

fn locate_on_arc(line: &Polyline, p: &Point) -> Result<Option<usize>> {
    let v = line.vertices();
    for i in 0..v.len() - 1 {
        if on_segment(p, &v[i], &v[i + 1])? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// `S` and `T` from the computed manifold.
pub fn construct_t(params: &Params, depth: usize) -> Result<TrapConstruction> {
    construct_t_from(params, &unstable_manifold(params, depth)?)
}

pub fn construct_t_from(params: &Params, m: &UnstableManifold) -> Result<TrapConstruction> {
    let plus = &m.plus;
    let mut first_i = None;
    for n in 1..plus.len() {
        if !polyline_axis_points(&plus[n].polyline, Axis::Ox)?.is_empty() {
            first_i = Some(n - 1);
            break;
        }
    }
    if let Some(i) = first_i {
        let mut k = 1;
        loop {
            let n = i + k;
            if n >= plus.len() {
                return Err(LabError::DepthInsufficient { what: "index k of the trapping construction".into(), depth_reached: m.depth });
            }
            if !meets_preimage_of_y_axis(params, &plus[n].polyline)? {
                break;
            }
            k += 1;
        }
        let arc = &plus[i + k].polyline;
        let pts = polyline_axis_points(arc, Axis::Ox)?;
        let mut best: Option<(Point, usize)> = None;
        for ap in pts {
            let better = match &best {
                None => true,
                Some((b, _)) => (ap.point.x() - b.x()).sign()? == Sign::Positive,
            };
            if better {
                best = Some((ap.point, ap.segment));
            }
        }
        let Some((t, seg)) = best else {
            return Err(LabError::Inconsistency(format!("arc {} has no x-axis point", i + k)));
        };
        let seg = seg.min(arc.len() - 2);
        return Ok(TrapConstruction {
            case: TrapCase::Case1UPlusCrossesOx { i, k },
            s: t.clone(),
            t,
            z: m.z.clone(),
            t_arc: i + k,
            t_segment: seg,
            depth: m.depth,
            d: None,
            k: None,
        });
    }

    let chain = m.branch_chain(Branch::UMinus);
    let v = &chain.vertices;
    let bs = crate::manifold::polyline_axis_points(&Polyline::new(v.clone())?, Axis::Ox)?;
    if bs.len() < 3 {
        return Err(LabError::DepthInsufficient {
            what: format!("three x-axis points of the lower branch (found {})", bs.len()),
            depth_reached: m.depth,
        });
    }
    let (b1, b2, b3) = (&bs[0], &bs[1], &bs[2]);
    let z_inv = &m.z_inverse;
    // walk [B2, B3]^u and keep the last closest point
    let mut best: Option<(Scalar, Point, usize)> = None;
    for si in b2.segment..=b3.segment {
        let a = if si == b2.segment { b2.point.clone() } else { v[si].clone() };
        let b = if si == b3.segment { b3.point.clone() } else { v[si + 1].clone() };
        let c = if a == b { a.clone() } else { closest_on_segment(z_inv, &a, &b)? };
        let d = dist2(&c, z_inv);
        let take = match &best {
            None => true,
            Some((bd, _, _)) => d.cmp_to(bd)? != std::cmp::Ordering::Greater,
        };
        if take {
            best = Some((d, c, si));
        }
    }
    let (_, t_inv, si) = best.expect("nonempty walk");
    let t = params.step(&t_inv)?;
    let arc_m = chain.segment_arc[si.min(chain.segment_arc.len() - 1)];
    let mut hit = None;
    let candidates: Vec<usize> = match arc_m {
        Some(n) => std::iter::once(n).chain(0..plus.len()).collect(),
        None => (0..plus.len()).collect(),
    };
    for n in candidates {
        if n >= plus.len() {
            continue;
        }
        if let Some(seg) = locate_on_arc(&plus[n].polyline, &t)? {
            hit = Some((n, seg));
            break;
        }
    }
    let Some((t_arc, t_segment)) = hit else {
        return Err(LabError::DepthInsufficient { what: "arc holding T".into(), depth_reached: m.depth });
    };
    Ok(TrapConstruction {
        case: TrapCase::Case2OnlyZ { b1: b1.point.clone(), b2: b2.point.clone(), b3: b3.point.clone(), t_inverse: t_inv },
        s: b2.point.clone(),
        t,
        z: m.z.clone(),
        t_arc,
        t_segment,
        depth: m.depth,
        d: None,
        k: None,
    })
}

/// `[Z, T]^u` as a vertex list.
pub fn z_to_t(tc: &TrapConstruction, m: &UnstableManifold) -> Vec<Point> {
    let mut out: Vec<Point> = vec![m.z.clone()];
    for arc in &m.plus[..tc.t_arc] {
        out.extend(arc.polyline.vertices()[1..].iter().cloned());
    }
    let v = m.plus[tc.t_arc].polyline.vertices();
    out.extend(v[1..=tc.t_segment].iter().cloned());
    if out.last() != Some(&tc.t) {
        out.push(tc.t.clone());
    }
    out
}

/// `[T, T²]^u` as a vertex list.
pub fn t_to_t2(params: &Params, tc: &TrapConstruction, m: &UnstableManifold) -> Result<Vec<Point>> {
    let v = m.plus[tc.t_arc].polyline.vertices();
    let mut out = vec![tc.t.clone()];
    out.extend(v[tc.t_segment + 1..].iter().filter(|p| **p != tc.t).cloned());
    let mut prefix: Vec<Point> = v[..=tc.t_segment].to_vec();
    if prefix.last() != Some(&tc.t) {
        prefix.push(tc.t.clone());
    }
    if prefix.len() >= 2 {
        let img = image_of_polyline(params, &Polyline::new(prefix)?, 2)?;
        out.extend(img.into_vertices().into_iter().skip(1));
    }
    Ok(out)
}

/// Does the segment `[a, b]` meet the computed `W^u_X` only in `{a, b}`?
pub fn segment_meets_manifold_only_at_ends(a: &Point, b: &Point, m: &UnstableManifold) -> Result<bool> {
    if a == b {
        return Ok(true);
    }
    for br in [Branch::UPlus, Branch::UMinus] {
        let v = m.branch_chain(br).vertices;
        let bb = a.bbox().union(&b.bbox());
        for w in v.windows(2) {
            if !bb.intersects(&w[0].bbox().union(&w[1].bbox())) {
                continue;
            }
            match segment_intersection(a, b, &w[0], &w[1])? {
                Intersection::Empty => {}
                Intersection::Point(p) if &p == a || &p == b => {}
                _ => return Ok(false),
            }
        }
    }
    Ok(true)
}

/// `𝒟` with boundary `[Z, T]^u ∪ TZ`.
pub fn build_polygon_d(tc: &TrapConstruction, m: &UnstableManifold) -> Result<SimplePolygon> {
    let v = z_to_t(tc, m);
    SimplePolygon::new(v).map_err(|e| match e {
        GeomError::NotSimple(..) => LabError::Inconsistency(format!("boundary of 𝒟 is not simple: {e}")),
        e => e.into(),
    })
}

/// `𝒦` with boundary `TZ ∪ [Z, Z²]^u ∪ L²(ZT) ∪ [T, T²]^u`.
pub fn build_polygon_k(params: &Params, tc: &TrapConstruction, m: &UnstableManifold) -> Result<SimplePolygon> {
    let z = &tc.z;
    let t = &tc.t;
    let mut ring: Vec<Point> = vec![t.clone()];
    ring.extend(m.plus[0].polyline.vertices().iter().cloned());
    let zt2 = image_of_polyline(params, &Polyline::new(vec![z.clone(), t.clone()])?, 2)?;
    ring.extend(zt2.vertices()[1..].iter().cloned());
    let mut back = t_to_t2(params, tc, m)?;
    back.reverse();
    ring.extend(back[1..back.len() - 1].iter().cloned());
    SimplePolygon::new(ring).map_err(|e| match e {
        GeomError::NotSimple(..) => LabError::Inconsistency(format!("boundary of 𝒦 is not simple: {e}")),
        e => e.into(),
    })
}

impl TrapConstruction {
    /// Builds `𝒟` and `𝒦` in place.
    pub fn build_polygons(&mut self, params: &Params, m: &UnstableManifold) -> Result<()> {
        self.d = Some(build_polygon_d(self, m)?);
        self.k = Some(build_polygon_k(params, self, m)?);
        Ok(())
    }
}

/// `L^k` of a polygon.
pub fn polygon_image(params: &Params, poly: &SimplePolygon, k: i64) -> Result<SimplePolygon> {
    let img = image_of_polyline(params, &poly.boundary(), k)?;
    Ok(SimplePolygon::new_trusted(img.into_vertices())?)
}

/// `L²(𝒟), …, L^{2k}(𝒟)`, each checked to lie in its predecessor.
pub fn iterate_d(params: &Params, d: &SimplePolygon, k: usize) -> Result<Vec<SimplePolygon>> {
    let mut out: Vec<SimplePolygon> = Vec::with_capacity(k);
    let mut prev = d.clone();
    for j in 1..=k {
        let next = polygon_image(params, &prev, 2)?;
        if !contains_polygon(&prev, &next, false)? {
            return Err(LabError::Inconsistency(format!("L^{}(𝒟) is not contained in L^{}(𝒟)", 2 * j, 2 * (j - 1))));
        }
        out.push(next.clone());
        prev = next;
    }
    Ok(out)
}

/// Least `k ≤ max_k` with `L^{2k}(Cl 𝒟) ⊂ Int 𝒟`.
pub fn trapping_index(params: &Params, d: &SimplePolygon, max_k: usize) -> Result<usize> {
    let mut cur = d.clone();
    for k in 1..=max_k {
        cur = polygon_image(params, &cur, 2)?;
        if contains_polygon(d, &cur, true)? {
            return Ok(k);
        }
    }
    Err(LabError::DepthInsufficient { what: "trapping index".into(), depth_reached: max_k })
}

/// Open chain (vertices) inside a closed polygon, boundary contact allowed.
pub fn chain_in_polygon(poly: &SimplePolygon, chain: &[Point]) -> Result<bool> {
    for p in chain {
        if point_in_polygon(p, poly)? == Containment::Exterior {
            return Ok(false);
        }
    }
    let pv = poly.vertices();
    let idx = SegmentIndex::new(poly.edge_boxes());
    for w in chain.windows(2) {
        let mut contact = false;
        for j in idx.query(&w[0].bbox().union(&w[1].bbox())) {
            let (c, d) = (&pv[j], &pv[(j + 1) % pv.len()]);
            match intersection_kind(&w[0], &w[1], c, d)? {
                IntersectionKind::Proper => return Ok(false),
                IntersectionKind::None => {}
                _ => contact = true,
            }
        }
        if contact && point_in_polygon(&w[0].midpoint(&w[1]), poly)? == Containment::Exterior {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `W^{u+} ∖ [X, T]^u` (computed part) inside `𝒟`.
pub fn forward_branch_in_d(tc: &TrapConstruction, m: &UnstableManifold, d: &SimplePolygon) -> Result<bool> {
    let v = m.plus[tc.t_arc].polyline.vertices();
    let mut tail = vec![tc.t.clone()];
    tail.extend(v[tc.t_segment + 1..].iter().filter(|p| **p != tc.t).cloned());
    for arc in &m.plus[tc.t_arc + 1..] {
        tail.extend(arc.polyline.vertices()[1..].iter().cloned());
    }
    chain_in_polygon(d, &tail)
}

/// One nested iterate of the outer approximation of `ℓ`.
#[derive(Clone, Debug, Serialize)]
pub struct EllIterate {
    pub k: usize,
    pub area: Scalar,
    pub area_f64: f64,
    pub vertices: usize,
    pub diameter: f64,
    /// Hausdorff distance between consecutive right-hand iterates.
    pub hausdorff_change: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EllApproximation {
    pub k: usize,
    /// `L^{2k}` of the seed polygon.
    pub right: SimplePolygon,
    /// Its single image.
    pub left: SimplePolygon,
    pub iterates: Vec<EllIterate>,
    pub p_in_all: bool,
    pub p_prime_in_left: bool,
}

/// Nested `L^{2j}` iterates of a seed polygon holding `P`, `j ≤ k`.
pub fn ell_from_seed(params: &Params, seed: &SimplePolygon, k: usize) -> Result<EllApproximation> {
    let (p, pp) = params.period_two_orbit()?;
    let mut cur = seed.clone();
    let mut iterates = Vec::with_capacity(k + 1);
    let record = |j: usize, poly: &SimplePolygon, change: f64| EllIterate {
        k: j,
        area: poly.area(),
        area_f64: poly.area().to_f64(),
        vertices: poly.len(),
        diameter: poly.diameter_f64(),
        hausdorff_change: change,
    };
    let mut p_in_all = true;
    let check_p = |poly: &SimplePolygon, j: usize| -> Result<()> {
        if point_in_polygon(&p, poly)? == Containment::Exterior {
            return Err(LabError::Inconsistency(format!("P left the iterate L^{}", 2 * j)));
        }
        Ok(())
    };
    check_p(&cur, 0)?;
    iterates.push(record(0, &cur, 0.0));
    for j in 1..=k {
        let next = polygon_image(params, &cur, 2)?;
        if !contains_polygon(&cur, &next, false)? {
            return Err(LabError::Inconsistency(format!("iterate {j} is not nested in its predecessor")));
        }
        if check_p(&next, j).is_err() {
            p_in_all = false;
            check_p(&next, j)?;
        }
        let change = hausdorff_distance(&cur, &next, 53).to_f64();
        iterates.push(record(j, &next, change));
        cur = next;
    }
    let left = polygon_image(params, &cur, 1)?;
    let p_prime_in_left = point_in_polygon(&pp, &left)? != Containment::Exterior;
    if !p_prime_in_left {
        return Err(LabError::Inconsistency("P′ is outside the left component".into()));
    }
    Ok(EllApproximation { k, right: cur, left, iterates, p_in_all, p_prime_in_left })
}

/// `ℓ` approximation from `𝒟`.
pub fn ell_approximation(params: &Params, tc: &TrapConstruction, k: usize) -> Result<EllApproximation> {
    let d = tc.d.as_ref().ok_or_else(|| LabError::Precondition("𝒟 has not been built".into()))?;
    ell_from_seed(params, d, k)
}

/// Exact bookkeeping `area(𝒟) = area(L^{2k}𝒟) + Σ_{j<k} area(L^{2j}𝒦)` for
/// `k = 1..=max_k`, plus pairwise disjointness of consecutive `𝒦` iterates.
#[derive(Clone, Debug, Serialize)]
pub struct AreaLedger {
    pub k: usize,
    pub identity_holds: bool,
    pub area_law_holds: bool,
    pub k_iterates_disjoint: bool,
    pub k_inside_d: bool,
}

pub fn area_ledger(params: &Params, d: &SimplePolygon, kpoly: &SimplePolygon, max_k: usize) -> Result<AreaLedger> {
    let b2 = params.b() * params.b();
    let ad = d.area();
    let mut dk = d.clone();
    let mut kj = kpoly.clone();
    let mut sum = Scalar::zero();
    let mut identity = true;
    let mut law = true;
    let mut disjoint = true;
    for _ in 1..=max_k {
        sum = &sum + &kj.area();
        let next_d = polygon_image(params, &dk, 2)?;
        law &= next_d.area() == &dk.area() * &b2;
        identity &= ad == &next_d.area() + &sum;
        let next_k = polygon_image(params, &kj, 2)?;
        disjoint &= interiors_disjoint(&kj, &next_k)?;
        dk = next_d;
        kj = next_k;
    }
    let k_inside_d = contains_polygon(d, kpoly, false)?;
    Ok(AreaLedger { k: max_k, identity_holds: identity, area_law_holds: law, k_iterates_disjoint: disjoint, k_inside_d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::NumericMode;

    fn setup(a: &str, b: &str, depth: usize) -> (Params, UnstableManifold, TrapConstruction) {
        let p = Params::from_text(a, b, NumericMode::Exact).unwrap();
        let m = unstable_manifold(&p, depth).unwrap();
        let mut tc = construct_t_from(&p, &m).unwrap();
        tc.build_polygons(&p, &m).unwrap();
        (p, m, tc)
    }

    #[test]
    fn case_one_at_figure_one_parameters() {
        let (_, m, tc) = setup("1.06", "0.96", 12);
        assert!(matches!(tc.case, TrapCase::Case1UPlusCrossesOx { .. }));
        assert!(tc.s.y().is_zero());
        assert!(segment_meets_manifold_only_at_ends(&tc.z, &tc.t, &m).unwrap());
        let d = tc.d.as_ref().unwrap();
        assert!(d.area().sign().unwrap() == Sign::Positive);
        assert!(d.vertices().contains(&tc.z) && d.vertices().contains(&tc.t));
        assert!(forward_branch_in_d(&tc, &m, d).unwrap());
    }

    #[test]
    fn d_is_invariant_and_area_shrinks_by_b_squared() {
        let (p, _, tc) = setup("1.06", "0.96", 12);
        let d = tc.d.as_ref().unwrap();
        let it = iterate_d(&p, d, 2).unwrap();
        let b2 = p.b() * p.b();
        assert_eq!(it[0].area(), &d.area() * &b2);
        assert_eq!(it[1].area(), &it[0].area() * &b2);
    }

    #[test]
    fn k_bookkeeping() {
        let (p, _, tc) = setup("1.06", "0.96", 12);
        let led = area_ledger(&p, tc.d.as_ref().unwrap(), tc.k.as_ref().unwrap(), 2).unwrap();
        assert!(led.identity_holds && led.area_law_holds && led.k_iterates_disjoint && led.k_inside_d);
    }

    #[test]
    fn preimage_curve_test() {
        let p = Params::from_text("1", "0.5", NumericMode::Exact).unwrap();
        // y = |x| − 1 passes through (2, 1)
        let hit = Polyline::new(vec![Point::from_ints(2, 0), Point::from_ints(2, 3)]).unwrap();
        let miss = Polyline::new(vec![Point::from_ints(0, 0), Point::from_ints(1, 1)]).unwrap();
        assert!(meets_preimage_of_y_axis(&p, &hit).unwrap());
        assert!(!meets_preimage_of_y_axis(&p, &miss).unwrap());
    }

    #[test]
    fn case_two_on_a_synthetic_manifold() {
        use crate::manifold::ManifoldArc;
        let p = Params::from_text("1", "0.5", NumericMode::Exact).unwrap();
        let z = p.point_z().unwrap();
        let zi = p.point_z_inverse().unwrap();
        let zx = z.x().clone();
        let sh = |dx: i64, y: i64| Point::new(&zx + &Scalar::from(dx), Scalar::from(y));
        let pt = Point::from_ints;
        let arc = |branch, depth, v: Vec<Point>| ManifoldArc { branch, depth, polyline: Polyline::new(v).unwrap() };
        let m = UnstableManifold {
            depth: 1,
            x: p.fixed_point_x().unwrap(),
            z: z.clone(),
            z_inverse: zi.clone(),
            plus: vec![
                arc(Branch::UPlus, 0, vec![z.clone(), sh(0, -2)]),
                arc(Branch::UPlus, 1, vec![sh(0, -2), sh(-1, -1), sh(-3, -1)]),
            ],
            minus: vec![arc(
                Branch::UMinus,
                0,
                vec![zi.clone(), pt(-1, 1), pt(-1, -1), pt(-2, -1), pt(-2, 1), pt(-3, 1), pt(-3, -1)],
            )],
        };
        let tc = construct_t_from(&p, &m).unwrap();
        let TrapCase::Case2OnlyZ { b1, b2, b3, t_inverse } = &tc.case else { panic!("{:?}", tc.case) };
        assert_eq!((b1, b2, b3), (&pt(-1, 0), &pt(-2, 0), &pt(-3, 0)));
        assert_eq!(tc.s, pt(-2, 0));
        // closest point of [B2, B3]^u to Z⁻¹ is level with it
        assert_eq!(t_inverse, &Point::new(Scalar::from(-2), zi.y().clone()));
        assert_eq!(tc.t, sh(-2, -1));
        assert_eq!((tc.t_arc, tc.t_segment), (1, 1));
    }
}
