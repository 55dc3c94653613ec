use std::cell::RefCell;
use std::cmp::Ordering;

use crate::numeric::{NumericError, Scalar, Sign};

use super::predicates::{cmp_x, cmp_y, intersection_kind, on_segment, orient, IntersectionKind};
use super::{BBox, Chain, GeomError, Point, SegmentIndex, SimplePolygon};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Containment {
    Interior,
    Boundary,
    Exterior,
}

/// Twice-free shoelace sum: the signed area of the closed vertex ring.
pub fn signed_area(v: &[Point]) -> Scalar {
    let n = v.len();
    if n < 3 {
        return Scalar::zero();
    }
    // translate to the first vertex to keep products small
    let o = &v[0];
    let mut acc = Scalar::zero();
    let mut prev = v[1].sub(o);
    for p in &v[2..] {
        let cur = p.sub(o);
        acc = &acc + &(&(&prev.0 * &cur.1) - &(&prev.1 * &cur.0));
        prev = cur;
    }
    &acc * &Scalar::ratio(1, 2)
}

/// Area of a counterclockwise simple polygon (positive).
pub fn polygon_area(poly: &SimplePolygon) -> Scalar {
    signed_area(poly.vertices())
}

/// Exact three-way location of `p` relative to `poly` (winding number with
/// explicit boundary detection).
pub fn point_in_polygon(p: &Point, poly: &SimplePolygon) -> Result<Containment, GeomError> {
    Ok(locate(p, poly.vertices())?)
}

pub(crate) fn locate(p: &Point, v: &[Point]) -> Result<Containment, NumericError> {
    let n = v.len();
    let (_, py) = p.approx();
    let (_, epy) = p.approx_error();
    let mut winding = 0i64;
    for i in 0..n {
        let a = &v[i];
        let b = &v[(i + 1) % n];
        let (ay, by) = (a.approx().1, b.approx().1);
        let (eay, eby) = (a.approx_error().1, b.approx_error().1);
        let lo = (ay - eay).min(by - eby);
        let hi = (ay + eay).max(by + eby);
        if lo.is_finite() && hi.is_finite() && py.is_finite() && (py + epy < lo || py - epy > hi) {
            continue;
        }
        if on_segment(p, a, b)? {
            return Ok(Containment::Boundary);
        }
        let ca = cmp_y(a, p)?;
        let cb = cmp_y(b, p)?;
        if ca != Ordering::Greater && cb == Ordering::Greater {
            if orient(a, b, p)? == Sign::Positive {
                winding += 1;
            }
        } else if ca == Ordering::Greater && cb != Ordering::Greater && orient(a, b, p)? == Sign::Negative {
            winding -= 1;
        }
    }
    Ok(if winding != 0 { Containment::Interior } else { Containment::Exterior })
}

/// First pair of non-adjacent edges that meet, or adjacent edges that overlap.
pub fn is_simple(v: &[Point], closed: bool) -> Result<Option<(usize, usize)>, GeomError> {
    let n = v.len();
    let m = if closed { n } else { n - 1 };
    let edge = |i: usize| (&v[i], &v[(i + 1) % n]);
    let boxes: Vec<BBox> = (0..m).map(|i| v[i].bbox().union(&v[(i + 1) % n].bbox())).collect();
    let idx = SegmentIndex::new(boxes);
    let mut found = None;
    idx.for_each_pair(|i, j| {
        let (a, b) = edge(i);
        let (c, d) = edge(j);
        let adjacent_fwd = j == i + 1;
        let adjacent_wrap = closed && i == 0 && j == m - 1;
        let kind = intersection_kind(a, b, c, d)?;
        let bad = if adjacent_fwd || adjacent_wrap {
            // the shared vertex is the only allowed contact
            let (far1, far2, shared) = if adjacent_fwd { (a, d, b) } else { (b, c, a) };
            kind == IntersectionKind::Overlap
                || far1 == far2
                || on_segment(far2, shared, far1)?
                || on_segment(far1, shared, far2)?
        } else {
            kind != IntersectionKind::None
        };
        if bad {
            found = Some((i, j));
        }
        Ok::<bool, GeomError>(bad)
    })?;
    Ok(found)
}

/// Exact monotone-chain convex hull, counterclockwise, without collinear points.
pub fn convex_hull(points: &[Point]) -> Result<Vec<Point>, GeomError> {
    let err: RefCell<Option<NumericError>> = RefCell::new(None);
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| {
        let r = cmp_x(a, b).and_then(|o| if o == Ordering::Equal { cmp_y(a, b) } else { Ok(o) });
        r.unwrap_or_else(|e| {
            err.borrow_mut().get_or_insert(e);
            Ordering::Equal
        })
    });
    if let Some(e) = err.into_inner() {
        return Err(e.into());
    }
    pts.dedup();
    if pts.len() < 3 {
        return Ok(pts);
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && orient(&lower[lower.len() - 2], &lower[lower.len() - 1], p)? != Sign::Positive {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && orient(&upper[upper.len() - 2], &upper[upper.len() - 1], p)? != Sign::Positive {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    Ok(lower)
}

/// Points where the segment `[a, b]` meets the boundary chain, sorted from `a`.
fn contact_points(a: &Point, b: &Point, outer: &[Point], idx: &SegmentIndex) -> Result<Vec<Point>, NumericError> {
    let n = outer.len();
    let mut pts: Vec<Point> = Vec::new();
    for j in idx.query(&a.bbox().union(&b.bbox())) {
        let (c, d) = (&outer[j], &outer[(j + 1) % n]);
        match super::predicates::segment_intersection(a, b, c, d)? {
            super::Intersection::Empty => {}
            super::Intersection::Point(p) => pts.push(p),
            super::Intersection::Subsegment(p, q) => {
                pts.push(p);
                pts.push(q);
            }
        }
    }
    let err: RefCell<Option<NumericError>> = RefCell::new(None);
    let ux = cmp_x(a, b)? != Ordering::Equal;
    let forward = if ux { cmp_x(a, b)? } else { cmp_y(a, b)? } == Ordering::Less;
    pts.sort_by(|p, q| {
        let o = if ux { cmp_x(p, q) } else { cmp_y(p, q) };
        let o = o.unwrap_or_else(|e| {
            err.borrow_mut().get_or_insert(e);
            Ordering::Equal
        });
        if forward {
            o
        } else {
            o.reverse()
        }
    });
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    pts.dedup();
    Ok(pts)
}

/// Is `inner` contained in `outer`?
///
/// With `strict = false` the closed polygon `inner` must lie in the closed
/// polygon `outer`; boundaries may touch or share pieces. With `strict = true`
/// the closure of `inner` must lie in the interior of `outer`.
pub fn contains_polygon(outer: &SimplePolygon, inner: &SimplePolygon, strict: bool) -> Result<bool, GeomError> {
    let ov = outer.vertices();
    let iv = inner.vertices();
    if !outer.bbox().intersects(&inner.bbox()) {
        return Ok(false);
    }
    for p in iv {
        match locate(p, ov)? {
            Containment::Exterior => return Ok(false),
            Containment::Boundary if strict => return Ok(false),
            _ => {}
        }
    }
    let idx = SegmentIndex::new(outer.edge_boxes());
    let n = iv.len();
    for i in 0..n {
        let (a, b) = (&iv[i], &iv[(i + 1) % n]);
        let cands = idx.query(&a.bbox().union(&b.bbox()));
        if strict {
            for j in cands {
                let (c, d) = (&ov[j], &ov[(j + 1) % ov.len()]);
                if intersection_kind(a, b, c, d)? != IntersectionKind::None {
                    return Ok(false);
                }
            }
            continue;
        }
        let mut touches = false;
        for &j in &cands {
            let (c, d) = (&ov[j], &ov[(j + 1) % ov.len()]);
            match intersection_kind(a, b, c, d)? {
                IntersectionKind::Proper => return Ok(false),
                IntersectionKind::None => {}
                _ => touches = true,
            }
        }
        if !touches {
            continue;
        }
        // split at all contacts; each open piece is then entirely on one side
        let mut stops = vec![a.clone()];
        for p in contact_points(a, b, ov, &idx)? {
            if &p != stops.last().unwrap() && &p != b {
                stops.push(p);
            }
        }
        stops.push(b.clone());
        for w in stops.windows(2) {
            if locate(&w[0].midpoint(&w[1]), ov)? == Containment::Exterior {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Do two simple polygons have disjoint interiors?
pub fn interiors_disjoint(p: &SimplePolygon, q: &SimplePolygon) -> Result<bool, GeomError> {
    Ok(one_sided_disjoint(p, q)? && one_sided_disjoint(q, p)?)
}

fn one_sided_disjoint(p: &SimplePolygon, q: &SimplePolygon) -> Result<bool, GeomError> {
    let pv = p.vertices();
    let qv = q.vertices();
    if !p.bbox().intersects(&q.bbox()) {
        return Ok(true);
    }
    for v in pv {
        if locate(v, qv)? == Containment::Interior {
            return Ok(false);
        }
    }
    let idx = SegmentIndex::new(q.edge_boxes());
    let n = pv.len();
    for i in 0..n {
        let (a, b) = (&pv[i], &pv[(i + 1) % n]);
        let mut touches = false;
        for j in idx.query(&a.bbox().union(&b.bbox())) {
            let (c, d) = (&qv[j], &qv[(j + 1) % qv.len()]);
            match intersection_kind(a, b, c, d)? {
                IntersectionKind::Proper => return Ok(false),
                IntersectionKind::None => {}
                _ => touches = true,
            }
        }
        if !touches {
            if locate(&a.midpoint(b), qv)? == Containment::Interior {
                return Ok(false);
            }
            continue;
        }
        let mut stops = vec![a.clone()];
        for c in contact_points(a, b, qv, &idx)? {
            if &c != stops.last().unwrap() && &c != b {
                stops.push(c);
            }
        }
        stops.push(b.clone());
        for w in stops.windows(2) {
            let m = w[0].midpoint(&w[1]);
            match locate(&m, qv)? {
                Containment::Interior => return Ok(false),
                Containment::Exterior => {}
                Containment::Boundary => {
                    // shared boundary piece: interiors must lie on opposite sides
                    if same_side_interiors(&w[0], &w[1], qv)? {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// For a piece `u→v` of a CCW boundary lying on the CCW boundary `qv`, do both
/// polygons have their interior on the same side of it?
fn same_side_interiors(u: &Point, v: &Point, qv: &[Point]) -> Result<bool, NumericError> {
    let n = qv.len();
    let m = u.midpoint(v);
    for j in 0..n {
        let (c, d) = (&qv[j], &qv[(j + 1) % n]);
        if on_segment(&m, c, d)? {
            // same direction means the interior (left side) is shared
            let (dx1, dy1) = v.sub(u);
            let (dx2, dy2) = d.sub(c);
            let dot = &(&dx1 * &dx2) + &(&dy1 * &dy2);
            return Ok(dot.sign()? == Sign::Positive);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    fn square(x0: i64, y0: i64, s: i64) -> SimplePolygon {
        SimplePolygon::new(vec![pt(x0, y0), pt(x0 + s, y0), pt(x0 + s, y0 + s), pt(x0, y0 + s)]).unwrap()
    }

    #[test]
    fn areas() {
        assert_eq!(polygon_area(&square(0, 0, 1)), Scalar::from(1));
        let t = SimplePolygon::new(vec![pt(0, 0), pt(1, 0), pt(0, 1)]).unwrap();
        assert_eq!(polygon_area(&t), Scalar::ratio(1, 2));
    }

    #[test]
    fn locate_points() {
        let t = SimplePolygon::new(vec![pt(0, 0), pt(3, 0), pt(0, 3)]).unwrap();
        assert_eq!(point_in_polygon(&pt(1, 1), &t).unwrap(), Containment::Interior);
        assert_eq!(point_in_polygon(&pt(3, 0), &t).unwrap(), Containment::Boundary);
        assert_eq!(point_in_polygon(&Point::from_ratios(3, 2, 3, 2), &t).unwrap(), Containment::Boundary);
        assert_eq!(point_in_polygon(&pt(2, 2), &t).unwrap(), Containment::Exterior);
        assert_eq!(point_in_polygon(&pt(-1, 0), &t).unwrap(), Containment::Exterior);
    }

    #[test]
    fn containment_through_reflex_vertex() {
        // L-shaped outer polygon; inner triangle spans across the notch touching the reflex vertex
        let outer = SimplePolygon::new(vec![pt(0, 0), pt(4, 0), pt(4, 2), pt(2, 2), pt(2, 4), pt(0, 4)]).unwrap();
        let inside = SimplePolygon::new(vec![pt(0, 0), pt(4, 0), pt(2, 2)]).unwrap();
        assert!(contains_polygon(&outer, &inside, false).unwrap());
        assert!(!contains_polygon(&outer, &inside, true).unwrap());
        let across = SimplePolygon::new(vec![pt(1, 3), pt(3, 1), pt(4, 4)]).unwrap();
        assert!(!contains_polygon(&outer, &across, false).unwrap());
        // vertices inside, edge passes through the reflex vertex and out
        let sneaky = SimplePolygon::new(vec![pt(1, 3), pt(3, 1), pt(1, 1)]).unwrap();
        assert!(contains_polygon(&outer, &sneaky, false).unwrap());
        let sneaky2 = SimplePolygon::new(vec![pt(1, 4), pt(4, 1), pt(1, 1)]).unwrap();
        assert!(!contains_polygon(&outer, &sneaky2, false).unwrap());
        assert!(contains_polygon(&square(0, 0, 4), &square(1, 1, 1), true).unwrap());
    }

    #[test]
    fn disjoint_interiors() {
        assert!(interiors_disjoint(&square(0, 0, 1), &square(1, 0, 1)).unwrap());
        assert!(!interiors_disjoint(&square(0, 0, 2), &square(1, 1, 2)).unwrap());
        assert!(!interiors_disjoint(&square(0, 0, 1), &square(0, 0, 1)).unwrap());
        assert!(interiors_disjoint(&square(0, 0, 1), &square(5, 5, 1)).unwrap());
    }

    #[test]
    fn hull_drops_collinear_and_interior() {
        let pts = vec![pt(0, 0), pt(1, 0), pt(2, 0), pt(2, 2), pt(1, 1), pt(0, 2)];
        let h = convex_hull(&pts).unwrap();
        assert_eq!(h, vec![pt(0, 0), pt(2, 0), pt(2, 2), pt(0, 2)]);
    }
}
