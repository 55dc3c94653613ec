use std::cmp::Ordering;

use crate::numeric::{NumericError, Scalar, Sign};

use super::Point;

const U: f64 = 1.2e-16;

fn filtered_cmp(a: f64, ea: f64, b: f64, eb: f64) -> Option<Ordering> {
    let d = a - b;
    let e = (ea + eb) * (1.0 + 1e-9) + d.abs() * U + 1e-300;
    if d.is_finite() && e.is_finite() && d.abs() > e {
        Some(if d > 0.0 { Ordering::Greater } else { Ordering::Less })
    } else {
        None
    }
}

pub fn cmp_x(a: &Point, b: &Point) -> Result<Ordering, NumericError> {
    if let Some(o) = filtered_cmp(a.fx, a.ex, b.fx, b.ex) {
        return Ok(o);
    }
    if a.x == b.x && a.x.is_exact() {
        return Ok(Ordering::Equal);
    }
    a.x.cmp_to(&b.x)
}

pub fn cmp_y(a: &Point, b: &Point) -> Result<Ordering, NumericError> {
    if let Some(o) = filtered_cmp(a.fy, a.ey, b.fy, b.ey) {
        return Ok(o);
    }
    if a.y == b.y && a.y.is_exact() {
        return Ok(Ordering::Equal);
    }
    a.y.cmp_to(&b.y)
}

/// Sign of the cross product `(b − a) × (c − a)`: positive when `c` is left of `a→b`.
pub fn orient(a: &Point, b: &Point, c: &Point) -> Result<Sign, NumericError> {
    let d1 = b.fx - a.fx;
    let e1 = b.ex + a.ex + d1.abs() * U;
    let d2 = c.fy - a.fy;
    let e2 = c.ey + a.ey + d2.abs() * U;
    let d3 = b.fy - a.fy;
    let e3 = b.ey + a.ey + d3.abs() * U;
    let d4 = c.fx - a.fx;
    let e4 = c.ex + a.ex + d4.abs() * U;
    let p1 = d1 * d2;
    let ep1 = d1.abs() * e2 + d2.abs() * e1 + e1 * e2 + p1.abs() * U;
    let p2 = d3 * d4;
    let ep2 = d3.abs() * e4 + d4.abs() * e3 + e3 * e4 + p2.abs() * U;
    let det = p1 - p2;
    let edet = (ep1 + ep2 + det.abs() * U) * (1.0 + 1e-9) + 1e-290;
    if det.is_finite() && edet.is_finite() && det.abs() > edet {
        return Ok(Sign::of_f64(det));
    }
    orient_exact(a, b, c)
}

fn orient_exact(a: &Point, b: &Point, c: &Point) -> Result<Sign, NumericError> {
    let (bx, by) = b.sub(a);
    let (cx, cy) = c.sub(a);
    let det = (&bx * &cy).checked_sub(&(&by * &cx))?;
    det.sign()
}

/// `p` lies on the closed segment `[a, b]`.
pub fn on_segment(p: &Point, a: &Point, b: &Point) -> Result<bool, NumericError> {
    if !a.bbox().union(&b.bbox()).intersects(&p.bbox()) {
        return Ok(false);
    }
    if orient(a, b, p)? != Sign::Zero {
        return Ok(false);
    }
    within_box(p, a, b)
}

/// For `p` collinear with `a, b`: is it between them (inclusive)?
fn within_box(p: &Point, a: &Point, b: &Point) -> Result<bool, NumericError> {
    let ox = cmp_x(p, a)? as i8 * cmp_x(p, b)? as i8;
    if ox > 0 {
        return Ok(false);
    }
    let oy = cmp_y(p, a)? as i8 * cmp_y(p, b)? as i8;
    Ok(oy <= 0)
}

/// Exact intersection of two closed segments.
#[derive(Clone, Debug, PartialEq)]
pub enum Intersection {
    Empty,
    Point(Point),
    Subsegment(Point, Point),
}

/// Shape of an intersection without constructing it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntersectionKind {
    None,
    /// Interiors cross at a single point.
    Proper,
    /// Single common point that is an endpoint of at least one segment.
    Touch,
    /// Collinear overlap of positive length.
    Overlap,
}

struct Orients {
    o1: Sign,
    o2: Sign,
    o3: Sign,
    o4: Sign,
}

fn orients(p: &Point, q: &Point, r: &Point, s: &Point) -> Result<Option<Orients>, NumericError> {
    if !p.bbox().union(&q.bbox()).intersects(&r.bbox().union(&s.bbox())) {
        return Ok(None);
    }
    let o1 = orient(p, q, r)?;
    let o2 = orient(p, q, s)?;
    if o1 == o2 && o1 != Sign::Zero {
        return Ok(None);
    }
    let o3 = orient(r, s, p)?;
    let o4 = orient(r, s, q)?;
    if o3 == o4 && o3 != Sign::Zero {
        return Ok(None);
    }
    Ok(Some(Orients { o1, o2, o3, o4 }))
}

fn use_x_axis(p: &Point, q: &Point) -> Result<bool, NumericError> {
    Ok(cmp_x(p, q)? != Ordering::Equal)
}

fn axis_cmp(use_x: bool, a: &Point, b: &Point) -> Result<Ordering, NumericError> {
    if use_x {
        cmp_x(a, b)
    } else {
        cmp_y(a, b)
    }
}

fn ordered<'a>(use_x: bool, a: &'a Point, b: &'a Point) -> Result<(&'a Point, &'a Point), NumericError> {
    Ok(if axis_cmp(use_x, a, b)? == Ordering::Greater { (b, a) } else { (a, b) })
}

fn collinear_overlap<'a>(p: &'a Point, q: &'a Point, r: &'a Point, s: &'a Point) -> Result<Option<(&'a Point, &'a Point)>, NumericError> {
    let ux = use_x_axis(p, q)?;
    let (lo1, hi1) = ordered(ux, p, q)?;
    let (lo2, hi2) = ordered(ux, r, s)?;
    let lo = if axis_cmp(ux, lo1, lo2)? == Ordering::Less { lo2 } else { lo1 };
    let hi = if axis_cmp(ux, hi1, hi2)? == Ordering::Greater { hi2 } else { hi1 };
    Ok(match axis_cmp(ux, lo, hi)? {
        Ordering::Greater => None,
        _ => Some((lo, hi)),
    })
}

pub fn intersection_kind(p: &Point, q: &Point, r: &Point, s: &Point) -> Result<IntersectionKind, NumericError> {
    let Some(o) = orients(p, q, r, s)? else {
        return Ok(IntersectionKind::None);
    };
    if o.o1 == Sign::Zero && o.o2 == Sign::Zero {
        return Ok(match collinear_overlap(p, q, r, s)? {
            None => IntersectionKind::None,
            Some((lo, hi)) if lo == hi => IntersectionKind::Touch,
            Some((lo, hi)) => {
                if axis_cmp(use_x_axis(p, q)?, lo, hi)? == Ordering::Equal {
                    IntersectionKind::Touch
                } else {
                    IntersectionKind::Overlap
                }
            }
        });
    }
    if o.o1 != Sign::Zero && o.o2 != Sign::Zero && o.o3 != Sign::Zero && o.o4 != Sign::Zero {
        return Ok(IntersectionKind::Proper);
    }
    Ok(IntersectionKind::Touch)
}

/// Do the closed segments `[p, q]` and `[r, s]` meet at all?
pub fn segments_touch(p: &Point, q: &Point, r: &Point, s: &Point) -> Result<bool, NumericError> {
    Ok(intersection_kind(p, q, r, s)? != IntersectionKind::None)
}

/// Intersection point of the lines through `p, q` and `r, s` (must not be parallel).
pub fn line_intersection(p: &Point, q: &Point, r: &Point, s: &Point) -> Result<Point, NumericError> {
    let (dx, dy) = q.sub(p);
    let (ex, ey) = s.sub(r);
    let (wx, wy) = r.sub(p);
    let num = (&wx * &ey).checked_sub(&(&wy * &ex))?;
    let den = (&dx * &ey).checked_sub(&(&dy * &ex))?;
    let t = num.checked_div(&den)?;
    Ok(Point::new(&p.x + &(&t * &dx), &p.y + &(&t * &dy)))
}

/// Exact intersection of the closed segments `[p, q]` and `[r, s]`.
pub fn segment_intersection(p: &Point, q: &Point, r: &Point, s: &Point) -> Result<Intersection, NumericError> {
    let Some(o) = orients(p, q, r, s)? else {
        return Ok(Intersection::Empty);
    };
    if o.o1 == Sign::Zero && o.o2 == Sign::Zero {
        return Ok(match collinear_overlap(p, q, r, s)? {
            None => Intersection::Empty,
            Some((lo, hi)) if lo == hi => Intersection::Point(lo.clone()),
            Some((lo, hi)) => Intersection::Subsegment(lo.clone(), hi.clone()),
        });
    }
    let pt = if o.o1 == Sign::Zero {
        r.clone()
    } else if o.o2 == Sign::Zero {
        s.clone()
    } else if o.o3 == Sign::Zero {
        p.clone()
    } else if o.o4 == Sign::Zero {
        q.clone()
    } else {
        line_intersection(p, q, r, s)?
    };
    Ok(Intersection::Point(pt))
}

/// Squared Euclidean distance, exact.
pub fn dist2(a: &Point, b: &Point) -> Scalar {
    let (dx, dy) = a.sub(b);
    &(&dx * &dx) + &(&dy * &dy)
}

/// Closest point of the segment `[a, b]` to `p`, exact.
pub fn closest_on_segment(p: &Point, a: &Point, b: &Point) -> Result<Point, NumericError> {
    let (dx, dy) = b.sub(a);
    let (wx, wy) = p.sub(a);
    let num = &(&wx * &dx) + &(&wy * &dy);
    if num.sign()? != Sign::Positive {
        return Ok(a.clone());
    }
    let den = &(&dx * &dx) + &(&dy * &dy);
    if num.cmp_to(&den)? != Ordering::Less {
        return Ok(b.clone());
    }
    let t = num.checked_div(&den)?;
    Ok(a.lerp(b, &t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    #[test]
    fn crossing_axes_meet_at_origin() {
        let r = segment_intersection(&p(0, -1), &p(0, 1), &p(-1, 0), &p(1, 0)).unwrap();
        assert_eq!(r, Intersection::Point(p(0, 0)));
        assert_eq!(intersection_kind(&p(0, -1), &p(0, 1), &p(-1, 0), &p(1, 0)).unwrap(), IntersectionKind::Proper);
    }

    #[test]
    fn parallel_disjoint_is_empty() {
        assert_eq!(segment_intersection(&p(0, 0), &p(1, 0), &p(0, 1), &p(1, 1)).unwrap(), Intersection::Empty);
    }

    #[test]
    fn collinear_overlap_is_subsegment() {
        let r = segment_intersection(&p(0, 0), &p(4, 4), &p(6, 6), &p(2, 2)).unwrap();
        assert_eq!(r, Intersection::Subsegment(p(2, 2), p(4, 4)));
        let r = segment_intersection(&p(0, 0), &p(2, 2), &p(2, 2), &p(3, 3)).unwrap();
        assert_eq!(r, Intersection::Point(p(2, 2)));
        let r = segment_intersection(&p(0, 5), &p(0, 1), &p(0, 2), &p(0, 3)).unwrap();
        assert_eq!(r, Intersection::Subsegment(p(0, 2), p(0, 3)));
    }

    #[test]
    fn touching_endpoint() {
        let r = segment_intersection(&p(0, 0), &p(2, 0), &p(1, 0), &p(1, 5)).unwrap();
        assert_eq!(r, Intersection::Point(p(1, 0)));
        assert_eq!(intersection_kind(&p(0, 0), &p(2, 0), &p(1, 0), &p(1, 5)).unwrap(), IntersectionKind::Touch);
    }

    #[test]
    fn orientation_exact_on_tiny_differences() {
        let a = Point::from_ratios(0, 1, 0, 1);
        let b = Point::from_ratios(1, 1, 1, 1);
        let c = Point::from_ratios(1_000_000_000_000_001, 1_000_000_000_000_000, 1, 1);
        assert_eq!(orient(&a, &b, &c).unwrap(), Sign::Negative);
        let d = Point::from_ratios(1_000_000_000_000_001, 1_000_000_000_000_000, 1_000_000_000_000_001, 1_000_000_000_000_000);
        assert_eq!(orient(&a, &b, &d).unwrap(), Sign::Zero);
    }

    #[test]
    fn closest_point_clamps() {
        let c = closest_on_segment(&p(5, 5), &p(0, 0), &p(2, 0)).unwrap();
        assert_eq!(c, p(2, 0));
        let c = closest_on_segment(&p(1, 5), &p(0, 0), &p(2, 0)).unwrap();
        assert_eq!(c, p(1, 0));
    }
}
