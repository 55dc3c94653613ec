//! Exact planar primitives: points, segments, polylines and simple polygons.

mod distance;
mod fold;
mod index;
mod polygon;
mod predicates;

use std::hash::{Hash, Hasher};

use serde::{Serialize, Serializer};
use serde::ser::SerializeStruct;
use thiserror::Error;

use crate::numeric::{NumericError, Scalar};

pub use distance::{hausdorff_distance, point_segment_distance_f64, DistanceEstimate};
pub use fold::{split_at_fold, Fold};
pub use index::{BBox, SegmentIndex};
pub use polygon::{
    contains_polygon, convex_hull, interiors_disjoint, is_simple, point_in_polygon, polygon_area,
    signed_area, Containment,
};
pub use predicates::{
    closest_on_segment, cmp_x, cmp_y, dist2, intersection_kind, line_intersection, on_segment, orient,
    segment_intersection, segments_touch,
    Intersection, IntersectionKind,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error("polyline needs at least {needed} vertices, got {got}")]
    TooFewVertices { needed: usize, got: usize },
    #[error("consecutive vertices {0} and {1} coincide")]
    RepeatedVertex(usize, usize),
    #[error("boundary is not simple: edges {0} and {1} intersect")]
    NotSimple(usize, usize),
    #[error("degenerate segment")]
    DegenerateSegment,
    #[error("polygon has zero area")]
    ZeroArea,
}

/// A point with exact coordinates and a cached `f64` filter.
#[derive(Clone, Debug)]
pub struct Point {
    x: Scalar,
    y: Scalar,
    fx: f64,
    fy: f64,
    ex: f64,
    ey: f64,
}

impl PartialEq for Point {
    fn eq(&self, o: &Self) -> bool {
        self.x == o.x && self.y == o.y
    }
}

impl Eq for Point {}

impl Hash for Point {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.x.hash(state);
        self.y.hash(state);
    }
}

impl Point {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        let (fx, ex) = x.approx();
        let (fy, ey) = y.approx();
        Point { x, y, fx, fy, ex, ey }
    }

    pub fn from_ratios(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        Point::new(Scalar::ratio(xn, xd), Scalar::ratio(yn, yd))
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(Scalar::from(x), Scalar::from(y))
    }

    pub fn x(&self) -> &Scalar {
        &self.x
    }

    pub fn y(&self) -> &Scalar {
        &self.y
    }

    /// Cached `f64` coordinates.
    pub fn approx(&self) -> (f64, f64) {
        (self.fx, self.fy)
    }

    /// Absolute error bounds of [`Point::approx`].
    pub fn approx_error(&self) -> (f64, f64) {
        (self.ex, self.ey)
    }

    pub fn is_exact(&self) -> bool {
        self.x.is_exact() && self.y.is_exact()
    }

    pub fn x_sign(&self) -> Result<crate::numeric::Sign, NumericError> {
        if self.fx.abs() > self.ex && self.fx.is_finite() {
            return Ok(crate::numeric::Sign::of_f64(self.fx));
        }
        self.x.sign()
    }

    pub fn y_sign(&self) -> Result<crate::numeric::Sign, NumericError> {
        if self.fy.abs() > self.ey && self.fy.is_finite() {
            return Ok(crate::numeric::Sign::of_f64(self.fy));
        }
        self.y.sign()
    }

    pub fn bit_size(&self) -> u64 {
        self.x.bit_size() + self.y.bit_size()
    }

    pub fn bbox(&self) -> BBox {
        BBox::new(self.fx - self.ex, self.fx + self.ex, self.fy - self.ey, self.fy + self.ey)
    }

    pub fn sub(&self, o: &Point) -> (Scalar, Scalar) {
        (&self.x - &o.x, &self.y - &o.y)
    }

    pub fn midpoint(&self, o: &Point) -> Point {
        let half = Scalar::ratio(1, 2);
        Point::new(&(&self.x + &o.x) * &half, &(&self.y + &o.y) * &half)
    }

    /// `self + t·(o − self)`.
    pub fn lerp(&self, o: &Point, t: &Scalar) -> Point {
        let (dx, dy) = o.sub(self);
        Point::new(&self.x + &(t * &dx), &self.y + &(t * &dy))
    }

    pub fn dist_f64(&self, o: &Point) -> f64 {
        (self.fx - o.fx).hypot(self.fy - o.fy)
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut st = ser.serialize_struct("Point", 2)?;
        st.serialize_field("x", &self.x)?;
        st.serialize_field("y", &self.y)?;
        st.end()
    }
}

/// Directed segment between two distinct points.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Self, GeomError> {
        if a == b {
            return Err(GeomError::DegenerateSegment);
        }
        Ok(Segment { a, b })
    }

    pub fn bbox(&self) -> BBox {
        self.a.bbox().union(&self.b.bbox())
    }
}

/// Anything that is an ordered chain of vertices, open or closed.
pub trait Chain {
    fn vertices(&self) -> &[Point];
    fn is_closed(&self) -> bool;

    fn edge_count(&self) -> usize {
        let n = self.vertices().len();
        if self.is_closed() {
            n
        } else {
            n.saturating_sub(1)
        }
    }

    fn edge(&self, i: usize) -> (&Point, &Point) {
        let v = self.vertices();
        (&v[i], &v[(i + 1) % v.len()])
    }

    fn edge_boxes(&self) -> Vec<BBox> {
        (0..self.edge_count())
            .map(|i| {
                let (a, b) = self.edge(i);
                a.bbox().union(&b.bbox())
            })
            .collect()
    }
}

/// Open polygonal line; consecutive vertices are distinct.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Polyline {
    vertices: Vec<Point>,
}

impl Polyline {
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeomError> {
        if vertices.len() < 2 {
            return Err(GeomError::TooFewVertices { needed: 2, got: vertices.len() });
        }
        for i in 1..vertices.len() {
            if vertices[i] == vertices[i - 1] {
                return Err(GeomError::RepeatedVertex(i - 1, i));
            }
        }
        Ok(Polyline { vertices })
    }

    pub(crate) fn new_unchecked(vertices: Vec<Point>) -> Self {
        debug_assert!(vertices.len() >= 2);
        Polyline { vertices }
    }

    pub fn first(&self) -> &Point {
        &self.vertices[0]
    }

    pub fn last(&self) -> &Point {
        &self.vertices[self.vertices.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn into_vertices(self) -> Vec<Point> {
        self.vertices
    }

    pub fn reversed(&self) -> Polyline {
        let mut v = self.vertices.clone();
        v.reverse();
        Polyline { vertices: v }
    }

    pub fn segments(&self) -> impl Iterator<Item = (&Point, &Point)> {
        self.vertices.windows(2).map(|w| (&w[0], &w[1]))
    }

    pub fn length_f64(&self) -> f64 {
        self.segments().map(|(a, b)| a.dist_f64(b)).sum()
    }

    pub fn is_simple(&self) -> Result<bool, GeomError> {
        Ok(is_simple(&self.vertices, false)?.is_none())
    }
}

impl Chain for Polyline {
    fn vertices(&self) -> &[Point] {
        &self.vertices
    }
    fn is_closed(&self) -> bool {
        false
    }
}

/// Simple polygon with counterclockwise vertex order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimplePolygon {
    vertices: Vec<Point>,
}

impl SimplePolygon {
    /// Validates simplicity and nonzero area; reverses clockwise input.
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeomError> {
        let vertices = Self::check_ring(vertices)?;
        if let Some((i, j)) = is_simple(&vertices, true)? {
            return Err(GeomError::NotSimple(i, j));
        }
        Self::oriented(vertices)
    }

    /// Orientation normalization without the simplicity test, for images of
    /// simple polygons under a homeomorphism.
    pub fn new_trusted(vertices: Vec<Point>) -> Result<Self, GeomError> {
        let vertices = Self::check_ring(vertices)?;
        Self::oriented(vertices)
    }

    fn check_ring(mut vertices: Vec<Point>) -> Result<Vec<Point>, GeomError> {
        if vertices.len() > 1 && vertices[0] == vertices[vertices.len() - 1] {
            vertices.pop();
        }
        if vertices.len() < 3 {
            return Err(GeomError::TooFewVertices { needed: 3, got: vertices.len() });
        }
        for i in 0..vertices.len() {
            let j = (i + 1) % vertices.len();
            if vertices[i] == vertices[j] {
                return Err(GeomError::RepeatedVertex(i, j));
            }
        }
        Ok(vertices)
    }

    fn oriented(mut vertices: Vec<Point>) -> Result<Self, GeomError> {
        match signed_area(&vertices).sign()? {
            crate::numeric::Sign::Zero => Err(GeomError::ZeroArea),
            crate::numeric::Sign::Negative => {
                vertices.reverse();
                Ok(SimplePolygon { vertices })
            }
            crate::numeric::Sign::Positive => Ok(SimplePolygon { vertices }),
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn into_vertices(self) -> Vec<Point> {
        self.vertices
    }

    /// Boundary as a closed polyline (first vertex repeated at the end).
    pub fn boundary(&self) -> Polyline {
        let mut v = self.vertices.clone();
        v.push(self.vertices[0].clone());
        Polyline { vertices: v }
    }

    pub fn area(&self) -> Scalar {
        polygon_area(self)
    }

    pub fn contains_point(&self, p: &Point) -> Result<Containment, GeomError> {
        point_in_polygon(p, self)
    }

    pub fn bbox(&self) -> BBox {
        self.vertices.iter().fold(BBox::empty(), |b, p| b.union(&p.bbox()))
    }

    /// Largest pairwise vertex distance in floats.
    pub fn diameter_f64(&self) -> f64 {
        let hull = convex_hull(&self.vertices).unwrap_or_else(|_| self.vertices.clone());
        let mut best = 0.0f64;
        for i in 0..hull.len() {
            for j in i + 1..hull.len() {
                best = best.max(hull[i].dist_f64(&hull[j]));
            }
        }
        best
    }
}

impl Chain for SimplePolygon {
    fn vertices(&self) -> &[Point] {
        &self.vertices
    }
    fn is_closed(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polyline_rejects_repeats() {
        let p = Point::from_ints(0, 0);
        assert!(matches!(Polyline::new(vec![p.clone(), p.clone()]), Err(GeomError::RepeatedVertex(0, 1))));
        assert!(Polyline::new(vec![p]).is_err());
    }

    #[test]
    fn polygon_is_normalized_ccw() {
        let cw = vec![Point::from_ints(0, 0), Point::from_ints(0, 1), Point::from_ints(1, 1), Point::from_ints(1, 0)];
        let poly = SimplePolygon::new(cw).unwrap();
        assert_eq!(signed_area(poly.vertices()), Scalar::from(1));
    }

    #[test]
    fn bowtie_is_rejected() {
        let v = vec![Point::from_ints(0, 0), Point::from_ints(1, 1), Point::from_ints(1, 0), Point::from_ints(0, 1)];
        assert!(matches!(SimplePolygon::new(v), Err(GeomError::NotSimple(..))));
    }

    #[test]
    fn closing_vertex_is_dropped() {
        let v = vec![Point::from_ints(0, 0), Point::from_ints(1, 0), Point::from_ints(0, 1), Point::from_ints(0, 0)];
        assert_eq!(SimplePolygon::new(v).unwrap().len(), 3);
    }
}
