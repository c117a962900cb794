//! Lattice polygon primitives: areas, lattice points, lattice lengths,
//! unimodular affine maps and canonical representatives.
//!
//! Everything here works over `i64`; polygons that matter for curve counting
//! are tiny, so overflow is not a practical concern.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;

/// A point of Z².
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LatticePoint {
    pub i: i64,
    pub j: i64,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { i: 0, j: 0 };

    pub const fn new(i: i64, j: i64) -> Self {
        Self { i, j }
    }

    /// The 2D cross product `self × other`.
    pub fn cross(self, other: LatticePoint) -> i64 {
        self.i * other.j - self.j * other.i
    }

    pub fn dot(self, other: LatticePoint) -> i64 {
        self.i * other.i + self.j * other.j
    }

    /// Greatest common divisor of the coordinates (0 for the origin).
    pub fn content(self) -> i64 {
        self.i.gcd(&self.j)
    }

    /// The primitive vector in the direction of `self`.
    ///
    /// # Panics
    /// Panics on the zero vector.
    pub fn primitive(self) -> LatticePoint {
        let g = self.content();
        assert!(g != 0, "zero vector has no primitive direction");
        LatticePoint::new(self.i / g, self.j / g)
    }

    /// Rotation by a quarter turn clockwise: `(i, j) -> (j, -i)`.
    pub fn rotate_cw(self) -> LatticePoint {
        LatticePoint::new(self.j, -self.i)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.i, self.j)
    }
}

impl Add for LatticePoint {
    type Output = LatticePoint;
    fn add(self, rhs: Self) -> Self {
        LatticePoint::new(self.i + rhs.i, self.j + rhs.j)
    }
}

impl Sub for LatticePoint {
    type Output = LatticePoint;
    fn sub(self, rhs: Self) -> Self {
        LatticePoint::new(self.i - rhs.i, self.j - rhs.j)
    }
}

impl Neg for LatticePoint {
    type Output = LatticePoint;
    fn neg(self) -> Self {
        LatticePoint::new(-self.i, -self.j)
    }
}

impl Mul<LatticePoint> for i64 {
    type Output = LatticePoint;
    fn mul(self, rhs: LatticePoint) -> LatticePoint {
        LatticePoint::new(self * rhs.i, self * rhs.j)
    }
}

/// Twice the signed area of the triangle `a b c` (positive when counterclockwise).
pub fn orientation(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> i64 {
    (b - a).cross(c - a)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeomError {
    #[error("segment endpoints coincide at {0}")]
    DegenerateSegment(LatticePoint),
    #[error("polygon is degenerate (zero area)")]
    DegeneratePolygon,
    #[error("polygon vertices are not in strictly convex position")]
    NotStrictlyConvex,
    #[error("map matrix has determinant {0}, expected +1 or -1")]
    NotUnimodular(i64),
}

/// A lattice segment with distinct endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeSegment {
    a: LatticePoint,
    b: LatticePoint,
}

impl LatticeSegment {
    pub fn new(a: LatticePoint, b: LatticePoint) -> Result<Self, GeomError> {
        if a == b {
            return Err(GeomError::DegenerateSegment(a));
        }
        Ok(Self { a, b })
    }

    pub fn endpoints(&self) -> (LatticePoint, LatticePoint) {
        (self.a, self.b)
    }

    /// Number of lattice points on the segment minus one.
    pub fn lattice_length(&self) -> i64 {
        (self.b - self.a).content()
    }

    /// Primitive direction from the first to the second endpoint.
    pub fn direction(&self) -> LatticePoint {
        (self.b - self.a).primitive()
    }

    /// True when `p` lies strictly between the endpoints.
    pub fn contains_in_relative_interior(&self, p: LatticePoint) -> bool {
        let d = self.b - self.a;
        let q = p - self.a;
        d.cross(q) == 0 && q.dot(d) > 0 && (p - self.b).dot(d) < 0
    }
}

/// Where a point sits relative to a polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Interior,
    Boundary,
    Exterior,
}

/// The lattice points of a polygon, each list sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePoints {
    pub all: Vec<LatticePoint>,
    pub interior: Vec<LatticePoint>,
    pub boundary: Vec<LatticePoint>,
}

/// A strictly convex lattice polygon with positive area.
///
/// Vertices are stored counterclockwise starting from the lexicographically
/// smallest one, so structural equality is equality of polygons.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePolygon {
    vertices: Vec<LatticePoint>,
}

impl LatticePolygon {
    /// Builds a polygon from a cyclic vertex list in either orientation.
    pub fn new(vertices: Vec<LatticePoint>) -> Result<Self, GeomError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeomError::DegeneratePolygon);
        }
        let twice_area: i64 = shoelace(&vertices);
        if twice_area == 0 {
            return Err(GeomError::DegeneratePolygon);
        }
        let mut vertices = vertices;
        if twice_area < 0 {
            vertices.reverse();
        }
        for k in 0..n {
            let turn = orientation(vertices[k], vertices[(k + 1) % n], vertices[(k + 2) % n]);
            if turn <= 0 {
                return Err(GeomError::NotStrictlyConvex);
            }
        }
        // Positive turns at every corner plus total turning of one revolution
        // rule out self-overlapping star shapes.
        let winding = winding_is_simple(&vertices);
        if !winding {
            return Err(GeomError::NotStrictlyConvex);
        }
        let start = (0..n).min_by_key(|&k| vertices[k]).expect("nonempty");
        vertices.rotate_left(start);
        Ok(Self { vertices })
    }

    /// Convex hull of an arbitrary point set; collinear boundary points are dropped.
    pub fn convex_hull(points: &[LatticePoint]) -> Result<Self, GeomError> {
        let hull = convex_hull_indices(points);
        if hull.len() < 3 {
            return Err(GeomError::DegeneratePolygon);
        }
        Self::new(hull.into_iter().map(|k| points[k]).collect())
    }

    /// The triangle `(0,0), (d,0), (0,d)`.
    pub fn standard_triangle(degree: i64) -> Self {
        Self::new(vec![
            LatticePoint::new(0, 0),
            LatticePoint::new(degree, 0),
            LatticePoint::new(0, degree),
        ])
        .expect("degree must be positive")
    }

    /// The rectangle `[0,a] × [0,b]`.
    pub fn rectangle(a: i64, b: i64) -> Self {
        Self::new(vec![
            LatticePoint::new(0, 0),
            LatticePoint::new(a, 0),
            LatticePoint::new(a, b),
            LatticePoint::new(0, b),
        ])
        .expect("side lengths must be positive")
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_triangle(&self) -> bool {
        self.vertices.len() == 3
    }

    /// A quadrangle whose opposite sides are parallel.
    pub fn is_parallelogram(&self) -> bool {
        let v = &self.vertices;
        v.len() == 4 && v[0] + v[2] == v[1] + v[3]
    }

    /// Even-gon whose opposite edges are pairwise parallel.
    pub fn has_parallel_opposite_edges(&self) -> bool {
        let n = self.vertices.len();
        if n % 2 != 0 {
            return false;
        }
        let edge = |k: usize| self.vertices[(k + 1) % n] - self.vertices[k];
        (0..n / 2).all(|k| edge(k).cross(edge(k + n / 2)) == 0)
    }

    /// Edges in counterclockwise order; edge `k` runs from vertex `k` to `k + 1`.
    pub fn edges(&self) -> Vec<LatticeSegment> {
        let n = self.vertices.len();
        (0..n)
            .map(|k| LatticeSegment {
                a: self.vertices[k],
                b: self.vertices[(k + 1) % n],
            })
            .collect()
    }

    /// Twice the Euclidean area.
    pub fn double_area(&self) -> i64 {
        shoelace(&self.vertices)
    }

    /// Total number of lattice points on the boundary.
    pub fn boundary_count(&self) -> i64 {
        self.edges().iter().map(LatticeSegment::lattice_length).sum()
    }

    /// Number of interior lattice points, via Pick's formula.
    pub fn interior_count(&self) -> i64 {
        (self.double_area() - self.boundary_count() + 2) / 2
    }

    pub fn locate(&self, p: LatticePoint) -> Location {
        let n = self.vertices.len();
        let mut on_boundary = false;
        for k in 0..n {
            let turn = orientation(self.vertices[k], self.vertices[(k + 1) % n], p);
            match turn.cmp(&0) {
                Ordering::Less => return Location::Exterior,
                Ordering::Equal => on_boundary = true,
                Ordering::Greater => {}
            }
        }
        if on_boundary {
            Location::Boundary
        } else {
            Location::Interior
        }
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        self.locate(p) != Location::Exterior
    }

    /// Inclusive bounding box `(min, max)`.
    pub fn bounding_box(&self) -> (LatticePoint, LatticePoint) {
        let min_i = self.vertices.iter().map(|v| v.i).min().expect("nonempty");
        let max_i = self.vertices.iter().map(|v| v.i).max().expect("nonempty");
        let min_j = self.vertices.iter().map(|v| v.j).min().expect("nonempty");
        let max_j = self.vertices.iter().map(|v| v.j).max().expect("nonempty");
        (LatticePoint::new(min_i, min_j), LatticePoint::new(max_i, max_j))
    }

    /// Enumerates lattice points by scanning the bounding box.
    pub fn lattice_points(&self) -> LatticePoints {
        let (lo, hi) = self.bounding_box();
        let mut all = Vec::new();
        let mut interior = Vec::new();
        let mut boundary = Vec::new();
        for i in lo.i..=hi.i {
            for j in lo.j..=hi.j {
                let p = LatticePoint::new(i, j);
                match self.locate(p) {
                    Location::Interior => {
                        all.push(p);
                        interior.push(p);
                    }
                    Location::Boundary => {
                        all.push(p);
                        boundary.push(p);
                    }
                    Location::Exterior => {}
                }
            }
        }
        LatticePoints {
            all,
            interior,
            boundary,
        }
    }

    pub fn translate(&self, t: LatticePoint) -> LatticePolygon {
        LatticePolygon {
            vertices: self.vertices.iter().map(|&v| v + t).collect(),
        }
    }

    /// Representative under lattice translations: the smallest vertex moves to the origin.
    pub fn canonical_form(&self) -> LatticePolygon {
        self.translate(-self.vertices[0])
    }

    /// Representative under the full affine unimodular group.
    ///
    /// Every choice of starting vertex and orientation, followed by the shear
    /// that fixes the outgoing edge, yields an image vertex list; the
    /// lexicographically smallest list wins.
    pub fn unimodular_normal_form(&self) -> Vec<LatticePoint> {
        let mirrored: Vec<LatticePoint> = {
            let mut m: Vec<LatticePoint> = self
                .vertices
                .iter()
                .map(|v| LatticePoint::new(v.i, -v.j))
                .collect();
            m.reverse();
            m
        };
        let mut best: Option<Vec<LatticePoint>> = None;
        for cycle in [&self.vertices, &mirrored] {
            let n = cycle.len();
            for start in 0..n {
                let candidate = normalize_from(cycle, start);
                if best.as_ref().is_none_or(|b| candidate < *b) {
                    best = Some(candidate);
                }
            }
        }
        best.expect("polygon has vertices")
    }

    /// True when the two polygons are related by an affine unimodular map.
    pub fn is_unimodularly_equivalent(&self, other: &LatticePolygon) -> bool {
        self.vertices.len() == other.vertices.len()
            && self.double_area() == other.double_area()
            && self.unimodular_normal_form() == other.unimodular_normal_form()
    }
}

/// Maps the counterclockwise cycle so that `cycle[start]` is the origin, the
/// next edge points along +x and the preceding vertex has x in `[0, height)`.
fn normalize_from(cycle: &[LatticePoint], start: usize) -> Vec<LatticePoint> {
    let n = cycle.len();
    let base = cycle[start];
    let edge = cycle[(start + 1) % n] - base;
    let g = edge.content();
    let (p, q) = (edge.i / g, edge.j / g);
    // Find s, t with p t - q s = 1.
    let ext = p.extended_gcd(&q);
    // ext.x * p + ext.y * q = gcd = ±1
    let sign = ext.gcd.signum();
    let t = ext.x * sign;
    let s = -ext.y * sign;
    let map = |v: LatticePoint| {
        let d = v - base;
        LatticePoint::new(t * d.i - s * d.j, -q * d.i + p * d.j)
    };
    let imaged: Vec<LatticePoint> = (0..n).map(|k| map(cycle[(start + k) % n])).collect();
    let prev = imaged[n - 1];
    let height = prev.j;
    debug_assert!(height > 0);
    let shift = Integer::div_floor(&prev.i, &height);
    imaged
        .into_iter()
        .map(|v| LatticePoint::new(v.i - shift * v.j, v.j))
        .collect()
}

fn shoelace(vertices: &[LatticePoint]) -> i64 {
    let n = vertices.len();
    (0..n)
        .map(|k| vertices[k].cross(vertices[(k + 1) % n]))
        .sum()
}

/// With all turns positive, the polygon is simple iff the edge directions
/// wind around exactly once.
fn winding_is_simple(vertices: &[LatticePoint]) -> bool {
    let n = vertices.len();
    let mut crossings = 0;
    for k in 0..n {
        let a = vertices[(k + 1) % n] - vertices[k];
        let b = vertices[(k + 2) % n] - vertices[(k + 1) % n];
        // Count passages of the direction through the positive x half-axis.
        let a_up = a.j > 0 || (a.j == 0 && a.i > 0);
        let b_up = b.j > 0 || (b.j == 0 && b.i > 0);
        if !a_up && b_up {
            crossings += 1;
        }
    }
    crossings == 1
}

/// Andrew's monotone chain; returns hull vertex indices counterclockwise,
/// without collinear points.
pub fn convex_hull_indices(points: &[LatticePoint]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by_key(|&k| points[k]);
    idx.dedup_by_key(|k| points[*k]);
    if idx.len() < 3 {
        return idx;
    }
    let mut hull: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for pass in 0..2 {
        let start_len = hull.len();
        let iter: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(idx.iter())
        } else {
            Box::new(idx.iter().rev())
        };
        for &k in iter {
            while hull.len() >= start_len + 2 {
                let a = points[hull[hull.len() - 2]];
                let b = points[hull[hull.len() - 1]];
                if orientation(a, b, points[k]) <= 0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(k);
        }
        hull.pop();
    }
    hull
}

/// An affine automorphism `p -> M p + t` of Z² with `det M = ±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct UnimodularMap {
    matrix: [[i64; 2]; 2],
    translation: LatticePoint,
}

impl UnimodularMap {
    pub fn new(matrix: [[i64; 2]; 2], translation: LatticePoint) -> Result<Self, GeomError> {
        let det = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
        if det.abs() != 1 {
            return Err(GeomError::NotUnimodular(det));
        }
        Ok(Self {
            matrix,
            translation,
        })
    }

    pub fn identity() -> Self {
        Self {
            matrix: [[1, 0], [0, 1]],
            translation: LatticePoint::ORIGIN,
        }
    }

    pub fn matrix(&self) -> [[i64; 2]; 2] {
        self.matrix
    }

    pub fn translation(&self) -> LatticePoint {
        self.translation
    }

    pub fn determinant(&self) -> i64 {
        self.matrix[0][0] * self.matrix[1][1] - self.matrix[0][1] * self.matrix[1][0]
    }

    /// The linear part applied to a vector.
    pub fn apply_linear(&self, v: LatticePoint) -> LatticePoint {
        let m = &self.matrix;
        LatticePoint::new(m[0][0] * v.i + m[0][1] * v.j, m[1][0] * v.i + m[1][1] * v.j)
    }

    pub fn apply_point(&self, p: LatticePoint) -> LatticePoint {
        self.apply_linear(p) + self.translation
    }

    pub fn apply_segment(&self, s: &LatticeSegment) -> LatticeSegment {
        LatticeSegment {
            a: self.apply_point(s.a),
            b: self.apply_point(s.b),
        }
    }

    pub fn apply(&self, polygon: &LatticePolygon) -> LatticePolygon {
        LatticePolygon::new(polygon.vertices.iter().map(|&v| self.apply_point(v)).collect())
            .expect("unimodular image of a polygon is a polygon")
    }

    /// The inverse linear part, as an integer matrix.
    pub fn inverse_matrix(&self) -> [[i64; 2]; 2] {
        let m = &self.matrix;
        let det = self.determinant();
        [[m[1][1] * det, -m[0][1] * det], [-m[1][0] * det, m[0][0] * det]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(i: i64, j: i64) -> LatticePoint {
        LatticePoint::new(i, j)
    }

    fn poly(pts: &[(i64, i64)]) -> LatticePolygon {
        LatticePolygon::new(pts.iter().map(|&(i, j)| p(i, j)).collect()).unwrap()
    }

    #[test]
    fn double_area_examples() {
        assert_eq!(poly(&[(0, 0), (1, 0), (0, 1)]).double_area(), 1);
        assert_eq!(poly(&[(0, 0), (2, 0), (0, 2)]).double_area(), 4);
        assert_eq!(poly(&[(1, 0), (3, 0), (0, 4)]).double_area(), 8);
    }

    #[test]
    fn lattice_length_examples() {
        let seg = |a: (i64, i64), b: (i64, i64)| LatticeSegment::new(p(a.0, a.1), p(b.0, b.1)).unwrap();
        assert_eq!(seg((0, 0), (3, 0)).lattice_length(), 3);
        assert_eq!(seg((0, 0), (2, 4)).lattice_length(), 2);
        assert_eq!(seg((1, 1), (2, 3)).lattice_length(), 1);
        assert!(LatticeSegment::new(p(1, 1), p(1, 1)).is_err());
    }

    #[test]
    fn lattice_point_counts() {
        let d3 = LatticePolygon::standard_triangle(3).lattice_points();
        assert_eq!((d3.all.len(), d3.interior.len(), d3.boundary.len()), (10, 1, 9));
        let d2 = LatticePolygon::standard_triangle(2).lattice_points();
        assert_eq!((d2.all.len(), d2.interior.len(), d2.boundary.len()), (6, 0, 6));
        // Parallelogram spanned by (1,0) and (1,2).
        let par = poly(&[(0, 0), (1, 0), (2, 2), (1, 2)]).lattice_points();
        assert_eq!(par.interior, vec![p(1, 1)]);
        assert_eq!((par.all.len(), par.boundary.len()), (5, 4));
    }

    #[test]
    fn orientation_is_normalized() {
        let cw = poly(&[(0, 0), (0, 1), (1, 0)]);
        let ccw = poly(&[(1, 0), (0, 1), (0, 0)]);
        assert_eq!(cw, ccw);
        assert_eq!(cw.vertices(), &[p(0, 0), p(1, 0), p(0, 1)]);
    }

    #[test]
    fn rejects_bad_polygons() {
        let segment = LatticePolygon::new(vec![p(0, 0), p(1, 1), p(2, 2)]);
        assert_eq!(segment, Err(GeomError::DegeneratePolygon));
        let collinear = LatticePolygon::new(vec![p(0, 0), p(1, 0), p(2, 0), p(0, 2)]);
        assert_eq!(collinear, Err(GeomError::NotStrictlyConvex));
        let reflex = LatticePolygon::new(vec![p(0, 0), p(4, 0), p(1, 1), p(0, 4)]);
        assert_eq!(reflex, Err(GeomError::NotStrictlyConvex));
    }

    #[test]
    fn hull_drops_interior_and_collinear_points() {
        let pts: Vec<_> = LatticePolygon::standard_triangle(3).lattice_points().all;
        let hull = LatticePolygon::convex_hull(&pts).unwrap();
        assert_eq!(hull, LatticePolygon::standard_triangle(3));
    }

    #[test]
    fn shear_of_unit_triangle() {
        let shear = UnimodularMap::new([[1, 1], [0, 1]], LatticePoint::ORIGIN).unwrap();
        let image = shear.apply(&LatticePolygon::standard_triangle(1));
        assert_eq!(image, poly(&[(0, 0), (1, 0), (1, 1)]));
        assert_eq!(image.double_area(), 1);
        assert!(UnimodularMap::new([[2, 0], [0, 1]], LatticePoint::ORIGIN).is_err());
    }

    #[test]
    fn canonical_form_examples() {
        let unit = LatticePolygon::standard_triangle(1);
        assert_eq!(unit.translate(p(5, 7)).canonical_form(), unit);
        let rotated = LatticePolygon::new(vec![p(0, 1), p(0, 0), p(1, 0)]).unwrap();
        assert_eq!(rotated.canonical_form(), unit.canonical_form());
        assert_ne!(
            LatticePolygon::standard_triangle(2).canonical_form(),
            unit.canonical_form()
        );
    }

    #[test]
    fn normal_form_identifies_equivalent_shapes() {
        let a = poly(&[(1, 0), (2, 0), (1, 2), (0, 1)]);
        let e = poly(&[(1, 0), (2, 0), (1, 2), (0, 2)]);
        let m = UnimodularMap::new([[2, 1], [1, 1]], p(3, -4)).unwrap();
        let r = UnimodularMap::new([[0, 1], [1, 0]], p(1, 1)).unwrap();
        assert!(a.is_unimodularly_equivalent(&m.apply(&a)));
        assert!(a.is_unimodularly_equivalent(&r.apply(&m.apply(&a))));
        assert!(!a.is_unimodularly_equivalent(&e));
    }
}
