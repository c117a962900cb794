//! Plane tropical curves as weighted rational graphs dual to a lifted subdivision.

use num_traits::{Signed, Zero};

use crate::lattice_geom::LatticePoint;
use crate::rational::{int, Rational, RationalPoint};

use super::polynomial::TropicalPolynomial;
use super::subdivision::Subdivision;
use super::CurveError;

/// A bounded edge from the vertex dual to the left cell of `dual_edge` to the
/// vertex dual to its right cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedEdge {
    pub from: usize,
    pub to: usize,
    pub weight: i64,
    /// Primitive direction from `from` to `to`.
    pub direction: LatticePoint,
    pub dual_edge: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ray {
    pub vertex: usize,
    pub direction: LatticePoint,
    pub weight: i64,
    pub dual_edge: usize,
}

/// Which curve edge a subdivision edge corresponds to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveEdge {
    Bounded(usize),
    Ray(usize),
}

/// A tropical curve: vertex `k` is dual to cell `k` of the dual subdivision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalCurve {
    vertices: Vec<RationalPoint>,
    bounded_edges: Vec<BoundedEdge>,
    rays: Vec<Ray>,
    edge_map: Vec<CurveEdge>,
    dual: Subdivision,
}

impl TropicalCurve {
    /// Builds the curve dual to a lifted subdivision.
    pub fn from_subdivision(dual: Subdivision) -> Result<Self, CurveError> {
        let lift = dual.lift().ok_or(CurveError::MissingLift)?.to_vec();
        let pts = dual.vertices();
        let vertices: Vec<RationalPoint> = dual
            .cells()
            .iter()
            .map(|cell| {
                let (a, b, c) = (cell.vertices[0], cell.vertices[1], cell.vertices[2]);
                tie_point(
                    [pts[a], pts[b], pts[c]],
                    [&lift[a], &lift[b], &lift[c]],
                )
            })
            .collect();
        let mut bounded_edges = Vec::new();
        let mut rays = Vec::new();
        let mut edge_map = Vec::with_capacity(dual.edges().len());
        for (e, edge) in dual.edges().iter().enumerate() {
            let along = pts[edge.ends[1]] - pts[edge.ends[0]];
            let weight = edge.lattice_length();
            match (edge.left, edge.right) {
                (Some(l), Some(r)) => {
                    edge_map.push(CurveEdge::Bounded(bounded_edges.len()));
                    bounded_edges.push(BoundedEdge {
                        from: l,
                        to: r,
                        weight,
                        direction: along.rotate_cw().primitive(),
                        dual_edge: e,
                    });
                }
                (Some(c), None) | (None, Some(c)) => {
                    let outward = if edge.left.is_some() { along } else { -along };
                    edge_map.push(CurveEdge::Ray(rays.len()));
                    rays.push(Ray {
                        vertex: c,
                        direction: outward.rotate_cw().primitive(),
                        weight,
                        dual_edge: e,
                    });
                }
                (None, None) => unreachable!("edges always have a cell"),
            }
        }
        Ok(Self {
            vertices,
            bounded_edges,
            rays,
            edge_map,
            dual,
        })
    }

    pub fn vertices(&self) -> &[RationalPoint] {
        &self.vertices
    }

    pub fn bounded_edges(&self) -> &[BoundedEdge] {
        &self.bounded_edges
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn dual(&self) -> &Subdivision {
        &self.dual
    }

    /// The curve edge dual to subdivision edge `e`.
    pub fn curve_edge(&self, e: usize) -> CurveEdge {
        self.edge_map[e]
    }

    /// The tropical polynomial supported on the dual vertices with
    /// valuations `-lift`.
    pub fn polynomial(&self) -> TropicalPolynomial {
        let lift = self.dual.lift().expect("curve subdivisions carry a lift");
        TropicalPolynomial::plane(
            self.dual
                .vertices()
                .iter()
                .zip(lift)
                .map(|(&p, v)| (p, -v.clone())),
        )
        .expect("distinct vertices")
    }

    /// Weighted sum of outgoing primitive directions at vertex `v`.
    pub fn balancing_sum(&self, v: usize) -> LatticePoint {
        let mut sum = LatticePoint::ORIGIN;
        for e in &self.bounded_edges {
            if e.from == v {
                sum = sum + e.weight * e.direction;
            }
            if e.to == v {
                sum = sum - e.weight * e.direction;
            }
        }
        for r in &self.rays {
            if r.vertex == v {
                sum = sum + r.weight * r.direction;
            }
        }
        sum
    }

    /// True when `x` lies on the curve (vertices included).
    pub fn contains(&self, x: &RationalPoint) -> bool {
        if self.vertices.iter().any(|v| v == x) {
            return true;
        }
        let offset = |from: &RationalPoint| (&x.x - &from.x, &x.y - &from.y);
        let along = |d: (Rational, Rational), dir: LatticePoint| {
            let cross = &d.0 * int(dir.j) - &d.1 * int(dir.i);
            let dot = &d.0 * int(dir.i) + &d.1 * int(dir.j);
            (cross, dot)
        };
        for e in &self.bounded_edges {
            let (cross, dot_from) = along(offset(&self.vertices[e.from]), e.direction);
            if !cross.is_zero() || !dot_from.is_positive() {
                continue;
            }
            let (_, dot_to) = along(offset(&self.vertices[e.to]), e.direction);
            if dot_to.is_negative() {
                return true;
            }
        }
        self.rays.iter().any(|r| {
            let (cross, dot) = along(offset(&self.vertices[r.vertex]), r.direction);
            cross.is_zero() && dot.is_positive()
        })
    }

    /// Exact point on a bounded edge or ray, a fraction `t` of the way along
    /// (a unit step along the ray direction scaled by `t` for rays).
    pub fn point_on(&self, edge: CurveEdge, t: &Rational) -> RationalPoint {
        match edge {
            CurveEdge::Bounded(k) => {
                let e = &self.bounded_edges[k];
                let (a, b) = (&self.vertices[e.from], &self.vertices[e.to]);
                RationalPoint::new(&a.x + (&b.x - &a.x) * t, &a.y + (&b.y - &a.y) * t)
            }
            CurveEdge::Ray(k) => {
                let r = &self.rays[k];
                let a = &self.vertices[r.vertex];
                RationalPoint::new(&a.x + int(r.direction.i) * t, &a.y + int(r.direction.j) * t)
            }
        }
    }
}

/// The point where the three affine forms `-ν(ω) + ω·y` of a cell agree.
fn tie_point(pts: [LatticePoint; 3], lift: [&Rational; 3]) -> RationalPoint {
    let (u, v) = (pts[1] - pts[0], pts[2] - pts[0]);
    let r1 = lift[1] - lift[0];
    let r2 = lift[2] - lift[0];
    let det = int(u.cross(v));
    let x = (&r1 * int(v.j) - &r2 * int(u.j)) / &det;
    let y = (&r2 * int(u.i) - &r1 * int(v.i)) / &det;
    RationalPoint::new(x, y)
}
