//! Polyhedral subdivisions of a lattice polygon and their lifts.

use std::collections::{BTreeMap, HashMap};

use num_traits::{Signed, Zero};

use crate::lattice_geom::{orientation, LatticePoint, LatticePolygon, LatticeSegment};
use crate::linalg;
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SubdivisionError {
    #[error("cell vertex {0} lies outside the polygon")]
    VertexOutside(LatticePoint),
    #[error("cell areas sum to {found}, polygon has double area {expected}")]
    AreaMismatch { expected: i64, found: i64 },
    #[error("edge {0:?} is covered twice from the same side")]
    Overlap(LatticeSegment),
    #[error("edge {0:?} has a single incident cell but is not on the polygon boundary")]
    DanglingEdge(LatticeSegment),
    #[error("vertex {vertex} lies inside edge {edge:?}")]
    NotFaceToFace { vertex: LatticePoint, edge: LatticeSegment },
    #[error("polygon vertex {0} is not a vertex of the subdivision")]
    MissingCorner(LatticePoint),
    #[error("lift has {found} values for {expected} vertices")]
    LiftLength { expected: usize, found: usize },
    #[error("lift is not affine on the cell with vertices {0:?}")]
    LiftNotAffine(Vec<LatticePoint>),
    #[error("lift does not bend across the edge {0:?}")]
    LiftNotConvex(LatticeSegment),
}

/// A 2-cell with its vertex and edge indices, both in counterclockwise order
/// (edge `k` joins vertex `k` to vertex `k + 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub polygon: LatticePolygon,
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

/// An edge, stored with `ends[0] < ends[1]` as vertex indices; `left` is the
/// cell seeing the edge counterclockwise when run from `ends[0]` to `ends[1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub segment: LatticeSegment,
    pub ends: [usize; 2],
    pub left: Option<usize>,
    pub right: Option<usize>,
}

impl Edge {
    pub fn is_boundary(&self) -> bool {
        self.left.is_none() || self.right.is_none()
    }

    pub fn lattice_length(&self) -> i64 {
        self.segment.lattice_length()
    }

    /// The unique incident cell of a boundary edge, or the left cell otherwise.
    pub fn any_cell(&self) -> usize {
        self.left.or(self.right).expect("edge has at least one cell")
    }
}

/// A subdivision of a polygon into lattice cells, optionally carrying a lift
/// (one rational height per vertex, meaningful up to an additive constant).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subdivision {
    polygon: LatticePolygon,
    vertices: Vec<LatticePoint>,
    cells: Vec<Cell>,
    edges: Vec<Edge>,
    lift: Option<Vec<Rational>>,
}

/// Value of `rank_expected` together with the bound on the rank defect.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpectedRank {
    pub value: i64,
    /// Upper bound on `rank - value`; zero when every cell is a triangle or a parallelogram.
    pub max_defect: i64,
}

impl Subdivision {
    /// Assembles and validates a subdivision from its cells.
    ///
    /// Cells are sorted, so two subdivisions with the same cells compare equal.
    pub fn from_cells(polygon: LatticePolygon, cells: Vec<LatticePolygon>) -> Result<Self, SubdivisionError> {
        let mut cells = cells;
        cells.sort();
        let mut area = 0;
        let mut vertex_set = std::collections::BTreeSet::new();
        for cell in &cells {
            area += cell.double_area();
            for &v in cell.vertices() {
                if !polygon.contains(v) {
                    return Err(SubdivisionError::VertexOutside(v));
                }
                vertex_set.insert(v);
            }
        }
        if area != polygon.double_area() {
            return Err(SubdivisionError::AreaMismatch {
                expected: polygon.double_area(),
                found: area,
            });
        }
        let vertices: Vec<LatticePoint> = vertex_set.into_iter().collect();
        for &corner in polygon.vertices() {
            if vertices.binary_search(&corner).is_err() {
                return Err(SubdivisionError::MissingCorner(corner));
            }
        }
        let index = |p: LatticePoint| vertices.binary_search(&p).expect("vertex registered");
        let mut edge_ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edges: Vec<Edge> = Vec::new();
        let mut cell_records = Vec::with_capacity(cells.len());
        for (c, cell) in cells.iter().enumerate() {
            let vids: Vec<usize> = cell.vertices().iter().map(|&v| index(v)).collect();
            let n = vids.len();
            let mut eids = Vec::with_capacity(n);
            for k in 0..n {
                let (a, b) = (vids[k], vids[(k + 1) % n]);
                let key = (a.min(b), a.max(b));
                let id = *edge_ids.entry(key).or_insert_with(|| {
                    edges.push(Edge {
                        segment: LatticeSegment::new(vertices[key.0], vertices[key.1])
                            .expect("distinct vertices"),
                        ends: [key.0, key.1],
                        left: None,
                        right: None,
                    });
                    edges.len() - 1
                });
                let edge = &mut edges[id];
                let slot = if a < b { &mut edge.left } else { &mut edge.right };
                if slot.is_some() {
                    return Err(SubdivisionError::Overlap(edge.segment));
                }
                *slot = Some(c);
                eids.push(id);
            }
            cell_records.push(Cell {
                polygon: cell.clone(),
                vertices: vids,
                edges: eids,
            });
        }
        for edge in &edges {
            if edge.is_boundary() {
                let (a, b) = edge.segment.endpoints();
                let on_boundary = polygon
                    .edges()
                    .iter()
                    .any(|side| {
                        let (s, t) = side.endpoints();
                        orientation(s, t, a) == 0 && orientation(s, t, b) == 0
                    });
                if !on_boundary {
                    return Err(SubdivisionError::DanglingEdge(edge.segment));
                }
            }
        }
        for edge in &edges {
            for &v in &vertices {
                if edge.segment.contains_in_relative_interior(v) {
                    return Err(SubdivisionError::NotFaceToFace {
                        vertex: v,
                        edge: edge.segment,
                    });
                }
            }
        }
        Ok(Self {
            polygon,
            vertices,
            cells: cell_records,
            edges,
            lift: None,
        })
    }

    /// Attaches a lift and checks that it is affine on cells and bends across
    /// every interior edge, i.e. that it induces exactly this subdivision.
    pub fn with_lift(mut self, lift: Vec<Rational>) -> Result<Self, SubdivisionError> {
        if lift.len() != self.vertices.len() {
            return Err(SubdivisionError::LiftLength {
                expected: self.vertices.len(),
                found: lift.len(),
            });
        }
        self.check_lift(&lift)?;
        self.lift = Some(normalize_lift(lift));
        Ok(self)
    }

    /// Drops the lift, keeping only the combinatorial skeleton.
    pub fn skeleton(&self) -> Subdivision {
        Subdivision {
            lift: None,
            ..self.clone()
        }
    }

    /// Checks the regularity conditions for `lift` without attaching it.
    pub fn check_lift(&self, lift: &[Rational]) -> Result<(), SubdivisionError> {
        for cell in &self.cells {
            for (rel, _) in self.cell_relations(cell) {
                let value: Rational = rel.iter().map(|(v, c)| &lift[*v] * int(*c)).sum();
                if !value.is_zero() {
                    let pts = cell.vertices.iter().map(|&v| self.vertices[v]).collect();
                    return Err(SubdivisionError::LiftNotAffine(pts));
                }
            }
        }
        for (e, edge) in self.edges.iter().enumerate() {
            if edge.is_boundary() {
                continue;
            }
            if !self.fold(e, lift).is_positive() {
                return Err(SubdivisionError::LiftNotConvex(edge.segment));
            }
        }
        Ok(())
    }

    /// Amount by which the lift of the right cell rises above the affine
    /// extension of the left cell across interior edge `e`, scaled by a
    /// positive integer. Positive exactly when the lift is convex there.
    pub fn fold(&self, e: usize, lift: &[Rational]) -> Rational {
        self.fold_coefficients(e)
            .iter()
            .map(|(v, c)| &lift[*v] * int(*c))
            .sum()
    }

    /// Integer linear form in the lift whose sign is the fold across `e`.
    pub fn fold_coefficients(&self, e: usize) -> Vec<(usize, i64)> {
        let edge = &self.edges[e];
        let (left, right) = (edge.left.expect("interior"), edge.right.expect("interior"));
        let [a, b] = edge.ends;
        let (pa, pb) = (self.vertices[a], self.vertices[b]);
        let off_line = |cell: usize| {
            self.cells[cell]
                .vertices
                .iter()
                .copied()
                .find(|&v| orientation(pa, pb, self.vertices[v]) != 0)
                .expect("cell is two-dimensional")
        };
        let u = off_line(left);
        let w = off_line(right);
        // Write w = alpha a + beta b + gamma u with denominator D = orient(a, b, u) > 0.
        let (pu, pw) = (self.vertices[u], self.vertices[w]);
        let d = orientation(pa, pb, pu);
        let alpha = orientation(pw, pb, pu);
        let beta = orientation(pa, pw, pu);
        let gamma = orientation(pa, pb, pw);
        // d > 0 (left side) and gamma < 0 (right side); fold = d ν(w) - (alpha ν(a) + beta ν(b) + gamma ν(u)).
        debug_assert!(d > 0 && gamma < 0);
        let mut coeffs = BTreeMap::new();
        *coeffs.entry(w).or_insert(0) += d;
        *coeffs.entry(a).or_insert(0) -= alpha;
        *coeffs.entry(b).or_insert(0) -= beta;
        *coeffs.entry(u).or_insert(0) -= gamma;
        coeffs.into_iter().filter(|(_, c)| *c != 0).collect()
    }

    /// Affine dependencies among the vertices of a cell: one integer relation
    /// per vertex beyond a base triangle, with the relation's non-base vertex.
    pub fn cell_relations(&self, cell: &Cell) -> Vec<(Vec<(usize, i64)>, usize)> {
        let pts: Vec<LatticePoint> = cell.vertices.iter().map(|&v| self.vertices[v]).collect();
        let n = pts.len();
        if n == 3 {
            return Vec::new();
        }
        // First three vertices of a strictly convex polygon are never collinear.
        let (a, b, c) = (pts[0], pts[1], pts[2]);
        let d = orientation(a, b, c);
        (3..n)
            .map(|k| {
                let w = pts[k];
                let alpha = orientation(w, b, c);
                let beta = orientation(a, w, c);
                let gamma = orientation(a, b, w);
                let mut rel = BTreeMap::new();
                *rel.entry(cell.vertices[k]).or_insert(0) += d;
                *rel.entry(cell.vertices[0]).or_insert(0) -= alpha;
                *rel.entry(cell.vertices[1]).or_insert(0) -= beta;
                *rel.entry(cell.vertices[2]).or_insert(0) -= gamma;
                (rel.into_iter().filter(|(_, c)| *c != 0).collect(), cell.vertices[k])
            })
            .collect()
    }

    pub fn polygon(&self) -> &LatticePolygon {
        &self.polygon
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn lift(&self) -> Option<&[Rational]> {
        self.lift.as_deref()
    }

    pub fn vertex_index(&self, p: LatticePoint) -> Option<usize> {
        self.vertices.binary_search(&p).ok()
    }

    /// Index of the edge joining two vertex indices, if any.
    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        let key = [a.min(b), a.max(b)];
        self.edges.iter().position(|e| e.ends == key)
    }

    pub fn cell_polygons(&self) -> Vec<LatticePolygon> {
        self.cells.iter().map(|c| c.polygon.clone()).collect()
    }

    /// All cells are triangles or parallelograms and every boundary lattice
    /// point of the polygon is a vertex.
    pub fn is_nodal(&self) -> bool {
        self.cells
            .iter()
            .all(|c| c.polygon.is_triangle() || c.polygon.is_parallelogram())
            && self.has_all_boundary_points()
    }

    pub fn has_all_boundary_points(&self) -> bool {
        self.polygon
            .lattice_points()
            .boundary
            .iter()
            .all(|p| self.vertex_index(*p).is_some())
    }

    /// Dimension of the space of vertex lifts that are affine on every cell,
    /// minus one for the global additive constant.
    pub fn rank(&self) -> i64 {
        let relations: Vec<Vec<Rational>> = self
            .cells
            .iter()
            .flat_map(|cell| self.cell_relations(cell))
            .map(|(rel, _)| {
                let mut row = vec![Rational::zero(); self.vertices.len()];
                for (v, c) in rel {
                    row[v] = int(c);
                }
                row
            })
            .collect();
        self.vertices.len() as i64 - linalg::rank(&relations) as i64 - 1
    }

    /// `|V| - 1 - Σ(|V(cell)| - 3)` and the defect bound for this subdivision.
    pub fn rank_expected(&self) -> ExpectedRank {
        let value = self.vertices.len() as i64
            - 1
            - self
                .cells
                .iter()
                .map(|c| c.vertices.len() as i64 - 3)
                .sum::<i64>();
        let simple = self
            .cells
            .iter()
            .all(|c| c.polygon.is_triangle() || c.polygon.is_parallelogram());
        let max_defect = if simple {
            0
        } else {
            let mut twice = -1;
            for cell in &self.cells {
                let n = cell.vertices.len() as i64;
                if n < 4 {
                    continue;
                }
                if n % 2 == 0 {
                    let m = n / 2;
                    twice += 2 * m - 3;
                    if cell.polygon.has_parallel_opposite_edges() {
                        twice -= 1;
                    }
                } else {
                    let m = (n - 1) / 2;
                    twice += 2 * m - 2;
                }
            }
            (twice.max(0)) / 2
        };
        ExpectedRank { value, max_defect }
    }
}

/// Shifts a lift so that its value at the first vertex is zero.
pub fn normalize_lift(mut lift: Vec<Rational>) -> Vec<Rational> {
    if let Some(base) = lift.first().cloned() {
        for v in lift.iter_mut() {
            *v -= &base;
        }
    }
    lift
}
