//! Exhaustive enumeration of regular nodal subdivisions of a lattice polygon.

use std::collections::{BTreeSet, HashSet};

use crate::lattice_geom::{orientation, LatticePoint, LatticePolygon};
use crate::linalg::homogeneous_strict_feasibility;
use crate::rational::{int, Rational};
use crate::tropical_curve::Subdivision;

/// Every regular subdivision of `polygon` into lattice triangles and lattice
/// parallelograms that uses all boundary lattice points as vertices and has
/// the given rank. The result is sorted by cell list and free of duplicates.
pub fn enumerate_nodal_subdivisions(polygon: &LatticePolygon, target_rank: i64) -> Vec<Subdivision> {
    let points = polygon.lattice_points();
    let interior = &points.interior;
    let mut out: BTreeSet<Vec<LatticePolygon>> = BTreeSet::new();
    for mask in 0u64..(1u64 << interior.len()) {
        let mut vertex_set: Vec<LatticePoint> = points.boundary.clone();
        vertex_set.extend(
            interior
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &p)| p),
        );
        vertex_set.sort();
        // rank = |V| - 1 - #parallelograms for nodal subdivisions.
        let parallelograms = vertex_set.len() as i64 - 1 - target_rank;
        if parallelograms < 0 {
            continue;
        }
        let mut tiler = Tiler::new(polygon, &vertex_set, parallelograms as usize);
        tiler.run();
        for cells in tiler.found {
            out.insert(cells);
        }
    }
    out.into_iter()
        .filter_map(|cells| {
            let s = Subdivision::from_cells(polygon.clone(), cells).expect("tiler emits valid tilings");
            regular_lift(&s).map(|_| s)
        })
        .collect()
}

/// A lift certifying that `s` is regular, or `None` if it is not.
///
/// The lift is affine on every cell and strictly convex across every interior edge.
pub fn regular_lift(s: &Subdivision) -> Option<Vec<Rational>> {
    let n = s.vertices().len();
    let row_of = |coeffs: Vec<(usize, i64)>| {
        let mut row = vec![Rational::from_integer(0.into()); n];
        for (v, c) in coeffs {
            row[v] += int(c);
        }
        row
    };
    let equalities: Vec<Vec<Rational>> = s
        .cells()
        .iter()
        .flat_map(|c| s.cell_relations(c))
        .map(|(rel, _)| row_of(rel))
        .collect();
    let inequalities: Vec<Vec<Rational>> = s
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| !e.is_boundary())
        .map(|(k, _)| row_of(s.fold_coefficients(k)))
        .collect();
    // Lifts are defined up to adding a constant, so non-negativity is free.
    homogeneous_strict_feasibility(&equalities, &inequalities, n)
}

struct Tiler<'a> {
    vertices: &'a [LatticePoint],
    vertex_set: HashSet<LatticePoint>,
    parallelograms: usize,
    open: BTreeSet<(LatticePoint, LatticePoint)>,
    placed: Vec<LatticePolygon>,
    used_parallelograms: usize,
    found: Vec<Vec<LatticePolygon>>,
}

impl<'a> Tiler<'a> {
    fn new(polygon: &LatticePolygon, vertices: &'a [LatticePoint], parallelograms: usize) -> Self {
        let mut open = BTreeSet::new();
        for edge in polygon.edges() {
            let (a, _) = edge.endpoints();
            let len = edge.lattice_length();
            let step = edge.direction();
            for t in 0..len {
                open.insert((a + t * step, a + (t + 1) * step));
            }
        }
        Tiler {
            vertices,
            vertex_set: vertices.iter().copied().collect(),
            parallelograms,
            open,
            placed: Vec::new(),
            used_parallelograms: 0,
            found: Vec::new(),
        }
    }

    fn run(&mut self) {
        let Some(&(a, b)) = self.open.iter().next() else {
            if self.used_parallelograms == self.parallelograms {
                let mut cells = self.placed.clone();
                cells.sort();
                self.found.push(cells);
            }
            return;
        };
        for &c in self.vertices {
            if orientation(a, b, c) <= 0 {
                continue;
            }
            self.try_cell(vec![a, b, c], false);
            if self.used_parallelograms < self.parallelograms {
                let d = a + c - b;
                if self.vertex_set.contains(&d) {
                    self.try_cell(vec![a, b, c, d], true);
                }
            }
        }
    }

    fn try_cell(&mut self, corners: Vec<LatticePoint>, parallelogram: bool) {
        let Ok(cell) = LatticePolygon::new(corners.clone()) else {
            return;
        };
        if cell.len() != corners.len() {
            return;
        }
        let stray = self
            .vertices
            .iter()
            .any(|&p| !corners.contains(&p) && cell.contains(p));
        if stray || self.placed.iter().any(|q| interiors_overlap(q, &cell)) {
            return;
        }
        // Boundary update: consume matching open edges, open the others reversed.
        let n = corners.len();
        let mut consumed = Vec::new();
        let mut opened = Vec::new();
        for k in 0..n {
            let (u, v) = (corners[k], corners[(k + 1) % n]);
            if self.open.contains(&(u, v)) {
                consumed.push((u, v));
            } else if self.open.contains(&(v, u)) {
                // The unfilled side is already on the other side: overlap.
                return;
            } else {
                opened.push((v, u));
            }
        }
        for e in &consumed {
            self.open.remove(e);
        }
        for e in &opened {
            self.open.insert(*e);
        }
        self.placed.push(cell);
        if parallelogram {
            self.used_parallelograms += 1;
        }
        self.run();
        if parallelogram {
            self.used_parallelograms -= 1;
        }
        self.placed.pop();
        for e in &opened {
            self.open.remove(e);
        }
        for e in consumed {
            self.open.insert(e);
        }
    }
}

/// Separating-axis test for two convex polygons: true when their interiors meet.
fn interiors_overlap(p: &LatticePolygon, q: &LatticePolygon) -> bool {
    let separated_by_edges_of = |a: &LatticePolygon, b: &LatticePolygon| {
        let av = a.vertices();
        (0..av.len()).any(|k| {
            let normal = (av[(k + 1) % av.len()] - av[k]).rotate_cw();
            let bound = normal.dot(av[k]);
            // `a` lies on the side where normal·x <= bound.
            b.vertices().iter().all(|&v| normal.dot(v) >= bound)
        })
    };
    !(separated_by_edges_of(p, q) || separated_by_edges_of(q, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(pts: &[(i64, i64)]) -> LatticePolygon {
        LatticePolygon::new(pts.iter().map(|&(i, j)| LatticePoint::new(i, j)).collect()).unwrap()
    }

    #[test]
    fn overlap_detection() {
        let a = poly(&[(0, 0), (2, 0), (0, 2)]);
        let b = poly(&[(2, 0), (2, 2), (0, 2)]);
        let c = poly(&[(1, 0), (3, 0), (1, 2)]);
        assert!(!interiors_overlap(&a, &b));
        assert!(interiors_overlap(&a, &c));
        assert!(interiors_overlap(&a, &a));
    }

    #[test]
    fn line_has_one_subdivision() {
        let all = enumerate_nodal_subdivisions(&LatticePolygon::standard_triangle(1), 2);
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].cells().len(), 1);
    }

    #[test]
    fn conic_corner_parallelograms() {
        let all = enumerate_nodal_subdivisions(&LatticePolygon::standard_triangle(2), 4);
        assert_eq!(all.len(), 3);
        assert!(all.iter().all(|s| s.cells().iter().filter(|c| c.polygon.is_parallelogram()).count() == 1));
    }

    #[test]
    fn regular_lift_certifies() {
        for s in enumerate_nodal_subdivisions(&LatticePolygon::standard_triangle(2), 5) {
            let lift = regular_lift(&s).unwrap();
            assert!(s.check_lift(&lift).is_ok());
        }
    }
}
