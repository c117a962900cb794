//! Classification and weights of cuspidal patterns on hand-built subdivisions.

use tropicount::cuspidal::{classify_cuspidal, cuspidal_weight, quadrangle_factor, CuspidalError, CuspidalKind};
use tropicount::{LatticePoint, LatticePolygon, Subdivision};

fn poly(pts: &[(i64, i64)]) -> LatticePolygon {
    LatticePolygon::new(pts.iter().map(|&(i, j)| LatticePoint::new(i, j)).collect()).unwrap()
}

fn tiling(cells: &[&[(i64, i64)]]) -> Subdivision {
    let cells: Vec<LatticePolygon> = cells.iter().map(|c| poly(c)).collect();
    let corners: Vec<LatticePoint> = cells.iter().flat_map(|c| c.vertices().to_vec()).collect();
    Subdivision::from_cells(LatticePolygon::convex_hull(&corners).unwrap(), cells).unwrap()
}

fn edge(s: &Subdivision, a: (i64, i64), b: (i64, i64)) -> usize {
    let index = |p: (i64, i64)| s.vertex_index(LatticePoint::new(p.0, p.1)).unwrap();
    s.edge_between(index(a), index(b)).unwrap()
}

#[test]
fn single_triangle_b() {
    let s = tiling(&[&[(0, 0), (2, 3), (3, 2)]]);
    let pattern = classify_cuspidal(&s).unwrap();
    assert_eq!(pattern.kind, CuspidalKind::TriangleB);
    assert_eq!(cuspidal_weight(&s, &pattern, &[]).unwrap(), 5);
}

#[test]
fn triangle_c_with_partner() {
    let s = tiling(&[&[(0, 0), (2, 0), (1, 2)], &[(0, 0), (1, -1), (2, 0)]]);
    let pattern = classify_cuspidal(&s).unwrap();
    assert_eq!(pattern.kind, CuspidalKind::TriangleCPlusArea1);
    assert_eq!(cuspidal_weight(&s, &pattern, &[]).unwrap(), 6);
}

#[test]
fn two_triangles_along_a_long_edge() {
    let s = tiling(&[&[(0, 0), (3, 0), (1, 1)], &[(0, 0), (2, -1), (3, 0)]]);
    let pattern = classify_cuspidal(&s).unwrap();
    assert_eq!(pattern.kind, CuspidalKind::TwoTrianglesLength3);
    assert_eq!(cuspidal_weight(&s, &pattern, &[]).unwrap(), 6);
    // The same pair glued along a shorter edge is not cuspidal.
    let s = tiling(&[&[(0, 0), (3, 0), (1, 1)], &[(0, 0), (1, 1), (-2, 1)]]);
    assert!(classify_cuspidal(&s).is_none());
}

#[test]
fn quadrangle_a_factor_depends_on_marked_components() {
    let s = tiling(&[&[(1, 0), (2, 0), (1, 2), (0, 1)]]);
    let pattern = classify_cuspidal(&s).unwrap();
    assert_eq!(pattern.kind, CuspidalKind::QuadrangleA);
    let cases = [
        // Two opposite sides: both components span the whole lattice.
        (vec![edge(&s, (1, 0), (2, 0)), edge(&s, (1, 2), (0, 1))], 1),
        // Three corners joined, the fourth alone: index of the sublattice.
        (vec![edge(&s, (1, 0), (2, 0)), edge(&s, (2, 0), (1, 2))], 2),
        (vec![edge(&s, (2, 0), (1, 2)), edge(&s, (1, 2), (0, 1))], 3),
    ];
    for (assignment, w) in cases {
        assert_eq!(cuspidal_weight(&s, &pattern, &assignment).unwrap(), w, "{assignment:?}");
    }
    // One marked edge leaves three components.
    let one = [edge(&s, (1, 0), (2, 0))];
    assert_eq!(quadrangle_factor(&s, 0, &one, false), Err(CuspidalError::ComponentCount(3)));
}

#[test]
fn quadrangle_d_rejects_split_parallel_sides() {
    let s = tiling(&[&[(0, 0), (2, 0), (1, 1), (0, 1)], &[(0, 0), (1, -1), (2, 0)]]);
    let pattern = classify_cuspidal(&s).unwrap();
    assert_eq!(pattern.kind, CuspidalKind::QuadrangleDPlusArea1);
    let apex = edge(&s, (0, 0), (1, -1));
    let split = [edge(&s, (0, 0), (2, 0)), edge(&s, (1, 1), (0, 1)), apex];
    assert_eq!(cuspidal_weight(&s, &pattern, &split), Err(CuspidalError::ParallelSidesSplit));
    let corner = [edge(&s, (0, 0), (2, 0)), edge(&s, (2, 0), (1, 1)), apex];
    let w = cuspidal_weight(&s, &pattern, &corner).unwrap();
    assert_eq!(w % 3, 0);
}

#[test]
fn ordinary_subdivisions_are_not_cuspidal() {
    let s = tiling(&[&[(0, 0), (1, 0), (0, 1)], &[(1, 0), (1, 1), (0, 1)]]);
    assert!(classify_cuspidal(&s).is_none());
    // The excluded parallelogram E looks like A but has parallel sides.
    let s = tiling(&[&[(1, 0), (2, 0), (1, 2), (0, 2)]]);
    assert!(classify_cuspidal(&s).is_none());
}
