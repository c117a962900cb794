//! Counts depend on the polygon only up to affine lattice automorphisms.

use tropicount::cuspidal::{count_cuspidal, sample_cuspidal_points};
use tropicount::enumeration::{count_nodal, count_welschinger, sample_points};
use tropicount::{LatticePoint, LatticePolygon, UnimodularMap};

fn maps() -> Vec<UnimodularMap> {
    [
        ([[1, 1], [0, 1]], (0, 0)),
        ([[0, 1], [1, 0]], (3, -2)),
        ([[2, 1], [1, 1]], (-1, 4)),
        ([[1, 0], [-3, 1]], (5, 5)),
    ]
    .into_iter()
    .map(|(m, (i, j))| UnimodularMap::new(m, LatticePoint::new(i, j)).unwrap())
    .collect()
}

fn nodal(polygon: &LatticePolygon, nodes: usize, seed: u64) -> i64 {
    count_nodal(polygon, nodes, &sample_points(polygon, nodes, seed).unwrap()).unwrap().total
}

#[test]
fn severi_degrees_are_invariant() {
    for degree in 2..=3 {
        let triangle = LatticePolygon::standard_triangle(degree);
        for nodes in 1..=2 {
            let reference = nodal(&triangle, nodes, 0);
            for (k, map) in maps().iter().enumerate() {
                assert_eq!(nodal(&map.apply(&triangle), nodes, k as u64), reference, "degree {degree}, map {k}");
            }
        }
    }
}

#[test]
fn signed_and_cuspidal_counts_are_invariant() {
    let cubic = LatticePolygon::standard_triangle(3);
    for (k, map) in maps().iter().enumerate() {
        let image = map.apply(&cubic);
        let nodes = image.lattice_points().interior.len();
        let w = count_welschinger(&image, &sample_points(&image, nodes, k as u64).unwrap()).unwrap();
        assert_eq!(w.total, 8, "map {k}");
        let c = count_cuspidal(&image, &sample_cuspidal_points(&image, k as u64).unwrap()).unwrap();
        assert_eq!(c.total, 24, "map {k}");
    }
}

#[test]
fn rectangle_counts() {
    // A nodal curve of bidegree (1, 1) is a horizontal ruling through one of
    // the two points together with a vertical ruling through the other.
    let square = LatticePolygon::rectangle(1, 1);
    assert_eq!(nodal(&square, 1, 0), 2);
}
