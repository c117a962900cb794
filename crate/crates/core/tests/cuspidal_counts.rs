//! Counts of curves with one cusp, judged by the classical degree of the
//! cuspidal locus.

mod support;

use tropicount::cuspidal::{count_cuspidal, sample_cuspidal_points, CuspidalKind};
use tropicount::LatticePolygon;

fn cusps(degree: i64, seed: u64) -> i64 {
    let polygon = LatticePolygon::standard_triangle(degree);
    let points = sample_cuspidal_points(&polygon, seed).unwrap();
    let result = count_cuspidal(&polygon, &points).unwrap();
    let weights: u64 = result.records.iter().map(|r| r.weight).sum();
    assert_eq!(weights as i64, result.total);
    result.total
}

#[test]
fn cubics_through_seven_points() {
    for seed in 0..3 {
        assert_eq!(cusps(3, seed), support::cuspidal_degree(3), "seed {seed}");
    }
}

#[test]
fn quartics_through_twelve_points() {
    assert_eq!(cusps(4, 0), support::cuspidal_degree(4));
}

#[test]
fn records_carry_consistent_factors() {
    let polygon = LatticePolygon::standard_triangle(3);
    let result = count_cuspidal(&polygon, &sample_cuspidal_points(&polygon, 1).unwrap()).unwrap();
    for rec in &result.records {
        match rec.pattern.kind {
            CuspidalKind::QuadrangleA => assert_eq!(Some(rec.weight), rec.factor),
            CuspidalKind::QuadrangleDPlusArea1 => assert_eq!(Some(rec.weight), rec.factor.map(|w| 3 * w)),
            _ => assert!(rec.factor.is_none()),
        }
        for p in result.points.points() {
            assert!(rec.curve.contains(p));
        }
    }
}
