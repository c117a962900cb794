//! Deterministic point configurations on a steep line with fast-growing gaps.

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lattice_geom::LatticePolygon;
use crate::rational::RationalPoint;

/// `count` distinct integer points `base + s_k · (q, p)` with `s_k` growing
/// geometrically. Both slope components exceed the polygon's width so that no
/// edge of any subdivision is orthogonal to the line.
pub fn sample_line_points(polygon: &LatticePolygon, count: usize, seed: u64) -> Vec<RationalPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = polygon.bounding_box();
    let width = (hi.i - lo.i).max(hi.j - lo.j);
    let (q, p) = loop {
        let q: i64 = rng.random_range(width + 1..=width + 6);
        let p: i64 = rng.random_range(width + 1..=width + 6);
        if q != p && q.gcd(&p) == 1 {
            let sq = if rng.random_bool(0.5) { q } else { -q };
            let sp = if rng.random_bool(0.5) { p } else { -p };
            break (sq, sp);
        }
    };
    let base = (rng.random_range(-20i64..=20), rng.random_range(-20i64..=20));
    let mut position: i64 = rng.random_range(1..=5);
    let mut points = Vec::with_capacity(count);
    for _ in 0..count {
        points.push(RationalPoint::from_ints(base.0 + position * q, base.1 + position * p));
        let factor: i64 = rng.random_range(2..=4);
        position = position * factor + rng.random_range(1..=position.max(2));
    }
    points
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_distinct() {
        let d3 = LatticePolygon::standard_triangle(3);
        let a = sample_line_points(&d3, 8, 11);
        assert_eq!(a, sample_line_points(&d3, 8, 11));
        assert_ne!(a, sample_line_points(&d3, 8, 12));
        let mut sorted = a.clone();
        sorted.sort_by(|x, y| x.x.cmp(&y.x).then(x.y.cmp(&y.y)));
        sorted.dedup();
        assert_eq!(sorted.len(), 8);
    }
}
