//! Lower convex hull of lifted lattice points, generic over the height type so
//! the count engine can run it on machine integers and the public API on
//! rationals.

use std::collections::HashSet;
use std::ops::{Add, Mul, Sub};

use num_traits::{FromPrimitive, Zero};

use crate::lattice_geom::{convex_hull_indices, orientation, LatticePoint};

/// Scalar types usable as heights.
pub trait HullScalar:
    Clone + Ord + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + FromPrimitive
{
}

impl<T> HullScalar for T where
    T: Clone + Ord + Zero + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + FromPrimitive
{
}

/// Faces of the lower hull of `(points[k], heights[k])`, each given by the
/// indices of its extreme points in counterclockwise order.
///
/// Returns `None` when the points are collinear. Points strictly above the
/// hull, and points on a face that are not extreme for it, appear in no face.
pub fn lower_hull_faces<T: HullScalar>(points: &[LatticePoint], heights: &[T]) -> Option<Vec<Vec<usize>>> {
    assert_eq!(points.len(), heights.len());
    let n = points.len();
    let coord = |v: i64| T::from_i64(v).expect("lattice coordinate fits the height type");
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut covered: Vec<Vec<bool>> = Vec::new();
    let mut faces = Vec::new();
    let mut any_triangle = false;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let o = orientation(points[a], points[b], points[c]);
                if o == 0 {
                    continue;
                }
                any_triangle = true;
                if covered.iter().any(|mask| mask[a] && mask[b] && mask[c]) {
                    continue;
                }
                let (b, c) = if o > 0 { (b, c) } else { (c, b) };
                let (ux, uy) = (points[b].i - points[a].i, points[b].j - points[a].j);
                let (vx, vy) = (points[c].i - points[a].i, points[c].j - points[a].j);
                let uh = heights[b].clone() - heights[a].clone();
                let vh = heights[c].clone() - heights[a].clone();
                let nx = coord(uy) * vh.clone() - uh.clone() * coord(vy);
                let ny = uh * coord(vx) - coord(ux) * vh;
                let nz = coord(o.abs());
                let mut coplanar = Vec::new();
                let mut is_face = true;
                for p in 0..n {
                    let wx = coord(points[p].i - points[a].i);
                    let wy = coord(points[p].j - points[a].j);
                    let wh = heights[p].clone() - heights[a].clone();
                    let d = nx.clone() * wx + ny.clone() * wy + nz.clone() * wh;
                    if d < T::zero() {
                        is_face = false;
                        break;
                    }
                    if d.is_zero() {
                        coplanar.push(p);
                    }
                }
                if !is_face {
                    continue;
                }
                let mut mask = vec![false; n];
                for &p in &coplanar {
                    mask[p] = true;
                }
                covered.push(mask);
                if seen.insert(coplanar.clone()) {
                    let local: Vec<LatticePoint> = coplanar.iter().map(|&p| points[p]).collect();
                    let hull = convex_hull_indices(&local);
                    faces.push(hull.into_iter().map(|k| coplanar[k]).collect());
                }
            }
        }
    }
    if !any_triangle {
        return None;
    }
    Some(faces)
}
