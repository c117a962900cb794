//! Tropical polynomials with their corner loci and dual regular subdivisions.
//!
//! Conventions: a polynomial is evaluated as a maximum, `max_ω(ω·x + val(ω))`.
//! Its subdivision is the projection of the lower hull of `(ω, -val(ω))`, and
//! the lift stored on a [`Subdivision`] is `ν(ω) = -val(ω)` on hull vertices.

mod curve;
pub(crate) mod hull;
mod polynomial;
mod subdivision;

pub use curve::{BoundedEdge, CurveEdge, Ray, TropicalCurve};
pub use polynomial::TropicalPolynomial;
pub use subdivision::{normalize_lift, Cell, Edge, ExpectedRank, Subdivision, SubdivisionError};

use num_bigint::BigInt;

use crate::lattice_geom::{LatticePoint, LatticePolygon};
use crate::rational::{common_denominator, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CurveError {
    #[error("a tropical polynomial needs at least one term")]
    Empty,
    #[error("exponent {0:?} appears twice")]
    DuplicateExponent(Vec<i64>),
    #[error("exponent or point dimensions disagree")]
    DimensionMismatch,
    #[error("support is not two-dimensional")]
    DegenerateSupport,
    #[error("subdivision carries no lift")]
    MissingLift,
    #[error("invalid subdivision: {0}")]
    Subdivision(#[from] SubdivisionError),
}

/// The regular subdivision induced by the lower hull of `(ω, -val(ω))`.
pub fn dual_subdivision(f: &TropicalPolynomial) -> Result<Subdivision, CurveError> {
    let terms = f.plane_terms()?;
    let points: Vec<LatticePoint> = terms.iter().map(|(p, _)| *p).collect();
    let heights: Vec<BigInt> = {
        let scale = common_denominator(terms.iter().map(|(_, v)| v));
        terms
            .iter()
            .map(|(_, v)| -(v * Rational::from_integer(scale.clone())).to_integer())
            .collect()
    };
    let faces = hull::lower_hull_faces(&points, &heights).ok_or(CurveError::DegenerateSupport)?;
    let polygon = LatticePolygon::convex_hull(&points).map_err(|_| CurveError::DegenerateSupport)?;
    let cells = faces
        .iter()
        .map(|face| {
            LatticePolygon::new(face.iter().map(|&k| points[k]).collect())
                .expect("hull faces are strictly convex polygons")
        })
        .collect();
    let skeleton = Subdivision::from_cells(polygon, cells)?;
    let lift = skeleton
        .vertices()
        .iter()
        .map(|p| {
            let k = points.binary_search(p).expect("vertices come from the support");
            -terms[k].1.clone()
        })
        .collect();
    Ok(skeleton.with_lift(lift)?)
}

/// The corner locus of `f` as a weighted graph dual to [`dual_subdivision`].
pub fn corner_locus(f: &TropicalPolynomial) -> Result<TropicalCurve, CurveError> {
    TropicalCurve::from_subdivision(dual_subdivision(f)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn f(list: &[((i64, i64), i64)]) -> TropicalPolynomial {
        TropicalPolynomial::plane(list.iter().map(|&((i, j), v)| (LatticePoint::new(i, j), int(v)))).unwrap()
    }

    #[test]
    fn flat_conic_has_one_cell() {
        let pts = LatticePolygon::standard_triangle(2).lattice_points().all;
        let s = dual_subdivision(&TropicalPolynomial::constant_on(&pts).unwrap()).unwrap();
        assert_eq!(s.cells().len(), 1);
        assert_eq!(s.cells()[0].polygon, LatticePolygon::standard_triangle(2));
    }

    #[test]
    fn tropical_line_geometry() {
        let c = corner_locus(&f(&[((0, 0), 0), ((1, 0), 0), ((0, 1), 0)])).unwrap();
        assert_eq!(c.vertices(), &[crate::rational::RationalPoint::from_ints(0, 0)]);
        let mut dirs: Vec<LatticePoint> = c.rays().iter().map(|r| r.direction).collect();
        dirs.sort();
        assert_eq!(
            dirs,
            vec![LatticePoint::new(-1, 0), LatticePoint::new(0, -1), LatticePoint::new(1, 1)]
        );
        assert!(c.rays().iter().all(|r| r.weight == 1));
        assert!(c.bounded_edges().is_empty());
    }

    #[test]
    fn shifted_line_vertex() {
        let g = f(&[((0, 0), 2), ((1, 0), 1), ((0, 1), 2)]);
        let c = corner_locus(&g).unwrap();
        assert_eq!(c.vertices(), &[crate::rational::RationalPoint::from_ints(1, 0)]);
        let s = c.dual();
        let lift = s.lift().unwrap();
        // Vertices sort as (0,0), (0,1), (1,0); ν = -val = (-2, -2, -1) shifted to start at 0.
        assert_eq!(lift, &[int(0), int(0), int(1)]);
    }

    #[test]
    fn collinear_support_is_rejected() {
        let g = f(&[((0, 0), 0), ((1, 0), 0), ((2, 0), 1)]);
        assert_eq!(dual_subdivision(&g), Err(CurveError::DegenerateSupport));
    }
}
