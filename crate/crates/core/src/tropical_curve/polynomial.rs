//! Tropical polynomials over Zᵏ exponents with exact rational valuations.

use std::collections::BTreeMap;

use crate::lattice_geom::{LatticePoint, LatticePolygon};
use crate::rational::{int, Rational, RationalPoint};

use super::CurveError;

/// A finite max-plus polynomial `x ↦ max_ω (ω·x + val(ω))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalPolynomial {
    dim: usize,
    terms: BTreeMap<Vec<i64>, Rational>,
}

impl TropicalPolynomial {
    /// Builds a polynomial from `(exponent, valuation)` pairs of a common length.
    pub fn new(terms: impl IntoIterator<Item = (Vec<i64>, Rational)>) -> Result<Self, CurveError> {
        let mut map = BTreeMap::new();
        let mut dim = None;
        for (exp, val) in terms {
            match dim {
                None => dim = Some(exp.len()),
                Some(d) if d != exp.len() => return Err(CurveError::DimensionMismatch),
                _ => {}
            }
            if map.insert(exp.clone(), val).is_some() {
                return Err(CurveError::DuplicateExponent(exp));
            }
        }
        let dim = dim.ok_or(CurveError::Empty)?;
        Ok(Self { dim, terms: map })
    }

    /// Plane polynomial from lattice exponents.
    pub fn plane(terms: impl IntoIterator<Item = (LatticePoint, Rational)>) -> Result<Self, CurveError> {
        Self::new(terms.into_iter().map(|(p, v)| (vec![p.i, p.j], v)))
    }

    /// All valuations zero on the given exponents.
    pub fn constant_on(points: &[LatticePoint]) -> Result<Self, CurveError> {
        Self::plane(points.iter().map(|&p| (p, int(0))))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&[i64], &Rational)> {
        self.terms.iter().map(|(e, v)| (e.as_slice(), v))
    }

    pub fn valuation(&self, exponent: &[i64]) -> Option<&Rational> {
        self.terms.get(exponent)
    }

    /// Plane exponents and valuations; errors unless the dimension is two.
    pub fn plane_terms(&self) -> Result<Vec<(LatticePoint, Rational)>, CurveError> {
        if self.dim != 2 {
            return Err(CurveError::DimensionMismatch);
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, v)| (LatticePoint::new(e[0], e[1]), v.clone()))
            .collect())
    }

    /// Convex hull of the support.
    pub fn newton_polygon(&self) -> Result<LatticePolygon, CurveError> {
        let pts: Vec<LatticePoint> = self.plane_terms()?.into_iter().map(|(p, _)| p).collect();
        LatticePolygon::convex_hull(&pts).map_err(|_| CurveError::DegenerateSupport)
    }

    /// The maximum of `ω·x + val(ω)` and every exponent attaining it.
    pub fn evaluate(&self, x: &[Rational]) -> Result<(Rational, Vec<Vec<i64>>), CurveError> {
        if x.len() != self.dim {
            return Err(CurveError::DimensionMismatch);
        }
        let mut best: Option<Rational> = None;
        let mut argmax = Vec::new();
        for (exp, val) in &self.terms {
            let value: Rational = exp.iter().zip(x).map(|(&e, xi)| xi * int(e)).sum::<Rational>() + val;
            match &best {
                Some(b) if value < *b => {}
                Some(b) if value == *b => argmax.push(exp.clone()),
                _ => {
                    best = Some(value);
                    argmax.clear();
                    argmax.push(exp.clone());
                }
            }
        }
        Ok((best.expect("nonempty polynomial"), argmax))
    }

    pub fn evaluate_at(&self, x: &RationalPoint) -> Result<(Rational, Vec<Vec<i64>>), CurveError> {
        self.evaluate(&x.coords())
    }

    /// True when at least two terms attain the maximum at `x`.
    pub fn contains(&self, x: &[Rational]) -> Result<bool, CurveError> {
        Ok(self.evaluate(x)?.1.len() >= 2)
    }

    pub fn contains_point(&self, x: &RationalPoint) -> Result<bool, CurveError> {
        self.contains(&x.coords())
    }

    /// Shifts all valuations so the smallest becomes zero.
    pub fn normalized(&self) -> Self {
        let min = self.terms.values().min().cloned().expect("nonempty");
        Self {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v - &min)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn f(list: &[((i64, i64), i64)]) -> TropicalPolynomial {
        TropicalPolynomial::plane(list.iter().map(|&((i, j), v)| (LatticePoint::new(i, j), int(v)))).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let line = f(&[((0, 0), 0), ((1, 0), 0), ((0, 1), 0)]);
        let (v, arg) = line.evaluate(&[int(0), int(0)]).unwrap();
        assert_eq!(v, int(0));
        assert_eq!(arg.len(), 3);
        let (v, arg) = line.evaluate(&[int(2), int(1)]).unwrap();
        assert_eq!(v, int(2));
        assert_eq!(arg, vec![vec![1, 0]]);
        let shifted = f(&[((0, 0), 2), ((1, 0), 1), ((0, 1), 2)]);
        let (v, arg) = shifted.evaluate(&[int(1), int(0)]).unwrap();
        assert_eq!(v, int(2));
        assert_eq!(arg.len(), 3);
    }

    #[test]
    fn contains_examples() {
        let line = f(&[((0, 0), 0), ((1, 0), 0), ((0, 1), 0)]);
        assert!(line.contains(&[int(0), int(0)]).unwrap());
        assert!(line.contains(&[int(-3), int(0)]).unwrap());
        assert!(!line.contains(&[int(1), int(-1)]).unwrap());
    }

    #[test]
    fn construction_errors() {
        assert_eq!(TropicalPolynomial::new(Vec::new()), Err(CurveError::Empty));
        let dup = TropicalPolynomial::new(vec![(vec![0, 0], int(0)), (vec![0, 0], int(1))]);
        assert!(matches!(dup, Err(CurveError::DuplicateExponent(_))));
        let mixed = TropicalPolynomial::new(vec![(vec![0, 0], int(0)), (vec![0], int(1))]);
        assert_eq!(mixed, Err(CurveError::DimensionMismatch));
    }
}
