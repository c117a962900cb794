//! Max-plus Cramer solving and the lift solver for a fixed subdivision.
//!
//! [`tropical_cramer`] finds the unique tropical hypersurface with a given
//! support of size `n + 1` through `n` generic points: the valuation of the
//! term at column ω is the optimal assignment value of the point/exponent
//! pairing matrix with column ω removed.
//!
//! [`solve_lift`] inverts the other direction: given a subdivision and the
//! edge each point should sit on, it solves the linear system for the lift and
//! checks that the result really induces the subdivision with each point on
//! its edge.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::linalg::{self, LinearSolution};
use crate::rational::{common_denominator, int, Rational, RationalPoint};
use crate::tropical_curve::{CurveEdge, Subdivision, TropicalCurve, TropicalPolynomial};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// The `n × (n+1)` max-plus matrix with entry `(i, ω) = x_i · ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxPlusMatrix {
    entries: Vec<Vec<Rational>>,
}

/// A one-to-one map from rows to columns with the sum of its entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub columns: Vec<usize>,
    pub value: Rational,
}

impl MaxPlusMatrix {
    pub fn new(support: &[Vec<i64>], points: &[Vec<Rational>]) -> Result<Self, SolverError> {
        validate_cramer_input(support, points)?;
        let entries = points
            .iter()
            .map(|x| {
                support
                    .iter()
                    .map(|w| w.iter().zip(x).map(|(&wk, xk)| xk * int(wk)).sum())
                    .collect()
            })
            .collect();
        Ok(Self { entries })
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, Vec::len)
    }

    pub fn entry(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row][col]
    }

    /// The optimal assignment avoiding column `skip`, failing if it is not unique.
    pub fn max_assignment_excluding(&self, skip: usize) -> Result<Assignment, SolverError> {
        let scale = common_denominator(self.entries.iter().flatten());
        let scaled: Vec<Vec<BigInt>> = self
            .entries
            .iter()
            .map(|row| row.iter().map(|v| (v * Rational::from_integer(scale.clone())).to_integer()).collect())
            .collect();
        let cols: Vec<usize> = (0..self.cols()).filter(|&c| c != skip).collect();
        let best = best_assignment(&scaled, &cols);
        if !best.unique {
            return Err(SolverError::Degenerate(format!(
                "optimal assignment avoiding column {skip} is not unique"
            )));
        }
        Ok(Assignment {
            columns: best.columns,
            value: Rational::new(best.value, scale),
        })
    }
}

fn validate_cramer_input(support: &[Vec<i64>], points: &[Vec<Rational>]) -> Result<(), SolverError> {
    if support.len() != points.len() + 1 {
        return Err(SolverError::InvalidInput(format!(
            "support has {} exponents for {} points; expected one more exponent than points",
            support.len(),
            points.len()
        )));
    }
    let dim = support[0].len();
    if support.iter().any(|w| w.len() != dim) || points.iter().any(|x| x.len() != dim) {
        return Err(SolverError::InvalidInput("dimension mismatch".into()));
    }
    let distinct: HashSet<&Vec<i64>> = support.iter().collect();
    if distinct.len() != support.len() {
        return Err(SolverError::InvalidInput("support exponents repeat".into()));
    }
    Ok(())
}

/// The unique tropical polynomial with the given support through the points,
/// normalised so that its smallest valuation is zero.
pub fn tropical_cramer(support: &[Vec<i64>], points: &[Vec<Rational>]) -> Result<TropicalPolynomial, SolverError> {
    validate_cramer_input(support, points)?;
    let scale = common_denominator(points.iter().flatten());
    let scale_q = Rational::from_integer(scale.clone());
    let matrix: Vec<Vec<BigInt>> = points
        .iter()
        .map(|x| {
            support
                .iter()
                .map(|w| {
                    let v: Rational = w.iter().zip(x).map(|(&wk, xk)| xk * int(wk)).sum();
                    (v * &scale_q).to_integer()
                })
                .collect()
        })
        .collect();
    let values = cramer_values(&matrix)?;
    let poly = TropicalPolynomial::new(
        support
            .iter()
            .cloned()
            .zip(values.into_iter().map(|v| Rational::new(v, scale.clone()))),
    )
    .map_err(|e| SolverError::InvalidInput(e.to_string()))?;
    Ok(poly.normalized())
}

/// Optimal non-shared assignment values for every removed column of an
/// `n × (n+1)` integer matrix.
pub(crate) fn cramer_values<T: Weight>(matrix: &[Vec<T>]) -> Result<Vec<T>, SolverError> {
    let n = matrix.len();
    let cols = n + 1;
    (0..cols)
        .map(|skip| {
            let keep: Vec<usize> = (0..cols).filter(|&c| c != skip).collect();
            let best = best_assignment(matrix, &keep);
            if best.unique {
                Ok(best.value)
            } else {
                Err(SolverError::Degenerate(format!(
                    "two optimal assignments avoid column {skip}"
                )))
            }
        })
        .collect()
}

/// Integer-like scalars for assignment problems.
pub(crate) trait Weight: Clone + Ord + Signed {}
impl<T: Clone + Ord + Signed> Weight for T {}

pub(crate) struct BestAssignment<T> {
    /// Column chosen for each row.
    pub columns: Vec<usize>,
    pub value: T,
    pub unique: bool,
}

const BRUTE_FORCE_LIMIT: usize = 8;

/// Maximum-weight assignment of all rows to distinct columns from `cols`
/// (`cols.len()` must equal the row count).
pub(crate) fn best_assignment<T: Weight>(matrix: &[Vec<T>], cols: &[usize]) -> BestAssignment<T> {
    let n = matrix.len();
    assert_eq!(cols.len(), n, "square assignment problem expected");
    if n == 0 {
        return BestAssignment {
            columns: Vec::new(),
            value: T::zero(),
            unique: true,
        };
    }
    let square: Vec<Vec<T>> = matrix
        .iter()
        .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
        .collect();
    let (local, value, unique) = if n <= BRUTE_FORCE_LIMIT {
        brute_force(&square)
    } else {
        hungarian_with_uniqueness(&square)
    };
    BestAssignment {
        columns: local.into_iter().map(|k| cols[k]).collect(),
        value,
        unique,
    }
}

fn brute_force<T: Weight>(w: &[Vec<T>]) -> (Vec<usize>, T, bool) {
    struct Search<'a, T> {
        w: &'a [Vec<T>],
        used: Vec<bool>,
        current: Vec<usize>,
        best: Option<(T, Vec<usize>, usize)>,
    }
    impl<T: Weight> Search<'_, T> {
        fn go(&mut self, row: usize, acc: T) {
            let n = self.w.len();
            if row == n {
                match &mut self.best {
                    Some((v, _, count)) if acc == *v => *count += 1,
                    Some((v, _, _)) if acc < *v => {}
                    _ => self.best = Some((acc, self.current.clone(), 1)),
                }
                return;
            }
            for c in 0..n {
                if !self.used[c] {
                    self.used[c] = true;
                    self.current.push(c);
                    let next = acc.clone() + self.w[row][c].clone();
                    self.go(row + 1, next);
                    self.current.pop();
                    self.used[c] = false;
                }
            }
        }
    }
    let mut s = Search {
        w,
        used: vec![false; w.len()],
        current: Vec::with_capacity(w.len()),
        best: None,
    };
    s.go(0, T::zero());
    let (value, cols, count) = s.best.expect("at least one permutation");
    (cols, value, count == 1)
}

fn hungarian_with_uniqueness<T: Weight>(w: &[Vec<T>]) -> (Vec<usize>, T, bool) {
    let n = w.len();
    let cost: Vec<Vec<T>> = w.iter().map(|row| row.iter().map(|v| -v.clone()).collect()).collect();
    let cols = hungarian_min(&cost);
    let value = total(w, &cols);
    // Any assignment touching a forbidden entry costs more than every other assignment.
    let big = cost
        .iter()
        .flatten()
        .fold(T::one(), |acc, v| acc + v.abs() + v.abs());
    let mut unique = true;
    for row in 0..n {
        let mut forbidden = cost.clone();
        forbidden[row][cols[row]] = big.clone();
        let alt = hungarian_min(&forbidden);
        if alt[row] != cols[row] && total(w, &alt) == value {
            unique = false;
            break;
        }
    }
    (cols, value, unique)
}

fn total<T: Weight>(w: &[Vec<T>], cols: &[usize]) -> T {
    cols.iter()
        .enumerate()
        .fold(T::zero(), |acc, (r, &c)| acc + w[r][c].clone())
}

/// Minimum-cost perfect assignment by the shortest augmenting path method
/// with dual potentials; returns the column of each row.
fn hungarian_min<T: Weight>(cost: &[Vec<T>]) -> Vec<usize> {
    let n = cost.len();
    let mut u = vec![T::zero(); n + 1];
    let mut v = vec![T::zero(); n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0;
        let mut minv: Vec<Option<T>> = vec![None; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta: Option<T> = None;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1].clone() - u[i0].clone() - v[j].clone();
                if minv[j].as_ref().is_none_or(|m| cur < *m) {
                    minv[j] = Some(cur);
                    way[j] = j0;
                }
                if delta.is_none() || minv[j] < delta {
                    delta = minv[j].clone();
                    j1 = j;
                }
            }
            let delta = delta.expect("an unused column remains");
            for j in 0..=n {
                if used[j] {
                    let o = owner[j];
                    u[o] = u[o].clone() + delta.clone();
                    v[j] = v[j].clone() - delta.clone();
                } else if let Some(m) = minv[j].as_mut() {
                    *m = m.clone() - delta.clone();
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut cols = vec![0; n];
    for j in 1..=n {
        if owner[j] > 0 {
            cols[owner[j] - 1] = j - 1;
        }
    }
    cols
}

/// Why a candidate lift was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Infeasibility {
    /// The point conditions contradict each other or the cell relations.
    Inconsistent,
    /// The solved lift does not bend upwards across this interior edge.
    NotConvex { edge: usize },
    /// This point lies on the line of its assigned edge but outside the edge.
    OffEdge { point: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftOutcome {
    /// Lift per subdivision vertex, zero at vertex 0.
    Solved(Vec<Rational>),
    Infeasible(Infeasibility),
}

/// Solves for the lift of `skeleton` that puts `points[i]` on the curve edge
/// dual to subdivision edge `assignment[i]`, then validates it.
pub fn solve_lift(
    skeleton: &Subdivision,
    assignment: &[usize],
    points: &[RationalPoint],
) -> Result<LiftOutcome, SolverError> {
    if assignment.len() != points.len() {
        return Err(SolverError::InvalidInput("one edge per point is required".into()));
    }
    let n_edges = skeleton.edges().len();
    if assignment.iter().any(|&e| e >= n_edges) {
        return Err(SolverError::InvalidInput("edge index out of range".into()));
    }
    if assignment.iter().collect::<HashSet<_>>().len() != assignment.len() {
        return Err(SolverError::InvalidInput("assignment is not injective".into()));
    }
    if skeleton.rank() != points.len() as i64 {
        return Err(SolverError::InvalidInput(format!(
            "subdivision rank {} differs from the number of points {}",
            skeleton.rank(),
            points.len()
        )));
    }
    let nv = skeleton.vertices().len();
    let pts = skeleton.vertices();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (x, &e) in points.iter().zip(assignment) {
        let [a, b] = skeleton.edges()[e].ends;
        let mut row = vec![Rational::zero(); nv];
        row[b] = int(1);
        row[a] = int(-1);
        rows.push(row);
        let d = pts[b] - pts[a];
        rhs.push(x.dot_lattice(d.i, d.j));
    }
    for cell in skeleton.cells() {
        for (rel, _) in skeleton.cell_relations(cell) {
            let mut row = vec![Rational::zero(); nv];
            for (v, c) in rel {
                row[v] = int(c);
            }
            rows.push(row);
            rhs.push(Rational::zero());
        }
    }
    let mut pin = vec![Rational::zero(); nv];
    pin[0] = int(1);
    rows.push(pin);
    rhs.push(Rational::zero());
    let lift = match linalg::solve(&rows, &rhs, nv) {
        LinearSolution::Unique(x) => x,
        LinearSolution::Underdetermined => {
            return Err(SolverError::Degenerate("point conditions do not determine the lift".into()))
        }
        LinearSolution::Inconsistent => return Ok(LiftOutcome::Infeasible(Infeasibility::Inconsistent)),
    };
    for (e, edge) in skeleton.edges().iter().enumerate() {
        if edge.is_boundary() {
            continue;
        }
        let fold = skeleton.fold(e, &lift);
        if fold.is_zero() {
            return Err(SolverError::Degenerate(format!("lift is flat across edge {e}")));
        }
        if fold.is_negative() {
            return Ok(LiftOutcome::Infeasible(Infeasibility::NotConvex { edge: e }));
        }
    }
    let lifted = skeleton
        .skeleton()
        .with_lift(lift.clone())
        .map_err(|e| SolverError::Degenerate(e.to_string()))?;
    let curve = TropicalCurve::from_subdivision(lifted).map_err(|e| SolverError::Degenerate(e.to_string()))?;
    for (k, (x, &e)) in points.iter().zip(assignment).enumerate() {
        match position_on_edge(&curve, e, x) {
            std::cmp::Ordering::Greater => {}
            std::cmp::Ordering::Equal => {
                return Err(SolverError::Degenerate(format!("point {k} lies on a curve vertex")))
            }
            std::cmp::Ordering::Less => {
                return Ok(LiftOutcome::Infeasible(Infeasibility::OffEdge { point: k }))
            }
        }
    }
    Ok(LiftOutcome::Solved(lift))
}

/// For a point on the line of the curve edge dual to `e`: `Greater` inside
/// the edge, `Equal` at an endpoint, `Less` outside.
pub(crate) fn position_on_edge(curve: &TropicalCurve, e: usize, x: &RationalPoint) -> std::cmp::Ordering {
    let dot = |from: &RationalPoint, to: &RationalPoint, dir: crate::LatticePoint| {
        (&to.x - &from.x) * int(dir.i) + (&to.y - &from.y) * int(dir.j)
    };
    let sign = |v: Rational| v.cmp(&Rational::zero());
    match curve.curve_edge(e) {
        CurveEdge::Bounded(k) => {
            let be = &curve.bounded_edges()[k];
            let start = sign(dot(&curve.vertices()[be.from], x, be.direction));
            let end = sign(dot(x, &curve.vertices()[be.to], be.direction));
            start.min(end)
        }
        CurveEdge::Ray(k) => {
            let r = &curve.rays()[k];
            sign(dot(&curve.vertices()[r.vertex], x, r.direction))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn cramer_line_through_two_points() {
        let support = vec![vec![0, 0], vec![1, 0], vec![0, 1]];
        let f = tropical_cramer(&support, &[q(&[0, 0]), q(&[2, 1])]).unwrap();
        let vals: Vec<Rational> = support.iter().map(|w| f.valuation(w).unwrap().clone()).collect();
        // Valuations (2,1,2) up to a constant, normalised to minimum 0.
        assert_eq!(vals, q(&[1, 0, 1]));
        assert!(f.contains(&q(&[0, 0])).unwrap());
        assert!(f.contains(&q(&[2, 1])).unwrap());
    }

    #[test]
    fn cramer_vertical_line() {
        let support = vec![vec![0, 0], vec![1, 0]];
        let f = tropical_cramer(&support, &[q(&[3, 5])]).unwrap();
        assert_eq!(f.valuation(&[0, 0]).unwrap(), &int(3));
        assert_eq!(f.valuation(&[1, 0]).unwrap(), &int(0));
        assert!(f.contains(&[int(3), ratio(-7, 2)]).unwrap());
        assert!(!f.contains(&[int(2), int(0)]).unwrap());
    }

    #[test]
    fn cramer_coincident_points_degenerate() {
        let support = vec![vec![0, 0], vec![1, 0], vec![0, 1]];
        let r = tropical_cramer(&support, &[q(&[1, 2]), q(&[1, 2])]);
        assert!(matches!(r, Err(SolverError::Degenerate(_))));
    }

    #[test]
    fn matrix_assignment_api() {
        let support = vec![vec![0, 0], vec![1, 0], vec![0, 1]];
        let m = MaxPlusMatrix::new(&support, &[q(&[0, 0]), q(&[2, 1])]).unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 3));
        let a = m.max_assignment_excluding(0).unwrap();
        assert_eq!(a.value, int(2));
        assert_eq!(a.columns, vec![2, 1]);
    }

    #[test]
    fn hungarian_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.random_range(1..=7);
            let w: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.random_range(-6..=6)).collect())
                .collect();
            let (_, bv, bu) = brute_force(&w);
            let (hc, hv, hu) = hungarian_with_uniqueness(&w);
            assert_eq!(bv, hv);
            assert_eq!(total(&w, &hc), hv);
            assert_eq!(bu, hu, "uniqueness disagrees on {w:?}");
        }
    }
}
