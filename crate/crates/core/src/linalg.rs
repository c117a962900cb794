//! Exact linear algebra over the rationals: elimination, rank, square and
//! overdetermined solves, and a small feasibility simplex.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Outcome of solving `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    Unique(Vec<Rational>),
    /// Consistent but with a positive-dimensional solution set.
    Underdetermined,
    Inconsistent,
}

/// Reduced row echelon form in place; returns the pivot columns.
fn row_reduce(rows: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    if !pv.is_zero() {
                        *v -= &factor * pv;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a matrix given by rows of equal length.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let Some(first) = rows.first() else {
        return 0;
    };
    let cols = first.len();
    let mut work = rows.to_vec();
    row_reduce(&mut work, cols).len()
}

/// Solves `A x = b` for `A` with `cols` columns (any number of rows).
pub fn solve(a: &[Vec<Rational>], b: &[Rational], cols: usize) -> LinearSolution {
    assert_eq!(a.len(), b.len(), "row count mismatch");
    let mut work: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut work, cols + 1);
    if pivots.last() == Some(&cols) {
        return LinearSolution::Inconsistent;
    }
    if pivots.len() < cols {
        return LinearSolution::Underdetermined;
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = work[r][cols].clone();
    }
    LinearSolution::Unique(x)
}

/// Finds `x >= 0` with `equalities · x = 0` and `inequalities · x >= 1`
/// (row-wise), or reports that none exists.
///
/// Runs a phase-one simplex with Bland's rule over exact rationals.
pub fn homogeneous_strict_feasibility(
    equalities: &[Vec<Rational>],
    inequalities: &[Vec<Rational>],
    vars: usize,
) -> Option<Vec<Rational>> {
    let m_eq = equalities.len();
    let m_in = inequalities.len();
    let m = m_eq + m_in;
    if m == 0 {
        return Some(vec![Rational::zero(); vars]);
    }
    // Columns: x (vars), surplus s (m_in), artificial a (m), rhs.
    let n_cols = vars + m_in + m;
    let rhs_col = n_cols;
    let mut tab: Vec<Vec<Rational>> = Vec::with_capacity(m + 1);
    for (k, row) in equalities.iter().chain(inequalities).enumerate() {
        let mut t = vec![Rational::zero(); n_cols + 1];
        let rhs = if k < m_eq { Rational::zero() } else { Rational::one() };
        for (c, v) in row.iter().enumerate() {
            t[c] = v.clone();
        }
        if k >= m_eq {
            t[vars + (k - m_eq)] = -Rational::one();
        }
        t[rhs_col] = rhs;
        // Keep right-hand sides nonnegative (they already are) and add the artificial.
        t[vars + m_in + k] = Rational::one();
        tab.push(t);
    }
    let mut basis: Vec<usize> = (0..m).map(|k| vars + m_in + k).collect();
    // Objective row: minimise the sum of artificials, expressed in nonbasic terms.
    let mut obj = vec![Rational::zero(); n_cols + 1];
    for row in &tab {
        for (o, v) in obj.iter_mut().zip(row) {
            *o -= v;
        }
    }
    for k in 0..m {
        obj[vars + m_in + k] = Rational::zero();
    }
    loop {
        // Bland: smallest index with negative reduced cost.
        let Some(enter) = (0..n_cols).find(|&c| obj[c].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for (r, row) in tab.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[rhs_col] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((lr, lratio)) => {
                        ratio < *lratio || (ratio == *lratio && basis[r] < basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((pr, _)) = leave else {
            // Unbounded direction cannot occur for a phase-one objective bounded below by 0.
            unreachable!("phase-one objective is bounded");
        };
        pivot(&mut tab, &mut obj, pr, enter);
        basis[pr] = enter;
    }
    if !obj[rhs_col].is_zero() {
        return None;
    }
    let mut x = vec![Rational::zero(); vars];
    for (r, &b) in basis.iter().enumerate() {
        if b < vars {
            x[b] = tab[r][rhs_col].clone();
        }
    }
    Some(x)
}

fn pivot(tab: &mut [Vec<Rational>], obj: &mut [Rational], pr: usize, pc: usize) {
    let inv = tab[pr][pc].recip();
    for v in tab[pr].iter_mut() {
        *v *= &inv;
    }
    let prow = tab[pr].clone();
    for (r, row) in tab.iter_mut().enumerate() {
        if r != pr && !row[pc].is_zero() {
            let f = row[pc].clone();
            for (v, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
    }
    if !obj[pc].is_zero() {
        let f = obj[pc].clone();
        for (v, p) in obj.iter_mut().zip(&prow) {
            if !p.is_zero() {
                *v -= &f * p;
            }
        }
    }
}
