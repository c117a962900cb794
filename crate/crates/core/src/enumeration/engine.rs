//! Cell tracing on the space of tropical polynomials through fixed points.
//!
//! Fix a support `A` and integer points `x_1..x_r`. The valuation vectors
//! `v ∈ R^A` whose tropical polynomial passes through every point form a
//! polyhedral complex. For generic points its top cells are labelled by a
//! choice, for every point, of the two terms that tie there. Those pairs form
//! a forest on `A`; fixing one value per forest component determines `v`, and
//! every inequality "no third term beats the pair" is a difference
//! constraint between two component offsets. With `k + 1` components the
//! cell is a `k`-dimensional open polyhedron given by a small difference
//! bound matrix.
//!
//! Curves with `k` non-triangular cells (parallelograms for nodal counts,
//! the special quadrangles for cuspidal ones) are found by imposing `k`
//! affine relations among the lifts inside each cell and checking the
//! resulting candidate exactly against the lower hull.
//!
//! Cells are explored breadth first from seeds produced by max-plus Cramer
//! solutions on sub-supports, crossing every facet of every feasible cell.

use std::collections::HashSet;

use crate::lattice_geom::{orientation, LatticePoint};
use crate::parallel::Execution;
use crate::tropical_curve::hull::lower_hull_faces;
use crate::tropical_solver::cramer_values;

/// An affine dependency `Σ coefficient · ν(vertex) = 0` among support points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Relation {
    pub vertices: Vec<usize>,
    pub coefficients: Vec<i64>,
}

impl Relation {
    /// The primitive affine dependency of four points in convex position.
    pub fn of_quadrangle(support: &[LatticePoint], vertices: [usize; 4]) -> Relation {
        let p: Vec<LatticePoint> = vertices.iter().map(|&v| support[v]).collect();
        // λ_k = (-1)^k det of the 3x3 minor of [x; y; 1] without column k.
        let minor = |skip: usize| {
            let cols: Vec<LatticePoint> = (0..4).filter(|&c| c != skip).map(|c| p[c]).collect();
            orientation(cols[0], cols[1], cols[2])
        };
        let mut coefficients: Vec<i64> = (0..4)
            .map(|k| if k % 2 == 0 { minor(k) } else { -minor(k) })
            .collect();
        let g = coefficients
            .iter()
            .fold(0i64, |g, &c| num_integer::Integer::gcd(&g, &c));
        for c in coefficients.iter_mut() {
            *c /= g;
        }
        Relation {
            vertices: vertices.to_vec(),
            coefficients,
        }
    }

    fn sorted_vertices(&self) -> Vec<usize> {
        let mut v = self.vertices.clone();
        v.sort_unstable();
        v
    }
}

/// One support and the relations that may be imposed on it.
#[derive(Clone, Debug)]
pub(crate) struct Job {
    pub support: Vec<LatticePoint>,
    /// Number of relations every solution must satisfy.
    pub k: usize,
    pub relations: Vec<Relation>,
}

/// A solution: valuations `numerators[ω] / denominator` in scaled point units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Hit {
    pub numerators: Vec<i128>,
    pub denominator: i128,
    /// The tying pair of support indices at each point.
    pub pairs: Vec<(usize, usize)>,
    /// Indices of the imposed relations.
    pub relations: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub(crate) enum EngineError {
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
}

type Pairs = Vec<(u16, u16)>;

struct Problem<'a> {
    support: &'a [LatticePoint],
    /// `pairing[i][ω] = ω · x_i`.
    pairing: Vec<Vec<i128>>,
    k: usize,
    relations: &'a [Relation],
}

/// Feasible cell data.
struct CellData {
    component: Vec<usize>,
    base: Vec<i128>,
    /// Tightest direct bound `t_u - t_v < bound[u][v]`.
    bound: Vec<Vec<Option<i128>>>,
    /// Cross-component constraints as `(point, challenger, u, v, w)`.
    constraints: Vec<(usize, usize, usize, usize, i128)>,
    shortest: Vec<Vec<Option<i128>>>,
}

enum CellStatus {
    Infeasible,
    Feasible(CellData),
}

/// Runs the tracer on one support with integer points.
pub(crate) fn trace(job: &Job, points: &[(i128, i128)], execution: Execution) -> Result<Vec<Hit>, EngineError> {
    let m = job.support.len();
    let r = points.len();
    assert_eq!(m, r + 1 + job.k, "support size must be r + 1 + k");
    let pairing: Vec<Vec<i128>> = points
        .iter()
        .map(|&(x, y)| {
            job.support
                .iter()
                .map(|w| w.i as i128 * x + w.j as i128 * y)
                .collect()
        })
        .collect();
    let problem = Problem {
        support: &job.support,
        pairing,
        k: job.k,
        relations: &job.relations,
    };
    let seeds = problem.seeds()?;
    let mut visited: HashSet<Pairs> = seeds.iter().cloned().collect();
    let mut frontier = seeds;
    let mut hits = Vec::new();
    while !frontier.is_empty() {
        let results = execution.map(std::mem::take(&mut frontier), |pairs| problem.process(&pairs));
        for result in results {
            let (cell_hits, neighbours) = result?;
            hits.extend(cell_hits);
            for n in neighbours {
                if visited.insert(n.clone()) {
                    frontier.push(n);
                }
            }
        }
    }
    hits.sort_by(|a, b| a.pairs.cmp(&b.pairs).then(a.relations.cmp(&b.relations)));
    Ok(hits)
}

impl Problem<'_> {
    /// Cramer solutions on sub-supports that drop `k` terms, read off as cells.
    fn seeds(&self) -> Result<Vec<Pairs>, EngineError> {
        let m = self.support.len();
        let mut seeds = Vec::new();
        let mut last_error = None;
        let subsets = drop_subsets(m, self.k, 24);
        for dropped in subsets {
            let keep: Vec<usize> = (0..m).filter(|c| !dropped.contains(c)).collect();
            let matrix: Vec<Vec<i128>> = self
                .pairing
                .iter()
                .map(|row| keep.iter().map(|&c| row[c]).collect())
                .collect();
            let values = match cramer_values(&matrix) {
                Ok(v) => v,
                Err(e) => {
                    last_error = Some(e.to_string());
                    continue;
                }
            };
            // The Cramer value of column c is the valuation of the term at c.
            let mut pairs = Vec::with_capacity(self.pairing.len());
            let mut ok = true;
            for row in &self.pairing {
                let scores: Vec<i128> = keep.iter().zip(&values).map(|(&c, v)| v + row[c]).collect();
                let best = *scores.iter().max().expect("nonempty");
                let winners: Vec<usize> = (0..keep.len()).filter(|&t| scores[t] == best).collect();
                if winners.len() != 2 {
                    ok = false;
                    break;
                }
                pairs.push((keep[winners[0]] as u16, keep[winners[1]] as u16));
            }
            if ok {
                seeds.push(pairs);
            } else {
                last_error = Some("Cramer seed has a point on a vertex".into());
            }
        }
        if seeds.is_empty() {
            return Err(EngineError::Degenerate(
                last_error.unwrap_or_else(|| "no seed cell".into()),
            ));
        }
        seeds.sort();
        seeds.dedup();
        Ok(seeds)
    }

    fn analyze(&self, pairs: &Pairs) -> Result<CellStatus, EngineError> {
        let m = self.support.len();
        let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m];
        for (i, &(a, b)) in pairs.iter().enumerate() {
            adjacency[a as usize].push((b as usize, i));
            adjacency[b as usize].push((a as usize, i));
        }
        // Spanning forest: v_b = v_a + pairing[i][a] - pairing[i][b].
        let mut component = vec![usize::MAX; m];
        let mut base = vec![0i128; m];
        let mut count = 0;
        for root in 0..m {
            if component[root] != usize::MAX {
                continue;
            }
            component[root] = count;
            let mut stack = vec![root];
            while let Some(a) = stack.pop() {
                for &(b, i) in &adjacency[a] {
                    let value = base[a] + self.pairing[i][a] - self.pairing[i][b];
                    if component[b] == usize::MAX {
                        component[b] = count;
                        base[b] = value;
                        stack.push(b);
                    } else if base[b] != value {
                        return Ok(CellStatus::Infeasible);
                    }
                }
            }
            count += 1;
        }
        if count != self.k + 1 {
            // A cycle whose equations happen to agree.
            return Err(EngineError::Degenerate("tie pattern closes a consistent cycle".into()));
        }
        let size = self.k + 1;
        let mut bound: Vec<Vec<Option<i128>>> = vec![vec![None; size]; size];
        let mut constraints = Vec::new();
        for (i, &(a, b)) in pairs.iter().enumerate() {
            let (a, b) = (a as usize, b as usize);
            let row = &self.pairing[i];
            let level = base[a] + row[a];
            for c in 0..m {
                if c == a || c == b {
                    continue;
                }
                let w = level - (base[c] + row[c]);
                let (u, v) = (component[c], component[a]);
                if u == v {
                    if w < 0 {
                        return Ok(CellStatus::Infeasible);
                    }
                    if w == 0 {
                        return Err(EngineError::Degenerate("three terms tie identically at a point".into()));
                    }
                    continue;
                }
                constraints.push((i, c, u, v, w));
                let slot = &mut bound[u][v];
                if slot.is_none_or(|old| w < old) {
                    *slot = Some(w);
                }
            }
        }
        let mut shortest = bound.clone();
        for via in 0..size {
            for u in 0..size {
                let Some(uv) = shortest[u][via] else { continue };
                for v in 0..size {
                    if let Some(vw) = shortest[via][v] {
                        let cand = uv + vw;
                        if shortest[u][v].is_none_or(|old| cand < old) {
                            shortest[u][v] = Some(cand);
                        }
                    }
                }
            }
        }
        for (u, row) in shortest.iter().enumerate() {
            match row[u] {
                Some(c) if c < 0 => return Ok(CellStatus::Infeasible),
                Some(0) => {
                    return Err(EngineError::Degenerate("cell collapses onto a lower-dimensional face".into()))
                }
                _ => {}
            }
        }
        Ok(CellStatus::Feasible(CellData {
            component,
            base,
            bound,
            constraints,
            shortest,
        }))
    }

    fn process(&self, pairs: &Pairs) -> Result<(Vec<Hit>, Vec<Pairs>), EngineError> {
        let cell = match self.analyze(pairs)? {
            CellStatus::Infeasible => return Ok((Vec::new(), Vec::new())),
            CellStatus::Feasible(cell) => cell,
        };
        let hits = self.solutions(pairs, &cell)?;
        let mut neighbours = Vec::new();
        if self.k > 0 {
            for &(i, c, u, v, w) in &cell.constraints {
                if cell.shortest[u][v] != Some(w) {
                    continue;
                }
                let (a, b) = pairs[i];
                for keep in [a, b] {
                    let mut next = pairs.clone();
                    let c = c as u16;
                    next[i] = (keep.min(c), keep.max(c));
                    neighbours.push(next);
                }
            }
        }
        Ok((hits, neighbours))
    }

    /// Points of the open cell where `k` chosen relations hold, kept when the
    /// induced subdivision has exactly those relation cells and triangles.
    fn solutions(&self, pairs: &Pairs, cell: &CellData) -> Result<Vec<Hit>, EngineError> {
        let k = self.k;
        let m = self.support.len();
        if k == 0 {
            let heights = cell.base.clone();
            return Ok(match self.classify(&heights, &[])? {
                Verdict::Solution => vec![self.hit(pairs, heights, 1, Vec::new())],
                Verdict::Skip => Vec::new(),
            });
        }
        // Each relation restricted to the cell: Σ alpha_c t_c = beta over c = 1..k.
        let mut restricted: Vec<(usize, Vec<i128>, i128)> = Vec::new();
        for (q, rel) in self.relations.iter().enumerate() {
            let mut alpha = vec![0i128; k + 1];
            let mut beta = 0i128;
            for (&v, &coef) in rel.vertices.iter().zip(&rel.coefficients) {
                alpha[cell.component[v]] += coef as i128;
                beta -= coef as i128 * cell.base[v];
            }
            let alpha = alpha[1..].to_vec();
            if alpha.iter().all(|&a| a == 0) {
                if beta == 0 && self.relation_is_lower_face(rel, &cell.base) {
                    return Err(EngineError::Degenerate(
                        "a relation holds identically on a cell".into(),
                    ));
                }
                continue;
            }
            restricted.push((q, alpha, beta));
        }
        let mut hits = Vec::new();
        let mut chosen = Vec::with_capacity(k);
        self.choose(pairs, cell, &restricted, 0, &mut chosen, &mut hits, m)?;
        Ok(hits)
    }

    #[allow(clippy::too_many_arguments)]
    fn choose(
        &self,
        pairs: &Pairs,
        cell: &CellData,
        restricted: &[(usize, Vec<i128>, i128)],
        start: usize,
        chosen: &mut Vec<usize>,
        hits: &mut Vec<Hit>,
        m: usize,
    ) -> Result<(), EngineError> {
        if chosen.len() == self.k {
            return self.try_candidate(pairs, cell, restricted, chosen, hits, m);
        }
        for idx in start..restricted.len() {
            if restricted.len() - idx < self.k - chosen.len() {
                break;
            }
            chosen.push(idx);
            self.choose(pairs, cell, restricted, idx + 1, chosen, hits, m)?;
            chosen.pop();
        }
        Ok(())
    }

    fn try_candidate(
        &self,
        pairs: &Pairs,
        cell: &CellData,
        restricted: &[(usize, Vec<i128>, i128)],
        chosen: &[usize],
        hits: &mut Vec<Hit>,
        m: usize,
    ) -> Result<(), EngineError> {
        let k = self.k;
        let matrix: Vec<Vec<i128>> = chosen.iter().map(|&c| restricted[c].1.clone()).collect();
        let rhs: Vec<i128> = chosen.iter().map(|&c| restricted[c].2).collect();
        let det = determinant(&matrix);
        if det == 0 {
            return Ok(());
        }
        // Cramer's rule: t_c = det_c / det, normalised to a positive denominator.
        let sign = det.signum();
        let den = det.abs();
        let mut numer = vec![0i128; k + 1];
        for c in 0..k {
            let mut replaced = matrix.clone();
            for (row, value) in replaced.iter_mut().zip(&rhs) {
                row[c] = *value;
            }
            numer[c + 1] = determinant(&replaced) * sign;
        }
        let mut on_boundary = false;
        for u in 0..=k {
            for v in 0..=k {
                if let Some(b) = cell.bound[u][v] {
                    let lhs = numer[u] - numer[v];
                    let limit = b * den;
                    if lhs > limit {
                        return Ok(());
                    }
                    on_boundary |= lhs == limit;
                }
            }
        }
        let heights: Vec<i128> = (0..m).map(|w| den * cell.base[w] + numer[cell.component[w]]).collect();
        let rel_ids: Vec<usize> = chosen.iter().map(|&c| restricted[c].0).collect();
        for &q in &rel_ids {
            if !self.relation_is_lower_face(&self.relations[q], &heights) {
                return Ok(());
            }
        }
        match (self.classify(&heights, &rel_ids)?, on_boundary) {
            (Verdict::Skip, _) => {}
            // A would-be solution with a point where three terms tie.
            (Verdict::Solution, true) => {
                return Err(EngineError::Degenerate("a point lies on a vertex of a curve".into()))
            }
            (Verdict::Solution, false) => {
                let mut rel_sorted = rel_ids;
                rel_sorted.sort_unstable();
                hits.push(self.hit(pairs, heights, den, rel_sorted));
            }
        }
        Ok(())
    }

    fn hit(&self, pairs: &Pairs, numerators: Vec<i128>, denominator: i128, relations: Vec<usize>) -> Hit {
        Hit {
            numerators,
            denominator,
            pairs: pairs.iter().map(|&(a, b)| (a as usize, b as usize)).collect(),
            relations,
        }
    }

    /// Whether the plane through the relation's vertices supports the lifted
    /// points `(ω, -value(ω))` from below.
    fn relation_is_lower_face(&self, rel: &Relation, values: &[i128]) -> bool {
        let s = self.support;
        let v = &rel.vertices;
        let Some((a, b, c)) = first_triangle(s, v) else {
            return false;
        };
        let h = |w: usize| -values[w];
        let (ux, uy, uh) = ((s[b].i - s[a].i) as i128, (s[b].j - s[a].j) as i128, h(b) - h(a));
        let (vx, vy, vh) = ((s[c].i - s[a].i) as i128, (s[c].j - s[a].j) as i128, h(c) - h(a));
        let nx = uy * vh - uh * vy;
        let ny = uh * vx - ux * vh;
        let nz = ux * vy - uy * vx;
        (0..s.len()).all(|p| {
            let wx = (s[p].i - s[a].i) as i128;
            let wy = (s[p].j - s[a].j) as i128;
            nx * wx + ny * wy + nz * (h(p) - h(a)) >= 0
        })
    }

    /// Compares the lower hull of a candidate with the cells it was built for.
    ///
    /// Merged faces or hidden terms describe legitimate non-nodal curves and
    /// are skipped; extra non-triangular cells beside the wanted ones cannot
    /// occur for generic points.
    fn classify(&self, heights: &[i128], chosen: &[usize]) -> Result<Verdict, EngineError> {
        let lifted: Vec<i128> = heights.iter().map(|&v| -v).collect();
        let faces = lower_hull_faces(self.support, &lifted).expect("support is two-dimensional");
        let mut visible = vec![false; self.support.len()];
        for face in &faces {
            for &p in face {
                visible[p] = true;
            }
        }
        if visible.iter().any(|&v| !v) {
            return Ok(Verdict::Skip);
        }
        let mut big: Vec<Vec<usize>> = faces
            .into_iter()
            .filter(|f| f.len() > 3)
            .map(|mut f| {
                f.sort_unstable();
                f
            })
            .collect();
        big.sort();
        let mut wanted: Vec<Vec<usize>> = chosen.iter().map(|&q| self.relations[q].sorted_vertices()).collect();
        wanted.sort();
        if big == wanted {
            return Ok(Verdict::Solution);
        }
        if wanted.iter().all(|w| big.contains(w)) {
            return Err(EngineError::Degenerate(
                "an unexpected non-triangular cell appears".into(),
            ));
        }
        Ok(Verdict::Skip)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Verdict {
    Solution,
    Skip,
}

fn first_triangle(s: &[LatticePoint], v: &[usize]) -> Option<(usize, usize, usize)> {
    for x in 0..v.len() {
        for y in x + 1..v.len() {
            for z in y + 1..v.len() {
                let o = orientation(s[v[x]], s[v[y]], s[v[z]]);
                if o > 0 {
                    return Some((v[x], v[y], v[z]));
                }
                if o < 0 {
                    return Some((v[x], v[z], v[y]));
                }
            }
        }
    }
    None
}

/// Integer determinant by cofactor expansion (the matrices here are at most 4×4).
fn determinant(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => (0..n)
            .map(|c| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if c % 2 == 0 { 1 } else { -1 };
                sign * m[0][c] * determinant(&minor)
            })
            .sum(),
    }
}

/// Up to `limit` subsets of size `k` of `0..m`, taken from the end first so
/// the earliest indices (boundary points) stay in the seed support.
fn drop_subsets(m: usize, k: usize, limit: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(m: usize, k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        if current.len() == k {
            out.push(current.iter().map(|&c| m - 1 - c).collect());
            return;
        }
        for c in start..m {
            current.push(c);
            rec(m, k, c + 1, current, out, limit);
            current.pop();
            if out.len() >= limit {
                return;
            }
        }
    }
    rec(m, k, 0, &mut current, &mut out, limit);
    out
}
