//! Counting nodal tropical curves through points: Severi degrees and
//! Welschinger signed counts.
//!
//! Counts are computed by [`engine`] cell tracing. Each solution is then
//! re-derived through the public pipeline: [`dual_subdivision`] rebuilds the
//! curve from the traced lift, after which [`solve_lift`] must reproduce that
//! lift from the points alone.

pub(crate) mod engine;
mod sampler;
mod skeleton;

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::lattice_geom::{LatticePoint, LatticePolygon};
use crate::parallel::Execution;
use crate::rational::{common_denominator, Rational, RationalPoint};
use crate::tropical_curve::{dual_subdivision, CurveEdge, Subdivision, TropicalCurve, TropicalPolynomial};
use crate::tropical_solver::{solve_lift, LiftOutcome, SolverError};

use engine::{EngineError, Hit, Job, Relation};

pub use sampler::sample_line_points;
pub use skeleton::{enumerate_nodal_subdivisions, regular_lift};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CountError {
    #[error("{found} nodes requested but at most {max} fit this polygon")]
    NodesOutOfRange { found: usize, max: usize },
    #[error("expected {expected} points, got {found}")]
    PointCount { expected: usize, found: usize },
    #[error("point configuration contains a repeated point")]
    RepeatedPoint,
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("coordinates are too large for exact machine arithmetic")]
    NumericRange,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl From<EngineError> for CountError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Degenerate(m) => CountError::Degenerate(m),
        }
    }
}

/// Points through which curves are counted, with the seed used to sample them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfiguration {
    points: Vec<RationalPoint>,
    seed: Option<u64>,
}

impl PointConfiguration {
    pub fn new(points: Vec<RationalPoint>) -> Result<Self, CountError> {
        let distinct: HashSet<&RationalPoint> = points.iter().collect();
        if distinct.len() != points.len() {
            return Err(CountError::RepeatedPoint);
        }
        Ok(Self { points, seed: None })
    }

    /// Points that came from the sampler with `seed`, kept for the record.
    pub fn sampled(points: Vec<RationalPoint>, seed: u64) -> Result<Self, CountError> {
        let mut config = Self::new(points)?;
        config.seed = Some(seed);
        Ok(config)
    }

    pub fn points(&self) -> &[RationalPoint] {
        &self.points
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Number of points needed for curves with `n_nodes` nodes on `polygon`.
///
/// Node counts beyond the number of interior points are allowed (reducible
/// curves can have more nodes than their genus bound), as long as at least
/// one point remains.
pub fn point_count(polygon: &LatticePolygon, n_nodes: usize) -> Result<usize, CountError> {
    let total = polygon.lattice_points().all.len();
    if n_nodes + 2 > total {
        return Err(CountError::NodesOutOfRange {
            found: n_nodes,
            max: total - 2,
        });
    }
    Ok(total - 1 - n_nodes)
}

/// `|Δ ∩ Z²| - 1 - n_nodes` points on a steep line, deterministic in `seed`.
pub fn sample_points(polygon: &LatticePolygon, n_nodes: usize, seed: u64) -> Result<PointConfiguration, CountError> {
    let r = point_count(polygon, n_nodes)?;
    PointConfiguration::sampled(sample_line_points(polygon, r, seed), seed)
}

/// One nodal tropical curve through the points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodalAmoebaRecord {
    /// Dual subdivision with the solved lift.
    pub subdivision: Subdivision,
    pub curve: TropicalCurve,
    /// Subdivision edge whose dual curve edge contains each point.
    pub assignment: Vec<usize>,
    pub weight: u64,
    pub irreducible: bool,
    pub welschinger_sign: i8,
}

/// Result of a count, echoing the query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountResult<R = NodalAmoebaRecord> {
    pub total: i64,
    pub records: Vec<R>,
    pub polygon: LatticePolygon,
    pub n_nodes: usize,
    pub points: PointConfiguration,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CountOptions {
    pub execution: Execution,
}

/// Product of the double areas of the triangles of a nodal subdivision.
pub fn weight(s: &Subdivision) -> u64 {
    s.cells()
        .iter()
        .filter(|c| c.polygon.is_triangle())
        .map(|c| c.polygon.double_area() as u64)
        .product()
}

/// Sign with which a nodal curve enters the Welschinger count: zero with an
/// even-length edge, otherwise the parity of interior points of triangles.
pub fn welschinger_sign(s: &Subdivision) -> i8 {
    if s.edges().iter().any(|e| e.lattice_length() % 2 == 0) {
        return 0;
    }
    let interior: i64 = s
        .cells()
        .iter()
        .filter(|c| c.polygon.is_triangle())
        .map(|c| c.polygon.interior_count())
        .sum();
    if interior % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Whether the curve is connected through its vertices when each
/// four-valent vertex only links opposite edges.
pub fn is_irreducible(curve: &TropicalCurve) -> Result<bool, CountError> {
    let s = curve.dual();
    let mut parent: Vec<usize> = (0..s.edges().len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut root = x;
        while parent[root] != root {
            root = parent[root];
        }
        let mut y = x;
        while parent[y] != root {
            let next = parent[y];
            parent[y] = root;
            y = next;
        }
        root
    }
    fn union(parent: &mut [usize], a: usize, b: usize) {
        let (ra, rb) = (find(parent, a), find(parent, b));
        parent[ra] = rb;
    }
    for cell in s.cells() {
        let e = &cell.edges;
        if cell.polygon.is_triangle() {
            union(&mut parent, e[0], e[1]);
            union(&mut parent, e[1], e[2]);
        } else if cell.polygon.is_parallelogram() {
            union(&mut parent, e[0], e[2]);
            union(&mut parent, e[1], e[3]);
        } else {
            return Err(CountError::Unsupported(format!(
                "cell with {} vertices is neither a triangle nor a parallelogram",
                cell.vertices.len()
            )));
        }
    }
    let root = find(&mut parent, 0);
    Ok((0..parent.len()).all(|x| find(&mut parent, x) == root))
}

/// Severi degree of `polygon` for `n_nodes` nodes through `points`.
pub fn count_nodal(
    polygon: &LatticePolygon,
    n_nodes: usize,
    points: &PointConfiguration,
) -> Result<CountResult, CountError> {
    count_nodal_with(polygon, n_nodes, points, &CountOptions::default())
}

pub fn count_nodal_with(
    polygon: &LatticePolygon,
    n_nodes: usize,
    points: &PointConfiguration,
    options: &CountOptions,
) -> Result<CountResult, CountError> {
    let r = point_count(polygon, n_nodes)?;
    if points.len() != r {
        return Err(CountError::PointCount {
            expected: r,
            found: points.len(),
        });
    }
    let lp = polygon.lattice_points();
    let mut jobs = Vec::new();
    // k parallelograms, one per node beyond the missing interior points.
    for k in 0..=n_nodes {
        let Some(kept) = (lp.interior.len() + k).checked_sub(n_nodes) else {
            continue;
        };
        // Euler's formula fixes the triangle count at 2|V| - 2 - |boundary| - 2k.
        if 2 * (lp.boundary.len() + kept) < 2 + lp.boundary.len() + 2 * k {
            continue;
        }
        for chosen in subsets(&lp.interior, kept) {
            let mut support = lp.boundary.clone();
            support.extend(chosen);
            support.sort();
            let relations = if k == 0 { Vec::new() } else { empty_parallelograms(&support) };
            jobs.push(Job { support, k, relations });
        }
    }
    let solved = run_jobs(&jobs, points.points(), options.execution)?;
    let mut records = Vec::with_capacity(solved.len());
    for s in solved {
        if !s.subdivision.is_nodal() {
            return Err(CountError::Internal("traced curve is not nodal".into()));
        }
        if s.subdivision.rank() != r as i64 {
            return Err(CountError::Internal("traced curve has the wrong rank".into()));
        }
        let weight = weight(&s.subdivision);
        let irreducible = is_irreducible(&s.curve)?;
        let welschinger_sign = welschinger_sign(&s.subdivision);
        records.push(NodalAmoebaRecord {
            subdivision: s.subdivision,
            curve: s.curve,
            assignment: s.assignment,
            weight,
            irreducible,
            welschinger_sign,
        });
    }
    let total = records.iter().map(|rec| rec.weight as i64).sum();
    Ok(CountResult {
        total,
        records,
        polygon: polygon.clone(),
        n_nodes,
        points: points.clone(),
    })
}

/// Signed count of real rational curves: irreducible nodal curves with the
/// maximal number of nodes, each with its Welschinger sign.
pub fn count_welschinger(polygon: &LatticePolygon, points: &PointConfiguration) -> Result<CountResult, CountError> {
    count_welschinger_with(polygon, points, &CountOptions::default())
}

pub fn count_welschinger_with(
    polygon: &LatticePolygon,
    points: &PointConfiguration,
    options: &CountOptions,
) -> Result<CountResult, CountError> {
    let n_nodes = polygon.lattice_points().interior.len();
    let mut result = count_nodal_with(polygon, n_nodes, points, options)?;
    result.records.retain(|rec| rec.irreducible);
    result.total = result.records.iter().map(|rec| rec.welschinger_sign as i64).sum();
    Ok(result)
}

/// A traced curve re-derived through the public pipeline.
pub(crate) struct SolvedCurve {
    pub subdivision: Subdivision,
    pub curve: TropicalCurve,
    pub assignment: Vec<usize>,
}

/// Traces every job and verifies each hit; curves come back in canonical order.
pub(crate) fn run_jobs(
    jobs: &[Job],
    points: &[RationalPoint],
    execution: Execution,
) -> Result<Vec<SolvedCurve>, CountError> {
    let (scaled, scale) = scale_points(points, jobs)?;
    let traced = execution.map(jobs.iter().collect(), |job| trace_job(job, &scaled, execution));
    let mut hits: Vec<(&Job, Hit)> = Vec::new();
    for (job, result) in jobs.iter().zip(traced) {
        hits.extend(result?.into_iter().map(|h| (job, h)));
    }
    let verified = execution.map(hits, |(job, hit)| verify(job, &hit, &scale, points));
    let mut curves = verified.into_iter().collect::<Result<Vec<_>, _>>()?;
    curves.sort_by_cached_key(canonical_key);
    for pair in curves.windows(2) {
        if canonical_key(&pair[0]) == canonical_key(&pair[1]) {
            return Err(CountError::Internal("the same curve was traced twice".into()));
        }
    }
    Ok(curves)
}

fn trace_job(job: &Job, points: &[(i128, i128)], execution: Execution) -> Result<Vec<Hit>, CountError> {
    Ok(engine::trace(job, points, execution)?)
}

type CanonicalKey = (Vec<Vec<LatticePoint>>, Vec<[LatticePoint; 2]>);

fn canonical_key(c: &SolvedCurve) -> CanonicalKey {
    let s = &c.subdivision;
    let cells = s.cells().iter().map(|cell| cell.polygon.vertices().to_vec()).collect();
    let assignment = c
        .assignment
        .iter()
        .map(|&e| {
            let [a, b] = s.edges()[e].ends;
            [s.vertices()[a], s.vertices()[b]]
        })
        .collect();
    (cells, assignment)
}

/// Largest magnitude allowed for a scaled coordinate: keeps every product in
/// the engine and the hull test well inside `i128`.
const COORDINATE_LIMIT: i128 = 1 << 40;

fn scale_points(points: &[RationalPoint], jobs: &[Job]) -> Result<(Vec<(i128, i128)>, BigInt), CountError> {
    let scale = common_denominator(points.iter().flat_map(|p| [&p.x, &p.y]));
    let factor = Rational::from_integer(scale.clone());
    let scaled = points
        .iter()
        .map(|p| {
            let x = (&p.x * &factor).to_integer().to_i128();
            let y = (&p.y * &factor).to_integer().to_i128();
            match (x, y) {
                (Some(x), Some(y)) if x.abs() < COORDINATE_LIMIT && y.abs() < COORDINATE_LIMIT => Ok((x, y)),
                _ => Err(CountError::NumericRange),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let exponent_limit = jobs
        .iter()
        .flat_map(|j| j.support.iter())
        .map(|p| p.i.abs().max(p.j.abs()))
        .max()
        .unwrap_or(0);
    if exponent_limit > 64 || points.len() > 64 {
        return Err(CountError::NumericRange);
    }
    Ok((scaled, scale))
}

fn verify(job: &Job, hit: &Hit, scale: &BigInt, points: &[RationalPoint]) -> Result<SolvedCurve, CountError> {
    let denominator = BigInt::from(hit.denominator) * scale;
    let f = TropicalPolynomial::plane(
        job.support
            .iter()
            .zip(&hit.numerators)
            .map(|(&p, &v)| (p, Rational::new(BigInt::from(v), denominator.clone()))),
    )
    .map_err(|e| CountError::Internal(e.to_string()))?;
    let lifted = dual_subdivision(&f).map_err(|e| CountError::Internal(e.to_string()))?;
    if lifted.vertices() != job.support.as_slice() {
        return Err(CountError::Internal("traced lift hides a support point".into()));
    }
    let expected: Vec<Vec<LatticePoint>> = {
        let mut v: Vec<Vec<LatticePoint>> = hit
            .relations
            .iter()
            .map(|&q| relation_points(&job.relations[q], &job.support))
            .collect();
        v.sort();
        v
    };
    let mut found: Vec<Vec<LatticePoint>> = lifted
        .cells()
        .iter()
        .filter(|c| !c.polygon.is_triangle())
        .map(|c| {
            let mut v = c.polygon.vertices().to_vec();
            v.sort();
            v
        })
        .collect();
    found.sort();
    if found != expected {
        return Err(CountError::Internal("traced lift has unexpected cells".into()));
    }
    let mut assignment = Vec::with_capacity(hit.pairs.len());
    for &(a, b) in &hit.pairs {
        let (va, vb) = (
            lifted.vertex_index(job.support[a]).expect("support vertex"),
            lifted.vertex_index(job.support[b]).expect("support vertex"),
        );
        let e = lifted
            .edge_between(va, vb)
            .ok_or_else(|| CountError::Internal("tying pair is not an edge".into()))?;
        assignment.push(e);
    }
    // Non-nodal (cuspidal) subdivisions can have rank different from the
    // number of points, so the linear re-solve applies to nodal ones only.
    if lifted.is_nodal() {
        match solve_lift(&lifted.skeleton(), &assignment, points) {
            Ok(LiftOutcome::Solved(lift)) if lift.as_slice() == lifted.lift().expect("lifted") => {}
            Ok(other) => {
                return Err(CountError::Internal(format!(
                    "re-solving the point conditions disagrees: {other:?}"
                )))
            }
            Err(SolverError::Degenerate(m)) => return Err(CountError::Degenerate(m)),
            Err(e) => return Err(CountError::Internal(e.to_string())),
        }
    }
    let curve = TropicalCurve::from_subdivision(lifted.clone()).map_err(|e| CountError::Internal(e.to_string()))?;
    for (x, &e) in points.iter().zip(&assignment) {
        if !curve.contains(x) || !on_curve_edge(&curve, e, x) {
            return Err(CountError::Internal("a point is off its traced edge".into()));
        }
    }
    Ok(SolvedCurve {
        subdivision: lifted,
        curve,
        assignment,
    })
}

fn on_curve_edge(curve: &TropicalCurve, e: usize, x: &RationalPoint) -> bool {
    let curve_edge = curve.curve_edge(e);
    let start = match curve_edge {
        CurveEdge::Bounded(k) => &curve.vertices()[curve.bounded_edges()[k].from],
        CurveEdge::Ray(k) => &curve.vertices()[curve.rays()[k].vertex],
    };
    let direction = match curve_edge {
        CurveEdge::Bounded(k) => curve.bounded_edges()[k].direction,
        CurveEdge::Ray(k) => curve.rays()[k].direction,
    };
    let (dx, dy) = (&x.x - &start.x, &x.y - &start.y);
    let cross = dx * Rational::from_integer(direction.j.into()) - dy * Rational::from_integer(direction.i.into());
    cross.is_zero() && crate::tropical_solver::position_on_edge(curve, e, x) == std::cmp::Ordering::Greater
}

fn relation_points(rel: &Relation, support: &[LatticePoint]) -> Vec<LatticePoint> {
    let mut v: Vec<LatticePoint> = rel.vertices.iter().map(|&k| support[k]).collect();
    v.sort();
    v
}

/// Lattice parallelograms with vertices in `support` containing no other support point.
pub(crate) fn empty_parallelograms(support: &[LatticePoint]) -> Vec<Relation> {
    let n = support.len();
    let mut out = Vec::new();
    let index = |p: LatticePoint| support.binary_search(&p).ok();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if a == b || b == c || a == c {
                    continue;
                }
                let (pa, pb, pc) = (support[a], support[b], support[c]);
                // a is the smallest corner, b and c its neighbours in ccw order.
                if !(pa < pb && pa < pc) || crate::lattice_geom::orientation(pa, pb, pc) <= 0 {
                    continue;
                }
                let Some(d) = index(pb + pc - pa) else { continue };
                let corners = vec![pa, pb, support[d], pc];
                let Ok(cell) = LatticePolygon::new(corners) else { continue };
                let stray = support
                    .iter()
                    .enumerate()
                    .any(|(k, &p)| ![a, b, c, d].contains(&k) && cell.contains(p));
                if stray {
                    continue;
                }
                let q = [a, b, d, c];
                let rel = Relation::of_quadrangle(support, q);
                out.push(rel);
            }
        }
    }
    out
}

/// All `size`-element subsets of `items`, in lexicographic order of positions.
pub(crate) fn subsets<T: Clone>(items: &[T], size: usize) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(size);
    fn rec<T: Clone>(items: &[T], size: usize, start: usize, current: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        for k in start..items.len() {
            if items.len() - k < size - current.len() {
                break;
            }
            current.push(items[k].clone());
            rec(items, size, k + 1, current, out);
            current.pop();
        }
    }
    if size <= items.len() {
        rec(items, size, 0, &mut current, &mut out);
    }
    out
}
