//! One-cuspidal tropical curves: the five admissible dual cell patterns, their
//! multiplicities, and counts of cuspidal curves through points.
//!
//! Reference shapes, up to affine lattice automorphisms:
//!
//! | name | vertices | role |
//! |------|----------|------|
//! | A | (1,0), (2,0), (1,2), (0,1) | quadrangle, one interior point, unit edges |
//! | B | (0,0), (2,3), (3,2) | triangle, two interior points, unit edges |
//! | C | (0,0), (2,0), (1,2) | triangle, one interior point, one edge of length 2 |
//! | D | (0,0), (2,0), (1,1), (0,1) | quadrangle, no interior point, one edge of length 2 |
//! | E | (1,0), (2,0), (1,2), (0,2) | excluded parallelogram |

use std::sync::OnceLock;

use num_integer::Integer;

use crate::enumeration::engine::{Job, Relation};
use crate::enumeration::{run_jobs, sample_line_points, subsets, CountError, CountOptions, CountResult, PointConfiguration};
use crate::lattice_geom::{LatticePoint, LatticePolygon};
use crate::tropical_curve::{Subdivision, TropicalCurve};

/// Which of the five admissible configurations a subdivision shows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CuspidalKind {
    /// A quadrangle of shape A, the rest unit triangles.
    QuadrangleA,
    /// A triangle of shape B, the rest unit triangles.
    TriangleB,
    /// A triangle of shape C sharing its length-2 edge with a triangle of double area 2.
    TriangleCPlusArea1,
    /// A quadrangle of shape D sharing its length-2 edge with a triangle of double area 2.
    QuadrangleDPlusArea1,
    /// Two triangles of double area 3 sharing an edge of length 3.
    TwoTrianglesLength3,
}

impl CuspidalKind {
    pub fn name(self) -> &'static str {
        match self {
            CuspidalKind::QuadrangleA => "quadrangle-a",
            CuspidalKind::TriangleB => "triangle-b",
            CuspidalKind::TriangleCPlusArea1 => "triangle-c-plus-area-1",
            CuspidalKind::QuadrangleDPlusArea1 => "quadrangle-d-plus-area-1",
            CuspidalKind::TwoTrianglesLength3 => "two-triangles-length-3",
        }
    }

    fn has_quadrangle(self) -> bool {
        matches!(self, CuspidalKind::QuadrangleA | CuspidalKind::QuadrangleDPlusArea1)
    }
}

/// A matched pattern, with the indices of its non-unit cells in the subdivision
/// (the characteristic cell first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspidalPattern {
    pub kind: CuspidalKind,
    pub cells: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CuspidalError {
    #[error("the pattern does not match the subdivision")]
    PatternMismatch,
    #[error("assignment lists an edge that does not exist")]
    BadAssignment,
    #[error("marked edges contain a cycle")]
    MarkedCycle,
    #[error("marked graph has {0} components instead of two")]
    ComponentCount(usize),
    #[error("all vertices of the quadrangle lie in one marked component")]
    QuadrangleInOneComponent,
    #[error("the two parallel sides of the quadrangle lie in different marked components")]
    ParallelSidesSplit,
    #[error("within-component vectors do not span a full-rank lattice")]
    DegenerateLattice,
    #[error("the weight depends on the choice of cross-component vector")]
    AmbiguousWeight,
}

/// The reference shapes as vertex lists.
pub fn reference_shape(name: char) -> Option<LatticePolygon> {
    let pts: &[(i64, i64)] = match name {
        'A' => &[(1, 0), (2, 0), (1, 2), (0, 1)],
        'B' => &[(0, 0), (2, 3), (3, 2)],
        'C' => &[(0, 0), (2, 0), (1, 2)],
        'D' => &[(0, 0), (2, 0), (1, 1), (0, 1)],
        'E' => &[(1, 0), (2, 0), (1, 2), (0, 2)],
        _ => return None,
    };
    Some(LatticePolygon::new(pts.iter().map(|&(i, j)| LatticePoint::new(i, j)).collect()).expect("reference shapes are convex"))
}

fn normal_forms() -> &'static [Vec<LatticePoint>; 5] {
    static FORMS: OnceLock<[Vec<LatticePoint>; 5]> = OnceLock::new();
    FORMS.get_or_init(|| ['A', 'B', 'C', 'D', 'E'].map(|c| reference_shape(c).expect("known").unimodular_normal_form()))
}

/// Which reference shape a polygon is equivalent to, if any.
pub fn shape_of(polygon: &LatticePolygon) -> Option<char> {
    let form = polygon.unimodular_normal_form();
    ['A', 'B', 'C', 'D', 'E']
        .into_iter()
        .zip(normal_forms().iter())
        .find(|(_, f)| **f == form)
        .map(|(c, _)| c)
}

/// The cuspidal pattern of a subdivision, or `None` if it is not one-cuspidal.
pub fn classify_cuspidal(s: &Subdivision) -> Option<CuspidalPattern> {
    let big: Vec<usize> = (0..s.cells().len())
        .filter(|&c| s.cells()[c].polygon.double_area() > 1)
        .collect();
    let shape = |c: usize| shape_of(&s.cells()[c].polygon);
    let area = |c: usize| s.cells()[c].polygon.double_area();
    let triangle = |c: usize| s.cells()[c].polygon.is_triangle();
    let shared_length = |a: usize, b: usize| {
        s.edges()
            .iter()
            .find(|e| (e.left == Some(a) && e.right == Some(b)) || (e.left == Some(b) && e.right == Some(a)))
            .map(|e| e.lattice_length())
    };
    match big.as_slice() {
        &[c] => match shape(c) {
            Some('A') => Some(CuspidalPattern {
                kind: CuspidalKind::QuadrangleA,
                cells: vec![c],
            }),
            Some('B') => Some(CuspidalPattern {
                kind: CuspidalKind::TriangleB,
                cells: vec![c],
            }),
            _ => None,
        },
        &[x, y] => {
            for (main, partner) in [(x, y), (y, x)] {
                let partner_fits = triangle(partner) && area(partner) == 2 && shared_length(main, partner) == Some(2);
                match shape(main) {
                    Some('C') if partner_fits => {
                        return Some(CuspidalPattern {
                            kind: CuspidalKind::TriangleCPlusArea1,
                            cells: vec![main, partner],
                        })
                    }
                    Some('D') if partner_fits => {
                        return Some(CuspidalPattern {
                            kind: CuspidalKind::QuadrangleDPlusArea1,
                            cells: vec![main, partner],
                        })
                    }
                    _ => {}
                }
            }
            let both = triangle(x) && triangle(y) && area(x) == 3 && area(y) == 3;
            if both && shared_length(x, y) == Some(3) {
                return Some(CuspidalPattern {
                    kind: CuspidalKind::TwoTrianglesLength3,
                    cells: vec![x, y],
                });
            }
            None
        }
        _ => None,
    }
}

/// Subdivision vertices joined by the edges that carry the points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedGraph {
    /// `(from, to)` vertex indices of each marked edge.
    pub edges: Vec<(usize, usize)>,
    /// Component label of every subdivision vertex, numbered by first appearance.
    pub component: Vec<usize>,
    pub component_count: usize,
}

impl MarkedGraph {
    /// Builds the graph and checks it is a forest.
    pub fn new(s: &Subdivision, assignment: &[usize]) -> Result<Self, CuspidalError> {
        let n = s.vertices().len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut edges = Vec::with_capacity(assignment.len());
        for &e in assignment {
            let edge = s.edges().get(e).ok_or(CuspidalError::BadAssignment)?;
            let [a, b] = edge.ends;
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return Err(CuspidalError::MarkedCycle);
            }
            parent[ra] = rb;
            edges.push((a, b));
        }
        let mut label = vec![usize::MAX; n];
        let mut component = Vec::with_capacity(n);
        let mut count = 0;
        for v in 0..n {
            let root = find(&mut parent, v);
            if label[root] == usize::MAX {
                label[root] = count;
                count += 1;
            }
            component.push(label[root]);
        }
        Ok(Self {
            edges,
            component,
            component_count: count,
        })
    }
}

/// Multiplicity of a one-cuspidal curve.
///
/// Triangle-only patterns have fixed weights 5, 6 and 6. Quadrangle patterns
/// use the marked graph: `w` is the least positive `c` such that `c · v`
/// lies in the lattice spanned by differences of quadrangle vertices in the
/// same component, for `v` joining vertices in different components; the
/// weight is `w` for shape A and `3w` for shape D.
pub fn cuspidal_weight(s: &Subdivision, pattern: &CuspidalPattern, assignment: &[usize]) -> Result<u64, CuspidalError> {
    if classify_cuspidal(s).as_ref() != Some(pattern) {
        return Err(CuspidalError::PatternMismatch);
    }
    match pattern.kind {
        CuspidalKind::TriangleB => Ok(5),
        CuspidalKind::TriangleCPlusArea1 | CuspidalKind::TwoTrianglesLength3 => Ok(6),
        CuspidalKind::QuadrangleA => quadrangle_factor(s, pattern.cells[0], assignment, false),
        CuspidalKind::QuadrangleDPlusArea1 => Ok(3 * quadrangle_factor(s, pattern.cells[0], assignment, true)?),
    }
}

/// The factor `w` of a quadrangle pattern.
pub fn quadrangle_factor(s: &Subdivision, cell: usize, assignment: &[usize], shape_d: bool) -> Result<u64, CuspidalError> {
    let graph = MarkedGraph::new(s, assignment)?;
    if graph.component_count != 2 {
        return Err(CuspidalError::ComponentCount(graph.component_count));
    }
    let corners = &s.cells()[cell].vertices;
    let comp: Vec<usize> = corners.iter().map(|&v| graph.component[v]).collect();
    if comp.iter().all(|&c| c == comp[0]) {
        return Err(CuspidalError::QuadrangleInOneComponent);
    }
    if shape_d {
        // The long edge is the one of lattice length 2; the opposite short edge is parallel to it.
        let n = corners.len();
        let long = (0..n)
            .find(|&k| {
                let (a, b) = (s.vertices()[corners[k]], s.vertices()[corners[(k + 1) % n]]);
                (b - a).content() == 2
            })
            .expect("shape D has an edge of length 2");
        let lower = [long, (long + 1) % n];
        let upper = [(long + 2) % n, (long + 3) % n];
        if comp[lower[0]] == comp[lower[1]] && comp[upper[0]] == comp[upper[1]] && comp[lower[0]] != comp[upper[0]] {
            return Err(CuspidalError::ParallelSidesSplit);
        }
    }
    let pts: Vec<LatticePoint> = corners.iter().map(|&v| s.vertices()[v]).collect();
    let mut within = Vec::new();
    let mut across = Vec::new();
    for a in 0..pts.len() {
        for b in a + 1..pts.len() {
            let d = pts[b] - pts[a];
            if comp[a] == comp[b] {
                within.push(d);
            } else {
                across.push(d);
            }
        }
    }
    let basis = lattice_basis(&within).ok_or(CuspidalError::DegenerateLattice)?;
    let mut factors = across.iter().map(|&v| multiple_in_lattice(basis, v));
    let w = factors.next().expect("some vertices lie in different components");
    if factors.any(|f| f != w) {
        return Err(CuspidalError::AmbiguousWeight);
    }
    Ok(w as u64)
}

/// Upper triangular basis `[(a, b), (0, c)]` with `a, c > 0` of the lattice
/// spanned by `vectors`, or `None` if it has rank below two.
fn lattice_basis(vectors: &[LatticePoint]) -> Option<[(i64, i64); 2]> {
    let mut first: (i64, i64) = (0, 0);
    let mut second: i64 = 0;
    for v in vectors {
        let mut row = (v.i, v.j);
        // Euclid on the first coordinate between `first` and `row`.
        while row.0 != 0 {
            let q = Integer::div_floor(&first.0, &row.0);
            let rem = (first.0 - q * row.0, first.1 - q * row.1);
            first = row;
            row = rem;
        }
        second = second.gcd(&row.1);
    }
    if first.0 < 0 {
        first = (-first.0, -first.1);
    }
    if first.0 == 0 || second == 0 {
        return None;
    }
    Some([(first.0, first.1.rem_euclid(second)), (0, second)])
}

/// Least `c > 0` with `c · v` in the lattice with the given basis.
fn multiple_in_lattice(basis: [(i64, i64); 2], v: LatticePoint) -> i64 {
    let [(a, b), (_, c)] = basis;
    // k·v = y1 (a, b) + y2 (0, c) needs a | k·v.i, then c | k·v.j - y1·b.
    let d1 = a / v.i.gcd(&a);
    let mut k = d1;
    loop {
        let y1 = k * v.i / a;
        if (k * v.j - y1 * b) % c == 0 {
            return k;
        }
        k += d1;
    }
}

/// One cuspidal tropical curve through the points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspidalRecord {
    pub subdivision: Subdivision,
    pub curve: TropicalCurve,
    pub assignment: Vec<usize>,
    pub pattern: CuspidalPattern,
    /// The lattice factor `w` for quadrangle patterns.
    pub factor: Option<u64>,
    pub weight: u64,
}

/// Number of points through which cuspidal curves are counted.
pub fn cuspidal_point_count(polygon: &LatticePolygon) -> usize {
    polygon.lattice_points().all.len().saturating_sub(3)
}

/// `|Δ ∩ Z²| - 3` sampled points, deterministic in `seed`.
pub fn sample_cuspidal_points(polygon: &LatticePolygon, seed: u64) -> Result<PointConfiguration, CountError> {
    let r = cuspidal_point_count(polygon);
    if r == 0 {
        return Err(CountError::NodesOutOfRange { found: 1, max: 0 });
    }
    PointConfiguration::sampled(sample_line_points(polygon, r, seed), seed)
}

/// Number of curves with one cusp through `|Δ ∩ Z²| - 3` points.
pub fn count_cuspidal(polygon: &LatticePolygon, points: &PointConfiguration) -> Result<CountResult<CuspidalRecord>, CountError> {
    count_cuspidal_with(polygon, points, &CountOptions::default())
}

pub fn count_cuspidal_with(
    polygon: &LatticePolygon,
    points: &PointConfiguration,
    options: &CountOptions,
) -> Result<CountResult<CuspidalRecord>, CountError> {
    let lp = polygon.lattice_points();
    let r = cuspidal_point_count(polygon);
    if points.len() != r {
        return Err(CountError::PointCount {
            expected: r,
            found: points.len(),
        });
    }
    let mut jobs = Vec::new();
    let interior = lp.interior.len();
    // Two hidden lattice points and triangles only (B, C + partner, two length-3 triangles).
    if interior >= 2 {
        for kept in subsets(&lp.interior, interior - 2) {
            let mut support = lp.boundary.clone();
            support.extend(kept);
            support.sort();
            jobs.push(Job {
                support,
                k: 0,
                relations: Vec::new(),
            });
        }
    }
    // One hidden lattice point and one quadrangle of shape A or D.
    if interior >= 1 {
        for kept in subsets(&lp.interior, interior - 1) {
            let mut support = lp.boundary.clone();
            support.extend(kept);
            support.sort();
            let relations = cuspidal_quadrangles(&support);
            if !relations.is_empty() {
                jobs.push(Job {
                    support,
                    k: 1,
                    relations,
                });
            }
        }
    }
    let solved = if jobs.is_empty() {
        Vec::new()
    } else {
        run_jobs(&jobs, points.points(), options.execution)?
    };
    let mut records = Vec::new();
    for curve in solved {
        let Some(pattern) = classify_cuspidal(&curve.subdivision) else {
            continue;
        };
        if curve.subdivision.rank() != r as i64 {
            return Err(CountError::Internal("cuspidal subdivision has the wrong rank".into()));
        }
        let weight = cuspidal_weight(&curve.subdivision, &pattern, &curve.assignment)
            .map_err(|e| CountError::Degenerate(e.to_string()))?;
        let factor = pattern.kind.has_quadrangle().then(|| {
            if pattern.kind == CuspidalKind::QuadrangleDPlusArea1 {
                weight / 3
            } else {
                weight
            }
        });
        records.push(CuspidalRecord {
            subdivision: curve.subdivision,
            curve: curve.curve,
            assignment: curve.assignment,
            pattern,
            factor,
            weight,
        });
    }
    let total = records.iter().map(|rec| rec.weight as i64).sum();
    Ok(CountResult {
        total,
        records,
        polygon: polygon.clone(),
        n_nodes: 0,
        points: points.clone(),
    })
}

/// Quadrangles of shape A or D with vertices in `support` and no other support point.
fn cuspidal_quadrangles(support: &[LatticePoint]) -> Vec<Relation> {
    let mut out = Vec::new();
    for quad in subsets(&(0..support.len()).collect::<Vec<_>>(), 4) {
        let corners: Vec<LatticePoint> = quad.iter().map(|&k| support[k]).collect();
        let Ok(polygon) = LatticePolygon::convex_hull(&corners) else {
            continue;
        };
        if polygon.len() != 4 || !matches!(shape_of(&polygon), Some('A') | Some('D')) {
            continue;
        }
        let stray = support
            .iter()
            .any(|p| !corners.contains(p) && polygon.contains(*p));
        if stray {
            continue;
        }
        let ordered: Vec<usize> = polygon
            .vertices()
            .iter()
            .map(|v| support.binary_search(v).expect("corner is in the support"))
            .collect();
        out.push(Relation::of_quadrangle(support, [ordered[0], ordered[1], ordered[2], ordered[3]]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(i: i64, j: i64) -> LatticePoint {
        LatticePoint::new(i, j)
    }

    #[test]
    fn reference_shapes_are_distinct() {
        let forms = normal_forms();
        for a in 0..5 {
            for b in a + 1..5 {
                assert_ne!(forms[a], forms[b]);
            }
        }
        let a = reference_shape('A').unwrap();
        assert_eq!((a.interior_count(), a.boundary_count()), (1, 4));
        let b = reference_shape('B').unwrap();
        assert_eq!((b.interior_count(), b.boundary_count()), (2, 3));
        let d = reference_shape('D').unwrap();
        assert_eq!((d.interior_count(), d.boundary_count()), (0, 5));
    }

    #[test]
    fn lattice_basis_and_multiples() {
        let basis = lattice_basis(&[p(2, 0), p(0, 2)]).unwrap();
        assert_eq!(basis, [(2, 0), (0, 2)]);
        assert_eq!(multiple_in_lattice(basis, p(1, 1)), 2);
        assert_eq!(multiple_in_lattice(basis, p(2, 2)), 1);
        let basis = lattice_basis(&[p(1, 1), p(1, -1)]).unwrap();
        assert_eq!(multiple_in_lattice(basis, p(1, 0)), 2);
        assert_eq!(multiple_in_lattice(basis, p(2, 0)), 1);
        let unit = lattice_basis(&[p(1, 0), p(0, 1), p(3, 5)]).unwrap();
        assert_eq!(unit, [(1, 0), (0, 1)]);
        assert!(lattice_basis(&[p(1, 1), p(2, 2)]).is_none());
    }
}
