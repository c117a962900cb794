//! Closed-form multiplicities of local deformation patterns, with exact
//! certificates where they come from a computation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::lattice_geom::{LatticePoint, LatticePolygon};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PatternError {
    #[error("expected a lattice triangle")]
    NotATriangle,
    #[error("pinned edge index {0} is out of range")]
    BadEdge(usize),
    #[error("an edge can be pinned only once")]
    RepeatedEdge,
    #[error("double area {area} is not divisible by the pinned lengths {lengths}")]
    NotIntegral { area: i64, lengths: i64 },
    #[error("binomial exponents ({0}, {1}) are not coprime")]
    NotPrimitive(i64, i64),
    #[error("the two binomial directions are parallel")]
    Parallel,
    #[error("the degree must be at least 2")]
    DegreeTooSmall,
}

/// Number of rational curves with Newton triangle `triangle` through the
/// torus orbits of its edges, divided by the lengths of the `pinned` edges
/// (edge `k` joins vertex `k` to vertex `k + 1`).
pub fn rational_triangle_count(triangle: &LatticePolygon, pinned: &[usize]) -> Result<i64, PatternError> {
    if !triangle.is_triangle() {
        return Err(PatternError::NotATriangle);
    }
    let edges = triangle.edges();
    let mut seen = [false; 3];
    let mut lengths = 1;
    for &k in pinned {
        let edge = edges.get(k).ok_or(PatternError::BadEdge(k))?;
        if std::mem::replace(&mut seen[k], true) {
            return Err(PatternError::RepeatedEdge);
        }
        lengths *= edge.lattice_length();
    }
    let area = triangle.double_area();
    if area % lengths != 0 {
        return Err(PatternError::NotIntegral { area, lengths });
    }
    Ok(area / lengths)
}

/// Nodes of the union of the binomial curves `αx^a + βy^b = 0` and
/// `γx^c + δy^d = 0`: the lattice points of the parallelogram on `(a, -b)`
/// and `(c, -d)` minus three.
pub fn parallelogram_node_count(a: i64, b: i64, c: i64, d: i64) -> Result<i64, PatternError> {
    if a.gcd(&b) != 1 {
        return Err(PatternError::NotPrimitive(a, b));
    }
    if c.gcd(&d) != 1 {
        return Err(PatternError::NotPrimitive(c, d));
    }
    let det = (a * -d - (-b) * c).abs();
    if det == 0 {
        return Err(PatternError::Parallel);
    }
    // Primitive sides: 4 boundary points, so Pick gives |det| - 1 interior points.
    let interior = det - 1;
    Ok(interior + 4 - 3)
}

/// The parallelogram spanned by `(a, -b)` and `(c, -d)` at the origin.
pub fn binomial_parallelogram(a: i64, b: i64, c: i64, d: i64) -> Result<LatticePolygon, PatternError> {
    parallelogram_node_count(a, b, c, d)?;
    let (u, v) = (LatticePoint::new(a, -b), LatticePoint::new(c, -d));
    let o = LatticePoint::ORIGIN;
    Ok(LatticePolygon::new(vec![o, u, u + v, v]).expect("non-parallel sides"))
}

/// Dense univariate polynomial over the rationals, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    coefficients: Vec<Rational>,
}

impl Polynomial {
    pub fn new(coefficients: Vec<Rational>) -> Self {
        let mut p = Self { coefficients };
        p.trim();
        p
    }

    pub fn from_integers(coefficients: &[i64]) -> Self {
        Self::new(coefficients.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        Self::new(Vec::new())
    }

    pub fn x() -> Self {
        Self::from_integers(&[0, 1])
    }

    fn trim(&mut self) {
        while self.coefficients.last().is_some_and(|c| c.is_zero()) {
            self.coefficients.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn evaluate(&self, x: &Rational) -> Rational {
        self.coefficients
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coefficients
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coefficients.len().max(other.coefficients.len());
        let zero = Rational::zero();
        Self::new(
            (0..n)
                .map(|k| self.coefficients.get(k).unwrap_or(&zero) + other.coefficients.get(k).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self::new(self.coefficients.iter().map(|c| c * factor).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Remainder of division by a non-zero polynomial.
    pub fn rem(&self, divisor: &Self) -> Self {
        let d = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.coefficients[d].clone();
        let mut r = self.coefficients.clone();
        while r.len() > d {
            let top = r.len() - 1;
            let q = &r[top] / &lead;
            for (k, c) in divisor.coefficients.iter().enumerate() {
                r[top - d + k] -= &q * c;
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        Self::new(r)
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        match a.coefficients.last().cloned() {
            Some(lead) => a.scale(&lead.recip()),
            None => a,
        }
    }
}

/// Dickson polynomial `D_m` with `D_0 = 2`, `D_1 = x`, `D_m = x D_{m-1} - D_{m-2}`,
/// so that `D_m(t + 1/t) = t^m + t^{-m}`. Its critical values are `±2`.
pub fn dickson(m: u32) -> Polynomial {
    let mut prev = Polynomial::from_integers(&[2]);
    if m == 0 {
        return prev;
    }
    let mut cur = Polynomial::x();
    for _ in 1..m {
        let next = Polynomial::x().mul(&cur).sub(&prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// Exact evidence that a degree-`m` Chebyshev-type polynomial has `m - 1`
/// distinct critical points, all on the critical levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChebyshevCertificate {
    pub degree: u32,
    /// Integer coefficients of `D_m`, lowest degree first.
    pub dickson: Vec<BigInt>,
    /// `deg gcd(D_m', D_m'')`: zero when the critical points are distinct.
    pub repeated_critical: usize,
    /// `deg gcd(D_m² - 4, D_m')`: number of critical points on the levels `±2`.
    pub critical_on_levels: usize,
}

impl ChebyshevCertificate {
    /// Recomputes the certificate from `dickson` and checks it.
    pub fn verify(&self) -> bool {
        let g = Polynomial::new(self.dickson.iter().map(|c| Rational::from_integer(c.clone())).collect());
        if g.degree() != Some(self.degree as usize) {
            return false;
        }
        let (repeated, on_levels) = critical_structure(&g);
        let m = self.degree as usize;
        repeated == self.repeated_critical && on_levels == self.critical_on_levels && repeated == 0 && on_levels == m - 1
    }
}

fn critical_structure(g: &Polynomial) -> (usize, usize) {
    let dg = g.derivative();
    let repeated = dg.gcd(&dg.derivative()).degree().unwrap_or(0);
    let levels = g.mul(g).sub(&Polynomial::from_integers(&[4]));
    let on_levels = levels.gcd(&dg).degree().unwrap_or(0);
    (repeated, on_levels)
}

/// Families and nodes of the Chebyshev deformation pattern of degree `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChebyshevPattern {
    pub family_count: u32,
    pub node_count: u32,
    pub certificate: ChebyshevCertificate,
}

pub fn chebyshev_pattern(m: u32) -> Result<ChebyshevPattern, PatternError> {
    if m < 2 {
        return Err(PatternError::DegreeTooSmall);
    }
    let g = dickson(m);
    let (repeated_critical, critical_on_levels) = critical_structure(&g);
    let dickson = g
        .coefficients()
        .iter()
        .map(|c| {
            debug_assert!(c.is_integer());
            c.to_integer()
        })
        .collect();
    Ok(ChebyshevPattern {
        family_count: m,
        node_count: m - 1,
        certificate: ChebyshevCertificate {
            degree: m,
            dickson,
            repeated_critical,
            critical_on_levels,
        },
    })
}

/// Real nodes of the two real deformation patterns of degree `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RealPatternSignature {
    pub chebyshev_solitary: u32,
    pub variant_non_solitary: u32,
    pub variant_imaginary: u32,
}

impl RealPatternSignature {
    /// Solitary node parities differ, so the two real patterns cancel in a signed count.
    pub fn cancels(&self) -> bool {
        self.chebyshev_solitary % 2 != 0
    }
}

pub fn real_pattern_signature(m: u32) -> Result<RealPatternSignature, PatternError> {
    if m < 2 {
        return Err(PatternError::DegreeTooSmall);
    }
    Ok(RealPatternSignature {
        chebyshev_solitary: m - 1,
        variant_non_solitary: 1,
        variant_imaginary: m - 2,
    })
}

/// Tabulated numbers of local polynomials used by the cuspidal count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CuspidalConstant {
    /// Cuspidal polynomials on triangle B with fixed vertex coefficients.
    CuspOnTriangleB,
    /// Polynomials on triangle C with a node on the orbit of the long edge.
    NodeOnTriangleC,
    /// Cuspidal polynomials on conv{(0,-1), (0,1), (3,0)} with no `x²` term.
    CuspOnNarrowTriangle,
    /// Cuspidal polynomials on conv{(0,-1), (0,2), (2,0)} with no `x²` term.
    CuspOnWideTriangle,
}

impl CuspidalConstant {
    pub const ALL: [CuspidalConstant; 4] = [
        CuspidalConstant::CuspOnTriangleB,
        CuspidalConstant::NodeOnTriangleC,
        CuspidalConstant::CuspOnNarrowTriangle,
        CuspidalConstant::CuspOnWideTriangle,
    ];

    pub fn value(self) -> u64 {
        match self {
            CuspidalConstant::CuspOnTriangleB => 5,
            CuspidalConstant::NodeOnTriangleC => 2,
            CuspidalConstant::CuspOnNarrowTriangle => 2,
            CuspidalConstant::CuspOnWideTriangle => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CuspidalConstant::CuspOnTriangleB => "cusp-on-triangle-b",
            CuspidalConstant::NodeOnTriangleC => "node-on-triangle-c",
            CuspidalConstant::CuspOnNarrowTriangle => "cusp-on-narrow-triangle",
            CuspidalConstant::CuspOnWideTriangle => "cusp-on-wide-triangle",
        }
    }

    /// The Newton polygon the constant refers to.
    pub fn polygon(self) -> LatticePolygon {
        let pts: &[(i64, i64)] = match self {
            CuspidalConstant::CuspOnTriangleB => &[(0, 0), (2, 3), (3, 2)],
            CuspidalConstant::NodeOnTriangleC => &[(0, 0), (2, 0), (1, 2)],
            CuspidalConstant::CuspOnNarrowTriangle => &[(0, -1), (3, 0), (0, 1)],
            CuspidalConstant::CuspOnWideTriangle => &[(0, -1), (2, 0), (0, 2)],
        };
        LatticePolygon::new(pts.iter().map(|&(i, j)| LatticePoint::new(i, j)).collect()).expect("convex")
    }
}

/// The full constant table.
pub fn cuspidal_constants() -> Vec<(CuspidalConstant, u64)> {
    CuspidalConstant::ALL.iter().map(|&c| (c, c.value())).collect()
}
