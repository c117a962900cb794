//! Exact tropical curve counting on toric surfaces.
//!
//! The crate computes tropical curves (corner loci of max-plus polynomials)
//! with their dual regular subdivisions. Enumerative invariants come from
//! summing weights of the tropical curves through generic points; nodal,
//! real signed and one-cuspidal counts are supported.
//!
//! All arithmetic that decides anything is exact.

pub mod cuspidal;
pub mod enumeration;
pub mod io;
pub mod lattice_geom;
pub mod linalg;
pub mod parallel;
pub mod patterns;
pub mod rational;
pub mod tropical_curve;
pub mod tropical_solver;

pub use lattice_geom::{LatticePoint, LatticePolygon, LatticeSegment, UnimodularMap};
pub use rational::{Rational, RationalPoint};
pub use tropical_curve::{corner_locus, dual_subdivision, Subdivision, TropicalCurve, TropicalPolynomial};
