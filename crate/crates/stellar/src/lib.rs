//! Majorana (stellar) representation of spin-1 states, and the mutually
//! unbiased bases and symmetric informationally complete measurements that
//! can be built from it.
//!
//! A pure spin-1 state is an unordered pair of unit vectors on the sphere.
//! Everything here — overlaps, orthogonality, unbiasedness, equiangularity —
//! is computed from that picture, with an independent Hilbert-space oracle
//! (symmetrized spin-half spinors) used as ground truth in the tests.

pub mod geometry;
pub mod overlap;
pub mod states;

pub mod analysis;
pub mod cli;
pub mod encode;
pub mod mub;
pub mod sic;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cone angle {0} rad is outside [arccos(1/sqrt 3), pi/2]")]
    ConeAngleOutOfRange(f64),
    #[error("seed pair is not equiangular within tolerance: residual {0}")]
    NotAnEtriad(f64),
    #[error("degenerate triad: |Bargmann product| = {0:.3e}")]
    DegenerateTriad(f64),
    #[error("equivalence matching failed: {0}")]
    EquivalenceMismatch(String),
    #[error("expected {expected} states, got {got}")]
    WrongCardinality { expected: usize, got: usize },
}
