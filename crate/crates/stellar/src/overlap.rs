//! The overlap kernel: squared inner product of two spin-1 states from their
//! M-vectors, the relation classification, and the independent Hilbert-space
//! oracle built from symmetrized spin-half spinors.
//!
//! The oracle is the ground truth: it forms each state as a normalized
//! symmetrized tensor product of two spinors and takes the squared inner
//! product directly, with no reference to the closed-form expression.

use nalgebra::SMatrix;
use num_complex::Complex64;

use crate::geometry::UnitVector;
use crate::states::{MajoranaState, Ray};

/// Tolerance for classifying an overlap value as 1, 0, 1/3 or 1/4.
pub const EPS_REL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Identical,
    Orthogonal,
    Unbiased,
    Equiangular,
    Other,
}

/// Decomposition of the closed-form overlap.
#[derive(Debug, Clone, Copy)]
pub struct OverlapTerms {
    /// (a1+a2)·(b1+b2) + (a1·b1)(a2·b2) + (a1·b2)(a2·b1)
    pub f1: f64,
    /// (1 - a1·a2)(1 - b1·b2)
    pub f2: f64,
    /// (3 + a1·a2)(3 + b1·b2), always in [4, 16]
    pub denom: f64,
    /// Raw value before clamping, kept for diagnostics.
    pub raw: f64,
    /// Value clamped to [0, 1].
    pub value: f64,
}

/// Squared spin-half overlap: (1 + a·b)/2.
pub fn spin_half_overlap(a: &UnitVector, b: &UnitVector) -> f64 {
    0.5 * (1.0 + a.dot(b))
}

/// Closed-form spin-1 overlap in terms of the four M-vectors.
pub fn overlap(a: &MajoranaState, b: &MajoranaState) -> OverlapTerms {
    let (a1, a2) = (a.v1(), a.v2());
    let (b1, b2) = (b.v1(), b.v2());
    let aa = a1.dot(a2);
    let bb = b1.dot(b2);
    let sum_dot = (a1.x() + a2.x()) * (b1.x() + b2.x())
        + (a1.y() + a2.y()) * (b1.y() + b2.y())
        + (a1.z() + a2.z()) * (b1.z() + b2.z());
    let f1 = sum_dot + a1.dot(b1) * a2.dot(b2) + a1.dot(b2) * a2.dot(b1);
    let f2 = (1.0 - aa) * (1.0 - bb);
    let denom = (3.0 + aa) * (3.0 + bb);
    let raw = (4.0 + 2.0 * f1 - f2) / denom;
    OverlapTerms {
        f1,
        f2,
        denom,
        raw,
        value: raw.clamp(0.0, 1.0),
    }
}

/// Residuals of the four condition-form equations. Each vanishes iff the
/// corresponding relation holds; they are scaled versions of the deviation
/// of the overlap value from its target.
pub fn relation_residuals(a: &MajoranaState, b: &MajoranaState) -> [f64; 4] {
    let (a1, a2) = (a.v1(), a.v2());
    let (b1, b2) = (b.v1(), b.v2());
    let aa = a1.dot(a2);
    let bb = b1.dot(b2);
    let s = overlap(a, b).f1;
    [
        2.0 * s - 2.0 * (1.0 + aa) * (1.0 + bb) - 4.0,
        2.0 * s - ((1.0 - aa) * (1.0 - bb) - 4.0),
        3.0 * s - 2.0 * aa * bb,
        8.0 * s - (5.0 * aa * bb - aa - bb - 3.0),
    ]
}

/// Classify the relation between two states from their overlap value and
/// cross-check against the condition-form equations on the dot products.
pub fn relation(a: &MajoranaState, b: &MajoranaState, tol: f64) -> Relation {
    assert!(tol > 0.0);
    let terms = overlap(a, b);
    let v = terms.value;
    let class = if (v - 1.0).abs() < tol {
        Relation::Identical
    } else if v.abs() < tol {
        Relation::Orthogonal
    } else if (v - 1.0 / 3.0).abs() < tol {
        Relation::Unbiased
    } else if (v - 0.25).abs() < tol {
        Relation::Equiangular
    } else {
        Relation::Other
    };
    // the condition residuals are the value deviations rescaled by factors
    // bounded by 8 * denom <= 128
    let res = relation_residuals(a, b);
    let scaled_tol = 128.0 * tol;
    let agrees = match class {
        Relation::Identical => res[0].abs() < scaled_tol,
        Relation::Orthogonal => res[1].abs() < scaled_tol,
        Relation::Unbiased => res[2].abs() < scaled_tol,
        Relation::Equiangular => res[3].abs() < scaled_tol,
        Relation::Other => true,
    };
    debug_assert!(agrees, "condition-form equations disagree with overlap value");
    class
}

fn spinor(v: &UnitVector) -> [Complex64; 2] {
    let s = v.spherical();
    let half = s.theta() / 2.0;
    [
        Complex64::new(half.cos(), 0.0),
        Complex64::from_polar(half.sin(), s.phi()),
    ]
}

fn symmetrized_ket(state: &MajoranaState) -> [Complex64; 4] {
    let a = spinor(state.v1());
    let b = spinor(state.v2());
    let norm = (3.0 + state.v1().dot(state.v2())).sqrt();
    let mut k = [Complex64::new(0.0, 0.0); 4];
    for i in 0..2 {
        for j in 0..2 {
            k[2 * i + j] = (a[i] * b[j] + b[i] * a[j]) / norm;
        }
    }
    k
}

/// Ground-truth overlap from the symmetrized spinor construction.
pub fn overlap_oracle(a: &MajoranaState, b: &MajoranaState) -> f64 {
    let ka = symmetrized_ket(a);
    let kb = symmetrized_ket(b);
    let inner: Complex64 = kb.iter().zip(ka.iter()).map(|(x, y)| x.conj() * y).sum();
    inner.norm_sqr()
}

/// Squared modulus of the normalized Hermitian inner product of two rays.
pub fn ray_overlap(r: &Ray, s: &Ray) -> f64 {
    r.inner(s).norm_sqr()
}

/// The five coefficients of the symmetry-constrained overlap ansatz.
#[derive(Debug, Clone, Copy)]
pub struct AppendixCoefficients {
    pub x: [f64; 5],
}

/// Assemble and solve the 5x5 linear system fixing the ansatz coefficients.
///
/// The constraints are: overlap 1 for identical states (three equations, one
/// per power of a1·a2) and overlap 0 for a state against the coherent state
/// built on -a1 (two equations). The solution is (3, 1, 2, 2, -1).
pub fn solve_appendix_coefficients() -> AppendixCoefficients {
    #[rustfmt::skip]
    let m = SMatrix::<f64, 5, 5>::from_row_slice(&[
        1.0, 0.0, 2.0, 1.0, 0.0,
        0.0, 1.0, 1.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 1.0, 1.0,
        1.0, 1.0, -2.0, 0.0, 0.0,
        0.0, 1.0, -2.0, 2.0, 1.0,
    ]);
    let rhs = SMatrix::<f64, 5, 1>::from_column_slice(&[9.0, 3.0, 1.0, 0.0, 0.0]);
    let lu = m.lu();
    let x = lu
        .solve(&rhs)
        .expect("the ansatz coefficient system is nonsingular");
    let residual = (m * x - rhs).norm();
    assert!(residual < 1e-12, "coefficient solve residual {residual}");
    AppendixCoefficients {
        x: [x[0], x[1], x[2], x[3], x[4]],
    }
}

/// Evaluate the overlap ansatz with explicit coefficients. Used to confirm
/// that the solved coefficients reproduce the closed form.
pub fn overlap_from_coefficients(
    c: &AppendixCoefficients,
    a: &MajoranaState,
    b: &MajoranaState,
) -> f64 {
    let (a1, a2) = (a.v1(), a.v2());
    let (b1, b2) = (b.v1(), b.v2());
    let aa = a1.dot(a2);
    let bb = b1.dot(b2);
    let l1 = aa + bb;
    let l2 = a1.dot(b1) + a1.dot(b2) + a2.dot(b1) + a2.dot(b2);
    let q1 = a1.dot(b1) * a2.dot(b2) + a1.dot(b2) * a2.dot(b1);
    let q2 = aa * bb;
    let [x1, x2, x3, x4, x5] = c.x;
    (x1 + x2 * l1 + x3 * l2 + x4 * q1 + x5 * q2) / ((3.0 + aa) * (3.0 + bb))
}
