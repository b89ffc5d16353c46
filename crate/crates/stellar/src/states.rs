//! Spin-1 states: the unordered Majorana vector pair, classification into
//! C/A/D states, and the bidirectional map to rays in CP².

use num_complex::Complex64;
use rand::Rng;

use crate::geometry::{canonical_azimuth, SphericalAngles, UnitVector};

/// Angle-wise tolerance for state equality. Looser than the raw vector
/// tolerance because ray conversions accumulate error.
pub const EPS_STATE: f64 = 1e-9;

/// Tolerance for deciding parallel/antiparallel M-vectors.
pub const EPS_CLASS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateClass {
    Coherent,
    Anticoherent,
    Devious,
}

/// A pure spin-1 state as an unordered pair of M-vectors.
///
/// The pair is stored in a canonical order (lexicographic by the spherical
/// angles), so construction from either order yields the same value.
#[derive(Debug, Clone, Copy)]
pub struct MajoranaState {
    v1: UnitVector,
    v2: UnitVector,
}

fn angle_key(v: &UnitVector) -> (f64, f64) {
    let s = v.spherical();
    (s.theta(), s.phi())
}

impl MajoranaState {
    pub fn new(u: UnitVector, v: UnitVector) -> Self {
        let (ku, kv) = (angle_key(&u), angle_key(&v));
        if ku <= kv {
            Self { v1: u, v2: v }
        } else {
            Self { v1: v, v2: u }
        }
    }

    /// Build from the spherical angles of the two M-vectors.
    pub fn from_angles(theta1: f64, phi1: f64, theta2: f64, phi2: f64) -> Self {
        Self::new(
            UnitVector::from_angles(theta1, phi1),
            UnitVector::from_angles(theta2, phi2),
        )
    }

    pub fn v1(&self) -> &UnitVector {
        &self.v1
    }

    pub fn v2(&self) -> &UnitVector {
        &self.v2
    }

    pub fn angles(&self) -> (SphericalAngles, SphericalAngles) {
        (self.v1.spherical(), self.v2.spherical())
    }

    pub fn classify(&self) -> StateClass {
        let d = self.v1.dot(&self.v2);
        if d > 1.0 - EPS_CLASS {
            StateClass::Coherent
        } else if d < -1.0 + EPS_CLASS {
            StateClass::Anticoherent
        } else {
            StateClass::Devious
        }
    }

    /// Equality of the unordered pair within a chord-distance tolerance.
    pub fn approx_eq(&self, other: &MajoranaState, tol: f64) -> bool {
        let direct = self.v1.chord_distance(&other.v1) <= tol
            && self.v2.chord_distance(&other.v2) <= tol;
        let swapped = self.v1.chord_distance(&other.v2) <= tol
            && self.v2.chord_distance(&other.v1) <= tol;
        direct || swapped
    }

    pub fn rotate_about_z(&self, angle: f64) -> Self {
        Self::new(
            self.v1.rotate_about_z(angle),
            self.v2.rotate_about_z(angle),
        )
    }

    pub fn rotate_about_axis(&self, axis: &UnitVector, angle: f64) -> Self {
        Self::new(
            self.v1.rotate_about_axis(axis, angle),
            self.v2.rotate_about_axis(axis, angle),
        )
    }

    pub fn reflect_xy(&self) -> Self {
        Self::new(self.v1.reflect_xy(), self.v2.reflect_xy())
    }

    /// Time reversal sends both M-vectors to their negatives.
    pub fn time_reversal(&self) -> Self {
        Self::new(self.v1.invert(), self.v2.invert())
    }

    /// Map to the corresponding ray in CP².
    ///
    /// Each M-vector at (theta, phi) carries the complex parameter
    /// alpha = tan(theta/2) e^{i phi}; the ray is
    /// (1, (alpha1 + alpha2)/sqrt 2, alpha1 alpha2). A vector at the south
    /// pole has an infinite parameter; those branches are handled exactly.
    /// (The sign of the infinite parameter carries no projective content; a
    /// south-pole vector is treated as theta = pi exactly.)
    pub fn to_ray(&self) -> Ray {
        let a1 = alpha(&self.v1);
        let a2 = alpha(&self.v2);
        match (a1, a2) {
            (Some(a1), Some(a2)) => Ray::new([
                Complex64::new(1.0, 0.0),
                (a1 + a2) / 2.0_f64.sqrt(),
                a1 * a2,
            ]),
            (Some(a), None) | (None, Some(a)) => Ray::new([
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                2.0_f64.sqrt() * a,
            ]),
            (None, None) => Ray::new([
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
            ]),
        }
    }

    /// Inverse of [`MajoranaState::to_ray`]: the complex parameters are the
    /// two roots of z² - sqrt(2) (c1/c0) z + (c2/c0) = 0 when c0 != 0.
    pub fn from_ray(r: &Ray) -> Self {
        let [c0, c1, c2] = r.components();
        if c0.norm() > RAY_ZERO {
            let b = -2.0_f64.sqrt() * c1 / c0;
            let c = c2 / c0;
            let (r1, r2) = stable_quadratic_roots(b, c);
            Self::new(vector_from_alpha(r1), vector_from_alpha(r2))
        } else if c1.norm() > RAY_ZERO {
            // one vector at the south pole, the other from alpha = c2/(sqrt 2 c1)
            let a = c2 / (2.0_f64.sqrt() * c1);
            Self::new(vector_from_alpha(a), UnitVector::new(0.0, 0.0, -1.0))
        } else {
            Self::new(
                UnitVector::new(0.0, 0.0, -1.0),
                UnitVector::new(0.0, 0.0, -1.0),
            )
        }
    }

    /// A state drawn uniformly: both M-vectors uniform on the sphere.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::new(random_unit_vector(rng), random_unit_vector(rng))
    }
}

pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R) -> UnitVector {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let s = (1.0 - z * z).max(0.0).sqrt();
    UnitVector::new(s * phi.cos(), s * phi.sin(), z)
}

/// Complex Majorana parameter of a vector, or `None` at the south pole.
fn alpha(v: &UnitVector) -> Option<Complex64> {
    if v.z() < -1.0 + 1e-18 {
        return None;
    }
    let s = v.spherical();
    let m = (s.theta() / 2.0).tan();
    Some(Complex64::from_polar(m, s.phi()))
}

fn vector_from_alpha(a: Complex64) -> UnitVector {
    let theta = 2.0 * a.norm().atan();
    let phi = if a.norm() == 0.0 {
        0.0
    } else {
        canonical_azimuth(a.arg())
    };
    UnitVector::from_angles(theta, phi)
}

/// Roots of z² + b z + c = 0, computing the larger-magnitude root first and
/// the other from the product of roots to avoid cancellation.
fn stable_quadratic_roots(b: Complex64, c: Complex64) -> (Complex64, Complex64) {
    let disc = (b * b - 4.0 * c).sqrt();
    // pick the sign that avoids cancellation in b + disc
    let q = if (b + disc).norm() >= (b - disc).norm() {
        -(b + disc) / 2.0
    } else {
        -(b - disc) / 2.0
    };
    if q.norm() == 0.0 {
        (q, q)
    } else {
        (q, c / q)
    }
}

const RAY_ZERO: f64 = 1e-12;

/// A projective triple of complex amplitudes in CP².
///
/// Stored in canonical form: unit 2-norm, first component of magnitude above
/// `1e-12` made real and positive.
#[derive(Debug, Clone, Copy)]
pub struct Ray {
    c: [Complex64; 3],
}

impl Ray {
    pub fn new(c: [Complex64; 3]) -> Self {
        let norm = (c.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt();
        assert!(norm > RAY_ZERO, "ray must have a nonzero component");
        let mut c = [c[0] / norm, c[1] / norm, c[2] / norm];
        let lead = c.iter().find(|z| z.norm() > RAY_ZERO).copied();
        if let Some(lead) = lead {
            let phase = lead / lead.norm();
            for z in &mut c {
                *z /= phase;
            }
        }
        Self { c }
    }

    pub fn from_reals(c: [f64; 3]) -> Self {
        Self::new([
            Complex64::new(c[0], 0.0),
            Complex64::new(c[1], 0.0),
            Complex64::new(c[2], 0.0),
        ])
    }

    pub fn components(&self) -> [Complex64; 3] {
        self.c
    }

    /// Hermitian inner product <self|other> of the normalized representatives.
    pub fn inner(&self, other: &Ray) -> Complex64 {
        self.c
            .iter()
            .zip(other.c.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Projective distance: vanishes iff the rays coincide in CP².
    ///
    /// Because of the square root, rounding in the inner product puts a
    /// floor of roughly 1e-8 under this metric; use [`Ray::infidelity`]
    /// when comparing at tighter tolerances.
    pub fn projective_distance(&self, other: &Ray) -> f64 {
        (1.0 - self.inner(other).norm().min(1.0)).max(0.0).sqrt()
    }

    /// 1 - |<self|other>|²: zero iff the rays coincide, free of the square
    /// root floor of [`Ray::projective_distance`].
    pub fn infidelity(&self, other: &Ray) -> f64 {
        (1.0 - self.inner(other).norm_sqr()).max(0.0)
    }

    /// Apply a 3x3 matrix and recanonicalize.
    pub fn apply(&self, m: &nalgebra::Matrix3<Complex64>) -> Ray {
        let v = nalgebra::Vector3::from_row_slice(&self.c);
        let w = m * v;
        Ray::new([w[0], w[1], w[2]])
    }
}
