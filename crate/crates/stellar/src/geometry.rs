//! Real 3-vector geometry on the unit sphere.
//!
//! Every Majorana vector lives here. All transforms are orthogonal maps
//! (rotations, the xy-reflection, inversion) and preserve norms and pairwise
//! dot products to machine precision.

use std::f64::consts::{PI, TAU};

/// Norm tolerance enforced after construction or any transform.
pub const EPS_UNIT: f64 = 1e-12;

/// A point on S², stored in Cartesian form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVector {
    x: f64,
    y: f64,
    z: f64,
}

/// Spherical angles (theta, phi) with theta in [0, pi] and phi in [0, 2pi).
///
/// At the poles (sin theta below `EPS_UNIT`) phi is forced to 0 so that every
/// direction has a unique angular key.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalAngles {
    theta: f64,
    phi: f64,
}

impl SphericalAngles {
    pub fn new(theta: f64, phi: f64) -> Self {
        assert!(
            (-EPS_UNIT..=PI + EPS_UNIT).contains(&theta),
            "polar angle out of range: {theta}"
        );
        let theta = theta.clamp(0.0, PI);
        let phi = if theta.sin() < EPS_UNIT {
            0.0
        } else {
            canonical_azimuth(phi)
        };
        Self { theta, phi }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// Reduce an azimuth into [0, 2pi).
pub fn canonical_azimuth(phi: f64) -> f64 {
    let mut p = phi.rem_euclid(TAU);
    // rem_euclid can return exactly TAU after rounding for tiny negatives
    if p >= TAU {
        p -= TAU;
    }
    p
}

impl UnitVector {
    /// Construct from Cartesian components, normalizing the input.
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        let n = (x * x + y * y + z * z).sqrt();
        assert!(n > EPS_UNIT, "cannot normalize a near-zero vector");
        Self {
            x: x / n,
            y: y / n,
            z: z / n,
        }
    }

    pub fn from_spherical(a: SphericalAngles) -> Self {
        let (st, ct) = (a.theta.sin(), a.theta.cos());
        let (sp, cp) = (a.phi.sin(), a.phi.cos());
        Self {
            x: st * cp,
            y: st * sp,
            z: ct,
        }
    }

    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Self::from_spherical(SphericalAngles::new(theta, phi))
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn spherical(&self) -> SphericalAngles {
        let theta = self.z.clamp(-1.0, 1.0).acos();
        let phi = if theta.sin() < EPS_UNIT {
            0.0
        } else {
            canonical_azimuth(self.y.atan2(self.x))
        };
        SphericalAngles { theta, phi }
    }

    pub fn dot(&self, other: &UnitVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Right-handed rotation about the z-axis.
    pub fn rotate_about_z(&self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self {
            x: c * self.x - s * self.y,
            y: s * self.x + c * self.y,
            z: self.z,
        }
    }

    /// Rodrigues rotation about an arbitrary unit axis.
    pub fn rotate_about_axis(&self, axis: &UnitVector, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let k = axis;
        let kv = k.dot(self);
        let cross = (
            k.y * self.z - k.z * self.y,
            k.z * self.x - k.x * self.z,
            k.x * self.y - k.y * self.x,
        );
        Self {
            x: self.x * c + cross.0 * s + k.x * kv * (1.0 - c),
            y: self.y * c + cross.1 * s + k.y * kv * (1.0 - c),
            z: self.z * c + cross.2 * s + k.z * kv * (1.0 - c),
        }
    }

    /// Reflection in the x-y plane: (x, y, z) -> (x, y, -z).
    pub fn reflect_xy(&self) -> Self {
        Self {
            x: self.x,
            y: self.y,
            z: -self.z,
        }
    }

    /// Inversion through the origin: v -> -v.
    pub fn invert(&self) -> Self {
        Self {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Chord distance to another unit vector; agrees with the angular
    /// separation to first order for small separations.
    pub fn chord_distance(&self, other: &UnitVector) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}
