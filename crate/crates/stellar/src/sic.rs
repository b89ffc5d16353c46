//! Equiangular triads and the two spin-1 SICs.
//!
//! An etriad is three mutually equiangular states related by a threefold
//! rotation about a common axis. Two of the cataloged etriads (the ones
//! built from A-states) extend to full 9-state SICs: the two-parameter
//! family SIC-1 and the rigid SIC-2. The Weyl-Heisenberg orbit construction
//! is implemented independently so the two routes can be matched.

use std::f64::consts::{PI, TAU};

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::overlap::overlap;
use crate::states::{MajoranaState, Ray};
use crate::Error;

/// arccos(1/3): internal angle of the D-state etriads and SIC-1's DDD rows.
pub fn theta_s() -> f64 {
    (1.0_f64 / 3.0).acos()
}

/// arccos(sqrt(2/3)): semi-vertex angle of the A2 double-cone.
pub fn theta_f() -> f64 {
    (2.0_f64 / 3.0).sqrt().acos()
}

/// Generator angles of an etriad's first member; the other two members are
/// its images under 2 pi/3 and 4 pi/3 z-rotations.
#[derive(Debug, Clone, Copy)]
pub struct EtriadSeed {
    pub theta1: f64,
    pub phi1: f64,
    pub theta2: f64,
    pub phi2: f64,
}

/// Three mutually equiangular states related by threefold z-rotation.
#[derive(Debug, Clone)]
pub struct Etriad {
    pub states: [MajoranaState; 3],
}

/// Nine states with all pairwise overlaps equal to 1/4.
#[derive(Debug, Clone)]
pub struct Sic {
    states: [MajoranaState; 9],
}

impl Sic {
    /// Build from exactly nine states; other counts are rejected.
    pub fn from_states(states: Vec<MajoranaState>) -> Result<Self, Error> {
        let got = states.len();
        let states: [MajoranaState; 9] = states
            .try_into()
            .map_err(|_| Error::WrongCardinality { expected: 9, got })?;
        Ok(Self { states })
    }

    pub fn states(&self) -> &[MajoranaState; 9] {
        &self.states
    }

    pub fn rays(&self) -> Vec<Ray> {
        self.states.iter().map(|s| s.to_ray()).collect()
    }
}

/// Left side of the general etriad condition on the seed angles. Zero iff
/// the three generated states are pairwise equiangular. Depends only on the
/// azimuth difference phi2 - phi1.
pub fn etriad_residual(seed: &EtriadSeed) -> f64 {
    let (s1, c1) = seed.theta1.sin_cos();
    let (s2, c2) = seed.theta2.sin_cos();
    let cd = (seed.phi2 - seed.phi1).cos();
    s1 * s1 * s2 * s2 * cd * cd - 2.0 * s1 * s2 * (1.0 + 3.0 * c1 * c2) * cd - 3.0
        + 4.0 * c1 * c1
        + 4.0 * c2 * c2
        + 6.0 * c1 * c2
        + 5.0 * c1 * c1 * c2 * c2
}

/// Generate the triad from its seed, rejecting seeds that do not satisfy
/// the etriad condition.
pub fn etriad_from_seed(seed: &EtriadSeed) -> Result<Etriad, Error> {
    let residual = etriad_residual(seed);
    if residual.abs() >= 1e-10 {
        return Err(Error::NotAnEtriad(residual));
    }
    let third = TAU / 3.0;
    Ok(Etriad {
        states: [0, 1, 2].map(|k| {
            MajoranaState::from_angles(
                seed.theta1,
                seed.phi1 + third * k as f64,
                seed.theta2,
                seed.phi2 + third * k as f64,
            )
        }),
    })
}

/// The cataloged etriads, labeled by state type.
///
/// Two of the published entries are internally inconsistent and are resolved
/// here by testing against the etriad condition:
/// - the C row's arccos(1/3) fails the condition; the C-state triad angle is
///   arccos(1/sqrt 3) (M-vectors along cube edges), which satisfies it;
/// - the D3 row is quoted both with phi2 = phi1 and phi2 = phi1 + pi/2 in
///   different places; only phi2 = phi1 satisfies the condition (the
///   residual at theta1 = arccos(1/sqrt 2), theta2 = pi - theta1 reduces to
///   cos²Δ/4 + cosΔ/2 - 3/4 = 0, whose only admissible root is cosΔ = 1).
pub fn catalog_etriads() -> Vec<(&'static str, EtriadSeed)> {
    let seed = |theta1, phi1, theta2, phi2| EtriadSeed {
        theta1,
        phi1,
        theta2,
        phi2,
    };
    let theta_c = (1.0 / 3.0_f64.sqrt()).acos();
    let theta_r = (1.0 / 2.0_f64.sqrt()).acos();
    vec![
        ("C", seed(theta_c, 0.0, theta_c, 0.0)),
        ("A1", seed(PI / 2.0, 0.0, PI / 2.0, PI)),
        ("A2", seed(theta_f(), 0.0, PI - theta_f(), PI)),
        ("D1", seed(0.0, 0.0, PI - theta_s(), 0.0)),
        ("D2", seed(theta_s(), 0.0, theta_s(), TAU / 3.0)),
        ("D3", seed(theta_r, 0.0, PI - theta_r, 0.0)),
    ]
}

/// SIC-1: the planar A1 etriad plus two tetrahedral D-etriads that can be
/// rotated independently about z by phi_a and phi_b.
pub fn build_sic1(phi_a: f64, phi_b: f64) -> Sic {
    let third = TAU / 3.0;
    let mut states = Vec::with_capacity(9);
    for k in 0..3 {
        let r = third * k as f64;
        states.push(MajoranaState::from_angles(
            PI / 2.0,
            r,
            PI / 2.0,
            PI + r,
        ));
    }
    for k in 0..3 {
        states.push(MajoranaState::from_angles(
            0.0,
            0.0,
            PI - theta_s(),
            phi_a + third * k as f64,
        ));
    }
    for k in 0..3 {
        states.push(MajoranaState::from_angles(
            PI,
            0.0,
            theta_s(),
            phi_b + third * k as f64,
        ));
    }
    Sic::from_states(states).expect("nine states by construction")
}

/// SIC-2: the A2 double-cone etriad plus the D2 cone etriad and its
/// inversion. Unlike SIC-1, the relative orientations are rigid.
pub fn build_sic2() -> Sic {
    let third = TAU / 3.0;
    let mut states = Vec::with_capacity(9);
    for k in 0..3 {
        let r = third * k as f64;
        states.push(MajoranaState::from_angles(
            theta_f(),
            r,
            PI - theta_f(),
            PI + r,
        ));
    }
    let d2: Vec<MajoranaState> = (0..3)
        .map(|k| {
            let r = third * k as f64;
            MajoranaState::from_angles(theta_s(), r, theta_s(), third + r)
        })
        .collect();
    states.extend(d2.iter().copied());
    states.extend(d2.iter().map(|s| s.time_reversal()));
    Sic::from_states(states).expect("nine states by construction")
}

fn omega() -> Complex64 {
    Complex64::from_polar(1.0, TAU / 3.0)
}

/// Orbit of a fiducial ray under the nine operators X^a Z^b, where
/// Z = diag(1, w, w²) and X cycles the basis vectors. Phase factors are
/// omitted since only rays are kept.
pub fn weyl_heisenberg_orbit(fiducial: &Ray) -> Vec<Ray> {
    let w = omega();
    let c = fiducial.components();
    let mut rays = Vec::with_capacity(9);
    for a in 0..3usize {
        for b in 0..3usize {
            // Z^b multiplies component j by w^(j b); X^a shifts j -> j + a
            let mut z = [Complex64::new(0.0, 0.0); 3];
            for (j, cj) in c.iter().enumerate() {
                z[(j + a) % 3] = cj * w.powu((j * b) as u32);
            }
            rays.push(Ray::new(z));
        }
    }
    rays
}

/// Number of projectively distinct rays in a list, at the given infidelity
/// tolerance.
pub fn distinct_rays(rays: &[Ray], tol: f64) -> usize {
    let mut kept: Vec<&Ray> = Vec::new();
    for r in rays {
        if !kept.iter().any(|k| k.infidelity(r) < tol) {
            kept.push(r);
        }
    }
    kept.len()
}

/// Projective bijection between a SIC and a list of rays.
#[derive(Debug, Clone)]
pub struct SicMatch {
    /// pairing[i] = index into `b` matched to state i of `a`, if complete
    pub pairing: Option<Vec<usize>>,
    /// worst matched infidelity (only meaningful when pairing is Some)
    pub max_infidelity: f64,
}

/// Greedy projective matching of the SIC's rays onto `b` at infidelity 1e-9.
/// Greedy suffices because distinct SIC rays are far apart (overlap 1/4).
pub fn match_sic(a: &Sic, b: &[Ray]) -> Result<SicMatch, Error> {
    if b.len() != 9 {
        return Err(Error::WrongCardinality {
            expected: 9,
            got: b.len(),
        });
    }
    let mut used = [false; 9];
    let mut pairing = Vec::with_capacity(9);
    let mut max_infidelity: f64 = 0.0;
    for s in a.states() {
        let r = s.to_ray();
        let hit = b
            .iter()
            .enumerate()
            .find(|(j, t)| !used[*j] && r.infidelity(t) < 1e-9);
        match hit {
            Some((j, t)) => {
                used[j] = true;
                max_infidelity = max_infidelity.max(r.infidelity(t));
                pairing.push(j);
            }
            None => {
                return Ok(SicMatch {
                    pairing: None,
                    max_infidelity: f64::NAN,
                })
            }
        }
    }
    Ok(SicMatch {
        pairing: Some(pairing),
        max_infidelity,
    })
}

/// Residuals of the SIC verification.
#[derive(Debug, Clone, Copy)]
pub struct SicReport {
    /// worst |overlap - 1/4| over the 36 unordered pairs
    pub max_pair_residual: f64,
    /// operator norm proxy (Frobenius) of sum of projectors minus 3 I
    pub max_projector_residual: f64,
}

impl SicReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_pair_residual < tol && self.max_projector_residual < tol
    }
}

pub fn verify_sic(s: &Sic) -> SicReport {
    let states = s.states();
    let mut max_pair: f64 = 0.0;
    for i in 0..9 {
        for j in i + 1..9 {
            max_pair = max_pair.max((overlap(&states[i], &states[j]).value - 0.25).abs());
        }
    }
    let mut sum = Matrix3::<Complex64>::zeros();
    for r in s.rays() {
        let c = nalgebra::Vector3::from_row_slice(&r.components());
        sum += c * c.adjoint();
    }
    let residual = (sum - Matrix3::identity() * Complex64::new(3.0, 0.0)).norm();
    SicReport {
        max_pair_residual: max_pair,
        max_projector_residual: residual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::overlap::{ray_overlap, relation, Relation, EPS_REL};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn catalog_residuals_vanish() {
        for (label, seed) in catalog_etriads() {
            assert!(
                etriad_residual(&seed).abs() < 1e-12,
                "{label}: {}",
                etriad_residual(&seed)
            );
            let triad = etriad_from_seed(&seed).unwrap();
            for i in 0..3 {
                for j in i + 1..3 {
                    assert_eq!(
                        relation(&triad.states[i], &triad.states[j], EPS_REL),
                        Relation::Equiangular,
                        "{label} pair {i}{j}"
                    );
                }
            }
        }
    }

    #[test]
    fn published_c_and_d3_variants_fail() {
        // the variants resolved away in catalog_etriads()
        let c_wrong = EtriadSeed {
            theta1: (1.0_f64 / 3.0).acos(),
            phi1: 0.0,
            theta2: (1.0_f64 / 3.0).acos(),
            phi2: 0.0,
        };
        assert!(etriad_residual(&c_wrong).abs() > 0.1);
        let d3_wrong = EtriadSeed {
            theta1: (1.0 / 2.0_f64.sqrt()).acos(),
            phi1: 0.0,
            theta2: PI - (1.0 / 2.0_f64.sqrt()).acos(),
            phi2: PI / 2.0,
        };
        assert!(etriad_residual(&d3_wrong).abs() > 0.1);
        assert!(matches!(
            etriad_from_seed(&d3_wrong),
            Err(Error::NotAnEtriad(_))
        ));
    }

    #[test]
    fn residual_depends_only_on_azimuth_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let seed = EtriadSeed {
                theta1: rng.gen_range(0.0..PI),
                phi1: rng.gen_range(0.0..TAU),
                theta2: rng.gen_range(0.0..PI),
                phi2: rng.gen_range(0.0..TAU),
            };
            let delta: f64 = rng.gen_range(0.0..TAU);
            let shifted = EtriadSeed {
                phi1: seed.phi1 + delta,
                phi2: seed.phi2 + delta,
                ..seed
            };
            assert_abs_diff_eq!(
                etriad_residual(&seed),
                etriad_residual(&shifted),
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn residual_zero_iff_equiangular() {
        // dense 2d slice of the seed space with phi1 = 0
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..3_000 {
            let seed = EtriadSeed {
                theta1: rng.gen_range(0.05..PI - 0.05),
                phi1: 0.0,
                theta2: rng.gen_range(0.05..PI - 0.05),
                phi2: rng.gen_range(0.0..TAU),
            };
            let third = TAU / 3.0;
            let s0 = MajoranaState::from_angles(seed.theta1, 0.0, seed.theta2, seed.phi2);
            let s1 = MajoranaState::from_angles(
                seed.theta1,
                third,
                seed.theta2,
                seed.phi2 + third,
            );
            let defect = (overlap(&s0, &s1).value - 0.25).abs();
            let res = etriad_residual(&seed).abs();
            // zero-set agreement: the residual is the overlap deviation
            // rescaled by a bounded positive factor
            if res < 1e-9 {
                assert!(defect < 1e-8, "residual {res} but defect {defect}");
            }
            if res > 1e-4 {
                assert!(defect > 1e-9, "residual {res} but defect {defect}");
            }
        }
    }

    #[test]
    fn all_three_pairs_give_the_same_condition() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let third = TAU / 3.0;
        for _ in 0..500 {
            let (t1, t2, p2) = (
                rng.gen_range(0.05..PI - 0.05),
                rng.gen_range(0.05..PI - 0.05),
                rng.gen_range(0.0..TAU),
            );
            let member = |k: usize| {
                MajoranaState::from_angles(
                    t1,
                    third * k as f64,
                    t2,
                    p2 + third * k as f64,
                )
            };
            let v01 = overlap(&member(0), &member(1)).value;
            let v12 = overlap(&member(1), &member(2)).value;
            let v02 = overlap(&member(0), &member(2)).value;
            assert_abs_diff_eq!(v01, v12, epsilon = 1e-12);
            assert_abs_diff_eq!(v01, v02, epsilon = 1e-12);
        }
    }

    #[test]
    fn etriad_is_never_a_basis() {
        for (label, seed) in catalog_etriads() {
            let triad = etriad_from_seed(&seed).unwrap();
            for i in 0..3 {
                for j in i + 1..3 {
                    let v = overlap(&triad.states[i], &triad.states[j]).value;
                    assert!(v > 0.2, "{label}: overlap {v} too close to orthogonal");
                }
            }
        }
    }

    #[test]
    fn sic1_verifies_at_sample_parameters() {
        for (pa, pb) in [(0.0, 0.0), (PI, PI), (0.7, 2.1), (5.1, 0.3)] {
            let s = build_sic1(pa, pb);
            let report = verify_sic(&s);
            assert!(report.passes(1e-10), "({pa},{pb}): {report:?}");
        }
    }

    #[test]
    fn sic1_ray_table() {
        let (pa, pb) = (0.9, 4.2);
        let s = build_sic1(pa, pb);
        let w = omega();
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let mut expected = Vec::new();
        // the AAA states here step by 2 pi/3, so the third ray component
        // advances by w^2 per state; the published set {-1, -w, -w^2} is the
        // same three rays in another order
        for k in 0..3 {
            expected.push(Ray::new([one, zero, -w.powu(2 * k)]));
        }
        for k in 0..3 {
            expected.push(Ray::new([one, w.powu(k) * Complex64::from_polar(1.0, pa), zero]));
        }
        for k in 0..3 {
            expected.push(Ray::new([zero, one, w.powu(k) * Complex64::from_polar(1.0, pb)]));
        }
        for (state, want) in s.states().iter().zip(expected.iter()) {
            assert!(state.to_ray().infidelity(want) < 1e-12);
        }
    }

    #[test]
    fn sic2_verifies_and_matches_tables() {
        let s = build_sic2();
        assert!(verify_sic(&s).passes(1e-10));

        // M-vector spot check: second D-etriad, second state
        let want = MajoranaState::from_angles(theta_s(), TAU / 3.0, theta_s(), 2.0 * TAU / 3.0);
        assert!(s.states()[4].approx_eq(&want, 1e-12));

        // ray spot check: first A2 state is (1,-2,-1)/sqrt 6
        let r = s.states()[0].to_ray();
        let want = Ray::from_reals([1.0, -2.0, -1.0]);
        assert!(r.infidelity(&want) < 1e-12);

        // full ray table
        let h = Complex64::from_polar(1.0, PI / 3.0); // w^{1/2}
        let one = Complex64::new(1.0, 0.0);
        let table: [[Complex64; 3]; 9] = [
            [one, -2.0 * one, -one],
            [one, 2.0 / h, h],
            [one, 2.0 * h, one / h],
            [one, 0.5 * h, -0.5 / h],
            [one, -0.5 * one, 0.5 * one],
            [one, 0.5 / h, -0.5 * h],
            [one, -h, -2.0 / h],
            [one, one, 2.0 * one],
            [one, -one / h, -2.0 * h],
        ];
        for (state, want) in s.states().iter().zip(table.iter()) {
            assert!(
                state.to_ray().infidelity(&Ray::new(*want)) < 1e-12,
                "ray table mismatch"
            );
        }
    }

    #[test]
    fn sic2_vector_system_symmetries() {
        let s = build_sic2();
        let states: Vec<MajoranaState> = s.states().to_vec();
        let closed = |map: &dyn Fn(&MajoranaState) -> MajoranaState| {
            states.iter().all(|x| {
                let m = map(x);
                states.iter().any(|y| y.approx_eq(&m, 1e-9))
            })
        };
        assert!(closed(&|x| x.time_reversal()));
        assert!(closed(&|x| x.rotate_about_z(TAU / 3.0)));
    }

    #[test]
    fn weyl_orbit_of_hesse_fiducial() {
        let fid = Ray::from_reals([0.0, 1.0, -1.0]);
        let orbit = weyl_heisenberg_orbit(&fid);
        assert_eq!(orbit.len(), 9);
        assert_eq!(distinct_rays(&orbit, 1e-9), 9);
        for i in 0..9 {
            for j in i + 1..9 {
                assert_abs_diff_eq!(
                    ray_overlap(&orbit[i], &orbit[j]),
                    0.25,
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn weyl_orbit_of_family_fiducial() {
        let phi = PI / 12.0;
        let fid = Ray::new([
            Complex64::new(0.0, 0.0),
            Complex64::from_polar(1.0, phi),
            Complex64::from_polar(1.0, -phi),
        ]);
        let orbit = weyl_heisenberg_orbit(&fid);
        for i in 0..9 {
            for j in i + 1..9 {
                assert_abs_diff_eq!(
                    ray_overlap(&orbit[i], &orbit[j]),
                    0.25,
                    epsilon = 1e-12
                );
            }
        }
        // the orbit is unitarily equivalent to the SIC-1 member at
        // phi_a = phi_b = 2 phi but coincides with it ray-for-ray only at
        // phi = pi/2 (the maximally symmetric case); here it is a distinct
        // ray set
        let m = match_sic(&build_sic1(2.0 * phi, 2.0 * phi), &orbit).unwrap();
        assert!(m.pairing.is_none());
    }

    #[test]
    fn weyl_orbit_of_basis_vector_degenerates() {
        let orbit = weyl_heisenberg_orbit(&Ray::from_reals([1.0, 0.0, 0.0]));
        assert_eq!(orbit.len(), 9);
        assert_eq!(distinct_rays(&orbit, 1e-9), 3);
    }

    #[test]
    fn hesse_orbit_matches_sic1_pi_pi() {
        let orbit = weyl_heisenberg_orbit(&Ray::from_reals([0.0, 1.0, -1.0]));
        let m = match_sic(&build_sic1(PI, PI), &orbit).unwrap();
        let pairing = m.pairing.expect("bijection exists");
        let mut seen = [false; 9];
        for j in pairing {
            assert!(!seen[j]);
            seen[j] = true;
        }
        assert!(m.max_infidelity < 1e-9);

        // SIC-2 does not match the Hesse orbit
        let m2 = match_sic(&build_sic2(), &orbit).unwrap();
        assert!(m2.pairing.is_none());
    }

    #[test]
    fn sic_matches_itself() {
        let s = build_sic2();
        let m = match_sic(&s, &s.rays()).unwrap();
        assert_eq!(m.pairing, Some((0..9).collect()));
    }

    #[test]
    fn wrong_cardinality_reported() {
        let s = build_sic2();
        let eight: Vec<Ray> = s.rays().into_iter().take(8).collect();
        assert!(matches!(
            match_sic(&s, &eight),
            Err(Error::WrongCardinality {
                expected: 9,
                got: 8
            })
        ));
        let states: Vec<MajoranaState> = s.states().iter().take(8).copied().collect();
        assert!(Sic::from_states(states).is_err());
    }

    #[test]
    fn sic_completeness_for_random_probes() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let sics = [build_sic2(), build_sic1(1.3, 0.2)];
        for s in &sics {
            for _ in 0..50 {
                let t = MajoranaState::random(&mut rng);
                let total: f64 = s.states().iter().map(|x| overlap(x, &t).value).sum();
                assert_abs_diff_eq!(total, 3.0, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn perturbed_sic_fails() {
        let mut states = build_sic2().states().to_vec();
        let (a, b) = states[0].angles();
        states[0] =
            MajoranaState::from_angles(a.theta() + 1e-4, a.phi(), b.theta(), b.phi());
        let s = Sic::from_states(states).unwrap();
        assert!(!verify_sic(&s).passes(1e-10));
    }
}
