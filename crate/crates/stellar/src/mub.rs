//! Mutually unbiased bases of a spin-1 system: the double-cone family, the
//! special angles, the maximal four-basis set, the Pauli-group eigenbases and
//! the diagonal unitary connecting the two, the unextendible three-basis set,
//! and the grid searches backing the rule-out and unextendibility claims.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix3, Matrix4};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::overlap::{overlap, EPS_REL};
use crate::states::{MajoranaState, Ray};
use crate::Error;

/// Lower end of the double-cone interval, arccos(1/sqrt 3).
pub fn cone_theta_min() -> f64 {
    (1.0 / 3.0_f64.sqrt()).acos()
}

/// An orthonormal triple of spin-1 states.
#[derive(Debug, Clone)]
pub struct Basis {
    pub states: [MajoranaState; 3],
}

/// A collection of pairwise mutually unbiased bases.
#[derive(Debug, Clone)]
pub struct MubSet {
    pub bases: Vec<Basis>,
}

impl MubSet {
    pub fn all_states(&self) -> Vec<MajoranaState> {
        self.bases.iter().flat_map(|b| b.states).collect()
    }
}

/// The special angles of the construction, all in radians.
#[derive(Debug, Clone, Copy)]
pub struct SpecialAngles {
    pub theta_d: f64,
    pub phi_d: f64,
    pub phi_h: f64,
    pub theta_i: f64,
    pub phi_i: f64,
    pub phi_r: f64,
}

/// Residuals of the defining equations of each special angle.
#[derive(Debug, Clone, Copy)]
pub struct AngleResiduals {
    /// cos^4(theta_d) + 10 cos^2(theta_d) - 3
    pub theta_d_quartic: f64,
    /// cos(phi_d) + 2 cot^2(theta_d)
    pub phi_d_definition: f64,
    /// direct unbiasedness defect of the phi_h offset state
    pub phi_h_unbiasedness: f64,
    /// phi_h - phi_d/2 - 3 pi/4
    pub phi_h_identity: f64,
    /// 3 cos^4(theta_I) + 6 cos^2(theta_I) - 1
    pub theta_i_quartic: f64,
    /// cos(phi_I) + 2 cot^2(theta_I)
    pub phi_i_definition: f64,
    /// phi_r - phi_d/2 + pi/3
    pub phi_r_identity: f64,
}

fn cot_sq(theta: f64) -> f64 {
    let t = theta.cos().powi(2);
    t / (1.0 - t)
}

/// Solve every special angle from its defining polynomial.
///
/// The quartics in cos^2(theta) are quadratics in t = cos^2(theta) and are
/// solved in closed form. The offset angle phi_h is obtained by solving the
/// quartic in cos(phi_h) coming from the unbiasedness condition between the
/// theta_d cone state and the equatorial pair, then polishing the root on the
/// unsquared condition; the closed-form identity phi_h = phi_d/2 + 3 pi/4 is
/// checked downstream rather than assumed.
pub fn solve_special_angles() -> SpecialAngles {
    // t^2 + 10 t - 3 = 0, positive root
    let t_d = 2.0 * 7.0_f64.sqrt() - 5.0;
    let theta_d = t_d.sqrt().acos();
    let phi_d = (-2.0 * t_d / (1.0 - t_d)).acos();

    // 3 t^2 + 6 t - 1 = 0, positive root
    let t_i = 2.0 / 3.0_f64.sqrt() - 1.0;
    let theta_i = t_i.sqrt().acos();
    let phi_i = (-2.0 * t_i / (1.0 - t_i)).acos();

    let phi_h = solve_offset_angle(theta_d, phi_d);
    let phi_r = phi_d / 2.0 - PI / 3.0;

    SpecialAngles {
        theta_d,
        phi_d,
        phi_h,
        theta_i,
        phi_i,
        phi_r,
    }
}

impl SpecialAngles {
    pub fn residuals(&self) -> AngleResiduals {
        let td = self.theta_d.cos().powi(2);
        let ti = self.theta_i.cos().powi(2);
        let cone = MajoranaState::from_angles(
            self.theta_d,
            0.0,
            PI - self.theta_d,
            self.phi_d,
        );
        let eq = equatorial_pair_state(self.phi_h);
        AngleResiduals {
            theta_d_quartic: td * td + 10.0 * td - 3.0,
            phi_d_definition: self.phi_d.cos() + 2.0 * cot_sq(self.theta_d),
            phi_h_unbiasedness: (overlap(&cone, &eq).raw - 1.0 / 3.0).abs(),
            phi_h_identity: self.phi_h - self.phi_d / 2.0 - 3.0 * PI / 4.0,
            theta_i_quartic: 3.0 * ti * ti + 6.0 * ti - 1.0,
            phi_i_definition: self.phi_i.cos() + 2.0 * cot_sq(self.theta_i),
            phi_r_identity: self.phi_r - self.phi_d / 2.0 + PI / 3.0,
        }
    }
}

/// The flattened double-cone state with M-vectors at azimuths phi and
/// phi + pi/2 in the x-y plane.
fn equatorial_pair_state(phi: f64) -> MajoranaState {
    MajoranaState::from_angles(PI / 2.0, phi, PI / 2.0, phi + PI / 2.0)
}

/// Unbiasedness condition between the theta_d cone state and the equatorial
/// pair at offset phi, as a function whose zeros are the valid offsets.
fn offset_condition(theta_d: f64, phi_d: f64, phi: f64) -> (f64, f64) {
    let s = theta_d.sin();
    let (spd, cpd) = phi_d.sin_cos();
    let x = phi.cos();
    // P(x) + Q(x) sin(phi) = 0 is the unbiasedness condition
    let p = (1.0 + cpd + spd) * x + s * spd * (2.0 * x * x - 1.0);
    let q = -(1.0 + cpd - spd) - 2.0 * s * cpd * x;
    (p, q)
}

fn offset_g(theta_d: f64, phi_d: f64, phi: f64) -> f64 {
    let (p, q) = offset_condition(theta_d, phi_d, phi);
    p + q * phi.sin()
}

fn solve_offset_angle(theta_d: f64, phi_d: f64) -> f64 {
    // quartic in x = cos(phi): P(x)^2 - Q(x)^2 (1 - x^2) = 0
    let s = theta_d.sin();
    let (spd, cpd) = phi_d.sin_cos();
    let (a1, a2) = (1.0 + cpd + spd, s * spd); // P = a1 x + a2 (2x^2 - 1)
    let (b0, b1) = (-(1.0 + cpd - spd), -2.0 * s * cpd); // Q = b0 + b1 x

    // expand P^2 - Q^2 (1 - x^2) into c4 x^4 + ... + c0
    let c4 = 4.0 * a2 * a2 + b1 * b1;
    let c3 = 4.0 * a1 * a2 + 2.0 * b0 * b1;
    let c2 = a1 * a1 - 4.0 * a2 * a2 + b0 * b0 - b1 * b1;
    let c1 = -2.0 * a1 * a2 - 2.0 * b0 * b1;
    let c0 = a2 * a2 - b0 * b0;

    let quartic = |x: f64| (((c4 * x + c3) * x + c2) * x + c1) * x + c0;
    let scale = c4.abs() + c3.abs() + c2.abs() + c1.abs() + c0.abs();

    let candidates = real_quartic_roots(c4, c3, c2, c1, c0);
    let mut best: Option<f64> = None;
    for x in candidates {
        if !(-1.0..=1.0).contains(&x) {
            continue;
        }
        // the quartic carries the wanted root with multiplicity two, so
        // companion-matrix eigenvalues locate it only to ~sqrt(eps); as a
        // double root of the quartic it is a simple root of the derivative,
        // where Newton recovers full precision
        let x = if quartic(x).abs() < 1e-12 * scale {
            polish_derivative_root(c4, c3, c2, c1, x)
        } else {
            x
        };
        for phi in [x.acos(), TAU - x.acos()] {
            if offset_g(theta_d, phi_d, phi).abs() > 1e-9 {
                continue;
            }
            // verify directly via the overlap
            let cone = MajoranaState::from_angles(theta_d, 0.0, PI - theta_d, phi_d);
            let eq = equatorial_pair_state(phi);
            if (overlap(&cone, &eq).raw - 1.0 / 3.0).abs() > 1e-9 {
                continue;
            }
            // the three valid offsets differ by 2 pi/3; keep the third-quadrant one
            if phi > PI && phi < 3.0 * PI / 2.0 {
                best = Some(phi);
            }
        }
    }
    best.expect("offset-angle quartic has a third-quadrant solution")
}

/// Newton polish of a simple root of the quartic's derivative
/// 4 c4 x^3 + 3 c3 x^2 + 2 c2 x + c1, starting near x0.
fn polish_derivative_root(c4: f64, c3: f64, c2: f64, c1: f64, x0: f64) -> f64 {
    let (d3, d2, d1, d0) = (4.0 * c4, 3.0 * c3, 2.0 * c2, c1);
    let mut x = x0;
    for _ in 0..60 {
        let f = ((d3 * x + d2) * x + d1) * x + d0;
        let fp = (3.0 * d3 * x + 2.0 * d2) * x + d1;
        if fp.abs() < 1e-300 {
            break;
        }
        let step = f / fp;
        x -= step;
        if step.abs() < 1e-16 {
            break;
        }
    }
    x
}

/// Real roots of a quartic via the eigenvalues of its companion matrix.
fn real_quartic_roots(c4: f64, c3: f64, c2: f64, c1: f64, c0: f64) -> Vec<f64> {
    assert!(c4.abs() > 1e-14, "leading quartic coefficient vanished");
    let (a, b, c, d) = (c3 / c4, c2 / c4, c1 / c4, c0 / c4);
    #[rustfmt::skip]
    let companion = Matrix4::new(
        0.0, 0.0, 0.0, -d,
        1.0, 0.0, 0.0, -c,
        0.0, 1.0, 0.0, -b,
        0.0, 0.0, 1.0, -a,
    );
    companion
        .complex_eigenvalues()
        .iter()
        .filter(|z| z.im.abs() < 1e-7)
        .map(|z| z.re)
        .collect()
}

/// Parameters of a double-cone state: the semi-vertex angle and a rigid
/// azimuthal offset of the whole state about z.
#[derive(Debug, Clone, Copy)]
pub struct DoubleConeParams {
    pub theta: f64,
    pub psi: f64,
}

/// Construct the double-cone state at semi-vertex angle theta, rotated about
/// z by psi. The internal azimuth is fixed by cos(phi) = -2 cot^2(theta),
/// taken in the second quadrant.
pub fn double_cone_state(p: DoubleConeParams) -> Result<MajoranaState, Error> {
    double_cone_state_mirror(p.theta, p.psi, false)
}

/// Double-cone state with a choice of chirality: `mirror` selects the
/// opposite sign of the internal azimuth, i.e. the xy-reflection branch.
/// Both branches are unbiased to the CAC basis; the reflections and
/// inversions of second-quadrant states live on the mirror branch, so the
/// extension search must cover both.
pub fn double_cone_state_mirror(
    theta: f64,
    psi: f64,
    mirror: bool,
) -> Result<MajoranaState, Error> {
    let arg = -2.0 * cot_sq(theta);
    if !(-1.0 - 1e-9..=0.0).contains(&arg) || theta > PI / 2.0 + 1e-12 {
        return Err(Error::ConeAngleOutOfRange(theta));
    }
    let mut phi = arg.clamp(-1.0, 1.0).acos();
    if mirror {
        phi = -phi;
    }
    Ok(MajoranaState::from_angles(
        theta,
        psi,
        PI - theta,
        psi + phi,
    ))
}

/// Residuals of the identity / orthogonality / unbiasedness polynomials for
/// a double-cone state against its xy-reflection.
pub fn reflected_relation_polynomials(theta: f64) -> (f64, f64, f64) {
    let t = theta.cos().powi(2);
    (t * (1.0 + t), t * t - 26.0 * t + 9.0, t * t + 10.0 * t - 3.0)
}

/// Residuals of the identity / orthogonality / unbiasedness polynomials for
/// a double-cone state against its time reversal (inversion).
pub fn inverted_relation_polynomials(theta: f64) -> (f64, f64, f64) {
    let t = theta.cos().powi(2);
    (
        t - 1.0 / 3.0,
        9.0 * t * t + 6.0 * t + 1.0,
        3.0 * t * t + 6.0 * t - 1.0,
    )
}

/// Outcome of the pi-rotation sweep ruling out the even-k symmetry case.
#[derive(Debug, Clone, Copy)]
pub struct PiRotationReport {
    pub samples: usize,
    /// minimum |overlap| between a cone state and its pi-rotation
    pub min_orthogonality_gap: f64,
    /// minimum |overlap - 1/3|
    pub min_unbiasedness_gap: f64,
    pub hits: usize,
}

/// Sweep theta over the open double-cone interval and check that a state and
/// its pi-rotation about z are never orthogonal nor unbiased.
pub fn rotated_pi_ruled_out(theta_steps: usize) -> PiRotationReport {
    assert!(theta_steps >= 1_000);
    let lo = cone_theta_min();
    let hi = PI / 2.0;
    let mut min_orth = f64::INFINITY;
    let mut min_unb = f64::INFINITY;
    let mut hits = 0;
    for k in 1..=theta_steps {
        let theta = lo + (hi - lo) * k as f64 / (theta_steps + 1) as f64;
        let s = double_cone_state(DoubleConeParams { theta, psi: 0.0 }).unwrap();
        let rotated = s.rotate_about_z(PI);
        let v = overlap(&s, &rotated).value;
        min_orth = min_orth.min(v.abs());
        min_unb = min_unb.min((v - 1.0 / 3.0).abs());
        if v.abs() < EPS_REL || (v - 1.0 / 3.0).abs() < EPS_REL {
            hits += 1;
        }
    }
    PiRotationReport {
        samples: theta_steps,
        min_orthogonality_gap: min_orth,
        min_unbiasedness_gap: min_unb,
        hits,
    }
}

pub fn cac_basis() -> Basis {
    Basis {
        states: [
            MajoranaState::from_angles(0.0, 0.0, 0.0, 0.0),
            MajoranaState::from_angles(0.0, 0.0, PI, 0.0),
            MajoranaState::from_angles(PI, 0.0, PI, 0.0),
        ],
    }
}

/// The unique maximal set of four MUBs: CAC, the two reflected bases on the
/// theta_d double-cone, and the equatorial basis at offset phi_h.
pub fn build_maximal_mub() -> MubSet {
    let a = solve_special_angles();
    let third = TAU / 3.0;
    let cone_basis = |upper: f64, lower: f64| Basis {
        states: [0, 1, 2].map(|k| {
            MajoranaState::from_angles(
                upper,
                third * k as f64,
                lower,
                a.phi_d + third * k as f64,
            )
        }),
    };
    let equatorial = Basis {
        states: [0, 1, 2].map(|k| equatorial_pair_state(a.phi_h + third * k as f64)),
    };
    MubSet {
        bases: vec![
            cac_basis(),
            cone_basis(a.theta_d, PI - a.theta_d),
            cone_basis(PI - a.theta_d, a.theta_d),
            equatorial,
        ],
    }
}

fn omega() -> Complex64 {
    Complex64::from_polar(1.0, TAU / 3.0)
}

fn pauli_z() -> Matrix3<Complex64> {
    let w = omega();
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    Matrix3::new(one, zero, zero, zero, w, zero, zero, zero, w * w)
}

fn pauli_x() -> Matrix3<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    // X|j> = |j+1 mod 3>
    Matrix3::new(zero, zero, one, one, zero, zero, zero, one, zero)
}

/// Eigenbasis of a unitary with U^3 = I, via the spectral projectors
/// P_k = (I + w^{-k} U + w^{-2k} U^2)/3. Ordered by eigenvalue w^k.
fn order3_eigenbasis(u: &Matrix3<Complex64>) -> [Ray; 3] {
    let w = omega();
    let u2 = u * u;
    [0, 1, 2].map(|k| {
        let wk = w.powf(-(k as f64));
        let p = (Matrix3::identity() + u * wk + u2 * (wk * wk)) / Complex64::new(3.0, 0.0);
        // any nonzero column of the rank-1 projector is the eigenvector
        let col = (0..3)
            .map(|j| p.column(j).into_owned())
            .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
            .unwrap();
        Ray::new([col[0], col[1], col[2]])
    })
}

/// The four Pauli-group eigenbases, in the order Z, W, Y, X, each computed by
/// explicit eigen-decomposition of the commuting operator pair.
pub fn build_pauli_mub() -> Vec<[Ray; 3]> {
    let z = pauli_z();
    let x = pauli_x();
    let y = x * z;
    let w = x * z * z;
    vec![
        order3_eigenbasis(&z),
        order3_eigenbasis(&w),
        order3_eigenbasis(&y),
        order3_eigenbasis(&x),
    ]
}

/// Outcome of matching the Majorana-frame MUB rays onto the Pauli rays.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    /// (majorana basis, state) -> (pauli basis, state) for all 12 states
    pub pairs: Vec<((usize, usize), (usize, usize))>,
    /// worst 1 - |inner|² over the matched pairs
    pub max_infidelity: f64,
}

/// The diagonal unitary diag(e^{i phi_r}, 1, e^{-i phi_r}) mapping the
/// Majorana-frame MUB rays onto the Pauli-group rays, with the verified
/// 12-state matching.
pub fn equivalence_unitary() -> Result<(Matrix3<Complex64>, EquivalenceReport), Error> {
    let angles = solve_special_angles();
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let u = Matrix3::new(
        Complex64::from_polar(1.0, angles.phi_r),
        zero,
        zero,
        zero,
        one,
        zero,
        zero,
        zero,
        Complex64::from_polar(1.0, -angles.phi_r),
    );

    let mub = build_maximal_mub();
    let pauli = build_pauli_mub();
    let mut pairs = Vec::new();
    let mut used = [[false; 3]; 4];
    let mut max_infidelity: f64 = 0.0;
    for (bi, basis) in mub.bases.iter().enumerate() {
        for (si, state) in basis.states.iter().enumerate() {
            let mapped = state.to_ray().apply(&u);
            let mut found = None;
            for (pb, pbasis) in pauli.iter().enumerate() {
                for (ps, pray) in pbasis.iter().enumerate() {
                    let d = mapped.infidelity(pray);
                    if d < 1e-9 && !used[pb][ps] {
                        found = Some(((pb, ps), d));
                        break;
                    }
                }
                if found.is_some() {
                    break;
                }
            }
            match found {
                Some(((pb, ps), d)) => {
                    used[pb][ps] = true;
                    max_infidelity = max_infidelity.max(d);
                    pairs.push(((bi, si), (pb, ps)));
                }
                None => {
                    return Err(Error::EquivalenceMismatch(format!(
                        "basis {bi} state {si} has no Pauli partner"
                    )))
                }
            }
        }
    }
    Ok((u, EquivalenceReport {
        pairs,
        max_infidelity,
    }))
}

/// The inversion-symmetric triple: CAC, the theta_I basis, and its
/// inversion. The set has C_3i point symmetry.
///
/// Despite a widespread claim to the contrary, this triple is extendible:
/// [`anticoherent_basis`] is unbiased to all nine of its states and
/// completes it to a maximal set of four MUBs. The completing states sit at
/// the boundary angle arccos(1/sqrt 3) of the double-cone interval, where a
/// cone state degenerates to an anticoherent state equal to its own
/// inversion — the case that inversion-symmetry bookkeeping treats as
/// yielding "nothing new".
pub fn build_inversion_triple() -> MubSet {
    let a = solve_special_angles();
    let third = TAU / 3.0;
    let basis = Basis {
        states: [0, 1, 2].map(|k| {
            MajoranaState::from_angles(
                a.theta_i,
                third * k as f64,
                PI - a.theta_i,
                a.phi_i + third * k as f64,
            )
        }),
    };
    let inverted = Basis {
        states: basis.states.map(|s| s.time_reversal()),
    };
    MubSet {
        bases: vec![cac_basis(), basis, inverted],
    }
}

/// The basis of three anticoherent states whose axes are mutually orthogonal
/// (polar angle arccos(1/sqrt 3), azimuths phi_I/2 - pi/6 + 2 pi k/3). Each
/// state is its own inversion, so the basis is C_3i-symmetric; it is
/// unbiased to every state of [`build_inversion_triple`] and completes that
/// triple to a maximal set of four MUBs.
pub fn anticoherent_basis() -> Basis {
    let a = solve_special_angles();
    let third = TAU / 3.0;
    let theta = cone_theta_min();
    let psi0 = a.phi_i / 2.0 - PI / 6.0;
    Basis {
        states: [0, 1, 2].map(|k| {
            double_cone_state_mirror(theta, psi0 + third * k as f64, false)
                .expect("boundary angle is inside the cone interval")
        }),
    }
}

/// The inversion triple together with its completing anticoherent basis: a
/// maximal set of four MUBs distinct in Majorana geometry from
/// [`build_maximal_mub`] (they are related by a non-rotational unitary).
pub fn build_completed_inversion_mub() -> MubSet {
    let mut m = build_inversion_triple();
    m.bases.push(anticoherent_basis());
    m
}

/// Residual report for a MUB verification.
#[derive(Debug, Clone, Copy)]
pub struct MubReport {
    pub max_normalization_residual: f64,
    pub max_orthogonality_residual: f64,
    pub max_unbiasedness_residual: f64,
}

impl MubReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_normalization_residual < tol
            && self.max_orthogonality_residual < tol
            && self.max_unbiasedness_residual < tol
    }

    pub fn worst(&self) -> f64 {
        self.max_normalization_residual
            .max(self.max_orthogonality_residual)
            .max(self.max_unbiasedness_residual)
    }
}

pub fn verify_mub(m: &MubSet) -> MubReport {
    let mut norm_res: f64 = 0.0;
    let mut orth_res: f64 = 0.0;
    let mut unb_res: f64 = 0.0;
    for (bi, basis) in m.bases.iter().enumerate() {
        for (si, s) in basis.states.iter().enumerate() {
            norm_res = norm_res.max((overlap(s, s).raw - 1.0).abs());
            for t in &basis.states[si + 1..] {
                orth_res = orth_res.max(overlap(s, t).value.abs());
            }
            for other in &m.bases[bi + 1..] {
                for t in &other.states {
                    unb_res = unb_res.max((overlap(s, t).value - 1.0 / 3.0).abs());
                }
            }
        }
    }
    MubReport {
        max_normalization_residual: norm_res,
        max_orthogonality_residual: orth_res,
        max_unbiasedness_residual: unb_res,
    }
}

/// A polished candidate from the extension search.
#[derive(Debug, Clone, Copy)]
pub struct ExtensionCandidate {
    pub theta: f64,
    pub psi: f64,
    pub mirror: bool,
    pub residual: f64,
}

impl ExtensionCandidate {
    pub fn state(&self) -> MajoranaState {
        double_cone_state_mirror(self.theta, self.psi, self.mirror)
            .expect("polished candidate stays inside the cone interval")
    }
}

/// Result of the unbiased-extension search over the double-cone domain.
#[derive(Debug, Clone)]
pub struct ExtensionSearch {
    pub hits: Vec<ExtensionCandidate>,
    /// candidates with residual between the hit tolerance and 1e-6,
    /// reported separately to distinguish noise from genuine solutions
    pub near_misses: Vec<ExtensionCandidate>,
}

/// Search for states unbiased to every state of `m`.
///
/// Any state unbiased to the CAC basis is a double-cone state, so the domain
/// is (theta, psi) in [arccos(1/sqrt 3), pi/2] x [0, 2 pi), on both chirality
/// branches. Grid scan followed by shrinking pattern-search polish; hits are
/// sorted by (theta, psi) so the result is independent of partitioning.
pub fn search_unbiased_extension(
    m: &MubSet,
    grid: usize,
    refine_tol: f64,
) -> ExtensionSearch {
    assert!(grid >= 100, "grid must be at least 100 per axis");
    let states = m.all_states();
    let lo = cone_theta_min();
    let hi = PI / 2.0;
    let dt = (hi - lo) / grid as f64;
    let psi_steps = 2 * grid;
    let dp = TAU / psi_steps as f64;
    let coarse = 8.0 / grid as f64;

    let residual = |theta: f64, psi: f64, mirror: bool, cap: f64| -> f64 {
        let s = match double_cone_state_mirror(theta, psi, mirror) {
            Ok(s) => s,
            Err(_) => return f64::INFINITY,
        };
        let mut worst: f64 = 0.0;
        for t in &states {
            worst = worst.max((overlap(&s, t).value - 1.0 / 3.0).abs());
            if worst > cap {
                return worst;
            }
        }
        worst
    };

    let mut candidates: Vec<ExtensionCandidate> = (0..=grid)
        .into_par_iter()
        .flat_map_iter(|i| {
            let theta = lo + dt * i as f64;
            let mut row = Vec::new();
            for mirror in [false, true] {
                for j in 0..psi_steps {
                    let psi = dp * j as f64;
                    let r = residual(theta, psi, mirror, coarse);
                    if r < coarse {
                        row.push(ExtensionCandidate {
                            theta,
                            psi,
                            mirror,
                            residual: r,
                        });
                    }
                }
            }
            row
        })
        .collect();

    // polish each candidate by shrinking pattern search
    for c in &mut candidates {
        let mut step_t = dt;
        let mut step_p = dp;
        for _ in 0..90 {
            let mut best = (c.theta, c.psi, c.residual);
            for di in [-1.0, 0.0, 1.0] {
                for dj in [-1.0, 0.0, 1.0] {
                    let theta = (c.theta + di * step_t).clamp(lo, hi);
                    let psi = c.psi + dj * step_p;
                    let r = residual(theta, psi, c.mirror, best.2);
                    if r < best.2 {
                        best = (theta, psi, r);
                    }
                }
            }
            if best.0 == c.theta && best.1 == c.psi {
                step_t *= 0.5;
                step_p *= 0.5;
            }
            c.theta = best.0;
            c.psi = best.1;
            c.residual = best.2;
        }
        c.psi = crate::geometry::canonical_azimuth(c.psi);
    }

    // dedupe: polished candidates from neighboring grid cells converge to the
    // same state
    let mut hits: Vec<ExtensionCandidate> = Vec::new();
    let mut near_misses: Vec<ExtensionCandidate> = Vec::new();
    candidates.sort_by(|a, b| a.residual.partial_cmp(&b.residual).unwrap());
    for c in candidates {
        if c.residual >= 1e-6 {
            continue;
        }
        let state = c.state();
        let seen = |list: &[ExtensionCandidate]| {
            list.iter().any(|h| h.state().approx_eq(&state, 1e-6))
        };
        if seen(&hits) {
            continue;
        }
        if c.residual < refine_tol {
            hits.push(c);
        } else if !seen(&near_misses) {
            near_misses.push(c);
        }
    }
    let key = |c: &ExtensionCandidate| (c.theta, c.psi);
    hits.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
    near_misses.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
    ExtensionSearch { hits, near_misses }
}

/// Set-level closure check: does `map` send the state set into itself?
pub fn closed_under<F>(states: &[MajoranaState], map: F, tol: f64) -> bool
where
    F: Fn(&MajoranaState) -> MajoranaState,
{
    states.iter().all(|s| {
        let mapped = map(s);
        states.iter().any(|t| t.approx_eq(&mapped, tol))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::overlap::{relation, Relation};
    use approx::assert_abs_diff_eq;

    fn deg(rad: f64) -> f64 {
        rad.to_degrees()
    }

    #[test]
    fn special_angle_degree_values() {
        let a = solve_special_angles();
        assert_abs_diff_eq!(deg(a.theta_d), 57.32, epsilon = 0.01);
        assert_abs_diff_eq!(deg(a.phi_d), 145.37, epsilon = 0.01);
        assert_abs_diff_eq!(deg(a.phi_h), 207.69, epsilon = 0.01);
        assert_abs_diff_eq!(deg(a.theta_i), 66.84, epsilon = 0.01);
        assert_abs_diff_eq!(deg(a.phi_i), 111.47, epsilon = 0.01);
    }

    #[test]
    fn special_angle_residuals() {
        let r = solve_special_angles().residuals();
        assert!(r.theta_d_quartic.abs() < 1e-12);
        assert!(r.phi_d_definition.abs() < 1e-12);
        assert!(r.phi_h_unbiasedness < 1e-12);
        assert!(r.phi_h_identity.abs() < 1e-12);
        assert!(r.theta_i_quartic.abs() < 1e-12);
        assert!(r.phi_i_definition.abs() < 1e-12);
        assert!(r.phi_r_identity.abs() < 1e-12);
    }

    #[test]
    fn double_cone_limits_and_constraint() {
        let a_state = double_cone_state(DoubleConeParams {
            theta: cone_theta_min(),
            psi: 0.0,
        })
        .unwrap();
        assert_eq!(
            a_state.classify(),
            crate::states::StateClass::Anticoherent
        );

        let planar = double_cone_state(DoubleConeParams {
            theta: PI / 2.0,
            psi: 0.0,
        })
        .unwrap();
        assert_abs_diff_eq!(planar.v1().dot(planar.v2()), 0.0, epsilon = 1e-12);

        // b2z = -b1z and b1·b2 = -3 cos^2 theta over the interval
        for k in 0..40 {
            let theta = cone_theta_min() + (PI / 2.0 - cone_theta_min()) * k as f64 / 39.0;
            let s = double_cone_state(DoubleConeParams { theta, psi: 0.7 }).unwrap();
            assert_abs_diff_eq!(s.v1().z(), -s.v2().z(), epsilon = 1e-12);
            assert_abs_diff_eq!(
                s.v1().dot(s.v2()),
                -3.0 * theta.cos().powi(2),
                epsilon = 1e-12
            );
            // unbiased to all CAC states
            for c in cac_basis().states {
                assert_abs_diff_eq!(overlap(&s, &c).value, 1.0 / 3.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn double_cone_matches_table_row() {
        let a = solve_special_angles();
        let s = double_cone_state(DoubleConeParams {
            theta: a.theta_d,
            psi: 0.0,
        })
        .unwrap();
        let expected = MajoranaState::from_angles(a.theta_d, 0.0, PI - a.theta_d, a.phi_d);
        assert!(s.approx_eq(&expected, 1e-12));
    }

    #[test]
    fn double_cone_rejects_out_of_range() {
        assert!(double_cone_state(DoubleConeParams {
            theta: 0.3,
            psi: 0.0
        })
        .is_err());
    }

    #[test]
    fn reflected_polynomials_match_direct_relations() {
        let a = solve_special_angles();
        let (p_id, _, p_unb) = reflected_relation_polynomials(PI / 2.0);
        assert_abs_diff_eq!(p_id, 0.0, epsilon = 1e-12);
        assert!(p_unb.abs() > 0.1);

        let (_, _, p_unb) = reflected_relation_polynomials(a.theta_d);
        assert!(p_unb.abs() < 1e-12);

        // direct cross-check on a sweep
        for k in 0..200 {
            let theta = cone_theta_min() + (PI / 2.0 - cone_theta_min()) * k as f64 / 199.0;
            let s = double_cone_state(DoubleConeParams { theta, psi: 0.0 }).unwrap();
            let r = relation(&s, &s.reflect_xy(), EPS_REL);
            let (p_id, p_orth, p_unb) = reflected_relation_polynomials(theta);
            match r {
                Relation::Identical => assert!(p_id.abs() < 1e-8),
                Relation::Orthogonal => assert!(p_orth.abs() < 1e-8),
                Relation::Unbiased => assert!(p_unb.abs() < 1e-8),
                _ => assert!(
                    p_id.abs() > 1e-8 && p_orth.abs() > 1e-8 && p_unb.abs() > 1e-8
                ),
            }
        }
    }

    #[test]
    fn reflected_orthogonality_has_no_root_in_range() {
        let mut min_abs = f64::INFINITY;
        for k in 0..=10_000 {
            let theta = cone_theta_min() + (PI / 2.0 - cone_theta_min()) * k as f64 / 10_000.0;
            min_abs = min_abs.min(reflected_relation_polynomials(theta).1.abs());
        }
        // minimum over the interval is 4/9, attained at theta = arccos(1/sqrt 3)
        assert!(min_abs > 0.4);
    }

    #[test]
    fn inverted_polynomials() {
        let a = solve_special_angles();
        let (p_id, _, _) = inverted_relation_polynomials(cone_theta_min());
        assert_abs_diff_eq!(p_id, 0.0, epsilon = 1e-12);
        let (_, _, p_unb) = inverted_relation_polynomials(a.theta_i);
        assert!(p_unb.abs() < 1e-12);
        // orthogonality polynomial is a sum of nonnegative terms plus 1
        for k in 0..=1_000 {
            let theta = cone_theta_min() + (PI / 2.0 - cone_theta_min()) * k as f64 / 1_000.0;
            assert!(inverted_relation_polynomials(theta).1 > 0.99);
        }
    }

    #[test]
    fn pi_rotation_sweep_finds_nothing() {
        let report = rotated_pi_ruled_out(5_000);
        assert_eq!(report.hits, 0);
        assert!(report.min_orthogonality_gap > 1e-3);
        assert!(report.min_unbiasedness_gap > 1e-3);

        // point check at theta_d
        let a = solve_special_angles();
        let s = double_cone_state(DoubleConeParams {
            theta: a.theta_d,
            psi: 0.0,
        })
        .unwrap();
        assert_eq!(
            relation(&s, &s.rotate_about_z(PI), EPS_REL),
            Relation::Other
        );

        // the overlap with the pi-rotation is exactly 1/9 at both ends of
        // the interval
        for theta in [cone_theta_min(), PI / 2.0] {
            let s = double_cone_state(DoubleConeParams { theta, psi: 0.0 }).unwrap();
            assert_abs_diff_eq!(
                overlap(&s, &s.rotate_about_z(PI)).value,
                1.0 / 9.0,
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn maximal_mub_verifies() {
        let m = build_maximal_mub();
        assert_eq!(m.bases.len(), 4);
        let report = verify_mub(&m);
        assert!(report.passes(1e-10), "{report:?}");
    }

    #[test]
    fn maximal_mub_matches_table_angles() {
        let a = solve_special_angles();
        let m = build_maximal_mub();
        let b2s1 = MajoranaState::from_angles(a.theta_d, 0.0, PI - a.theta_d, a.phi_d);
        assert!(m.bases[1].states[0].approx_eq(&b2s1, 1e-9));
        let b4s1 =
            MajoranaState::from_angles(PI / 2.0, a.phi_h, PI / 2.0, a.phi_h + PI / 2.0);
        assert!(m.bases[3].states[0].approx_eq(&b4s1, 1e-9));
    }

    #[test]
    fn maximal_mub_symmetry_orbits() {
        let m = build_maximal_mub();
        let states = m.all_states();
        // C3h: threefold rotation and the horizontal mirror
        assert!(closed_under(&states, |s| s.rotate_about_z(TAU / 3.0), 1e-9));
        assert!(closed_under(&states, |s| s.reflect_xy(), 1e-9));
        // time reversal followed by a pi/3 rotation permutes the states
        assert!(closed_under(
            &states,
            |s| s.time_reversal().rotate_about_z(PI / 3.0),
            1e-9
        ));
    }

    #[test]
    fn inversion_triple_verifies_and_has_c3i_symmetry() {
        let m = build_inversion_triple();
        assert_eq!(m.bases.len(), 3);
        assert!(verify_mub(&m).passes(1e-10));
        let a = solve_special_angles();
        let b2s1 = MajoranaState::from_angles(a.theta_i, 0.0, PI - a.theta_i, a.phi_i);
        assert!(m.bases[1].states[0].approx_eq(&b2s1, 1e-9));
        // inversion of state 1: (pi - theta_I, pi | theta_I, phi_I + pi)
        let b3s1 =
            MajoranaState::from_angles(PI - a.theta_i, PI, a.theta_i, a.phi_i + PI);
        assert!(m.bases[2].states[0].approx_eq(&b3s1, 1e-9));

        let states = m.all_states();
        assert!(closed_under(&states, |s| s.rotate_about_z(TAU / 3.0), 1e-9));
        assert!(closed_under(&states, |s| s.time_reversal(), 1e-9));
    }

    #[test]
    fn anticoherent_basis_completes_the_inversion_triple() {
        let basis = anticoherent_basis();
        for s in &basis.states {
            assert_eq!(s.classify(), crate::states::StateClass::Anticoherent);
            assert!(s.time_reversal().approx_eq(s, 1e-12));
        }
        // the three anticoherent axes are mutually orthogonal
        for i in 0..3 {
            for j in i + 1..3 {
                assert!(
                    basis.states[i].v1().dot(basis.states[j].v1()).abs() < 1e-12
                );
            }
        }
        let m = build_completed_inversion_mub();
        assert_eq!(m.bases.len(), 4);
        assert!(verify_mub(&m).passes(1e-12));
    }

    #[test]
    fn inversion_triple_extends_only_by_the_anticoherent_basis() {
        let triple = build_inversion_triple();
        let search = search_unbiased_extension(&triple, 150, 1e-10);
        assert_eq!(search.hits.len(), 3, "{:?}", search.hits);
        let completion = anticoherent_basis();
        for hit in &search.hits {
            let state = hit.state();
            assert!(completion
                .states
                .iter()
                .any(|s| s.approx_eq(&state, 1e-4)));
        }
        // the completed set admits nothing further
        let closed = search_unbiased_extension(&build_completed_inversion_mub(), 150, 1e-10);
        assert!(closed.hits.is_empty());
    }

    #[test]
    fn pauli_mub_is_mutually_unbiased() {
        let bases = build_pauli_mub();
        for (i, a) in bases.iter().enumerate() {
            for (si, s) in a.iter().enumerate() {
                for t in &a[si + 1..] {
                    assert!(crate::overlap::ray_overlap(s, t) < 1e-12);
                }
                for b in &bases[i + 1..] {
                    for t in b.iter() {
                        assert_abs_diff_eq!(
                            crate::overlap::ray_overlap(s, t),
                            1.0 / 3.0,
                            epsilon = 1e-12
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn pauli_mub_matches_known_rays() {
        let bases = build_pauli_mub();
        // Z basis: the coordinate axes, ordered by eigenvalue
        let axes = [
            Ray::from_reals([1.0, 0.0, 0.0]),
            Ray::from_reals([0.0, 1.0, 0.0]),
            Ray::from_reals([0.0, 0.0, 1.0]),
        ];
        for (got, want) in bases[0].iter().zip(axes.iter()) {
            assert!(got.projective_distance(want) < 1e-12);
        }
        // X basis contains (1,1,1)/sqrt 3
        let flat = Ray::from_reals([1.0, 1.0, 1.0]);
        assert!(bases[3]
            .iter()
            .any(|r| r.projective_distance(&flat) < 1e-12));
    }

    #[test]
    fn equivalence_unitary_matches_all_twelve() {
        let (u, report) = equivalence_unitary().unwrap();
        assert_eq!(report.pairs.len(), 12);
        assert!(report.max_infidelity < 1e-9);
        // U is unitary
        let prod = u.adjoint() * u;
        let id = Matrix3::<Complex64>::identity();
        assert!((prod - id).norm() < 1e-15);
        // each Majorana basis maps onto exactly one Pauli basis
        for bi in 0..4 {
            let targets: Vec<usize> = report
                .pairs
                .iter()
                .filter(|((b, _), _)| *b == bi)
                .map(|(_, (pb, _))| *pb)
                .collect();
            assert!(targets.windows(2).all(|w| w[0] == w[1]));
        }
        // CAC rays are fixed projectively by the diagonal U
        for s in cac_basis().states {
            let r = s.to_ray();
            assert!(r.apply(&u).projective_distance(&r) < 1e-12);
        }
    }

    #[test]
    fn mirror_branch_is_the_xy_reflection() {
        // reflecting the plain branch at (theta, psi) lands on the mirror
        // branch at azimuth psi + phi, where phi is the internal azimuth
        let (theta, psi) = (1.2, 0.4);
        let phi = (-2.0 * super::cot_sq(theta)).acos();
        let s = double_cone_state_mirror(theta, psi, false).unwrap();
        let mirrored = double_cone_state_mirror(theta, psi + phi, true).unwrap();
        assert!(s.reflect_xy().approx_eq(&mirrored, 1e-12));
        // and the two branches at the same (theta, psi) are distinct states
        let same_params = double_cone_state_mirror(theta, psi, true).unwrap();
        assert!(!s.approx_eq(&same_params, 1e-6));
    }

    #[test]
    fn perturbed_mub_fails_verification() {
        let mut m = build_maximal_mub();
        let (s1, s2) = (m.bases[1].states[0].angles().0, m.bases[1].states[0].angles().1);
        m.bases[1].states[0] = MajoranaState::from_angles(
            s1.theta() + 1e-3,
            s1.phi(),
            s2.theta(),
            s2.phi(),
        );
        let report = verify_mub(&m);
        assert!(!report.passes(1e-9));
        assert!(report.worst() > 1e-5 && report.worst() < 1e-1);
    }

    #[test]
    fn single_basis_set_passes_vacuously() {
        let m = MubSet {
            bases: vec![cac_basis()],
        };
        assert!(verify_mub(&m).passes(1e-10));
    }

    #[test]
    fn threefold_rotation_of_any_cone_state_gives_a_basis() {
        for theta in [0.98, 1.1, 1.25, 1.4, PI / 2.0] {
            let s = double_cone_state(DoubleConeParams { theta, psi: 0.3 }).unwrap();
            let b = Basis {
                states: [0, 1, 2].map(|k| s.rotate_about_z(TAU / 3.0 * k as f64)),
            };
            for i in 0..3 {
                for j in i + 1..3 {
                    assert!(overlap(&b.states[i], &b.states[j]).value < 1e-10);
                }
            }
        }
    }
}
