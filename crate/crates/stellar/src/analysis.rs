//! Triad geometric phases, the 84-triad census that separates the two SICs,
//! the 21-state orthogonality configuration, and the spin-half warm-up
//! structures (octahedron bases and tetrahedron SIC).

use std::f64::consts::PI;

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::geometry::UnitVector;
use crate::mub::{build_pauli_mub, MubSet, Basis};
use crate::overlap::{ray_overlap, spin_half_overlap};
use crate::sic::{build_sic1, Sic};
use crate::states::{MajoranaState, Ray};
use crate::Error;

/// Phase of the triple product <1|2><2|3><3|1>, canonicalized to [0, pi]
/// by taking the absolute principal value. Equal to |arg Tr(rho1 rho2 rho3)|
/// for the associated projectors, and invariant under permutations of the
/// triad and under global unitaries.
pub fn bargmann_phase(s1: &MajoranaState, s2: &MajoranaState, s3: &MajoranaState) -> Result<f64, Error> {
    bargmann_phase_rays(&s1.to_ray(), &s2.to_ray(), &s3.to_ray())
}

pub fn bargmann_phase_rays(r1: &Ray, r2: &Ray, r3: &Ray) -> Result<f64, Error> {
    let product = r1.inner(r2) * r2.inner(r3) * r3.inner(r1);
    if product.norm() <= 1e-12 {
        return Err(Error::DegenerateTriad(product.norm()));
    }
    Ok(product.arg().abs())
}

/// Histogram of canonical triad phases.
#[derive(Debug, Clone)]
pub struct PhaseCensus {
    /// (canonical phase in [0, pi], count), sorted by phase
    pub bins: Vec<(f64, usize)>,
    pub total: usize,
}

/// Phases closer than this are treated as the same bin. The exact phases of
/// the structured SICs are multiples of pi/3, far above this scale.
pub const PHASE_BIN_TOL: f64 = 1e-7;

impl PhaseCensus {
    pub fn insert(&mut self, phase: f64) {
        self.total += 1;
        for (p, count) in &mut self.bins {
            if (*p - phase).abs() < PHASE_BIN_TOL {
                *count += 1;
                return;
            }
        }
        self.bins.push((phase, 1));
        self.bins
            .sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    }

    /// Count in the bin at the given phase, 0 if absent.
    pub fn count_at(&self, phase: f64) -> usize {
        self.bins
            .iter()
            .find(|(p, _)| (*p - phase).abs() < PHASE_BIN_TOL)
            .map(|(_, c)| *c)
            .unwrap_or(0)
    }

    /// Sorted multiset of counts, ignoring the phases they sit at.
    pub fn count_profile(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.bins.iter().map(|(_, c)| *c).collect();
        v.sort_unstable();
        v
    }

    pub fn same_as(&self, other: &PhaseCensus) -> bool {
        self.total == other.total
            && self.bins.len() == other.bins.len()
            && self
                .bins
                .iter()
                .zip(other.bins.iter())
                .all(|((p, c), (q, d))| (p - q).abs() < PHASE_BIN_TOL && c == d)
    }
}

/// Map any angle to the canonical phase range [0, pi].
pub fn canonical_phase(x: f64) -> f64 {
    let r = x.rem_euclid(std::f64::consts::TAU);
    if r > PI { std::f64::consts::TAU - r } else { r }
}

/// Census over all C(9,3) = 84 triads of a SIC.
pub fn phase_census(s: &Sic) -> PhaseCensus {
    let rays = s.rays();
    let mut census = PhaseCensus {
        bins: Vec::new(),
        total: 0,
    };
    for i in 0..9 {
        for j in i + 1..9 {
            for k in j + 1..9 {
                let phase = bargmann_phase_rays(&rays[i], &rays[j], &rays[k])
                    .expect("SIC triads have |product| = (1/4)^(3/2)");
                census.insert(phase);
            }
        }
    }
    census
}

/// Evidence for (in)equivalence of two SICs by their phase censuses.
#[derive(Debug, Clone)]
pub struct InequivalenceEvidence {
    pub inequivalent: bool,
    /// (phase, count in a, count in b) for bins where the censuses differ
    pub differing_bins: Vec<(f64, usize, usize)>,
}

/// Compare the canonical phase censuses of two SICs. Differing censuses
/// prove the SICs are not unitarily equivalent; identical censuses are
/// necessary but not sufficient for equivalence.
pub fn inequivalence_test(a: &Sic, b: &Sic) -> InequivalenceEvidence {
    let ca = phase_census(a);
    let cb = phase_census(b);
    let mut phases: Vec<f64> = ca.bins.iter().chain(cb.bins.iter()).map(|(p, _)| *p).collect();
    phases.sort_by(|x, y| x.partial_cmp(y).unwrap());
    phases.dedup_by(|x, y| (*x - *y).abs() < PHASE_BIN_TOL);
    let differing_bins: Vec<(f64, usize, usize)> = phases
        .into_iter()
        .filter_map(|p| {
            let (na, nb) = (ca.count_at(p), cb.count_at(p));
            (na != nb).then_some((p, na, nb))
        })
        .collect();
    InequivalenceEvidence {
        inequivalent: !differing_bins.is_empty(),
        differing_bins,
    }
}

/// Orthogonality pattern between the 12 MUB states and the 9 SIC states.
#[derive(Debug, Clone)]
pub struct OrthogonalityCensus {
    /// for each MUB state (basis-major order), number of orthogonal SIC states
    pub mub_counts: Vec<usize>,
    /// for each SIC state, number of orthogonal MUB states
    pub sic_counts: Vec<usize>,
    /// for each SIC state, the basis indices of its orthogonal MUB partners
    pub sic_partner_bases: Vec<Vec<usize>>,
    pub total_pairs: usize,
}

/// The 21-state configuration: the Pauli-form maximal MUB together with the
/// maximally symmetric SIC-1 member. The SIC's ray table lives in the same
/// spin basis as the Pauli operators, so the two sets combine directly with
/// no change of frame.
pub fn hesse_configuration() -> (MubSet, Sic, OrthogonalityCensus) {
    let pauli = build_pauli_mub();
    let mub = MubSet {
        bases: pauli
            .iter()
            .map(|rays| Basis {
                states: [0, 1, 2].map(|i| MajoranaState::from_ray(&rays[i])),
            })
            .collect(),
    };
    let sic = build_sic1(PI, PI);
    let sic_rays = sic.rays();

    let mut mub_counts = Vec::new();
    let mut sic_counts = vec![0usize; 9];
    let mut sic_partner_bases = vec![Vec::new(); 9];
    let mut total_pairs = 0;
    for (bi, basis) in pauli.iter().enumerate() {
        for ray in basis.iter() {
            let mut count = 0;
            for (si, sray) in sic_rays.iter().enumerate() {
                if ray_overlap(ray, sray) < 1e-10 {
                    count += 1;
                    sic_counts[si] += 1;
                    sic_partner_bases[si].push(bi);
                    total_pairs += 1;
                }
            }
            mub_counts.push(count);
        }
    }
    (
        mub,
        sic,
        OrthogonalityCensus {
            mub_counts,
            sic_counts,
            sic_partner_bases,
            total_pairs,
        },
    )
}

/// Residuals for the spin-half warm-up structures.
#[derive(Debug, Clone, Copy)]
pub struct SpinHalfReport {
    /// worst |overlap - 1/2| across bases of the octahedron MUB
    pub max_unbiasedness_residual: f64,
    /// worst in-basis overlap (orthogonality) of the octahedron MUB
    pub max_orthogonality_residual: f64,
    /// worst |overlap - 1/3| among tetrahedron pairs
    pub max_equiangularity_residual: f64,
    /// smallest max-|dot| over unit vectors probed against the three axes:
    /// nonzero means no direction is unbiased to all three bases at once
    pub octahedron_extension_gap: f64,
    /// least-squares residual of v . t_i = -1/3 over the four vertices:
    /// nonzero means no fifth equiangular vector exists
    pub tetrahedron_extension_residual: f64,
}

/// The octahedron vertices, paired into three bases.
pub fn octahedron_bases() -> [[UnitVector; 2]; 3] {
    [
        [UnitVector::new(0.0, 0.0, 1.0), UnitVector::new(0.0, 0.0, -1.0)],
        [UnitVector::new(1.0, 0.0, 0.0), UnitVector::new(-1.0, 0.0, 0.0)],
        [UnitVector::new(0.0, 1.0, 0.0), UnitVector::new(0.0, -1.0, 0.0)],
    ]
}

/// The tetrahedron vertices (1,1,1), (1,-1,-1), (-1,1,-1), (-1,-1,1), unit.
pub fn tetrahedron_vertices() -> [UnitVector; 4] {
    [
        UnitVector::new(1.0, 1.0, 1.0),
        UnitVector::new(1.0, -1.0, -1.0),
        UnitVector::new(-1.0, 1.0, -1.0),
        UnitVector::new(-1.0, -1.0, 1.0),
    ]
}

pub fn spin_half_structures() -> SpinHalfReport {
    let bases = octahedron_bases();
    let mut max_unb: f64 = 0.0;
    let mut max_orth: f64 = 0.0;
    for (i, a) in bases.iter().enumerate() {
        max_orth = max_orth.max(spin_half_overlap(&a[0], &a[1]));
        for b in &bases[i + 1..] {
            for u in a {
                for v in b {
                    max_unb = max_unb.max((spin_half_overlap(u, v) - 0.5).abs());
                }
            }
        }
    }

    let verts = tetrahedron_vertices();
    let mut max_equi: f64 = 0.0;
    for (i, u) in verts.iter().enumerate() {
        for v in &verts[i + 1..] {
            max_equi = max_equi.max((spin_half_overlap(u, v) - 1.0 / 3.0).abs());
        }
    }

    // a fourth unbiased basis would need a unit vector perpendicular to all
    // three axes; probe densely on the sphere for the smallest max-|dot|
    let mut gap = f64::INFINITY;
    let n = 200;
    for i in 0..=n {
        let theta = PI * i as f64 / n as f64;
        for j in 0..2 * n {
            let phi = PI * j as f64 / n as f64;
            let v = UnitVector::from_angles(theta, phi);
            let worst = v.dot(&bases[0][0]).abs().max(v.dot(&bases[1][0]).abs()).max(v.dot(&bases[2][0]).abs());
            gap = gap.min(worst);
        }
    }

    // a fifth equiangular vector would solve v . t_i = -1/3 for all four
    // vertices; the four constraints are inconsistent (the vertices sum to
    // zero but the targets do not), measured here by the least-squares
    // residual of the overdetermined system
    let m = nalgebra::Matrix4x3::from_fn(|r, c| match c {
        0 => verts[r].x(),
        1 => verts[r].y(),
        _ => verts[r].z(),
    });
    let rhs = nalgebra::Vector4::from_element(-1.0 / 3.0);
    let svd = m.svd(true, true);
    let v = svd.solve(&rhs, 1e-14).expect("svd solve");
    let residual = (m * v - rhs).norm();

    SpinHalfReport {
        max_unbiasedness_residual: max_unb,
        max_orthogonality_residual: max_orth,
        max_equiangularity_residual: max_equi,
        octahedron_extension_gap: gap,
        tetrahedron_extension_residual: residual,
    }
}

/// Bargmann product via explicit density-matrix multiplication; test oracle
/// for the ray shortcut.
pub fn bargmann_product_density(r1: &Ray, r2: &Ray, r3: &Ray) -> Complex64 {
    let rho = |r: &Ray| {
        let c = nalgebra::Vector3::from_row_slice(&r.components());
        c * c.adjoint()
    };
    let product: Matrix3<Complex64> = rho(r1) * rho(r2) * rho(r3);
    product.trace()
}
