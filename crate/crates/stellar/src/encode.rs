//! Shared row/record types and serializers for the CLI table output.
//!
//! Angles are kept in radians inside the library; every table here converts
//! to degrees at the edge. JSON carries full precision, CSV uses '.' decimals
//! and no locale, pretty text rounds degrees to 2 decimals.

use serde::{Deserialize, Serialize};

use crate::analysis::PhaseCensus;
use crate::mub::MubSet;
use crate::overlap::ray_overlap;
use crate::sic::Sic;
use crate::states::{MajoranaState, Ray};

#[derive(Debug, Serialize)]
pub struct MubRow {
    pub basis_index: usize,
    pub state_index: usize,
    pub theta1_deg: f64,
    pub phi1_deg: f64,
    pub theta2_deg: f64,
    pub phi2_deg: f64,
}

fn angle_row(s: &MajoranaState) -> [f64; 4] {
    let (a, b) = s.angles();
    [
        a.theta().to_degrees(),
        a.phi().to_degrees(),
        b.theta().to_degrees(),
        b.phi().to_degrees(),
    ]
}

pub fn mub_rows(m: &MubSet) -> Vec<MubRow> {
    let mut rows = Vec::new();
    for (bi, basis) in m.bases.iter().enumerate() {
        for (si, s) in basis.states.iter().enumerate() {
            let [t1, p1, t2, p2] = angle_row(s);
            rows.push(MubRow {
                basis_index: bi,
                state_index: si,
                theta1_deg: t1,
                phi1_deg: p1,
                theta2_deg: t2,
                phi2_deg: p2,
            });
        }
    }
    rows
}

#[derive(Debug, Serialize)]
pub struct RayRow {
    pub basis_index: usize,
    pub state_index: usize,
    pub re0: f64,
    pub im0: f64,
    pub re1: f64,
    pub im1: f64,
    pub re2: f64,
    pub im2: f64,
}

pub fn ray_rows(bases: &[[Ray; 3]]) -> Vec<RayRow> {
    let mut rows = Vec::new();
    for (bi, basis) in bases.iter().enumerate() {
        for (si, r) in basis.iter().enumerate() {
            let c = r.components();
            rows.push(RayRow {
                basis_index: bi,
                state_index: si,
                re0: c[0].re,
                im0: c[0].im,
                re1: c[1].re,
                im1: c[1].im,
                re2: c[2].re,
                im2: c[2].im,
            });
        }
    }
    rows
}

#[derive(Debug, Serialize)]
pub struct SicRow {
    pub sic_index: usize,
    pub etriad_label: &'static str,
    pub theta1_deg: f64,
    pub phi1_deg: f64,
    pub theta2_deg: f64,
    pub phi2_deg: f64,
}

/// One label per family of three consecutive states.
pub fn sic_rows(s: &Sic, labels: [&'static str; 3]) -> Vec<SicRow> {
    s.states()
        .iter()
        .enumerate()
        .map(|(i, st)| {
            let [t1, p1, t2, p2] = angle_row(st);
            SicRow {
                sic_index: i,
                etriad_label: labels[i / 3],
                theta1_deg: t1,
                phi1_deg: p1,
                theta2_deg: t2,
                phi2_deg: p2,
            }
        })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct SicRayRow {
    pub sic_index: usize,
    pub etriad_label: &'static str,
    pub re0: f64,
    pub im0: f64,
    pub re1: f64,
    pub im1: f64,
    pub re2: f64,
    pub im2: f64,
}

pub fn sic_ray_rows(s: &Sic, labels: [&'static str; 3]) -> Vec<SicRayRow> {
    s.rays()
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let c = r.components();
            SicRayRow {
                sic_index: i,
                etriad_label: labels[i / 3],
                re0: c[0].re,
                im0: c[0].im,
                re1: c[1].re,
                im1: c[1].im,
                re2: c[2].re,
                im2: c[2].im,
            }
        })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct EtriadRow {
    pub label: &'static str,
    pub theta1_deg: f64,
    pub phi1_deg: f64,
    pub theta2_deg: f64,
    pub phi2_deg: f64,
    pub residual: f64,
}

#[derive(Debug, Serialize)]
pub struct CensusBin {
    pub phase_rad: f64,
    pub phase_over_pi: f64,
    pub count: usize,
}

#[derive(Debug, Serialize)]
pub struct CensusJson {
    pub bins: Vec<CensusBin>,
    pub total: usize,
}

pub fn census_json(c: &PhaseCensus) -> CensusJson {
    CensusJson {
        bins: c
            .bins
            .iter()
            .map(|&(p, n)| CensusBin {
                phase_rad: p,
                phase_over_pi: p / std::f64::consts::PI,
                count: n,
            })
            .collect(),
        total: c.total,
    }
}

/// Adjacency lists of the 21-state orthogonality configuration. MUB states
/// are indexed basis-major (basis*3 + state), SIC states 0..9.
#[derive(Debug, Serialize)]
pub struct HesseAdjacency {
    pub orthogonal_pairs: usize,
    /// for each MUB state, the SIC states orthogonal to it
    pub sic_partners_of_mub: Vec<Vec<usize>>,
    /// for each SIC state, the MUB states orthogonal to it
    pub mub_partners_of_sic: Vec<Vec<usize>>,
}

pub fn hesse_adjacency(mub: &[[Ray; 3]], sic: &[Ray], tol: f64) -> HesseAdjacency {
    let mub_flat: Vec<&Ray> = mub.iter().flatten().collect();
    let mut sic_partners_of_mub = vec![Vec::new(); mub_flat.len()];
    let mut mub_partners_of_sic = vec![Vec::new(); sic.len()];
    let mut pairs = 0;
    for (mi, m) in mub_flat.iter().enumerate() {
        for (si, s) in sic.iter().enumerate() {
            if ray_overlap(m, s) < tol {
                sic_partners_of_mub[mi].push(si);
                mub_partners_of_sic[si].push(mi);
                pairs += 1;
            }
        }
    }
    HesseAdjacency {
        orthogonal_pairs: pairs,
        sic_partners_of_mub,
        mub_partners_of_sic,
    }
}

/// The shared state encoding: exactly one of the two forms must be present.
#[derive(Debug, Serialize, Deserialize)]
pub struct StateJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub majorana: Option<[[f64; 2]; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ray: Option<[[f64; 2]; 3]>,
}

impl StateJson {
    pub fn from_state(s: &MajoranaState) -> Self {
        let (a, b) = s.angles();
        Self {
            majorana: Some([[a.theta(), a.phi()], [b.theta(), b.phi()]]),
            ray: None,
        }
    }

    pub fn from_ray(r: &Ray) -> Self {
        let c = r.components();
        Self {
            majorana: None,
            ray: Some([[c[0].re, c[0].im], [c[1].re, c[1].im], [c[2].re, c[2].im]]),
        }
    }

    /// Decode into a state, remembering which form the input used.
    pub fn decode(&self) -> Result<(MajoranaState, bool), String> {
        match (&self.majorana, &self.ray) {
            (Some(m), None) => Ok((
                MajoranaState::from_angles(m[0][0], m[0][1], m[1][0], m[1][1]),
                true,
            )),
            (None, Some(r)) => {
                let c = r.map(|[re, im]| num_complex::Complex64::new(re, im));
                if c.iter().map(|z| z.norm_sqr()).sum::<f64>() < 1e-24 {
                    return Err("ray components are all zero".into());
                }
                Ok((MajoranaState::from_ray(&Ray::new(c)), false))
            }
            _ => Err("state must have exactly one of \"majorana\" or \"ray\"".into()),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn to_csv<T: Serialize>(rows: &[T]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).expect("serializable row");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf8 csv")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mub::build_maximal_mub;
    use approx::assert_abs_diff_eq;

    #[test]
    fn mub_csv_has_header_and_12_rows() {
        let csv = to_csv(&mub_rows(&build_maximal_mub()));
        let lines: Vec<&str> = csv.trim_end().lines().collect();
        assert_eq!(lines.len(), 13);
        assert_eq!(
            lines[0],
            "basis_index,state_index,theta1_deg,phi1_deg,theta2_deg,phi2_deg"
        );
    }

    #[test]
    fn state_json_round_trips_both_forms() {
        let s = MajoranaState::from_angles(0.7, 1.1, 2.0, 4.5);
        let (back, was_majorana) = StateJson::from_state(&s).decode().unwrap();
        assert!(was_majorana);
        assert!(back.approx_eq(&s, 1e-12));

        let r = s.to_ray();
        let (back, was_majorana) = StateJson::from_ray(&r).decode().unwrap();
        assert!(!was_majorana);
        assert!(back.to_ray().infidelity(&r) < 1e-9);
    }

    #[test]
    fn bad_state_json_rejected() {
        let none = StateJson {
            majorana: None,
            ray: None,
        };
        assert!(none.decode().is_err());
        let both = StateJson {
            majorana: Some([[0.0, 0.0], [0.0, 0.0]]),
            ray: Some([[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]),
        };
        assert!(both.decode().is_err());
    }

    #[test]
    fn census_json_reports_pi_fractions() {
        let c = crate::analysis::phase_census(&crate::sic::build_sic2());
        let j = census_json(&c);
        assert_eq!(j.total, 84);
        assert_abs_diff_eq!(j.bins[1].phase_over_pi, 1.0 / 3.0, epsilon = 1e-12);
    }
}
