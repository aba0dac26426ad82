//! The full verification pipeline as one serializable report.
//!
//! Field order is fixed by the struct declarations and every float is a
//! 12-significant-digit decimal string, so identical inputs give identical
//! bytes.

use serde::Serialize;

use crate::freewords::{verify_free_generation, WordFamily, BOUNDED_SCOPE};
use crate::limits::{
    count_orbit_in_ball, enumerate_subgroup, estimate_limit_point, intersect_subgroups,
    matrix_coincidences, qi_check, radial_check, theta_generators, LimitsError,
    RADIAL_DEPTH_MARGIN,
};
use crate::rational::format_sig12;
use crate::schottky::{verify_ping_pong, SchottkyData};

#[derive(Debug, Clone, PartialEq)]
pub struct ReportConfig {
    pub n_max: usize,
    pub max_index: usize,
    pub max_syllables: usize,
    pub max_length: usize,
    pub tol: f64,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            n_max: 12,
            max_index: 6,
            max_syllables: 3,
            max_length: 8,
            tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigSection {
    pub n_max: usize,
    pub max_index: usize,
    pub max_syllables: usize,
    pub max_length: usize,
    pub tol: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateSection {
    pub certified: bool,
    pub checks: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FreenessSection {
    pub passed: bool,
    pub max_index: usize,
    pub max_syllables: usize,
    pub symbol_words_checked: usize,
    pub pair_reductions_checked: usize,
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialDistance {
    pub n: usize,
    pub distance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialSection {
    pub first_half_max: String,
    pub last_quartile_max: String,
    pub bounded_trend: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QiSection {
    pub max_length: usize,
    pub lower_alpha: String,
    pub lower_beta: String,
    pub upper_alpha: String,
    pub upper_beta: String,
    pub lower_witness: String,
    pub upper_witness: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitCountSection {
    pub radius: String,
    pub max_length: usize,
    pub count: usize,
    pub escape_bound: String,
    pub complete: bool,
    pub qi_predicts_complete: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubgroupSection {
    pub g1_generators: Vec<usize>,
    pub g2_generators: Vec<usize>,
    pub g1_size: usize,
    pub g2_size: usize,
    pub matrix_cross_check: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstructionReport {
    pub scope: &'static str,
    pub verified: bool,
    pub config: ConfigSection,
    pub certificate: CertificateSection,
    pub freeness: FreenessSection,
    pub eta: String,
    pub eta_interval_width: String,
    pub eta_reached_at: Option<usize>,
    pub constant_c: String,
    pub per_n: Vec<RadialDistance>,
    pub radial: RadialSection,
    pub qi: QiSection,
    pub orbit_count: OrbitCountSection,
    pub subgroups: SubgroupSection,
    pub intersection: Vec<String>,
}

impl ConstructionReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Runs every check on `sd` with the standard family `b^n a`.
///
/// Ping-pong failure is an error; every other failed check is recorded in the
/// report and clears `verified`.
pub fn build_report(
    sd: &SchottkyData,
    cfg: &ReportConfig,
) -> Result<ConstructionReport, LimitsError> {
    let certificate = verify_ping_pong(sd)?;
    let depth = cfg.n_max + RADIAL_DEPTH_MARGIN;
    let fam = WordFamily::standard(cfg.max_index.max(depth));

    let free = verify_free_generation(&WordFamily::standard(cfg.max_index), cfg.max_syllables)?;

    let eta = estimate_limit_point(&fam, sd, depth, cfg.tol)?;
    let radial = radial_check(&eta, &fam, sd, cfg.n_max)?;

    let qi = qi_check(sd, cfg.max_length)?;
    let radius = 2.0 * sd.gen_a().displacement();
    let count = count_orbit_in_ball(sd, radius, cfg.max_length)?;

    let odd = theta_generators(&fam, 1, cfg.max_index)?;
    let even = theta_generators(&fam, 0, cfg.max_index)?;
    let g1 = enumerate_subgroup(&odd, cfg.max_syllables)?;
    let g2 = enumerate_subgroup(&even, cfg.max_syllables)?;
    let both = intersect_subgroups(&g1, &g2);
    let coincidences = matrix_coincidences(&g1, &g2, sd);
    let cross_check = coincidences.len() == both.len()
        && coincidences
            .iter()
            .zip(&both)
            .all(|((u, v), w)| u == w && v == w);
    let intersection: Vec<String> = both.iter().map(|w| w.to_string()).collect();

    let verified = free.passed()
        && radial.bounded_trend
        && qi.lower_alpha > 0.0
        && count.complete
        && cross_check
        && intersection == ["e"];

    Ok(ConstructionReport {
        scope: BOUNDED_SCOPE,
        verified,
        config: ConfigSection {
            n_max: cfg.n_max,
            max_index: cfg.max_index,
            max_syllables: cfg.max_syllables,
            max_length: cfg.max_length,
            tol: format_sig12(cfg.tol),
        },
        certificate: CertificateSection {
            certified: true,
            checks: certificate.checks,
        },
        freeness: FreenessSection {
            passed: free.passed(),
            max_index: free.max_index,
            max_syllables: free.max_syllables,
            symbol_words_checked: free.symbol_words_checked,
            pair_reductions_checked: free.pair_reductions_checked,
            counterexample: free
                .counterexample
                .map(|c| format!("{}: {}", c.symbol_word, c.reason)),
        },
        eta: format_sig12(radial.eta),
        eta_interval_width: format_sig12(eta.width()),
        eta_reached_at: eta.reached_at,
        constant_c: format_sig12(radial.constant_c),
        per_n: radial
            .per_n
            .iter()
            .map(|&(n, d)| RadialDistance {
                n,
                distance: format_sig12(d),
            })
            .collect(),
        radial: RadialSection {
            first_half_max: format_sig12(radial.first_half_max),
            last_quartile_max: format_sig12(radial.last_quartile_max),
            bounded_trend: radial.bounded_trend,
        },
        qi: QiSection {
            max_length: qi.max_length,
            lower_alpha: format_sig12(qi.lower_alpha),
            lower_beta: format_sig12(qi.lower_beta),
            upper_alpha: format_sig12(qi.upper_alpha),
            upper_beta: format_sig12(qi.upper_beta),
            lower_witness: qi.lower_witness,
            upper_witness: qi.upper_witness,
        },
        orbit_count: OrbitCountSection {
            radius: format_sig12(count.radius),
            max_length: count.max_length,
            count: count.count,
            escape_bound: format_sig12(count.escape_bound),
            complete: count.complete,
            qi_predicts_complete: count.qi_predicts_complete,
        },
        subgroups: SubgroupSection {
            g1_generators: (1..=cfg.max_index).filter(|n| n % 2 == 1).collect(),
            g2_generators: (1..=cfg.max_index).filter(|n| n % 2 == 0).collect(),
            g1_size: g1.len(),
            g2_size: g2.len(),
            matrix_cross_check: cross_check,
        },
        intersection,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schottky::default_generators;

    #[test]
    fn small_report_is_verified_and_stable() {
        let sd = default_generators();
        let cfg = ReportConfig {
            n_max: 6,
            max_index: 4,
            max_syllables: 2,
            max_length: 5,
            tol: 1e-3,
        };
        let r = build_report(&sd, &cfg).unwrap();
        assert!(r.verified, "{}", r.to_json());
        assert_eq!(r.intersection, vec!["e".to_string()]);
        assert_eq!(r.per_n.len(), 6);
        assert_eq!(r.to_json(), build_report(&sd, &cfg).unwrap().to_json());
    }
}
