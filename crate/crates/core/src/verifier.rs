//! Census-versus-subshift cross-checks and the bundled parameter presets.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::henon::{census, ContinuationConfig, HenonError, HenonParams, I1_A, I1_B, I2_A, I2_B};
use crate::sft::{PruningParams, Sft, SftError};
use crate::symbolic::{lyndon_words, word_to_string, PeriodicCode};

pub const MAX_VERIFY_PERIOD: usize = 10;
/// Alive orbits whose defect exceeds this are treated as numerical failures.
pub const RESIDUAL_CEILING: f64 = 1e-10;
/// How many times an unverified report is re-run with doubled steps.
pub const MAX_REFINEMENTS: usize = 3;

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Sft(#[from] SftError),
    #[error(transparent)]
    Henon(#[from] HenonError),
    #[error("period {n} outside 1..={max}")]
    PeriodOutOfRange { n: usize, max: usize },
    #[error("unknown preset suite {0:?}; expected theorem, section5, conjectural, intervals or all")]
    UnknownPreset(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ReportVerdict {
    Match,
    Mismatch,
    Unverified,
}

impl fmt::Display for ReportVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportVerdict::Match => "MATCH",
            ReportVerdict::Mismatch => "MISMATCH",
            ReportVerdict::Unverified => "UNVERIFIED",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Theorem,
    Conjectural,
    Interval,
    Custom,
}

fn words<S: Serializer>(ws: &[Vec<u8>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(ws.iter().map(|w| word_to_string(w)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub n: usize,
    pub predicted: u64,
    pub observed: u64,
    /// Necklaces of exact length `n` whose continued orbit was lost.
    #[serde(serialize_with = "words")]
    pub lost: Vec<Vec<u8>>,
    /// Necklaces of exact length `n` the subshift forbids.
    #[serde(serialize_with = "words")]
    pub inadmissible: Vec<Vec<u8>>,
    #[serde(rename = "match")]
    pub matched: bool,
    pub unverified: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParamPair {
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusReport {
    pub params: ParamPair,
    pub disks: Vec<PruningParams>,
    pub provenance: Provenance,
    pub rows: Vec<ReportRow>,
    pub verdict: ReportVerdict,
    pub details: Vec<String>,
    pub continuation: ContinuationConfig,
}

impl CensusReport {
    pub fn row(&self, n: usize) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.n == n)
    }
}

/// One census against one prediction, with the continuation as given.
pub fn census_vs_sft_with(
    a: f64,
    b: f64,
    disks: &[PruningParams],
    n_max: usize,
    cfg: &ContinuationConfig,
    provenance: Provenance,
) -> Result<CensusReport, VerifyError> {
    if n_max == 0 || n_max > MAX_VERIFY_PERIOD {
        return Err(VerifyError::PeriodOutOfRange { n: n_max, max: MAX_VERIFY_PERIOD });
    }
    let sft = Sft::from_disks(disks)?;
    let c = census(&HenonParams::real(a, b), n_max, cfg)?;
    let mut rows = Vec::with_capacity(n_max);
    let mut details = Vec::new();
    for n in 1..=n_max {
        let predicted = sft.count_periodic(n)?;
        let observed = c.counts[n - 1].points;
        let lost: Vec<Vec<u8>> = c
            .orbits
            .iter()
            .filter(|o| o.period == n && !o.is_alive())
            .map(|o| o.necklace.clone())
            .collect();
        let inadmissible: Vec<Vec<u8>> = lyndon_words(n)
            .into_iter()
            .filter(|w| !sft.admissible(&PeriodicCode::new(w.clone())))
            .collect();
        let unverified = c.orbits.iter().any(|o| {
            o.period == n && o.is_alive() && (o.itinerary_mismatch || o.residual > RESIDUAL_CEILING)
        });
        let lost_set: BTreeSet<_> = lost.iter().collect();
        let expected_set: BTreeSet<_> = inadmissible.iter().collect();
        let matched = predicted == observed && lost_set == expected_set;
        if !matched && !unverified {
            let extra: Vec<String> = lost_set.difference(&expected_set).map(|w| word_to_string(w)).collect();
            let missing: Vec<String> = expected_set.difference(&lost_set).map(|w| word_to_string(w)).collect();
            details.push(format!(
                "n={n}: predicted {predicted}, observed {observed}; lost but admissible [{}]; inadmissible but alive [{}]",
                extra.join(","),
                missing.join(",")
            ));
        }
        rows.push(ReportRow { n, predicted, observed, lost, inadmissible, matched, unverified });
    }
    let verdict = if rows.iter().any(|r| r.unverified) {
        ReportVerdict::Unverified
    } else if rows.iter().all(|r| r.matched) {
        ReportVerdict::Match
    } else {
        ReportVerdict::Mismatch
    };
    Ok(CensusReport {
        params: ParamPair { a, b },
        disks: disks.to_vec(),
        provenance,
        rows,
        verdict,
        details,
        continuation: cfg.clone(),
    })
}

/// Runs the census and, while any row is unverified, re-runs it with twice
/// as many continuation steps.
pub fn census_vs_sft_refined(
    a: f64,
    b: f64,
    disks: &[PruningParams],
    n_max: usize,
    cfg: &ContinuationConfig,
    provenance: Provenance,
) -> Result<CensusReport, VerifyError> {
    let mut cfg = cfg.clone();
    let mut report = census_vs_sft_with(a, b, disks, n_max, &cfg, provenance)?;
    for _ in 0..MAX_REFINEMENTS {
        if report.verdict != ReportVerdict::Unverified {
            break;
        }
        cfg.steps *= 2;
        report = census_vs_sft_with(a, b, disks, n_max, &cfg, provenance)?;
    }
    Ok(report)
}

pub fn census_vs_sft(a: f64, b: f64, disks: &[PruningParams], n_max: usize) -> Result<CensusReport, VerifyError> {
    census_vs_sft_refined(a, b, disks, n_max, &ContinuationConfig::default(), Provenance::Custom)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Preset {
    pub name: &'static str,
    pub a: f64,
    pub b: f64,
    pub disks: Vec<PruningParams>,
    pub provenance: Provenance,
}

const fn d(n: usize, m: usize) -> PruningParams {
    PruningParams::new(n, m)
}

pub fn theorem_presets() -> Vec<Preset> {
    vec![
        Preset { name: "i1", a: 5.4, b: 1.0, disks: vec![d(2, 2)], provenance: Provenance::Theorem },
        Preset { name: "i2", a: 2.25, b: 0.25, disks: vec![d(0, 2)], provenance: Provenance::Theorem },
    ]
}

pub fn conjectural_presets() -> Vec<Preset> {
    let c = Provenance::Conjectural;
    vec![
        Preset { name: "a3.5-b0.55", a: 3.5, b: 0.55, disks: vec![d(2, 3)], provenance: c },
        Preset { name: "a2.766-b0.4", a: 2.766, b: 0.4, disks: vec![d(0, 3), d(1, 2)], provenance: c },
        Preset { name: "a2.887-b0.4", a: 2.887, b: 0.4, disks: vec![d(1, 3), d(2, 2)], provenance: c },
        Preset { name: "a2.345-b0.19", a: 2.345, b: 0.19, disks: vec![d(0, 3)], provenance: c },
    ]
}

/// Midpoints and endpoints of the two hyperbolic intervals.
pub fn interval_presets() -> Vec<Preset> {
    let p = Provenance::Interval;
    let mid = |(lo, hi): (f64, f64)| (lo + hi) / 2.0;
    vec![
        Preset { name: "i1-lo", a: I1_A.0, b: I1_B, disks: vec![d(2, 2)], provenance: p },
        Preset { name: "i1-mid", a: mid(I1_A), b: I1_B, disks: vec![d(2, 2)], provenance: p },
        Preset { name: "i1-hi", a: I1_A.1, b: I1_B, disks: vec![d(2, 2)], provenance: p },
        Preset { name: "i2-lo", a: I2_A.0, b: I2_B, disks: vec![d(0, 2)], provenance: p },
        Preset { name: "i2-mid", a: mid(I2_A), b: I2_B, disks: vec![d(0, 2)], provenance: p },
        Preset { name: "i2-hi", a: I2_A.1, b: I2_B, disks: vec![d(0, 2)], provenance: p },
    ]
}

pub fn presets(name: &str) -> Result<Vec<Preset>, VerifyError> {
    match name {
        "theorem" => Ok(theorem_presets()),
        "section5" | "conjectural" => Ok(conjectural_presets()),
        "intervals" => Ok(interval_presets()),
        "all" => Ok(theorem_presets().into_iter().chain(conjectural_presets()).collect()),
        other => presets_by_name(other),
    }
}

fn presets_by_name(name: &str) -> Result<Vec<Preset>, VerifyError> {
    theorem_presets()
        .into_iter()
        .chain(conjectural_presets())
        .chain(interval_presets())
        .find(|p| p.name == name)
        .map(|p| vec![p])
        .ok_or_else(|| VerifyError::UnknownPreset(name.to_string()))
}

pub fn run_preset(p: &Preset, n_max: usize, cfg: &ContinuationConfig) -> Result<CensusReport, VerifyError> {
    census_vs_sft_refined(p.a, p.b, &p.disks, n_max, cfg, p.provenance)
}

/// Reports for every preset in the suite, in the suite's order.
pub fn preset_suite(name: &str, n_max: usize, cfg: &ContinuationConfig) -> Result<Vec<CensusReport>, VerifyError> {
    presets(name)?.par_iter().map(|p| run_preset(p, n_max, cfg)).collect()
}

/// Whether a suite outcome is acceptable: theorem presets must match,
/// everything else only has to complete.
pub fn suite_passes(reports: &[CensusReport]) -> bool {
    reports
        .iter()
        .all(|r| r.provenance != Provenance::Theorem || r.verdict == ReportVerdict::Match)
}
