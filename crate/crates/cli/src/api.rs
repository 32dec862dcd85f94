//! Payload builders shared by the command line and the HTTP service.

use num_complex::Complex64;
use pruning_core::henon::{classify, unstable_slice, HenonError, HenonParams, SliceConfig, SliceImage};
use pruning_core::sft::{CountRow, DiskValidity, PruningParams, Sft, SftError};
use pruning_core::verifier::{census_vs_sft, CensusReport, VerifyError, MAX_VERIFY_PERIOD};
use serde::{Deserialize, Serialize};

pub const MAX_SLICE_RESOLUTION: usize = 1024;
pub const ENTROPY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ApiError {
    #[error("malformed request: {0}")]
    Malformed(String),
    #[error("{0}")]
    Semantic(String),
}

impl From<SftError> for ApiError {
    fn from(e: SftError) -> Self {
        ApiError::Semantic(e.to_string())
    }
}

impl From<HenonError> for ApiError {
    fn from(e: HenonError) -> Self {
        ApiError::Semantic(e.to_string())
    }
}

impl From<VerifyError> for ApiError {
    fn from(e: VerifyError) -> Self {
        ApiError::Semantic(e.to_string())
    }
}

fn nonzero_b(b: f64) -> Result<(), ApiError> {
    if b == 0.0 {
        return Err(ApiError::Semantic("b must be nonzero".into()));
    }
    if !b.is_finite() {
        return Err(ApiError::Semantic("b must be finite".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct ClassifyQuery {
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyPayload {
    pub a: f64,
    #[serde(flatten)]
    pub params: HenonParams,
}

pub fn classify_payload(q: ClassifyQuery) -> Result<ClassifyPayload, ApiError> {
    nonzero_b(q.b)?;
    Ok(ClassifyPayload { a: q.a, params: classify(q.a, q.b) })
}

#[derive(Debug, Clone, Serialize)]
pub struct SftPayload {
    pub disks: Vec<PruningParams>,
    pub n: usize,
    pub points: u64,
    pub rows: Vec<CountRow>,
    pub entropy: f64,
}

pub fn sft_payload(disks: &[PruningParams], n: usize) -> Result<SftPayload, ApiError> {
    for d in disks {
        if d.validity() == DiskValidity::Excluded {
            return Err(SftError::ExcludedDisk { n: d.n, m: d.m }.into());
        }
    }
    let sft = Sft::from_disks(disks)?;
    let rows = sft.count_table(n)?;
    Ok(SftPayload {
        disks: disks.to_vec(),
        n,
        points: rows.last().map_or(0, |r| r.points),
        rows,
        entropy: sft.entropy(ENTROPY_TOLERANCE)?,
    })
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct SliceQuery {
    pub are: f64,
    #[serde(default)]
    pub aim: f64,
    pub b: f64,
    #[serde(default = "default_res")]
    pub res: usize,
    #[serde(default = "default_radius")]
    pub radius: f64,
    #[serde(default = "default_budget")]
    pub budget: u32,
    #[serde(default = "default_depth")]
    pub depth: u32,
}

fn default_res() -> usize {
    256
}

fn default_radius() -> f64 {
    2.0
}

fn default_budget() -> u32 {
    200
}

fn default_depth() -> u32 {
    24
}

impl SliceQuery {
    pub fn a(&self) -> Complex64 {
        Complex64::new(self.are, self.aim)
    }

    pub fn config(&self) -> SliceConfig {
        SliceConfig {
            resolution: self.res,
            radius: self.radius,
            budget: self.budget,
            seed_depth: self.depth,
            ..SliceConfig::default()
        }
    }
}

pub fn slice_image(q: &SliceQuery) -> Result<SliceImage, ApiError> {
    nonzero_b(q.b)?;
    if q.res == 0 || q.res > MAX_SLICE_RESOLUTION {
        return Err(ApiError::Semantic(format!("res must lie in 1..={MAX_SLICE_RESOLUTION}")));
    }
    if !(q.radius > 0.0 && q.radius.is_finite()) || !q.are.is_finite() || !q.aim.is_finite() {
        return Err(ApiError::Semantic("parameters and radius must be finite, radius positive".into()));
    }
    Ok(unstable_slice(q.a(), q.b, &q.config())?)
}

#[derive(Debug, Clone, Deserialize)]
pub struct CensusRequest {
    pub a: f64,
    pub b: f64,
    #[serde(default)]
    pub disks: Vec<PruningParams>,
    pub n_max: usize,
}

pub fn census_report(req: &CensusRequest) -> Result<CensusReport, ApiError> {
    nonzero_b(req.b)?;
    if req.n_max == 0 || req.n_max > MAX_VERIFY_PERIOD {
        return Err(ApiError::Semantic(format!("n_max must lie in 1..={MAX_VERIFY_PERIOD}")));
    }
    Ok(census_vs_sft(req.a, req.b, &req.disks, req.n_max)?)
}

/// Serialization used for every JSON payload, so the CLI and the service
/// emit the same bytes.
pub fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("payloads serialize")
}
