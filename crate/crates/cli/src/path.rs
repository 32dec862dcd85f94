use num_complex::Complex64;
use pruning_core::henon::{classify, unstable_slice, HenonParams, SliceConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::api::ApiError;

/// Largest allowed `|Δa|` between consecutive path points.
pub const STEP_BOUND: f64 = 0.15;
/// Slice resolution used for the per-point non-escaping fraction.
pub const CHECK_RESOLUTION: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathPoint {
    pub re: f64,
    pub im: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slice: Option<CachedSlice>,
}

/// Metadata of a slice the client already rendered at this point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CachedSlice {
    pub res: usize,
    pub radius: f64,
    #[serde(default)]
    pub non_escaping_fraction: Option<f64>,
}

/// A client-side path of complex `a` values at fixed `b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathDocument {
    pub b: f64,
    pub points: Vec<PathPoint>,
    pub created: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointCheck {
    pub re: f64,
    pub im: f64,
    pub flags: HenonParams,
    pub non_escaping_fraction: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SegmentCheck {
    pub from: usize,
    pub to: usize,
    pub step: f64,
    pub within_bound: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PathValidation {
    pub ok: bool,
    pub b: f64,
    pub step_bound: f64,
    pub start_in_dn: bool,
    pub points: Vec<PointCheck>,
    pub segments: Vec<SegmentCheck>,
}

pub fn validate_path(doc: &PathDocument) -> Result<PathValidation, ApiError> {
    if doc.points.is_empty() {
        return Err(ApiError::Semantic("a path needs at least one point".into()));
    }
    if doc.created.trim().is_empty() {
        return Err(ApiError::Semantic("created timestamp is empty".into()));
    }
    if doc.b == 0.0 || !doc.b.is_finite() {
        return Err(ApiError::Semantic("b must be finite and nonzero".into()));
    }
    if doc.points.iter().any(|p| !p.re.is_finite() || !p.im.is_finite()) {
        return Err(ApiError::Semantic("path points must be finite".into()));
    }
    let cfg = SliceConfig { resolution: CHECK_RESOLUTION, ..SliceConfig::default() };
    let points = doc
        .points
        .par_iter()
        .map(|p| {
            let a = Complex64::new(p.re, p.im);
            let img = unstable_slice(a, doc.b, &cfg)?;
            Ok(PointCheck {
                re: p.re,
                im: p.im,
                flags: HenonParams::new(a, doc.b),
                non_escaping_fraction: img.non_escaping_fraction(),
            })
        })
        .collect::<Result<Vec<_>, ApiError>>()?;
    let segments: Vec<SegmentCheck> = doc
        .points
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            let step = Complex64::new(w[1].re - w[0].re, w[1].im - w[0].im).norm();
            SegmentCheck { from: i, to: i + 1, step, within_bound: step <= STEP_BOUND }
        })
        .collect();
    let start_in_dn = classify(doc.points[0].re, doc.b).in_dn;
    Ok(PathValidation {
        ok: start_in_dn && segments.iter().all(|s| s.within_bound),
        b: doc.b,
        step_bound: STEP_BOUND,
        start_in_dn,
        points,
        segments,
    })
}
