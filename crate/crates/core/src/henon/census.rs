use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::{dn_bound, HenonError, HenonParams};
use crate::symbolic::{lyndon_words, word_to_string, PeriodicCode};

pub const MAX_CENSUS_PERIOD: usize = 12;

/// Settings for continuing sign-sequence seeds from the anti-integrable
/// regime down to the target parameter.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuationConfig {
    /// Starting parameter; defaults to `max(DN bound, 3(1+|b|)²)`.
    pub a_start: Option<f64>,
    pub steps: usize,
    pub root_tolerance: f64,
    pub dedup_tolerance: f64,
    pub dead_band: f64,
    /// Newton iterations allowed for each corrector.
    pub corrector_iterations: usize,
    /// Largest accepted distance between predictor and corrector.
    pub max_correction: f64,
    pub min_step: f64,
}

impl Default for ContinuationConfig {
    fn default() -> Self {
        ContinuationConfig {
            a_start: None,
            steps: 200,
            root_tolerance: 1e-12,
            dedup_tolerance: 1e-6,
            dead_band: 1e-9,
            corrector_iterations: 8,
            max_correction: 0.05,
            min_step: 1e-10,
        }
    }
}

impl ContinuationConfig {
    pub fn start_for(&self, p: &HenonParams) -> f64 {
        let default = dn_bound(p.b).max(3.0 * (1.0 + p.b.abs()).powi(2));
        self.a_start.unwrap_or(default).max(p.a_re())
    }

    fn validate(&self) -> Result<(), HenonError> {
        if self.steps == 0 {
            return Err(HenonError::InvalidConfig("steps must be positive".into()));
        }
        if !(self.root_tolerance > 0.0 && self.dedup_tolerance > 0.0 && self.min_step > 0.0) {
            return Err(HenonError::InvalidConfig("tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitStatus {
    Alive,
    Lost,
}

fn word_str<S: Serializer>(w: &[u8], s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&word_to_string(w))
}

/// One continued orbit, keyed by the Lyndon word of its seed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitRecord {
    #[serde(serialize_with = "word_str")]
    pub necklace: Vec<u8>,
    pub period: usize,
    pub status: OrbitStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_loss: Option<f64>,
    /// Largest defect of the cyclic relation at the last accepted parameter.
    pub residual: f64,
    /// Modulus of the dominant eigenvalue of the period-`n` Jacobian.
    pub multiplier: Option<f64>,
    pub itinerary: Option<PeriodicCode>,
    #[serde(skip)]
    pub points: Vec<(f64, f64)>,
    #[serde(skip)]
    pub itinerary_mismatch: bool,
}

impl OrbitRecord {
    pub fn is_alive(&self) -> bool {
        self.status == OrbitStatus::Alive
    }

    fn xs(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.0).collect()
    }
}

fn residual(x: &[f64], a: f64, b: f64) -> DVector<f64> {
    let n = x.len();
    DVector::from_fn(n, |i, _| x[(i + 1) % n] - a + x[i] * x[i] + b * x[(i + n - 1) % n])
}

fn jacobian(x: &[f64], b: f64) -> DMatrix<f64> {
    let n = x.len();
    let mut j = DMatrix::zeros(n, n);
    for i in 0..n {
        j[(i, (i + 1) % n)] += 1.0;
        j[(i, i)] += 2.0 * x[i];
        j[(i, (i + n - 1) % n)] += b;
    }
    j
}

fn newton(x: &mut [f64], a: f64, b: f64, max_iter: usize, tol: f64) -> bool {
    for _ in 0..max_iter {
        let f = residual(x, a, b);
        if f.amax() < tol {
            return true;
        }
        let Some(dx) = jacobian(x, b).lu().solve(&(-f)) else {
            return false;
        };
        for (xi, d) in x.iter_mut().zip(dx.iter()) {
            *xi += d;
        }
        if x.iter().any(|v| !v.is_finite() || v.abs() > 1e3) {
            return false;
        }
    }
    residual(x, a, b).amax() < tol
}

struct Continued {
    x: Vec<f64>,
    lost_at: Option<f64>,
}

/// Predictor-corrector continuation in `a` with the tangent `dx/da = J⁻¹·1`.
fn continue_seed(word: &[u8], a: f64, b: f64, a0: f64, cfg: &ContinuationConfig) -> Continued {
    let mut x: Vec<f64> = word
        .iter()
        .map(|&s| if s == 1 { a0.sqrt() } else { -a0.sqrt() })
        .collect();
    if !newton(&mut x, a0, b, 30, cfg.root_tolerance) {
        return Continued { x, lost_at: Some(a0) };
    }
    let h0 = (a0 - a) / cfg.steps as f64;
    let mut h = h0;
    let mut ac = a0;
    while ac > a {
        let an = (ac - h).max(a);
        let ones = DVector::from_element(x.len(), 1.0);
        let Some(t) = jacobian(&x, b).lu().solve(&ones) else {
            return Continued { x, lost_at: Some(ac) };
        };
        let predicted: Vec<f64> = x.iter().zip(t.iter()).map(|(xi, ti)| xi + ti * (an - ac)).collect();
        let mut corrected = predicted.clone();
        let ok = newton(&mut corrected, an, b, cfg.corrector_iterations, cfg.root_tolerance);
        let jump = corrected
            .iter()
            .zip(&predicted)
            .map(|(c, p)| (c - p).abs())
            .fold(0.0, f64::max);
        if ok && jump < cfg.max_correction {
            x = corrected;
            ac = an;
            h = (h * 1.5).min(h0);
        } else {
            h /= 2.0;
            if h < cfg.min_step {
                return Continued { x, lost_at: Some(ac) };
            }
        }
    }
    Continued { x, lost_at: None }
}

fn multiplier(x: &[f64], b: f64) -> f64 {
    let m = x
        .iter()
        .fold(Matrix2::identity(), |acc, &xi| Matrix2::new(-2.0 * xi, -b, 1.0, 0.0) * acc);
    let tr = m.trace();
    let det = m.determinant();
    let s = Complex64::new(tr * tr - 4.0 * det, 0.0).sqrt();
    let l1 = (Complex64::new(tr, 0.0) + s) / 2.0;
    let l2 = (Complex64::new(tr, 0.0) - s) / 2.0;
    l1.norm().max(l2.norm())
}

/// Symbolic itinerary of an orbit: symbol `1` where `x > 0`.
pub fn itinerary_of_orbit(o: &OrbitRecord, dead_band: f64) -> Result<PeriodicCode, HenonError> {
    let mut word = Vec::with_capacity(o.points.len());
    for (index, &(x, _)) in o.points.iter().enumerate() {
        if x.abs() < dead_band {
            return Err(HenonError::CodingAmbiguous { index, x, dead_band });
        }
        word.push(u8::from(x > 0.0));
    }
    Ok(PeriodicCode::new(word))
}

fn run_seed(word: Vec<u8>, p: &HenonParams, a0: f64, cfg: &ContinuationConfig) -> OrbitRecord {
    let (a, b) = (p.a_re(), p.b);
    let Continued { x, lost_at } = continue_seed(&word, a, b, a0, cfg);
    let n = x.len();
    let points: Vec<(f64, f64)> = (0..n).map(|i| (x[i], x[(i + n - 1) % n])).collect();
    let at = lost_at.unwrap_or(a);
    let mut record = OrbitRecord {
        period: n,
        status: if lost_at.is_some() { OrbitStatus::Lost } else { OrbitStatus::Alive },
        a_loss: lost_at,
        residual: residual(&x, at, b).amax(),
        multiplier: None,
        itinerary: None,
        points,
        itinerary_mismatch: false,
        necklace: word,
    };
    if record.is_alive() {
        record.multiplier = Some(multiplier(&x, b));
        match itinerary_of_orbit(&record, cfg.dead_band) {
            Ok(code) => {
                record.itinerary_mismatch = !code.orbit_equivalent(&PeriodicCode::new(record.necklace.clone()));
                record.itinerary = Some(code);
            }
            Err(_) => record.itinerary_mismatch = true,
        }
    }
    record
}

/// Smallest cyclic shift distance between two x-sequences of equal length.
fn cyclic_distance(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len();
    (0..n)
        .map(|k| (0..n).map(|i| (a[i] - b[(i + k) % n]).abs()).fold(0.0, f64::max))
        .fold(f64::INFINITY, f64::min)
}

/// Marks coincident orbits lost: both members of a colliding pair, and any
/// orbit that collapsed onto a shorter period.
fn dedup(records: &mut [OrbitRecord], a: f64, tol: f64) {
    let xs: Vec<Vec<f64>> = records.iter().map(OrbitRecord::xs).collect();
    let mut lose = vec![false; records.len()];
    for i in 0..records.len() {
        if !records[i].is_alive() {
            continue;
        }
        let n = xs[i].len();
        for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
            let shifted: Vec<f64> = (0..n).map(|k| xs[i][(k + d) % n]).collect();
            if xs[i].iter().zip(&shifted).all(|(u, v)| (u - v).abs() < tol) {
                lose[i] = true;
            }
        }
        for j in i + 1..records.len() {
            if records[j].is_alive() && xs[j].len() == n && cyclic_distance(&xs[i], &xs[j]) < tol {
                lose[i] = true;
                lose[j] = true;
            }
        }
    }
    for (r, l) in records.iter_mut().zip(lose) {
        if l {
            r.status = OrbitStatus::Lost;
            r.a_loss = Some(a);
            r.multiplier = None;
            r.itinerary = None;
        }
    }
}

fn continue_words(p: &HenonParams, words: Vec<Vec<u8>>, cfg: &ContinuationConfig) -> Vec<OrbitRecord> {
    let a0 = cfg.start_for(p);
    let mut records: Vec<OrbitRecord> = words.into_par_iter().map(|w| run_seed(w, p, a0, cfg)).collect();
    records.sort_by(|x, y| (x.period, &x.necklace).cmp(&(y.period, &y.necklace)));
    dedup(&mut records, p.a_re(), cfg.dedup_tolerance);
    records
}

fn check_period(n: usize) -> Result<(), HenonError> {
    if n == 0 || n > MAX_CENSUS_PERIOD {
        return Err(HenonError::PeriodOutOfRange { n, max: MAX_CENSUS_PERIOD });
    }
    Ok(())
}

/// Orbits whose least period divides `n`, one per necklace of length `n`,
/// each reduced to its primitive Lyndon word.
pub fn find_periodic_orbits(
    p: &HenonParams,
    n: usize,
    cfg: &ContinuationConfig,
) -> Result<Vec<OrbitRecord>, HenonError> {
    check_period(n)?;
    cfg.validate()?;
    let words = (1..=n).filter(|d| n.is_multiple_of(*d)).flat_map(lyndon_words).collect();
    Ok(continue_words(p, words, cfg))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusCount {
    pub n: usize,
    /// Alive points fixed by `H^n`.
    pub points: u64,
    /// Alive orbits of least period `n`.
    pub exact_orbits: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Census {
    pub a: f64,
    pub b: f64,
    pub a_start: f64,
    pub config: ContinuationConfig,
    pub orbits: Vec<OrbitRecord>,
    pub counts: Vec<CensusCount>,
}

impl Census {
    pub fn alive_with_period_dividing(&self, n: usize) -> impl Iterator<Item = &OrbitRecord> {
        self.orbits.iter().filter(move |o| o.is_alive() && n.is_multiple_of(o.period))
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &OrbitRecord> {
        self.orbits.iter().filter(|o| o.itinerary_mismatch)
    }
}

/// Continues every Lyndon word of length up to `n_max` once and tabulates
/// alive point counts per period.
pub fn census(p: &HenonParams, n_max: usize, cfg: &ContinuationConfig) -> Result<Census, HenonError> {
    check_period(n_max)?;
    cfg.validate()?;
    if !p.is_real() {
        return Err(HenonError::InvalidConfig("the census needs a real parameter a".into()));
    }
    let words = (1..=n_max).flat_map(lyndon_words).collect();
    let orbits = continue_words(p, words, cfg);
    let counts = (1..=n_max)
        .map(|n| CensusCount {
            n,
            points: orbits
                .iter()
                .filter(|o| o.is_alive() && n % o.period == 0)
                .map(|o| o.period as u64)
                .sum(),
            exact_orbits: orbits.iter().filter(|o| o.is_alive() && o.period == n).count() as u64,
        })
        .collect();
    Ok(Census { a: p.a_re(), b: p.b, a_start: cfg.start_for(p), config: cfg.clone(), orbits, counts })
}
