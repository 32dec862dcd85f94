//! The Hénon family `H_{a,b}(x, y) = (a − x² − b·y, x)`: parameter regions,
//! periodic-orbit census by anti-integrable continuation, and complex
//! unstable-manifold slices.

mod census;
mod slice;

use num_complex::Complex64;
use serde::Serialize;

pub use census::{
    census, find_periodic_orbits, itinerary_of_orbit, Census, CensusCount, ContinuationConfig,
    OrbitRecord, OrbitStatus,
};
pub use slice::{unstable_slice, SliceConfig, SliceImage, SliceMeta};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HenonError {
    #[error("b must be nonzero")]
    ZeroB,
    #[error("coding is ambiguous: x[{index}] = {x:e} lies inside the dead band {dead_band:e}")]
    CodingAmbiguous { index: usize, x: f64, dead_band: f64 },
    #[error("the saddle fixed point has degenerate eigenstructure")]
    DegenerateSaddle,
    #[error("period {n} outside 1..={max}")]
    PeriodOutOfRange { n: usize, max: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub const I1_A: (f64, f64) = (5.3125, 5.46875);
pub const I1_B: f64 = 1.0;
pub const I2_A: (f64, f64) = (2.21875, 2.296875);
pub const I2_B: f64 = 0.25;

/// Lower bound on `a` for the real horseshoe region DN.
pub fn dn_bound(b: f64) -> f64 {
    (5.0 + 2.0 * 5f64.sqrt()) * (1.0 + b.abs()).powi(2) / 4.0
}

/// Upper bound on `a` for the empty region EMP.
pub fn emp_bound(b: f64) -> f64 {
    -(1.0 + b.abs()).powi(2) / 4.0
}

/// Bound on `|a|` for the complex horseshoe region HOV.
pub fn hov_bound(b: f64) -> f64 {
    2.0 * (1.0 + b.abs()).powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HenonParams {
    #[serde(skip)]
    pub a: Complex64,
    pub b: f64,
    #[serde(rename = "inDN")]
    pub in_dn: bool,
    #[serde(rename = "inEMP")]
    pub in_emp: bool,
    #[serde(rename = "inHOV")]
    pub in_hov: bool,
    #[serde(rename = "inI1")]
    pub in_i1: bool,
    #[serde(rename = "inI2")]
    pub in_i2: bool,
}

impl HenonParams {
    /// Flags are the literal inequalities; DN, EMP, I1 and I2 need a real `a`.
    pub fn new(a: Complex64, b: f64) -> Self {
        let real = a.im == 0.0;
        let x = a.re;
        HenonParams {
            a,
            b,
            in_dn: real && b != 0.0 && x > dn_bound(b),
            in_emp: real && x < emp_bound(b),
            in_hov: b != 0.0 && a.norm() > hov_bound(b),
            in_i1: real && b == I1_B && (I1_A.0..=I1_A.1).contains(&x),
            in_i2: real && b == I2_B && (I2_A.0..=I2_A.1).contains(&x),
        }
    }

    pub fn real(a: f64, b: f64) -> Self {
        HenonParams::new(Complex64::new(a, 0.0), b)
    }

    pub fn is_real(&self) -> bool {
        self.a.im == 0.0
    }

    /// Real part of `a`; the real maps below use it.
    pub fn a_re(&self) -> f64 {
        self.a.re
    }

    /// The two fixed points `x² + (1+b)x − a = 0`, smaller first, when real.
    pub fn real_fixed_points(&self) -> Option<(f64, f64)> {
        let disc = (1.0 + self.b).powi(2) + 4.0 * self.a.re;
        if !self.is_real() || disc < 0.0 {
            return None;
        }
        let s = disc.sqrt();
        Some(((-(1.0 + self.b) - s) / 2.0, (-(1.0 + self.b) + s) / 2.0))
    }
}

pub fn classify(a: f64, b: f64) -> HenonParams {
    HenonParams::real(a, b)
}

pub fn henon_step(p: &HenonParams, (x, y): (f64, f64)) -> (f64, f64) {
    (p.a.re - x * x - p.b * y, x)
}

pub fn henon_inverse(p: &HenonParams, (x, y): (f64, f64)) -> Result<(f64, f64), HenonError> {
    if p.b == 0.0 {
        return Err(HenonError::ZeroB);
    }
    Ok((y, (p.a.re - y * y - x) / p.b))
}

pub fn henon_step_complex(a: Complex64, b: f64, (x, y): (Complex64, Complex64)) -> (Complex64, Complex64) {
    (a - x * x - y * b, x)
}

/// Radius outside which orbits with `|x| ≥ |y|` run off to infinity.
pub fn escape_radius(p: &HenonParams) -> f64 {
    let s = 1.0 + p.b.abs();
    (s + (s * s + 4.0 * p.a.norm()).sqrt()) / 2.0
}

pub fn is_escaped(p: &HenonParams, (x, y): (f64, f64)) -> bool {
    is_escaped_modulus(escape_radius(p), x.abs(), y.abs())
}

pub(crate) fn is_escaped_modulus(r: f64, x: f64, y: f64) -> bool {
    x > r && x >= y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classifies_examples() {
        let p = classify(5.4, 1.0);
        assert!(!p.in_dn && !p.in_hov && p.in_i1 && !p.in_i2 && !p.in_emp);
        assert!((dn_bound(1.0) - 9.4721).abs() < 1e-4);
        assert_eq!(hov_bound(1.0), 8.0);
        let p = classify(10.0, 1.0);
        assert!(p.in_dn && p.in_hov);
        assert!(classify(-3.0, 0.5).in_emp);
        assert!(classify(2.2578125, 0.25).in_i2);
        assert!(!classify(2.3, 0.25).in_i2);
    }

    #[test]
    fn step_and_inverse() {
        let p = classify(5.4, 1.0);
        assert_eq!(henon_step(&p, (0.0, 0.0)), (5.4, 0.0));
        let (_, xp) = p.real_fixed_points().unwrap();
        assert!((xp - (-2.0 + 25.6f64.sqrt()) / 2.0).abs() < 1e-15);
        let z = henon_step(&p, (xp, xp));
        assert!((z.0 - xp).abs() < 1e-12 && (z.1 - xp).abs() < 1e-12);
        assert_eq!(henon_inverse(&classify(1.0, 0.0), (1.0, 1.0)), Err(HenonError::ZeroB));
    }

    #[test]
    fn escape_radius_example() {
        let p = classify(5.4, 1.0);
        let r = escape_radius(&p);
        assert!((r - 3.5298).abs() < 1e-4);
        assert!(is_escaped(&p, (r + 1.0, 0.0)));
        assert!(!is_escaped(&p, (0.0, 0.0)));
    }
}
