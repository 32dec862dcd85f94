//! Floating-point cross-check: a concrete piecewise horseshoe of the plane on
//! which `C`, `E` and their iterates are drawn as polylines.
//!
//! The square `Q = [-1,1]²` has two outer vertical strips mapped affinely onto
//! horizontal strips (`x` stretched by 4, `y` contracted by 1/5) and a middle
//! strip bent into a half annulus to the right of `Q`. The half annulus above
//! `Q` is the preimage of the horizontal gap between the strips, so stable
//! folds live there.

use std::f64::consts::PI;

use serde::Serialize;

use super::{Direction, LeafKind, PruningDisk, SegmentEnd, Verdict};
use crate::symbolic::{HomoclinicCode, OneSidedCode};

pub const LAMBDA: f64 = 4.0;
pub const MU: f64 = 0.2;
pub const MAX_DEPTH: usize = 8;
pub const MIN_RESOLUTION: usize = 64;
const EPS: f64 = 1e-9;
// rounding on saddle leaves grows by λ per step
const SLACK: f64 = 1e-9;
/// Top of the lower image strip and bottom of the upper one.
const GAP: f64 = 1.0 - 2.0 * MU;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("depth {0} exceeds the model limit {MAX_DEPTH}")]
    DepthTooLarge(usize),
    #[error("resolution {0} is below {MIN_RESOLUTION} points per arc")]
    ResolutionTooSmall(usize),
}

pub type Point = (f64, f64);

/// Bounded increasing odd clamp, the identity on `[-1, 1]`.
fn clamp_g(y: f64) -> f64 {
    if y.abs() <= 1.0 {
        y
    } else {
        y.signum() * (2.0 - 1.0 / y.abs())
    }
}

fn clamp_g_inv(z: f64) -> Option<f64> {
    if z.abs() <= 1.0 {
        Some(z)
    } else if z.abs() < 2.0 {
        Some(z.signum() / (2.0 - z.abs()))
    } else {
        None
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct OracleMap;

impl OracleMap {
    /// `F`, defined on `Q` and on the upper half annulus of radii `[1/2, 1]`
    /// around `(0, 1)`.
    pub fn forward(&self, (x, y): Point) -> Option<Point> {
        if y > 1.0 + SLACK {
            let r = x.hypot(y - 1.0);
            if !(0.5 - SLACK..=1.0 + SLACK).contains(&r) {
                return None;
            }
            let s = (y - 1.0).atan2(-x) / PI;
            return Some((3.0 - LAMBDA * r, 2.0 * GAP * s - GAP));
        }
        if x.abs() > 1.0 + SLACK || y < -1.0 - SLACK {
            return None;
        }
        if x <= -0.5 {
            Some(((LAMBDA * x + 3.0).clamp(-1.0, 1.0), MU * (y + 1.0) - 1.0))
        } else if x >= 0.5 {
            Some(((3.0 - LAMBDA * x).clamp(-1.0, 1.0), 1.0 - MU * (y + 1.0)))
        } else {
            let t = x + 0.5;
            let rho = 1.0 - MU * (1.0 + clamp_g(y));
            Some((1.0 + rho * (PI * t).sin(), -rho * (PI * t).cos()))
        }
    }

    /// `F^{-1}`, defined on `Q` and on the right half annulus.
    pub fn inverse(&self, (x, y): Point) -> Option<Point> {
        if x > 1.0 + SLACK {
            let rho = (x - 1.0).hypot(y);
            if !(GAP - SLACK..=1.0 + SLACK).contains(&rho) {
                return None;
            }
            let t = (x - 1.0).atan2(-y) / PI;
            let y0 = clamp_g_inv((1.0 - rho) / MU - 1.0)?;
            return Some((t - 0.5, y0));
        }
        if x < -1.0 - SLACK || y.abs() > 1.0 + SLACK {
            return None;
        }
        if y <= -GAP {
            Some(((x - 3.0) / LAMBDA, ((y + 1.0) / MU - 1.0).clamp(-1.0, 1.0)))
        } else if y >= GAP {
            Some(((3.0 - x) / LAMBDA, ((1.0 - y) / MU - 1.0).clamp(-1.0, 1.0)))
        } else {
            let r = (3.0 - x) / LAMBDA;
            let s = (y + GAP) / (2.0 * GAP);
            Some((-r * (PI * s).cos(), 1.0 + r * (PI * s).sin()))
        }
    }

    /// Horizontal position of the stable leaf with forward code `f`.
    pub fn x_of(&self, f: &OneSidedCode) -> f64 {
        assert!(f.has_zero_tail());
        f.head().iter().rev().fold(-1.0, |x, &s| {
            if s == 0 {
                (x - 3.0) / LAMBDA
            } else {
                (3.0 - x) / LAMBDA
            }
        })
    }

    /// Vertical position of the unstable leaf with backward code `b`.
    pub fn y_of(&self, b: &OneSidedCode) -> f64 {
        assert!(b.has_zero_tail());
        b.head().iter().rev().fold(-1.0, |y, &s| {
            if s == 0 {
                MU * (y + 1.0) - 1.0
            } else {
                1.0 - MU * (y + 1.0)
            }
        })
    }

    pub fn point(&self, c: &HomoclinicCode) -> Point {
        (self.x_of(&c.forward()), self.y_of(&c.backward()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleStep {
    pub direction: Direction,
    pub n: usize,
    /// Distance from the iterate to the disk boundary; zero on a crossing.
    pub min_distance: f64,
    pub hit: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub verdict: Verdict,
    pub first_hit: Option<(Direction, usize)>,
    pub steps: Vec<OracleStep>,
    pub truncated: bool,
}

fn lerp(a: Point, b: Point, n: usize) -> Vec<Point> {
    (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1) as f64;
            (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1))
        })
        .collect()
}

fn arc_polyline(
    map: &OracleMap,
    disk: &PruningDisk,
    kind: LeafKind,
    resolution: usize,
) -> Option<Vec<Point>> {
    let chain = match kind {
        LeafKind::Stable => &disk.c,
        LeafKind::Unstable => &disk.e,
    };
    if chain.folds.is_empty() {
        return Some(lerp(map.point(&disk.p0), map.point(&disk.p1), resolution));
    }
    debug_assert!(chain
        .segments
        .iter()
        .all(|s| s.ends.iter().any(|e| matches!(e, SegmentEnd::Fold { .. }))));
    // the arc straightens after one step; draw it there and pull it back
    let k = if kind == LeafKind::Stable { 1 } else { -1 };
    let q0 = map.point(&disk.p0.shift(k));
    let q1 = map.point(&disk.p1.shift(k));
    lerp(q0, q1, 4 * resolution)
        .into_iter()
        .map(|q| match kind {
            LeafKind::Stable => map.inverse(q),
            LeafKind::Unstable => map.forward(q),
        })
        .collect()
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    (p.0 - a.0 - t * dx).hypot(p.1 - a.1 - t * dy)
}

fn properly_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    let tiny = 1e-14;
    o1.abs() > tiny && o2.abs() > tiny && o3.abs() > tiny && o4.abs() > tiny
        && (o1 > 0.0) != (o2 > 0.0)
        && (o3 > 0.0) != (o4 > 0.0)
}

fn inside(p: Point, polygon: &[Point]) -> bool {
    let mut odd = false;
    let n = polygon.len();
    for i in 0..n {
        let (a, b) = (polygon[i], polygon[(i + 1) % n]);
        if (a.1 > p.1) != (b.1 > p.1) {
            let x = a.0 + (p.1 - a.1) / (b.1 - a.1) * (b.0 - a.0);
            if p.0 < x {
                odd = !odd;
            }
        }
    }
    odd
}

fn test_iterate(curve: &[Point], polygon: &[Point]) -> (bool, f64) {
    let n = polygon.len();
    let edges = || (0..n).map(|i| (polygon[i], polygon[(i + 1) % n]));
    let mut min_distance = f64::INFINITY;
    let mut hit = false;
    for &p in curve {
        let d = edges().map(|(a, b)| segment_distance(p, a, b)).fold(f64::INFINITY, f64::min);
        min_distance = min_distance.min(d);
        if d > EPS && inside(p, polygon) {
            hit = true;
        }
    }
    for w in curve.windows(2) {
        if edges().any(|(a, b)| properly_cross(w[0], w[1], a, b)) {
            hit = true;
            min_distance = 0.0;
        }
    }
    (hit, min_distance)
}

/// Draws `C` and `E` in the plane model, iterates `C` forward and `E`
/// backward `depth` times, and measures each iterate against the disk.
pub fn oracle_check(
    disk: &PruningDisk,
    depth: usize,
    resolution: usize,
) -> Result<OracleReport, OracleError> {
    if depth > MAX_DEPTH {
        return Err(OracleError::DepthTooLarge(depth));
    }
    if resolution < MIN_RESOLUTION {
        return Err(OracleError::ResolutionTooSmall(resolution));
    }
    let map = OracleMap;
    let mut report = OracleReport {
        verdict: Verdict::Pass,
        first_hit: None,
        steps: Vec::new(),
        truncated: false,
    };
    let (Some(c), Some(e)) = (
        arc_polyline(&map, disk, LeafKind::Stable, resolution),
        arc_polyline(&map, disk, LeafKind::Unstable, resolution),
    ) else {
        report.truncated = true;
        return Ok(report);
    };
    let mut polygon = c.clone();
    polygon.extend(e.iter().rev().skip(1));
    polygon.pop();

    let mut hits = Vec::new();
    for (direction, start) in [(Direction::Forward, c), (Direction::Backward, e)] {
        let mut curve = start;
        for n in 1..=depth {
            let next: Option<Vec<Point>> = curve
                .iter()
                .map(|&p| match direction {
                    Direction::Forward => map.forward(p),
                    Direction::Backward => map.inverse(p),
                })
                .collect();
            let Some(next) = next else {
                report.truncated = true;
                break;
            };
            curve = next;
            let (hit, min_distance) = test_iterate(&curve, &polygon);
            if hit {
                hits.push((direction, n));
            }
            report.steps.push(OracleStep { direction, n, min_distance, hit });
        }
    }
    report.first_hit = hits.first().copied();
    if report.first_hit.is_some() {
        report.verdict = Verdict::Fail;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saddle_is_fixed() {
        let map = OracleMap;
        assert_eq!(map.forward((-1.0, -1.0)), Some((-1.0, -1.0)));
        assert_eq!(map.point(&HomoclinicCode::fixed_point()), (-1.0, -1.0));
    }

    #[test]
    fn inverse_undoes_forward() {
        let map = OracleMap;
        for &p in &[(-0.9, 0.3), (0.7, -0.8), (0.1, 0.5), (-0.3, -0.95), (0.4, 1.6)] {
            let q = map.forward(p).unwrap();
            let back = map.inverse(q).unwrap();
            assert!((back.0 - p.0).abs() < 1e-12 && (back.1 - p.1).abs() < 1e-12, "{p:?} -> {back:?}");
        }
    }

    #[test]
    fn coordinates_follow_the_shift() {
        let map = OracleMap;
        let c: HomoclinicCode = "1101.11011".parse().unwrap();
        let image = map.forward(map.point(&c)).unwrap();
        let expected = map.point(&c.shift(1));
        assert!((image.0 - expected.0).abs() < 1e-12 && (image.1 - expected.1).abs() < 1e-12);
    }
}
