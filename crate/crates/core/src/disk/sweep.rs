use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::{DiskError, LeafKind, LeafSegment, PruningDisk, SegmentEnd, Span};
use crate::symbolic::{Dyadic, OneSidedCode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Indeterminate,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Indeterminate => "INDETERMINATE",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeafReport {
    pub code: OneSidedCode,
    pub value: Dyadic,
}

/// A segment at step `n` whose leaf lies over the region. It is a hit when
/// its extent also meets the region.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub direction: Direction,
    pub n: usize,
    pub leaf: LeafReport,
    pub extent: (Dyadic, Dyadic),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiameterEntry {
    pub direction: Direction,
    pub n: usize,
    /// Transverse extent of each segment.
    pub extents: Vec<(Dyadic, Dyadic)>,
}

impl DiameterEntry {
    /// Sum of the segment lengths.
    pub fn total(&self) -> BigRational {
        self.extents
            .iter()
            .map(|(a, b)| b.sub(*a).to_rational())
            .fold(BigRational::zero(), |acc, x| acc + x)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub n_trap_forward: usize,
    pub n_trap_backward: usize,
    pub witness: Option<Witness>,
    pub diameters: Vec<DiameterEntry>,
    pub near_misses: Vec<Witness>,
}

/// `support + 4`, the horizon used when none is given.
pub fn default_horizon(disk: &PruningDisk) -> usize {
    disk.support_len() + 4
}

struct SweepResult {
    trap: usize,
    hits: Vec<Witness>,
    near_misses: Vec<Witness>,
    diameters: Vec<DiameterEntry>,
    residual_fold: bool,
}

fn trap_step(segments: &[LeafSegment]) -> usize {
    segments
        .iter()
        .map(|s| s.leaf.support_len().expect("leaf codes are eventually zero"))
        .max()
        .unwrap_or(0)
}

fn step_segment(seg: &LeafSegment) -> LeafSegment {
    let k = match seg.kind {
        LeafKind::Stable => 1,
        LeafKind::Unstable => -1,
    };
    let ends = seg.ends.clone().map(|end| match end {
        SegmentEnd::Point { code } => SegmentEnd::Point { code: code.shift(k) },
        fold => fold,
    });
    LeafSegment::new(seg.kind, seg.leaf.shifted(), ends)
}

/// Joins segments that reached a common leaf through a fold.
fn merge(segments: Vec<LeafSegment>) -> (Vec<LeafSegment>, bool) {
    let mut by_leaf: BTreeMap<String, Vec<LeafSegment>> = BTreeMap::new();
    for s in segments {
        by_leaf.entry(s.leaf.to_string()).or_default().push(s);
    }
    let mut out = Vec::new();
    let mut residual = false;
    for (_, mut group) in by_leaf {
        while let Some(first) = group.pop() {
            let fold_partner = if first.ends.iter().any(|e| matches!(e, SegmentEnd::Fold { .. })) {
                group
                    .iter()
                    .position(|s| s.ends.iter().any(|e| matches!(e, SegmentEnd::Fold { .. })))
            } else {
                None
            };
            match fold_partner {
                Some(i) => {
                    let other = group.swap_remove(i);
                    let point_of = |s: &LeafSegment| {
                        s.ends
                            .iter()
                            .find(|e| matches!(e, SegmentEnd::Point { .. }))
                            .cloned()
                            .expect("folded segment keeps one corner")
                    };
                    let ends = [point_of(&first), point_of(&other)];
                    out.push(LeafSegment::new(first.kind, first.leaf.clone(), ends));
                }
                None => {
                    residual |= first.ends.iter().any(|e| matches!(e, SegmentEnd::Fold { .. }));
                    out.push(first);
                }
            }
        }
    }
    (out, residual)
}

fn extents(segments: &[LeafSegment]) -> Vec<(Dyadic, Dyadic)> {
    segments.iter().map(LeafSegment::extent).collect()
}

fn sweep(start: &[LeafSegment], direction: Direction, over: &Span, across: &Span) -> SweepResult {
    let trap = trap_step(start);
    let mut segments = start.to_vec();
    let mut result = SweepResult {
        trap,
        hits: Vec::new(),
        near_misses: Vec::new(),
        diameters: vec![DiameterEntry { direction, n: 0, extents: extents(&segments) }],
        residual_fold: false,
    };
    for n in 1..=trap {
        let stepped = segments.iter().map(step_segment).collect();
        let (merged, residual) = merge(stepped);
        segments = merged;
        result.residual_fold |= residual;
        result.diameters.push(DiameterEntry { direction, n, extents: extents(&segments) });
        for seg in &segments {
            if !over.contains(&seg.leaf) {
                continue;
            }
            let (a, b) = seg.extent_codes();
            let witness = Witness {
                direction,
                n,
                leaf: LeafReport { code: seg.leaf.clone(), value: seg.coordinate },
                extent: seg.extent(),
            };
            if across.meets(&a, &b) {
                result.hits.push(witness);
            } else {
                result.near_misses.push(witness);
            }
        }
    }
    debug_assert!(segments.iter().all(|s| s.leaf.is_zero()));
    result
}

/// Follows `C` forward and `E` backward until both are trapped on `0^∞`,
/// testing every iterate against the region.
pub fn check_pruning_conditions(disk: &PruningDisk, horizon: usize) -> Result<Certificate, DiskError> {
    let required = trap_step(&disk.c.segments).max(trap_step(&disk.e.segments));
    if horizon < required {
        return Err(DiskError::HorizonTooSmall { horizon, required });
    }
    let region = &disk.region;
    let fwd = sweep(&disk.c.segments, Direction::Forward, &region.u, &region.v);
    let bwd = sweep(&disk.e.segments, Direction::Backward, &region.v, &region.u);
    let witness = fwd.hits.first().or(bwd.hits.first()).cloned();
    let verdict = if witness.is_some() {
        Verdict::Fail
    } else if fwd.residual_fold || bwd.residual_fold {
        Verdict::Indeterminate
    } else {
        Verdict::Pass
    };
    let mut diameters = fwd.diameters;
    diameters.extend(bwd.diameters);
    let mut near_misses = fwd.near_misses;
    near_misses.extend(bwd.near_misses);
    Ok(Certificate {
        verdict,
        n_trap_forward: fwd.trap,
        n_trap_backward: bwd.trap,
        witness,
        diameters,
        near_misses,
    })
}
