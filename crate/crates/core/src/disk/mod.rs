//! Pruning disks bounded by one stable arc `C` and one unstable arc `E` of the
//! saddle `0^∞`, and exact verification of the pruning-disk conditions in the
//! symbol square.

pub mod oracle;
mod sweep;

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::sft::PruningParams;
use crate::symbolic::{
    gray_dyadic, square_coords, unimodal_cmp, Dyadic, HomoclinicCode, OneSidedCode,
};

pub use oracle::{oracle_check, OracleError, OracleMap, OracleReport, OracleStep};
pub use sweep::{
    check_pruning_conditions, default_horizon, Certificate, DiameterEntry, Direction, LeafReport,
    Verdict, Witness,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiskError {
    #[error("corner codes coincide ({0}); the disk is degenerate")]
    Degenerate(HomoclinicCode),
    #[error("unsupported corner configuration: {0}")]
    Unsupported(String),
    #[error("horizon {horizon} is below the trap step {required}; use --horizon {required} or more")]
    HorizonTooSmall { horizon: usize, required: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LeafKind {
    /// Vertical segment of `W^s`, indexed by its forward code.
    Stable,
    /// Horizontal segment of `W^u`, indexed by its backward code.
    Unstable,
}

/// Side of the unit symbol square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    #[serde(rename = "u=0")]
    U0,
    #[serde(rename = "u=1")]
    U1,
    #[serde(rename = "v=0")]
    V0,
    #[serde(rename = "v=1")]
    V1,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::U0 => "u=0",
            Side::U1 => "u=1",
            Side::V0 => "v=0",
            Side::V1 => "v=1",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum SegmentEnd {
    Point { code: HomoclinicCode },
    /// The segment runs into a fold across the given side.
    Fold { side: Side },
}

impl SegmentEnd {
    fn transverse(&self, kind: LeafKind) -> OneSidedCode {
        match (self, kind) {
            (SegmentEnd::Point { code }, LeafKind::Stable) => code.backward(),
            (SegmentEnd::Point { code }, LeafKind::Unstable) => code.forward(),
            // the top side carries the unimodal maximum 10^∞
            (SegmentEnd::Fold { .. }, _) => OneSidedCode::zeros_tail(vec![1]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeafSegment {
    pub kind: LeafKind,
    pub leaf: OneSidedCode,
    pub coordinate: Dyadic,
    pub ends: [SegmentEnd; 2],
}

impl LeafSegment {
    fn new(kind: LeafKind, leaf: OneSidedCode, ends: [SegmentEnd; 2]) -> Self {
        let coordinate = gray_dyadic(&leaf).expect("leaf codes are eventually zero");
        LeafSegment { kind, leaf, coordinate, ends }
    }

    /// Transverse codes of the two ends, ordered by the unimodal order.
    pub fn extent_codes(&self) -> (OneSidedCode, OneSidedCode) {
        let a = self.ends[0].transverse(self.kind);
        let b = self.ends[1].transverse(self.kind);
        if unimodal_cmp(&a, &b) == Ordering::Greater {
            (b, a)
        } else {
            (a, b)
        }
    }

    /// Closed transverse interval covered by the segment.
    pub fn extent(&self) -> (Dyadic, Dyadic) {
        let (a, b) = self.extent_codes();
        (gray_dyadic(&a).expect("zero tail"), gray_dyadic(&b).expect("zero tail"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FoldLink {
    pub side: Side,
    /// Interval of the side covered by the fold.
    pub span: (Dyadic, Dyadic),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArcChain {
    pub kind: LeafKind,
    pub segments: Vec<LeafSegment>,
    pub folds: Vec<FoldLink>,
}

/// One coordinate span of the region, bounded below by a leaf and above by
/// either a leaf (open) or the top side of the square (cap, closed at 1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Span {
    pub lo: Dyadic,
    pub hi: Dyadic,
    #[serde(skip)]
    pub lo_code: OneSidedCode,
    #[serde(skip)]
    pub hi_code: Option<OneSidedCode>,
}

impl Span {
    fn open(a: OneSidedCode, b: OneSidedCode) -> Self {
        let (lo_code, hi_code) = if unimodal_cmp(&a, &b) == Ordering::Greater { (b, a) } else { (a, b) };
        Span {
            lo: gray_dyadic(&lo_code).expect("zero tail"),
            hi: gray_dyadic(&hi_code).expect("zero tail"),
            lo_code,
            hi_code: Some(hi_code),
        }
    }

    fn capped(lo_code: OneSidedCode) -> Self {
        Span {
            lo: gray_dyadic(&lo_code).expect("zero tail"),
            hi: Dyadic::ONE,
            lo_code,
            hi_code: None,
        }
    }

    pub fn is_capped(&self) -> bool {
        self.hi_code.is_none()
    }

    /// Whether a leaf code lies in the span (strictly above `lo`, strictly
    /// below an open `hi`, anywhere up to the side under a cap).
    pub fn contains(&self, x: &OneSidedCode) -> bool {
        unimodal_cmp(x, &self.lo_code) == Ordering::Greater
            && self.hi_code.as_ref().is_none_or(|h| unimodal_cmp(x, h) == Ordering::Less)
    }

    /// Whether the closed interval `[a, b]` of codes meets the span.
    pub fn meets(&self, a: &OneSidedCode, b: &OneSidedCode) -> bool {
        unimodal_cmp(b, &self.lo_code) == Ordering::Greater
            && self.hi_code.as_ref().is_none_or(|h| unimodal_cmp(a, h) == Ordering::Less)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Region {
    pub u: Span,
    pub v: Span,
    pub cap: FoldLink,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PruningDisk {
    pub p0: HomoclinicCode,
    pub p1: HomoclinicCode,
    pub c: ArcChain,
    pub e: ArcChain,
    pub region: Region,
}

impl PruningDisk {
    /// Largest support length of the two corners.
    pub fn support_len(&self) -> usize {
        self.p0.support_len().max(self.p1.support_len())
    }
}

fn ordered(a: Dyadic, b: Dyadic) -> (Dyadic, Dyadic) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Codes that agree everywhere except in their first symbol.
fn differ_in_first(a: &OneSidedCode, b: &OneSidedCode) -> bool {
    a.symbol(0) != b.symbol(0) && a.shifted() == b.shifted()
}

fn point(code: &HomoclinicCode) -> SegmentEnd {
    SegmentEnd::Point { code: code.clone() }
}

/// The disk `D_{N,M}`. Excluded parameters are still constructed so the
/// checker can fail them.
pub fn disk_from_params(p: PruningParams) -> PruningDisk {
    let (f0, f1) = if p.m == 0 {
        (vec![1, 0, 1], vec![0, 0, 1])
    } else {
        let mut tail = vec![0u8; p.m - 1];
        tail.extend_from_slice(&[1, 1]);
        let mut f0 = vec![1, 1];
        let mut f1 = vec![0, 1];
        f0.extend_from_slice(&tail);
        f1.extend_from_slice(&tail);
        (f0, f1)
    };
    let e = if p.n == 0 {
        vec![0, 1]
    } else {
        let mut e = vec![1u8];
        e.extend(std::iter::repeat_n(0, p.n - 1));
        e.extend_from_slice(&[1, 1]);
        e
    };
    let e = OneSidedCode::zeros_tail(e);
    let p0 = HomoclinicCode::from_halves(&e, &OneSidedCode::zeros_tail(f0));
    let p1 = HomoclinicCode::from_halves(&e, &OneSidedCode::zeros_tail(f1));
    disk_from_homoclinic_pair(&p0, &p1).expect("D_{N,M} corners share their backward code")
}

/// Disk spanned by two homoclinic corners that share one half of their code.
///
/// A shared forward code gives a straight `C` on that stable leaf and an `E`
/// folding across `u=1`; a shared backward code gives the dual picture.
pub fn disk_from_homoclinic_pair(
    p0: &HomoclinicCode,
    p1: &HomoclinicCode,
) -> Result<PruningDisk, DiskError> {
    if p0 == p1 {
        return Err(DiskError::Degenerate(p0.clone()));
    }
    let (f0, f1) = (p0.forward(), p1.forward());
    let (b0, b1) = (p0.backward(), p1.backward());
    let c0 = square_coords(p0);
    let c1 = square_coords(p1);

    if f0 == f1 {
        if !differ_in_first(&b0, &b1) {
            return Err(DiskError::Unsupported(format!(
                "backward codes {b0} and {b1} must differ exactly in s_-1 for a single fold"
            )));
        }
        let c = ArcChain {
            kind: LeafKind::Stable,
            segments: vec![LeafSegment::new(LeafKind::Stable, f0.clone(), [point(p0), point(p1)])],
            folds: Vec::new(),
        };
        let fold = FoldLink { side: Side::U1, span: ordered(c0.v, c1.v) };
        let e = ArcChain {
            kind: LeafKind::Unstable,
            segments: vec![
                LeafSegment::new(LeafKind::Unstable, b0.clone(), [point(p0), SegmentEnd::Fold { side: Side::U1 }]),
                LeafSegment::new(LeafKind::Unstable, b1.clone(), [point(p1), SegmentEnd::Fold { side: Side::U1 }]),
            ],
            folds: vec![fold.clone()],
        };
        let region = Region { u: Span::capped(f0), v: Span::open(b0, b1), cap: fold };
        return Ok(PruningDisk { p0: p0.clone(), p1: p1.clone(), c, e, region });
    }

    if b0 == b1 {
        if !differ_in_first(&f0, &f1) {
            return Err(DiskError::Unsupported(format!(
                "forward codes {f0} and {f1} must differ exactly in s_0 for a single fold"
            )));
        }
        let fold = FoldLink { side: Side::V1, span: ordered(c0.u, c1.u) };
        let c = ArcChain {
            kind: LeafKind::Stable,
            segments: vec![
                LeafSegment::new(LeafKind::Stable, f0.clone(), [point(p0), SegmentEnd::Fold { side: Side::V1 }]),
                LeafSegment::new(LeafKind::Stable, f1.clone(), [point(p1), SegmentEnd::Fold { side: Side::V1 }]),
            ],
            folds: vec![fold.clone()],
        };
        let e = ArcChain {
            kind: LeafKind::Unstable,
            segments: vec![LeafSegment::new(LeafKind::Unstable, b0.clone(), [point(p0), point(p1)])],
            folds: Vec::new(),
        };
        let region = Region { u: Span::open(f0, f1), v: Span::capped(b0), cap: fold };
        return Ok(PruningDisk { p0: p0.clone(), p1: p1.clone(), c, e, region });
    }

    Err(DiskError::Unsupported(format!(
        "corners {p0} and {p1} share neither their forward nor their backward code"
    )))
}
