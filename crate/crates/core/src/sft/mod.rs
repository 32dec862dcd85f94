//! Pruning automorphisms `ρ_{N,M}` and the subshifts of finite type formed by
//! their fixed points.

mod graph;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::symbolic::PeriodicCode;

pub use graph::{CountRow, CountTable, Sft, DEFAULT_MAX_PERIOD, DEFAULT_MAX_POWER_ITERATIONS};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SftError {
    #[error("D_{{{n},{m}}} is not a pruning disk (excluded cases are (0,0), (1,0), (1,1), (0,1))")]
    ExcludedDisk { n: usize, m: usize },
    #[error("period {n} outside 1..={max}")]
    PeriodOutOfRange { n: usize, max: usize },
    #[error("power iteration did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("forbidden words must be non-empty binary words")]
    BadWord,
}

/// Subscripts `(N, M)` of the disk `D_{N,M}` and automorphism `ρ_{N,M}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PruningParams {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
}

impl PruningParams {
    pub const fn new(n: usize, m: usize) -> Self {
        PruningParams { n, m }
    }

    /// The blocks `0^N 1 0 1 0^M` and `0^N 1 1 1 0^M` exchanged by `ρ_{N,M}`.
    pub fn forbidden_words(&self) -> [Vec<u8>; 2] {
        let word = |mid: u8| {
            let mut w = vec![0u8; self.n];
            w.extend_from_slice(&[1, mid, 1]);
            w.extend(std::iter::repeat_n(0, self.m));
            w
        };
        [word(0), word(1)]
    }

    /// Length of the window `s_{i-N-1} … s_{i+M+1}`.
    pub fn window_len(&self) -> usize {
        self.n + self.m + 3
    }

    pub fn validity(&self) -> DiskValidity {
        is_valid_disk_params(*self)
    }
}

impl fmt::Display for PruningParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D_{{{},{}}}", self.n, self.m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiskValidity {
    Valid,
    Excluded,
}

/// `D_{N,M}` fails to be a pruning disk exactly for
/// `(N,M) ∈ {(0,0), (1,0), (1,1), (0,1)}`.
pub fn is_valid_disk_params(p: PruningParams) -> DiskValidity {
    if p.n <= 1 && p.m <= 1 {
        DiskValidity::Excluded
    } else {
        DiskValidity::Valid
    }
}

/// Applies `ρ_{N,M}`: position `i` flips iff the input window
/// `s_{i-N-1} … s_{i+M+1}` reads `0^N 1 s_i 1 0^M`. All positions are decided
/// from the input.
pub fn rho_apply(p: PruningParams, s: &PeriodicCode) -> PeriodicCode {
    let period = s.period() as i64;
    let (n, m) = (p.n as i64, p.m as i64);
    let flips = |i: i64| -> bool {
        s.symbol(i - 1) == 1
            && s.symbol(i + 1) == 1
            && (1..=n).all(|k| s.symbol(i - 1 - k) == 0)
            && (1..=m).all(|k| s.symbol(i + 1 + k) == 0)
    };
    let block: Vec<u8> = (0..period)
        .map(|i| if flips(i) { 1 - s.symbol(i) } else { s.symbol(i) })
        .collect();
    PeriodicCode::new(block)
}

/// Whether the orbit of `s` enters the symbolic pruning region of `D_{N,M}`,
/// i.e. some shift of `s` lies in `[0^N 1 · 0 1 0^M] ∪ [0^N 1 · 1 1 0^M]`.
pub fn pruning_region_hits(p: PruningParams, s: &PeriodicCode) -> bool {
    (0..s.period() as i64).any(|k| in_pruning_cylinders(p, &s.shift(k)))
}

fn in_pruning_cylinders(p: PruningParams, t: &PeriodicCode) -> bool {
    let past_ok = t.symbol(-1) == 1 && (2..=p.n as i64 + 1).all(|k| t.symbol(-k) == 0);
    let future_ok = t.symbol(1) == 1 && (2..=p.m as i64 + 1).all(|k| t.symbol(k) == 0);
    past_ok && future_ok
}
