use serde::{Deserialize, Serialize};

use super::{is_valid_disk_params, DiskValidity, PruningParams, SftError};
use crate::symbolic::PeriodicCode;

/// Default upper bound on periods handled by [`Sft::count_periodic`].
pub const DEFAULT_MAX_PERIOD: usize = 24;
pub const DEFAULT_MAX_POWER_ITERATIONS: usize = 1_000_000;

/// Subshift of finite type given by forbidden words, presented on the
/// de Bruijn graph of order `m`: vertices are words of length `m` (encoded as
/// integers, oldest symbol most significant) and `w → w'` is an edge when the
/// spanning `(m+1)`-window avoids every forbidden word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sft {
    forbidden: Vec<Vec<u8>>,
    order: usize,
    // allowed[v][x]: edge from v appending symbol x
    allowed: Vec<[bool; 2]>,
    max_period: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRow {
    pub n: usize,
    /// Points with `σ^n(s) = s`.
    pub points: u64,
    /// Orbits of least period exactly `n`.
    pub exact_orbits: u64,
}

pub type CountTable = Vec<CountRow>;

fn contains(window: &[u8], word: &[u8]) -> bool {
    word.len() <= window.len() && window.windows(word.len()).any(|w| w == word)
}

fn mobius(n: usize) -> i64 {
    let mut n = n;
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

impl Sft {
    /// Subshift avoiding every word in `forbidden`. An empty set gives the
    /// full two-shift.
    pub fn from_forbidden(forbidden: Vec<Vec<u8>>) -> Result<Self, SftError> {
        if forbidden.iter().any(|w| w.is_empty() || w.iter().any(|&s| s > 1)) {
            return Err(SftError::BadWord);
        }
        let mut forbidden = forbidden;
        forbidden.sort();
        forbidden.dedup();
        let order = forbidden.iter().map(|w| w.len()).max().unwrap_or(2).max(2) - 1;
        assert!(order <= 20, "de Bruijn order {order} too large");
        let mask = (1usize << order) - 1;
        let allowed = (0..1usize << order)
            .map(|v| {
                let mut edges = [false; 2];
                for x in 0..2u8 {
                    let window: Vec<u8> = (0..order)
                        .map(|i| ((v >> (order - 1 - i)) & 1) as u8)
                        .chain(std::iter::once(x))
                        .collect();
                    edges[x as usize] = !forbidden.iter().any(|w| contains(&window, w));
                }
                let _ = mask;
                edges
            })
            .collect();
        Ok(Sft {
            forbidden,
            order,
            allowed,
            max_period: DEFAULT_MAX_PERIOD,
        })
    }

    /// `Fix(ρ_{N,M})` for one disk, or the intersection over several disks
    /// (union of their forbidden words). An empty list is the full shift.
    pub fn from_disks(disks: &[PruningParams]) -> Result<Self, SftError> {
        let mut words = Vec::new();
        for &p in disks {
            if is_valid_disk_params(p) == DiskValidity::Excluded {
                return Err(SftError::ExcludedDisk { n: p.n, m: p.m });
            }
            words.extend(p.forbidden_words());
        }
        Sft::from_forbidden(words)
    }

    pub fn full_shift() -> Self {
        Sft::from_forbidden(Vec::new()).expect("no words")
    }

    pub fn with_max_period(mut self, max_period: usize) -> Self {
        self.max_period = max_period;
        self
    }

    pub fn forbidden(&self) -> &[Vec<u8>] {
        &self.forbidden
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn vertex_count(&self) -> usize {
        self.allowed.len()
    }

    pub fn max_period(&self) -> usize {
        self.max_period
    }

    fn successor(&self, v: usize, x: usize) -> usize {
        ((v << 1) | x) & ((1 << self.order) - 1)
    }

    /// Dense 0/1 adjacency matrix, row-major.
    pub fn adjacency(&self) -> Vec<Vec<u8>> {
        let n = self.vertex_count();
        let mut a = vec![vec![0u8; n]; n];
        for v in 0..n {
            for x in 0..2 {
                if self.allowed[v][x] {
                    a[v][self.successor(v, x)] = 1;
                }
            }
        }
        a
    }

    /// Whether `(w)^∞` avoids every forbidden word.
    pub fn admissible(&self, s: &PeriodicCode) -> bool {
        let block = s.block();
        let n = block.len();
        self.forbidden.iter().all(|w| {
            (0..n).all(|start| (0..w.len()).any(|k| block[(start + k) % n] != w[k]))
        })
    }

    /// `trace(A^k)` for `k = 1..=n_max`, by propagating each basis vector
    /// along the sparse de Bruijn edges.
    fn traces(&self, n_max: usize) -> Vec<u64> {
        let size = self.vertex_count();
        let mut traces = vec![0u64; n_max + 1];
        let mut cur = vec![0u64; size];
        let mut next = vec![0u64; size];
        for start in 0..size {
            cur.iter_mut().for_each(|c| *c = 0);
            cur[start] = 1;
            for k in 1..=n_max {
                next.iter_mut().for_each(|c| *c = 0);
                for (v, &c) in cur.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    for x in 0..2 {
                        if self.allowed[v][x] {
                            next[self.successor(v, x)] += c;
                        }
                    }
                }
                std::mem::swap(&mut cur, &mut next);
                traces[k] += cur[start];
            }
        }
        traces
    }

    /// Number of points with `σ^n(s) = s`.
    pub fn count_periodic(&self, n: usize) -> Result<u64, SftError> {
        self.check_period(n)?;
        Ok(self.traces(n)[n])
    }

    fn check_period(&self, n: usize) -> Result<(), SftError> {
        if n == 0 || n > self.max_period {
            return Err(SftError::PeriodOutOfRange { n, max: self.max_period });
        }
        Ok(())
    }

    /// Rows `1..=n_max` with point counts and exact-period orbit counts.
    pub fn count_table(&self, n_max: usize) -> Result<CountTable, SftError> {
        self.check_period(n_max)?;
        let traces = self.traces(n_max);
        Ok((1..=n_max)
            .map(|n| {
                let least: i64 = (1..=n)
                    .filter(|d| n % d == 0)
                    .map(|d| mobius(n / d) * traces[d] as i64)
                    .sum();
                CountRow {
                    n,
                    points: traces[n],
                    exact_orbits: (least / n as i64) as u64,
                }
            })
            .collect())
    }

    /// Topological entropy `log ρ(A)`.
    ///
    /// Power iteration runs on `A + I`, whose dominant eigenvalue `ρ(A) + 1`
    /// is strictly separated in modulus from the rest even when the graph is
    /// periodic. The seed is the all-ones vector.
    pub fn entropy(&self, tol: f64) -> Result<f64, SftError> {
        self.entropy_with_limit(tol, DEFAULT_MAX_POWER_ITERATIONS)
    }

    pub fn entropy_with_limit(&self, tol: f64, max_iterations: usize) -> Result<f64, SftError> {
        if !(tol > 0.0) {
            return Err(SftError::BadTolerance(tol));
        }
        let size = self.vertex_count();
        let mut x = vec![1.0f64; size];
        let mut y = vec![0.0f64; size];
        let mut previous = f64::NAN;
        for _ in 0..max_iterations {
            y.copy_from_slice(&x);
            for v in 0..size {
                for s in 0..2 {
                    if self.allowed[v][s] {
                        y[self.successor(v, s)] += x[v];
                    }
                }
            }
            let norm_x: f64 = x.iter().sum();
            let norm_y: f64 = y.iter().sum();
            let estimate = norm_y / norm_x - 1.0;
            y.iter_mut().for_each(|c| *c /= norm_y);
            std::mem::swap(&mut x, &mut y);
            if previous.is_finite() && (estimate - previous).abs() <= tol * estimate.abs().max(1e-300) {
                let h = if estimate <= 1.0 { 0.0 } else { estimate.ln() };
                return Ok(h.clamp(0.0, std::f64::consts::LN_2));
            }
            previous = estimate;
        }
        Err(SftError::NoConvergence { iterations: max_iterations })
    }
}
