//! Binary itineraries: one-sided codes, homoclinic codes and periodic codes.
//!
//! Text syntax shared by every report and CLI flag:
//!
//! * homoclinic `L.R`: `L` is read left to right as `s_{-|L|} … s_{-1}` and
//!   `R` as `s_0 s_1 …`, both with implicit `0^∞` tails. The dot is mandatory
//!   and either side may be empty (`.` is the fixed point `0^∞`).
//! * periodic `(w)`: the bi-infinite repetition of `w` with `s_0 = w[0]`.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Error raised while parsing code text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodeError {
    #[error("empty code text")]
    Empty,
    #[error("empty periodic word in {0:?}")]
    EmptyWord(String),
    #[error("invalid symbol {symbol:?} at position {position} in {text:?}")]
    BadSymbol {
        text: String,
        position: usize,
        symbol: char,
    },
    #[error("missing '.' in homoclinic code {0:?}")]
    MissingDot(String),
    #[error("unbalanced parentheses in {0:?}")]
    Unbalanced(String),
    #[error("periodic word {word:?} is a power of its prefix of length {period} (ends at position {position})")]
    NotPrimitive {
        word: String,
        period: usize,
        position: usize,
    },
}

pub(crate) fn parse_word(text: &str, whole: &str, offset: usize) -> Result<Vec<u8>, CodeError> {
    text.chars()
        .enumerate()
        .map(|(i, c)| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(CodeError::BadSymbol {
                text: whole.to_string(),
                position: offset + i,
                symbol: other,
            }),
        })
        .collect()
}

pub fn word_to_string(w: &[u8]) -> String {
    w.iter().map(|&s| if s == 0 { '0' } else { '1' }).collect()
}

/// Length of the shortest period `p` with `w = u^(|w|/p)`.
pub fn primitive_period(w: &[u8]) -> usize {
    let n = w.len();
    (1..=n)
        .find(|&p| n.is_multiple_of(p) && (p..n).all(|i| w[i] == w[i - p]))
        .unwrap_or(n)
}

pub fn is_primitive(w: &[u8]) -> bool {
    primitive_period(w) == w.len()
}

/// Lexicographically least rotation of `w`.
pub fn least_rotation(w: &[u8]) -> Vec<u8> {
    let n = w.len();
    (0..n)
        .map(|k| rotate_left(w, k))
        .min()
        .unwrap_or_default()
}

pub fn rotate_left(w: &[u8], k: usize) -> Vec<u8> {
    if w.is_empty() {
        return Vec::new();
    }
    let k = k % w.len();
    w[k..].iter().chain(&w[..k]).copied().collect()
}

/// Tail of a one-sided code.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tail {
    Zeros,
    Periodic(Vec<u8>),
}

/// One-sided sequence `s_0 s_1 s_2 …` with an eventually-zero or eventually
/// periodic tail, kept in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OneSidedCode {
    head: Vec<u8>,
    tail: Tail,
}

impl OneSidedCode {
    /// Eventually-zero code `head 0^∞`.
    pub fn zeros_tail(head: impl Into<Vec<u8>>) -> Self {
        let mut head = head.into();
        while head.last() == Some(&0) {
            head.pop();
        }
        OneSidedCode { head, tail: Tail::Zeros }
    }

    /// `head tail^∞`; the tail is reduced to a primitive word and any suffix
    /// of `head` repeating the tail is absorbed into it.
    pub fn periodic_tail(head: impl Into<Vec<u8>>, tail: impl Into<Vec<u8>>) -> Self {
        let head = head.into();
        let tail = tail.into();
        assert!(!tail.is_empty(), "periodic tail must be non-empty");
        let p = primitive_period(&tail);
        let mut tail = tail[..p].to_vec();
        if tail == [0] {
            return OneSidedCode::zeros_tail(head);
        }
        let mut head = head;
        while let Some(&last) = head.last() {
            if last != *tail.last().unwrap() {
                break;
            }
            head.pop();
            tail.rotate_right(1);
        }
        OneSidedCode {
            head,
            tail: Tail::Periodic(tail),
        }
    }

    pub fn zero() -> Self {
        OneSidedCode::zeros_tail(Vec::new())
    }

    pub fn head(&self) -> &[u8] {
        &self.head
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn is_zero(&self) -> bool {
        self.head.is_empty() && self.tail == Tail::Zeros
    }

    pub fn has_zero_tail(&self) -> bool {
        self.tail == Tail::Zeros
    }

    /// Symbol `s_i`.
    pub fn symbol(&self, i: usize) -> u8 {
        if i < self.head.len() {
            return self.head[i];
        }
        match &self.tail {
            Tail::Zeros => 0,
            Tail::Periodic(w) => w[(i - self.head.len()) % w.len()],
        }
    }

    fn tail_len(&self) -> usize {
        match &self.tail {
            Tail::Zeros => 1,
            Tail::Periodic(w) => w.len(),
        }
    }

    /// Index beyond which two codes agree everywhere if they agree up to it.
    pub(crate) fn comparison_horizon(&self, other: &OneSidedCode) -> usize {
        self.head.len().max(other.head.len()) + self.tail_len() * other.tail_len() + 1
    }

    /// Drops `s_0` (the one-sided shift).
    pub fn shifted(&self) -> OneSidedCode {
        if !self.head.is_empty() {
            return OneSidedCode {
                head: self.head[1..].to_vec(),
                tail: self.tail.clone(),
            };
        }
        match &self.tail {
            Tail::Zeros => self.clone(),
            Tail::Periodic(w) => OneSidedCode {
                head: Vec::new(),
                tail: Tail::Periodic(rotate_left(w, 1)),
            },
        }
    }

    /// Prepends `s` as the new `s_0`.
    pub fn prepended(&self, s: u8) -> OneSidedCode {
        let mut head = Vec::with_capacity(self.head.len() + 1);
        head.push(s);
        head.extend_from_slice(&self.head);
        match &self.tail {
            Tail::Zeros => OneSidedCode::zeros_tail(head),
            Tail::Periodic(w) => OneSidedCode::periodic_tail(head, w.clone()),
        }
    }

    /// Number of leading symbols before the zero tail (`None` for periodic tails).
    pub fn support_len(&self) -> Option<usize> {
        match self.tail {
            Tail::Zeros => Some(self.head.len()),
            Tail::Periodic(_) => None,
        }
    }
}

impl fmt::Display for OneSidedCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.tail {
            Tail::Zeros => write!(f, "{}0^inf", word_to_string(&self.head)),
            Tail::Periodic(w) => write!(f, "{}({})^inf", word_to_string(&self.head), word_to_string(w)),
        }
    }
}

/// Bi-infinite code homoclinic to `0^∞`.
///
/// `left` holds `s_{-|L|} … s_{-1}` in reading order, `right` holds
/// `s_0 s_1 …`; canonical form has no leading zero in `left` and no trailing
/// zero in `right`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HomoclinicCode {
    left: Vec<u8>,
    right: Vec<u8>,
}

impl HomoclinicCode {
    pub fn new(left: impl Into<Vec<u8>>, right: impl Into<Vec<u8>>) -> Self {
        let mut left = left.into();
        let mut right = right.into();
        let lead = left.iter().take_while(|&&s| s == 0).count();
        left.drain(..lead);
        while right.last() == Some(&0) {
            right.pop();
        }
        HomoclinicCode { left, right }
    }

    /// Builds the code from its backward sequence `s_{-1} s_{-2} …` and
    /// forward sequence `s_0 s_1 …`, both eventually zero.
    pub fn from_halves(backward: &OneSidedCode, forward: &OneSidedCode) -> Self {
        assert!(backward.has_zero_tail() && forward.has_zero_tail());
        let left: Vec<u8> = backward.head().iter().rev().copied().collect();
        HomoclinicCode::new(left, forward.head().to_vec())
    }

    pub fn fixed_point() -> Self {
        HomoclinicCode::new(Vec::new(), Vec::new())
    }

    pub fn left(&self) -> &[u8] {
        &self.left
    }

    pub fn right(&self) -> &[u8] {
        &self.right
    }

    /// `s_i` for any integer `i`.
    pub fn symbol(&self, i: i64) -> u8 {
        if i >= 0 {
            self.right.get(i as usize).copied().unwrap_or(0)
        } else {
            let back = (-i - 1) as usize;
            if back < self.left.len() {
                self.left[self.left.len() - 1 - back]
            } else {
                0
            }
        }
    }

    /// Forward half `s_0 s_1 …`.
    pub fn forward(&self) -> OneSidedCode {
        OneSidedCode::zeros_tail(self.right.clone())
    }

    /// Backward half `s_{-1} s_{-2} …`.
    pub fn backward(&self) -> OneSidedCode {
        OneSidedCode::zeros_tail(self.left.iter().rev().copied().collect::<Vec<_>>())
    }

    /// Index range `[lo, hi)` outside which every symbol is zero.
    pub fn support(&self) -> (i64, i64) {
        (-(self.left.len() as i64), self.right.len() as i64)
    }

    /// Number of nonzero-window symbols, `|L| + |R|`.
    pub fn support_len(&self) -> usize {
        self.left.len() + self.right.len()
    }

    /// `σ^k`: the sequence `t_i = s_{i+k}` (the dot moves `k` places right).
    pub fn shift(&self, k: i64) -> Self {
        let (lo, hi) = self.support();
        let (lo, hi) = (lo.min(0).min(k), hi.max(0).max(k));
        let left: Vec<u8> = (lo..k).map(|i| self.symbol(i)).collect();
        let right: Vec<u8> = (k..hi).map(|i| self.symbol(i)).collect();
        HomoclinicCode::new(left, right)
    }
}

impl fmt::Display for HomoclinicCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", word_to_string(&self.left), word_to_string(&self.right))
    }
}

/// Periodic point of the shift: `s_i = word[(i + phase) mod |word|]`.
///
/// Equality and hashing compare the realized sequences, so a word with a
/// phase equals the correspondingly rotated word with phase zero.
#[derive(Debug, Clone)]
pub struct PeriodicCode {
    word: Vec<u8>,
    phase: usize,
}

impl PeriodicCode {
    /// Builds the periodic point `(word)^∞`, reducing a non-primitive word to
    /// its primitive root.
    pub fn new(word: impl Into<Vec<u8>>) -> Self {
        let word = word.into();
        assert!(!word.is_empty(), "periodic word must be non-empty");
        let p = primitive_period(&word);
        PeriodicCode {
            word: word[..p].to_vec(),
            phase: 0,
        }
    }

    pub fn with_phase(word: impl Into<Vec<u8>>, phase: usize) -> Self {
        let mut c = PeriodicCode::new(word);
        c.phase = phase % c.word.len();
        c
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn phase(&self) -> usize {
        self.phase
    }

    pub fn period(&self) -> usize {
        self.word.len()
    }

    /// The block `s_0 … s_{n-1}`.
    pub fn block(&self) -> Vec<u8> {
        rotate_left(&self.word, self.phase)
    }

    /// Lexicographically least rotation of the period block; the canonical
    /// orbit representative.
    pub fn necklace(&self) -> Vec<u8> {
        least_rotation(&self.word)
    }

    pub fn symbol(&self, i: i64) -> u8 {
        let n = self.word.len() as i64;
        self.word[((i + self.phase as i64).rem_euclid(n)) as usize]
    }

    pub fn shift(&self, k: i64) -> Self {
        let n = self.word.len() as i64;
        PeriodicCode {
            word: self.word.clone(),
            phase: ((self.phase as i64 + k).rem_euclid(n)) as usize,
        }
    }

    pub fn orbit_equivalent(&self, other: &PeriodicCode) -> bool {
        self.period() == other.period() && self.necklace() == other.necklace()
    }

    /// Forward half `s_0 s_1 …`.
    pub fn forward(&self) -> OneSidedCode {
        OneSidedCode::periodic_tail(Vec::new(), self.block())
    }

    /// Backward half `s_{-1} s_{-2} …`.
    pub fn backward(&self) -> OneSidedCode {
        let n = self.period() as i64;
        let w: Vec<u8> = (1..=n).map(|k| self.symbol(-k)).collect();
        OneSidedCode::periodic_tail(Vec::new(), w)
    }
}

impl PartialEq for PeriodicCode {
    fn eq(&self, other: &Self) -> bool {
        self.period() == other.period() && self.block() == other.block()
    }
}

impl Eq for PeriodicCode {}

impl Hash for PeriodicCode {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.block().hash(state);
    }
}

impl fmt::Display for PeriodicCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", word_to_string(&self.block()))
    }
}

/// Either kind of bi-infinite code.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Code {
    Homoclinic(HomoclinicCode),
    Periodic(PeriodicCode),
}

impl Code {
    pub fn shift(&self, k: i64) -> Code {
        match self {
            Code::Homoclinic(h) => Code::Homoclinic(h.shift(k)),
            Code::Periodic(p) => Code::Periodic(p.shift(k)),
        }
    }

    pub fn symbol(&self, i: i64) -> u8 {
        match self {
            Code::Homoclinic(h) => h.symbol(i),
            Code::Periodic(p) => p.symbol(i),
        }
    }

    pub fn forward(&self) -> OneSidedCode {
        match self {
            Code::Homoclinic(h) => h.forward(),
            Code::Periodic(p) => p.forward(),
        }
    }

    pub fn backward(&self) -> OneSidedCode {
        match self {
            Code::Homoclinic(h) => h.backward(),
            Code::Periodic(p) => p.backward(),
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Code::Homoclinic(h) => h.fmt(f),
            Code::Periodic(p) => p.fmt(f),
        }
    }
}

/// Parses `L.R` or `(w)`.
pub fn parse_code(text: &str) -> Result<Code, CodeError> {
    let t = text.trim();
    if t.is_empty() {
        return Err(CodeError::Empty);
    }
    if t.starts_with('(') || t.ends_with(')') {
        if !(t.starts_with('(') && t.ends_with(')')) || t.len() < 2 {
            return Err(CodeError::Unbalanced(t.to_string()));
        }
        let inner = &t[1..t.len() - 1];
        if inner.is_empty() {
            return Err(CodeError::EmptyWord(t.to_string()));
        }
        let w = parse_word(inner, t, 1)?;
        let p = primitive_period(&w);
        if p != w.len() {
            return Err(CodeError::NotPrimitive {
                word: inner.to_string(),
                period: p,
                position: p,
            });
        }
        return Ok(Code::Periodic(PeriodicCode::new(w)));
    }
    let Some((l, r)) = t.split_once('.') else {
        return Err(CodeError::MissingDot(t.to_string()));
    };
    let left = parse_word(l, t, 0)?;
    let right = parse_word(r, t, l.len() + 1)?;
    Ok(Code::Homoclinic(HomoclinicCode::new(left, right)))
}

impl FromStr for HomoclinicCode {
    type Err = CodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match parse_code(s)? {
            Code::Homoclinic(h) => Ok(h),
            Code::Periodic(_) => Err(CodeError::MissingDot(s.to_string())),
        }
    }
}

impl FromStr for PeriodicCode {
    type Err = CodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match parse_code(s)? {
            Code::Periodic(p) => Ok(p),
            Code::Homoclinic(_) => Err(CodeError::Unbalanced(s.to_string())),
        }
    }
}

impl FromStr for Code {
    type Err = CodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_code(s)
    }
}

macro_rules! string_serde {
    ($t:ty) => {
        impl Serialize for $t {
            fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                serializer.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $t {
            fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
                let s = String::deserialize(deserializer)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

string_serde!(HomoclinicCode);
string_serde!(PeriodicCode);
string_serde!(Code);

impl Serialize for OneSidedCode {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(s: &str) -> HomoclinicCode {
        s.parse().unwrap()
    }

    #[test]
    fn parses_homoclinic_point() {
        let c = h("1111.10110");
        assert_eq!(c.left(), &[1, 1, 1, 1]);
        assert_eq!(c.right(), &[1, 0, 1, 1]);
        assert_eq!(c.symbol(-1), 1);
        assert_eq!(c.symbol(1), 0);
        assert_eq!(c.to_string(), "1111.1011");
    }

    #[test]
    fn dot_is_fixed_point() {
        assert_eq!(h("."), HomoclinicCode::fixed_point());
        assert_eq!(h("000.000"), HomoclinicCode::fixed_point());
        for k in -5..5 {
            assert_eq!(h(".").shift(k), h("."));
        }
    }

    #[test]
    fn parses_periodic() {
        let p: PeriodicCode = "(10110)".parse().unwrap();
        assert_eq!(p.word(), &[1, 0, 1, 1, 0]);
        assert_eq!(p.phase(), 0);
        assert_eq!(p.to_string(), "(10110)");
        assert_eq!(p.shift(5), p);
        assert_eq!(p.shift(5).phase(), 0);
        assert_eq!(p.shift(1).to_string(), "(01101)");
        assert_eq!(p.necklace(), vec![0, 1, 0, 1, 1]);
    }

    #[test]
    fn shift_moves_the_dot() {
        assert_eq!(h("1111.10110").shift(1), h("11111.0110"));
        assert_eq!(h("1111.10110").shift(-2), h("11.1110110"));
        assert_eq!(h("1.1").shift(3), h("1100."));
    }

    #[test]
    fn parse_errors_name_positions() {
        assert_eq!(parse_code(""), Err(CodeError::Empty));
        assert!(matches!(parse_code("()"), Err(CodeError::EmptyWord(_))));
        assert_eq!(
            parse_code("10.12"),
            Err(CodeError::BadSymbol {
                text: "10.12".into(),
                position: 4,
                symbol: '2'
            })
        );
        assert!(matches!(
            parse_code("(1010)"),
            Err(CodeError::NotPrimitive { period: 2, .. })
        ));
        assert!(matches!(parse_code("1011"), Err(CodeError::MissingDot(_))));
        assert!(matches!(parse_code("(101"), Err(CodeError::Unbalanced(_))));
    }

    #[test]
    fn one_sided_canonical_forms() {
        let a = OneSidedCode::periodic_tail(vec![1, 0, 1, 0], vec![1, 0]);
        assert_eq!(a, OneSidedCode::periodic_tail(vec![], vec![1, 0]));
        let b = OneSidedCode::periodic_tail(vec![1], vec![0, 0]);
        assert_eq!(b, OneSidedCode::zeros_tail(vec![1]));
        assert_eq!(OneSidedCode::zeros_tail(vec![1, 0, 0]).head(), &[1]);
        let c = OneSidedCode::periodic_tail(vec![1, 1], vec![0, 1, 0, 1]);
        assert_eq!(c.tail(), &Tail::Periodic(vec![1, 0]));
        assert_eq!(c.head(), &[1]);
        for i in 0..12 {
            assert_eq!(
                c.symbol(i),
                [1, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1][i]
            );
        }
    }

    #[test]
    fn halves_of_periodic_code() {
        let p: PeriodicCode = "(110)".parse().unwrap();
        assert_eq!(p.forward().symbol(0), 1);
        assert_eq!(p.backward().symbol(0), 0);
        assert_eq!(p.backward().symbol(1), 1);
    }
}
