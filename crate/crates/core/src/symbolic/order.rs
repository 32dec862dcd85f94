//! Unimodal (kneading) order and the symbol-square coordinates.
//!
//! The prefix-xor `b_i = s_0 ⊕ … ⊕ s_i` turns a one-sided code into the
//! binary expansion `Σ b_i 2^-(i+1)`. Branch `1` of the horseshoe reverses
//! orientation, which is exactly what the running xor encodes, so this value
//! is monotone in the unimodal order.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::code::{Code, HomoclinicCode, OneSidedCode, Tail};
use super::dyadic::Dyadic;

/// Gray value of an eventually-zero code, exactly.
///
/// Returns `None` for periodic tails; use [`gray_value`] for those.
pub fn gray_dyadic(s: &OneSidedCode) -> Option<Dyadic> {
    if !s.has_zero_tail() {
        return None;
    }
    let head = s.head();
    let mut parity = 0u8;
    let mut acc = Dyadic::ZERO;
    for (i, &sym) in head.iter().enumerate() {
        parity ^= sym;
        if parity == 1 {
            acc = acc.add(Dyadic::pow2_inv(i as u32 + 1));
        }
    }
    // An odd number of ones leaves b_i = 1 on the whole zero tail.
    if parity == 1 {
        acc = acc.add(Dyadic::pow2_inv(head.len() as u32));
    }
    Some(acc)
}

/// Gray value `Σ b_i 2^-(i+1)` as an exact rational; periodic tails are summed
/// as geometric series.
pub fn gray_value(s: &OneSidedCode) -> BigRational {
    if let Some(d) = gray_dyadic(s) {
        return d.to_rational();
    }
    let Tail::Periodic(w) = s.tail() else {
        unreachable!()
    };
    let head = s.head();
    let two = BigInt::from(2u8);
    let mut parity = 0u8;
    let mut head_num = BigInt::zero();
    for &sym in head {
        parity ^= sym;
        head_num = head_num * &two + BigInt::from(parity);
    }
    let h = head.len();
    // The b-sequence on the tail repeats after |w| symbols if w has even
    // weight, after 2|w| otherwise.
    let weight_odd = w.iter().fold(0u8, |acc, &x| acc ^ x) == 1;
    let block = if weight_odd { 2 * w.len() } else { w.len() };
    let mut tail_num = BigInt::zero();
    for j in 0..block {
        parity ^= w[j % w.len()];
        tail_num = tail_num * &two + BigInt::from(parity);
    }
    let pow_h = BigInt::one() << h;
    let pow_block = BigInt::one() << block;
    let head_part = BigRational::new(head_num, pow_h.clone());
    let tail_part = BigRational::new(tail_num, (pow_block - BigInt::one()) * pow_h);
    head_part + tail_part
}

/// Lower end of the Gray interval covered by the cylinder `[w]`; the cylinder
/// spans `[lo, lo + 2^-|w|]`.
pub fn cylinder_interval(w: &[u8]) -> (Dyadic, Dyadic) {
    let mut parity = 0u8;
    let mut lo = Dyadic::ZERO;
    for (i, &sym) in w.iter().enumerate() {
        parity ^= sym;
        if parity == 1 {
            lo = lo.add(Dyadic::pow2_inv(i as u32 + 1));
        }
    }
    (lo, lo.add(Dyadic::pow2_inv(w.len() as u32)))
}

/// Unimodal order on one-sided codes: at the first differing index the
/// comparison of symbols is reversed when the common prefix holds an odd
/// number of ones.
pub fn unimodal_cmp(s: &OneSidedCode, t: &OneSidedCode) -> Ordering {
    let horizon = s.comparison_horizon(t);
    let mut parity = 0u8;
    for i in 0..horizon {
        let (a, b) = (s.symbol(i), t.symbol(i));
        if a != b {
            let ord = a.cmp(&b);
            return if parity == 0 { ord } else { ord.reverse() };
        }
        parity ^= a;
    }
    Ordering::Equal
}

pub fn unimodal_leq(s: &OneSidedCode, t: &OneSidedCode) -> bool {
    unimodal_cmp(s, t) != Ordering::Greater
}

/// Tent map on `[0, 1]`.
pub fn tent(u: Dyadic) -> Dyadic {
    u.tent()
}

/// Point of the unit symbol square: `u` from the forward code, `v` from the
/// backward code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SquarePoint {
    pub u: Dyadic,
    pub v: Dyadic,
}

/// Symbol-square coordinates of a homoclinic point.
pub fn square_coords(c: &HomoclinicCode) -> SquarePoint {
    SquarePoint {
        u: gray_dyadic(&c.forward()).expect("zero tail"),
        v: gray_dyadic(&c.backward()).expect("zero tail"),
    }
}

/// Symbol-square coordinates of any code as exact rationals.
pub fn square_coords_exact(c: &Code) -> (BigRational, BigRational) {
    (gray_value(&c.forward()), gray_value(&c.backward()))
}

/// Image of the vertical coordinate under one application of the horseshoe
/// given the consumed symbol `s_0`.
pub fn baker_v(v: Dyadic, s0: u8) -> Dyadic {
    if s0 == 0 {
        v.half()
    } else {
        v.half().complement()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(w: &[u8]) -> OneSidedCode {
        OneSidedCode::zeros_tail(w.to_vec())
    }

    /// Independent oracle: accumulate the prefix xor over a long prefix and
    /// close off the zero tail as a geometric series.
    fn oracle_gray(w: &[u8]) -> (u128, u32) {
        let mut parity = 0u8;
        let mut num: u128 = 0;
        let n = w.len() as u32;
        for &s in w {
            parity ^= s;
            num = num * 2 + parity as u128;
        }
        // tail: b = parity forever, sum = parity * 2^-n
        (num + parity as u128, n)
    }

    #[test]
    fn zero_code_is_zero() {
        assert_eq!(gray_dyadic(&OneSidedCode::zero()), Some(Dyadic::ZERO));
    }

    #[test]
    fn gray_of_sample_words() {
        let (n, e) = oracle_gray(&[1, 0, 1, 1, 0]);
        assert_eq!(Dyadic::new(n, e), Dyadic::new(7, 3));
        assert_eq!(gray_dyadic(&z(&[1, 0, 1, 1, 0])), Some(Dyadic::new(7, 3)));
        let (n, e) = oracle_gray(&[1, 1, 0, 1, 1, 0]);
        assert_eq!(Dyadic::new(n, e), Dyadic::new(9, 4));
        assert_eq!(gray_dyadic(&z(&[1, 1, 0, 1, 1, 0])), Some(Dyadic::new(9, 4)));
    }

    #[test]
    fn periodic_gray_values() {
        // (10)^∞: b = 1,1,0,0,1,1,0,0,... = (1/2+1/4)/(1-1/16) = 4/5
        let s = OneSidedCode::periodic_tail(vec![], vec![1, 0]);
        assert_eq!(gray_value(&s), BigRational::new(4.into(), 5.into()));
        // (1)^∞: b alternates 1,0,1,0 -> 2/3
        let s = OneSidedCode::periodic_tail(vec![], vec![1]);
        assert_eq!(gray_value(&s), BigRational::new(2.into(), 3.into()));
        // 0(1)^∞: b = 0,1,0,1,... -> 1/3
        let s = OneSidedCode::periodic_tail(vec![0], vec![1]);
        assert_eq!(gray_value(&s), BigRational::new(1.into(), 3.into()));
    }

    #[test]
    fn unimodal_examples() {
        assert!(unimodal_leq(&OneSidedCode::zero(), &z(&[1])));
        assert!(unimodal_leq(&z(&[1, 1]), &z(&[1])));
        assert!(!unimodal_leq(&z(&[1]), &z(&[1, 1])));
        let s = z(&[1, 0, 1, 1]);
        assert!(unimodal_leq(&s, &s));
    }

    #[test]
    fn square_coords_of_folded_pair_corners() {
        let p0: HomoclinicCode = "1111.10110".parse().unwrap();
        let p1: HomoclinicCode = "1110.10110".parse().unwrap();
        assert_eq!(
            square_coords(&p0),
            SquarePoint { u: Dyadic::new(7, 3), v: Dyadic::new(5, 3) }
        );
        assert_eq!(
            square_coords(&p1),
            SquarePoint { u: Dyadic::new(7, 3), v: Dyadic::new(3, 3) }
        );
        assert_eq!(
            square_coords(&HomoclinicCode::fixed_point()),
            SquarePoint { u: Dyadic::ZERO, v: Dyadic::ZERO }
        );
    }

    #[test]
    fn cylinder_intervals_partition() {
        let (lo, hi) = cylinder_interval(&[1, 1, 0, 0]);
        assert_eq!((lo, hi), (Dyadic::HALF, Dyadic::new(9, 4)));
        let (lo, hi) = cylinder_interval(&[0, 1, 0, 0]);
        assert_eq!((lo, hi), (Dyadic::new(7, 4), Dyadic::HALF));
    }
}
