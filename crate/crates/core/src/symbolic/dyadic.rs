use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

/// Largest exponent a [`Dyadic`] may carry; numerators live in a `u128`.
pub const MAX_EXPONENT: u32 = 126;

/// Exact dyadic rational `numerator / 2^exponent` in `[0, 1]`, always reduced.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numerator: u128,
    exponent: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { numerator: 0, exponent: 0 };
    pub const ONE: Dyadic = Dyadic { numerator: 1, exponent: 0 };
    pub const HALF: Dyadic = Dyadic { numerator: 1, exponent: 1 };

    /// Builds and reduces `numerator / 2^exponent`.
    ///
    /// Panics when the value lies outside `[0, 1]` or the exponent exceeds
    /// [`MAX_EXPONENT`]; symbol-square values never do.
    pub fn new(numerator: u128, exponent: u32) -> Self {
        assert!(exponent <= MAX_EXPONENT, "dyadic exponent {exponent} too large");
        assert!(
            numerator <= 1u128 << exponent,
            "dyadic {numerator}/2^{exponent} exceeds 1"
        );
        let mut d = Dyadic { numerator, exponent };
        d.reduce();
        d
    }

    fn reduce(&mut self) {
        if self.numerator == 0 {
            self.exponent = 0;
            return;
        }
        let tz = self.numerator.trailing_zeros().min(self.exponent);
        self.numerator >>= tz;
        self.exponent -= tz;
    }

    pub fn numerator(&self) -> u128 {
        self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn denominator(&self) -> u128 {
        1u128 << self.exponent
    }

    /// `2^-k`.
    pub fn pow2_inv(k: u32) -> Self {
        Dyadic::new(1, k)
    }

    fn aligned(self, other: Dyadic) -> (u128, u128, u32) {
        let e = self.exponent.max(other.exponent);
        (
            self.numerator << (e - self.exponent),
            other.numerator << (e - other.exponent),
            e,
        )
    }

    pub fn add(self, other: Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(other);
        Dyadic::new(a + b, e)
    }

    /// `self - other`; panics if negative.
    pub fn sub(self, other: Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(other);
        assert!(a >= b, "negative dyadic difference");
        Dyadic::new(a - b, e)
    }

    pub fn half(self) -> Dyadic {
        if self.numerator == 0 {
            return self;
        }
        Dyadic::new(self.numerator, self.exponent + 1)
    }

    pub fn double(self) -> Dyadic {
        if self.exponent == 0 {
            Dyadic::new(self.numerator * 2, 0)
        } else {
            Dyadic::new(self.numerator, self.exponent - 1)
        }
    }

    /// `1 - self`.
    pub fn complement(self) -> Dyadic {
        Dyadic::ONE.sub(self)
    }

    /// Tent map: `2u` on `[0, 1/2]`, `2(1-u)` on `[1/2, 1]`.
    pub fn tent(self) -> Dyadic {
        if self <= Dyadic::HALF {
            self.double()
        } else {
            self.complement().double()
        }
    }

    pub fn to_f64(self) -> f64 {
        self.numerator as f64 / (self.exponent as f64).exp2()
    }

    pub fn to_rational(self) -> BigRational {
        BigRational::new(
            BigInt::from(self.numerator),
            BigInt::from(1u8) << self.exponent as usize,
        )
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(*other);
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, self.denominator())
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dyadic({self})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a dyadic fraction in [0,1]: {0:?}")]
pub struct DyadicParseError(pub String);

impl FromStr for Dyadic {
    type Err = DyadicParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || DyadicParseError(s.to_string());
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let num: u128 = num.parse().map_err(|_| err())?;
        let den: u128 = den.parse().map_err(|_| err())?;
        if !den.is_power_of_two() || num > den {
            return Err(err());
        }
        Ok(Dyadic::new(num, den.trailing_zeros()))
    }
}

impl Serialize for Dyadic {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_on_construction() {
        let d = Dyadic::new(4, 3);
        assert_eq!(d.numerator(), 1);
        assert_eq!(d.exponent(), 1);
        assert_eq!(Dyadic::new(0, 9), Dyadic::ZERO);
    }

    #[test]
    fn arithmetic_and_order() {
        let a: Dyadic = "7/16".parse().unwrap();
        let b: Dyadic = "9/16".parse().unwrap();
        assert!(a < b);
        assert_eq!(a.add(Dyadic::new(1, 3)), b);
        assert_eq!(b.complement(), a);
        assert_eq!(a.half().to_string(), "7/32");
        assert_eq!(Dyadic::new(7, 3).tent(), Dyadic::HALF.half());
        assert_eq!(Dyadic::HALF.tent(), Dyadic::ONE);
    }

    #[test]
    fn rejects_bad_text() {
        assert!("3/5".parse::<Dyadic>().is_err());
        assert!("5/4".parse::<Dyadic>().is_err());
        assert!("x".parse::<Dyadic>().is_err());
    }
}
