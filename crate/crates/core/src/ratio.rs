//! Exact rationals over arbitrary-precision integers.

use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// A reduced fraction `numerator / denominator` with `denominator > 0`.
///
/// The stored form is canonical, so equality is structural. Ordering goes
/// through integer cross-multiplication and never approximates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactRatio {
    numer: BigInt,
    denom: BigInt,
}

impl ExactRatio {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self, Error> {
        let numer = numer.into();
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::reduced(numer, denom))
    }

    /// Builds `numer / denom` from a nonzero unsigned denominator.
    pub(crate) fn from_unsigned(numer: &BigUint, denom: &BigUint) -> Self {
        debug_assert!(!denom.is_zero());
        Self::reduced(
            BigInt::from_biguint(Sign::Plus, numer.clone()),
            BigInt::from_biguint(Sign::Plus, denom.clone()),
        )
    }

    fn reduced(mut numer: BigInt, mut denom: BigInt) -> Self {
        if denom.is_negative() {
            numer = -numer;
            denom = -denom;
        }
        let g = numer.gcd(&denom);
        if !g.is_one() {
            numer /= &g;
            denom /= &g;
        }
        Self { numer, denom }
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Self {
            numer: value.into(),
            denom: BigInt::one(),
        }
    }

    pub fn numer(&self) -> &BigInt {
        &self.numer
    }

    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    pub fn is_integer(&self) -> bool {
        self.denom.is_one()
    }

    /// Compares against an integer without building a second fraction.
    pub fn cmp_integer(&self, value: &BigInt) -> Ordering {
        self.numer.cmp(&(value * &self.denom))
    }
}

impl PartialOrd for ExactRatio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactRatio {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.numer * &other.denom).cmp(&(&other.numer * &self.denom))
    }
}

impl PartialEq<BigInt> for ExactRatio {
    fn eq(&self, other: &BigInt) -> bool {
        self.cmp_integer(other) == Ordering::Equal
    }
}

impl PartialOrd<BigInt> for ExactRatio {
    fn partial_cmp(&self, other: &BigInt) -> Option<Ordering> {
        Some(self.cmp_integer(other))
    }
}

impl fmt::Display for ExactRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom.is_one() {
            write!(f, "{}", self.numer)
        } else {
            write!(f, "{}/{}", self.numer, self.denom)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_and_normalizes_sign() {
        let r = ExactRatio::new(6, -4).unwrap();
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(alloc::format!("{r}"), "-3/2");
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(ExactRatio::new(1, 0), Err(Error::ZeroDenominator));
    }

    #[test]
    fn compares_exactly() {
        let a = ExactRatio::new(127, 27).unwrap();
        let b = ExactRatio::new(8, 3).unwrap();
        assert!(b < a);
        assert!(a > BigInt::from(4));
        assert!(a < BigInt::from(5));
        assert_eq!(ExactRatio::new(10, 2).unwrap(), BigInt::from(5));
        // 10^30 + 1 over 10^30 differs from 1 only in the 31st digit
        let big = BigInt::from(10u8).pow(30);
        let near_one = ExactRatio::new(&big + 1, big.clone()).unwrap();
        assert!(near_one > BigInt::one());
    }
}
