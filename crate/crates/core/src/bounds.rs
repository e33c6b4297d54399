//! The bound functions `L` and `U` and the pruning decisions built on them.
//!
//! For a sorted prefix `t_1 ≤ … ≤ t_s` of a length-`r` base list, `L` and `U`
//! are the infimum and supremum of `κ` over every nondecreasing completion.
//! With `P = ∏ t_i` and `T = ∏ (t_i − 1)`:
//!
//! * `L(∅; r) = 1`, `U(∅; r) = 2^r − 1`;
//! * `L = P / T` for `0 < s < r` (an infimum that is never attained);
//! * `U = (P · t_s^(r−s) − 1) / (T · (t_s − 1)^(r−s))`;
//! * at `s = r` both collapse to `κ(t_1, …, t_r)`.
//!
//! The pruning predicates compare against an integer `k` by cross-multiplying
//! the cached products, without building fractions.

use alloc::string::ToString;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Pow};

use crate::{Error, ExactRatio, Parity};

/// A sorted partial base list with cached `∏ t_i` and `∏ (t_i − 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchPrefix {
    bases: Vec<BigUint>,
    product: BigUint,
    totient: BigUint,
    target_r: usize,
}

impl SearchPrefix {
    pub fn empty(target_r: usize) -> Self {
        Self {
            bases: Vec::new(),
            product: BigUint::one(),
            totient: BigUint::one(),
            target_r,
        }
    }

    pub fn new(bases: Vec<BigUint>, target_r: usize) -> Result<Self, Error> {
        if bases.len() > target_r {
            return Err(Error::PrefixTooLong {
                len: bases.len(),
                target: target_r,
            });
        }
        if bases.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::UnsortedPrefix);
        }
        let two = BigUint::from(2u8);
        if let Some(b) = bases.iter().find(|b| **b < two) {
            return Err(Error::BaseBelowTwo(b.to_string()));
        }
        let mut prefix = Self::empty(target_r);
        for b in bases {
            prefix.push_unchecked(b);
        }
        Ok(prefix)
    }

    pub fn from_u64(bases: &[u64], target_r: usize) -> Result<Self, Error> {
        Self::new(bases.iter().map(|&b| BigUint::from(b)).collect(), target_r)
    }

    fn push_unchecked(&mut self, base: BigUint) {
        self.product *= &base;
        self.totient *= &base - 1u8;
        self.bases.push(base);
    }

    /// Appends `base`, which must be at least the current last base.
    pub fn extended(&self, base: BigUint) -> Result<Self, Error> {
        if self.bases.len() >= self.target_r {
            return Err(Error::PrefixTooLong {
                len: self.bases.len() + 1,
                target: self.target_r,
            });
        }
        if base < BigUint::from(2u8) {
            return Err(Error::BaseBelowTwo(base.to_string()));
        }
        if self.last().is_some_and(|last| base < *last) {
            return Err(Error::UnsortedPrefix);
        }
        let mut next = self.clone();
        next.push_unchecked(base);
        Ok(next)
    }

    pub(crate) fn extended_unchecked(&self, base: BigUint) -> Self {
        let mut next = self.clone();
        next.push_unchecked(base);
        next
    }

    pub fn bases(&self) -> &[BigUint] {
        &self.bases
    }

    pub fn into_bases(self) -> Vec<BigUint> {
        self.bases
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn last(&self) -> Option<&BigUint> {
        self.bases.last()
    }

    pub fn target_r(&self) -> usize {
        self.target_r
    }

    pub fn is_complete(&self) -> bool {
        self.bases.len() == self.target_r
    }

    /// `∏ t_i`, 1 when empty.
    pub fn product(&self) -> &BigUint {
        &self.product
    }

    /// `∏ (t_i − 1)`, 1 when empty.
    pub fn totient(&self) -> &BigUint {
        &self.totient
    }

    /// Numerator and denominator of `U` before reduction.
    fn upper_parts(&self) -> (BigUint, BigUint) {
        let remaining = (self.target_r - self.bases.len()) as u32;
        match self.bases.last() {
            None => {
                let two_r = BigUint::from(2u8).pow(self.target_r as u32);
                (two_r - 1u8, BigUint::one())
            }
            Some(last) => {
                let num = &self.product * Pow::pow(last, remaining) - 1u8;
                let den = &self.totient * Pow::pow(&(last - 1u8), remaining);
                (num, den)
            }
        }
    }

    /// `L(prefix; r) < k`, decided by cross-multiplication.
    pub(crate) fn lower_below(&self, k: u64) -> bool {
        if self.bases.is_empty() {
            return k > 1;
        }
        let kt = &self.totient * k;
        if self.is_complete() {
            // κ < k  ⇔  P − 1 < kT
            &self.product - 1u8 < kt
        } else {
            self.product < kt
        }
    }

    /// `U(prefix; r) ≥ k`.
    pub(crate) fn upper_at_least(&self, k: u64) -> bool {
        let (num, den) = self.upper_parts();
        num >= den * k
    }

    /// `κ(bases) = k`; only meaningful on a complete prefix.
    pub(crate) fn kappa_equals(&self, k: u64) -> bool {
        &self.product - 1u8 == &self.totient * k
    }
}

/// `L(prefix; r)`.
pub fn lower_l(prefix: &SearchPrefix) -> ExactRatio {
    if prefix.is_empty() {
        ExactRatio::from_integer(1)
    } else if prefix.is_complete() {
        ExactRatio::from_unsigned(&(prefix.product() - 1u8), prefix.totient())
    } else {
        ExactRatio::from_unsigned(prefix.product(), prefix.totient())
    }
}

/// `U(prefix; r)`.
pub fn upper_u(prefix: &SearchPrefix) -> ExactRatio {
    let (num, den) = prefix.upper_parts();
    ExactRatio::from_unsigned(&num, &den)
}

/// Inclusive range of admissible `k` for a given `r` and parity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KRange {
    pub min: u64,
    pub max: u64,
}

impl KRange {
    pub fn contains(&self, k: u64) -> bool {
        (self.min..=self.max).contains(&k)
    }

    pub fn iter(&self) -> core::ops::RangeInclusive<u64> {
        self.min..=self.max
    }
}

/// `[2, 2^r − 1]` in general, `[2, ⌊(3^r − 1)/2^r⌋]` for odd factorizations.
pub fn k_range(r: usize, parity: Parity) -> Result<KRange, Error> {
    if !(2..=63).contains(&r) {
        return Err(Error::UnsupportedR(r));
    }
    let max = match parity {
        Parity::Even => (1u64 << r) - 1,
        Parity::Odd => {
            let three_r = BigUint::from(3u8).pow(r as u32);
            let q: BigUint = (three_r - 1u8) >> r;
            u64::try_from(q).expect("(3^r − 1)/2^r < 2^63 for r ≤ 63")
        }
    };
    Ok(KRange { min: 2, max })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PruneState {
    Pruned,
    Viable,
    Solution,
}

/// Proper prefixes survive iff `L < k ≤ U`; complete ones are solutions iff `κ = k`.
pub fn prune_state(prefix: &SearchPrefix, k: u64) -> PruneState {
    if prefix.is_complete() {
        if prefix.kappa_equals(k) {
            PruneState::Solution
        } else {
            PruneState::Pruned
        }
    } else if prefix.lower_below(k) && prefix.upper_at_least(k) {
        PruneState::Viable
    } else {
        PruneState::Pruned
    }
}
