//! Spoof factorizations and the evaluation, totient and Lehmer predicates.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::{Error, ExactRatio};

/// Odd if every base is odd, even otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub const BOTH: [Parity; 2] = [Parity::Odd, Parity::Even];

    /// Smallest base the search considers for this branch.
    pub fn floor(self) -> u64 {
        match self {
            Parity::Odd => 3,
            Parity::Even => 2,
        }
    }

    pub fn of(value: &BigUint) -> Self {
        if value.is_odd() {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Parity {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "odd" => Ok(Parity::Odd),
            "even" => Ok(Parity::Even),
            _ => Err(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    pub base: BigInt,
    pub exponent: u32,
}

/// A finite multiset of `(base, exponent)` pairs, nonzero bases and positive
/// exponents, held in canonical `(base, exponent)` ascending order.
///
/// Equality, hashing and ordering all use the canonical sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factorization {
    factors: Vec<Factor>,
}

/// Result of solving the Lehmer equation for `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KValue {
    /// `φ̃(F)` divides `ε̃(F) − 1`; the quotient is the unique `k`.
    Exact(BigInt),
    /// No integer `k` satisfies the equation.
    NotIntegral,
    /// `φ̃(F) = 0` and `ε̃(F) = 1`: every `k` satisfies the equation.
    Indeterminate,
}

impl fmt::Display for KValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KValue::Exact(k) => write!(f, "{k}"),
            KValue::NotIntegral => f.write_str("none"),
            KValue::Indeterminate => f.write_str("indeterminate"),
        }
    }
}

impl Factorization {
    pub fn new<B, I>(factors: I) -> Result<Self, Error>
    where
        B: Into<BigInt>,
        I: IntoIterator<Item = (B, u32)>,
    {
        let mut out = Vec::new();
        for (base, exponent) in factors {
            let base = base.into();
            if base.is_zero() {
                return Err(Error::ZeroBase);
            }
            if exponent == 0 {
                return Err(Error::ZeroExponent);
            }
            out.push(Factor { base, exponent });
        }
        out.sort();
        Ok(Self { factors: out })
    }

    /// All exponents 1.
    pub fn from_bases<B, I>(bases: I) -> Result<Self, Error>
    where
        B: Into<BigInt>,
        I: IntoIterator<Item = B>,
    {
        Self::new(bases.into_iter().map(|b| (b, 1)))
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Number of factors counted with multiplicity (the `r` of the factorization).
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn bases(&self) -> impl Iterator<Item = &BigInt> + '_ {
        self.factors.iter().map(|f| &f.base)
    }

    /// Multiset union.
    pub fn union(&self, other: &Factorization) -> Factorization {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        factors.sort();
        Factorization { factors }
    }

    /// `ε̃(F) = ∏ x^a`; the empty product is 1.
    pub fn evaluate(&self) -> BigInt {
        self.factors
            .iter()
            .fold(BigInt::one(), |acc, f| acc * f.base.pow(f.exponent))
    }

    /// `φ̃(F) = ∏ (x^a − x^(a−1))`; the empty product is 1.
    pub fn totient(&self) -> BigInt {
        self.factors.iter().fold(BigInt::one(), |acc, f| {
            let lower = f.base.pow(f.exponent - 1);
            acc * (&lower * &f.base - lower)
        })
    }

    /// At least two factors, or one factor with exponent above 1.
    pub fn is_composite(&self) -> bool {
        self.factors.len() >= 2 || self.factors.iter().any(|f| f.exponent > 1)
    }

    pub fn is_positive(&self) -> bool {
        self.factors.iter().all(|f| f.base > BigInt::zero())
    }

    /// Every base equals 1 (vacuously true for the empty factorization).
    pub fn is_trivial(&self) -> bool {
        self.factors.iter().all(|f| f.base.is_one())
    }

    pub fn parity(&self) -> Parity {
        if self.factors.iter().all(|f| f.base.is_odd()) {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    /// `k · φ̃(F) = ε̃(F) − 1` together with compositeness.
    pub fn is_lehmer(&self, k: &BigInt) -> bool {
        self.is_composite() && k * self.totient() == self.evaluate() - 1
    }

    pub fn k_of(&self) -> KValue {
        let totient = self.totient();
        let shifted: BigInt = self.evaluate() - 1;
        if totient.is_zero() {
            return if shifted.is_zero() {
                KValue::Indeterminate
            } else {
                KValue::NotIntegral
            };
        }
        let (q, rem) = shifted.div_rem(&totient);
        if rem.is_zero() {
            KValue::Exact(q)
        } else {
            KValue::NotIntegral
        }
    }
}

impl fmt::Display for Factorization {
    /// Renders `x_1 · x_2 · …`, with `^a` on exponents above 1.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("∅");
        }
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" · ")?;
            }
            if factor.exponent == 1 {
                write!(f, "{}", factor.base)?;
            } else {
                write!(f, "{}^{}", factor.base, factor.exponent)?;
            }
        }
        Ok(())
    }
}

/// `κ(t_1, …, t_r) = (t_1⋯t_r − 1) / ((t_1 − 1)⋯(t_r − 1))`, defined for bases ≥ 2.
pub fn kappa(bases: &[BigUint]) -> Result<ExactRatio, Error> {
    if bases.is_empty() {
        return Err(Error::EmptyBases);
    }
    let two = BigUint::from(2u8);
    let mut product = BigUint::one();
    let mut totient = BigUint::one();
    for b in bases {
        if *b < two {
            return Err(Error::BaseBelowTwo(b.to_string()));
        }
        product *= b;
        totient *= b - 1u8;
    }
    Ok(ExactRatio::from_unsigned(&(product - 1u8), &totient))
}
