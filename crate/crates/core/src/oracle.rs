//! Brute-force enumeration over every nondecreasing tuple up to a base cap.
//!
//! The oracle knows nothing about `κ`, `L` or `U`: it builds each tuple as a
//! [`Factorization`] and tests whether `φ̃` divides `ε̃ − 1`. It exists to
//! catch pruning mistakes in [`crate::search`] on small instances.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;

use crate::search::{enumerate_all, SolutionRecord};
use crate::{Error, Factorization};

/// Upper bounds on brute-force work.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WorkLimit {
    pub max_r: usize,
    pub max_cap: u64,
    /// Number of tuples examined.
    pub max_tuples: u128,
}

impl Default for WorkLimit {
    fn default() -> Self {
        Self {
            max_r: 4,
            max_cap: 10_000,
            max_tuples: 50_000_000,
        }
    }
}

/// Multisets of size `r` drawn from `{2, …, cap}`: `C(cap − 1 + r − 1, r)`.
pub fn tuple_count(r: usize, cap: u64) -> u128 {
    if cap < 2 {
        return 0;
    }
    let n = (cap - 1) as u128;
    let mut acc: u128 = 1;
    for i in 0..r as u128 {
        // acc stays an exact binomial after each step
        acc = acc.saturating_mul(n + i) / (i + 1);
    }
    acc
}

impl WorkLimit {
    pub fn check(&self, r: usize, cap: u64) -> Result<(), Error> {
        let fail = |reason| Err(Error::WorkLimit { r, cap, reason });
        if r < 2 {
            return Err(Error::UnsupportedR(r));
        }
        if r > self.max_r {
            return fail(format!("r above {}", self.max_r));
        }
        if cap > self.max_cap {
            return fail(format!("cap above {}", self.max_cap));
        }
        let n = tuple_count(r, cap);
        if n > self.max_tuples {
            return fail(format!("{n} tuples, limit {}", self.max_tuples));
        }
        Ok(())
    }
}

/// Every nondecreasing tuple `2 ≤ x_1 ≤ … ≤ x_r ≤ cap` whose quotient
/// `(ε̃ − 1)/φ̃` is an integer, together with that quotient (any sign).
pub fn integral_quotients(
    r: usize,
    cap: u64,
    limit: &WorkLimit,
) -> Result<Vec<(Vec<u64>, BigInt)>, Error> {
    limit.check(r, cap)?;
    let mut out = Vec::new();
    if cap < 2 {
        return Ok(out);
    }
    let mut tuple = alloc::vec![2u64; r];
    loop {
        let f = Factorization::from_bases(tuple.iter().copied())?;
        let totient = f.totient();
        let shifted: BigInt = f.evaluate() - 1;
        let (k, rem) = shifted.div_rem(&totient);
        if rem.is_zero() {
            out.push((tuple.clone(), k));
        }
        // odometer over nondecreasing tuples
        let Some(i) = tuple.iter().rposition(|&x| x < cap) else {
            return Ok(out);
        };
        let next = tuple[i] + 1;
        for slot in &mut tuple[i..] {
            *slot = next;
        }
    }
}

/// Solutions with every base at most `cap`, found by exhaustion.
pub fn brute_force_with(
    r: usize,
    cap: u64,
    limit: &WorkLimit,
) -> Result<Vec<SolutionRecord>, Error> {
    let two = BigInt::from(2);
    let mut out: Vec<SolutionRecord> = integral_quotients(r, cap, limit)?
        .into_iter()
        .filter(|(_, k)| *k >= two)
        .map(|(bases, k)| {
            let k = u64::try_from(&k).expect("k ≤ 2^r − 1");
            SolutionRecord::new(k, bases.into_iter().map(BigUint::from).collect())
        })
        .collect();
    out.sort();
    Ok(out)
}

pub fn brute_force(r: usize, cap: u64) -> Result<Vec<SolutionRecord>, Error> {
    brute_force_with(r, cap, &WorkLimit::default())
}

/// Symmetric difference between the oracle and the search, restricted to
/// solutions whose largest base is within the cap.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CrossCheckReport {
    pub r: usize,
    pub cap: u64,
    pub agreed: usize,
    pub only_in_oracle: Vec<SolutionRecord>,
    pub only_in_search: Vec<SolutionRecord>,
}

impl CrossCheckReport {
    pub fn is_clean(&self) -> bool {
        self.only_in_oracle.is_empty() && self.only_in_search.is_empty()
    }
}

/// Compares the oracle with an arbitrary list of search results.
pub fn cross_check_records(
    r: usize,
    cap: u64,
    limit: &WorkLimit,
    search: &[SolutionRecord],
) -> Result<CrossCheckReport, Error> {
    let cap_big = BigUint::from(cap);
    let key = |rec: &SolutionRecord| (rec.k, rec.bases.clone());
    let oracle: BTreeSet<_> = brute_force_with(r, cap, limit)?.iter().map(key).collect();
    let found: BTreeSet<_> = search
        .iter()
        .filter(|rec| rec.r == r && rec.bases.iter().all(|b| *b <= cap_big))
        .map(key)
        .collect();
    let rebuild = |(k, bases): &(u64, Vec<BigUint>)| SolutionRecord::new(*k, bases.clone());
    Ok(CrossCheckReport {
        r,
        cap,
        agreed: oracle.intersection(&found).count(),
        only_in_oracle: oracle.difference(&found).map(rebuild).collect(),
        only_in_search: found.difference(&oracle).map(rebuild).collect(),
    })
}

pub fn cross_check(r: usize, cap: u64) -> Result<CrossCheckReport, Error> {
    let limit = WorkLimit::default();
    limit.check(r, cap)?;
    cross_check_records(r, cap, &limit, &enumerate_all(r, None)?)
}
