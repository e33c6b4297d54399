//! Branch-and-bound enumeration of nontrivial positive spoof Lehmer
//! factorizations with a fixed number of bases.
//!
//! Exponents are fixed at 1 (no solution has a larger one) and base 1 never
//! appears, so a candidate is a nondecreasing list of bases `≥ 2`, all of one
//! parity. For each admissible `k` the search extends sorted prefixes one
//! base at a time. A prefix survives while `L < k ≤ U`; a complete one is a
//! solution when `κ = k`.
//!
//! Two shortcuts produce exactly the stream a plain scan would:
//!
//! * bases whose extension has `L ≥ k` are skipped in one jump, since
//!   `P·x < k·T·(x − 1)` holds precisely for `x > kT / (kT − P)`;
//! * the last base solves `k·T·(x − 1) = P·x − 1` directly,
//!   `x = (kT − 1) / (kT − P)`.
//!
//! [`scan_candidates`] keeps the plain scan for cross-checking.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow};

use crate::bounds::{k_range, prune_state, PruneState, SearchPrefix};
use crate::{Error, Factorization, Parity};

/// One nontrivial positive `k`-Lehmer factorization with all exponents 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SolutionRecord {
    pub r: usize,
    pub k: u64,
    pub bases: Vec<BigUint>,
    pub parity: Parity,
    /// Family labels; empty means sporadic once classified.
    pub families: Vec<String>,
}

impl SolutionRecord {
    pub fn new(k: u64, bases: Vec<BigUint>) -> Self {
        let parity = if bases.iter().all(|b| b.is_odd()) {
            Parity::Odd
        } else {
            Parity::Even
        };
        Self {
            r: bases.len(),
            k,
            bases,
            parity,
            families: Vec::new(),
        }
    }

    pub fn factorization(&self) -> Factorization {
        Factorization::from_bases(self.bases.iter().map(|b| BigInt::from(b.clone())))
            .expect("solution bases are at least 2")
    }

    pub fn is_sporadic(&self) -> bool {
        self.families.is_empty()
    }

    /// Re-checks the record through the plain arithmetic path: Lehmer
    /// equation, sortedness, parity purity and `x_i ≢ 1 (mod x_j)`.
    pub fn verify(&self) -> bool {
        let two = BigUint::from(2u8);
        let one = BigUint::one();
        self.r == self.bases.len()
            && self.bases.windows(2).all(|w| w[0] <= w[1])
            && self.bases.iter().all(|b| *b >= two)
            && self.bases.iter().all(|b| Parity::of(b) == self.parity)
            && self
                .bases
                .iter()
                .all(|x| self.bases.iter().all(|m| x % m != one))
            && self.factorization().is_lehmer(&BigInt::from(self.k))
    }
}

/// An independent subtree of the search: a branch parity, a `k`, and the
/// smallest base.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TaskDescriptor {
    pub parity: Parity,
    pub k: u64,
    pub first_base: BigUint,
}

/// `x ≢ 1 (mod b)` for every base `b` already in the prefix.
///
/// For a sorted prefix the reverse direction (`b ≡ 1 mod x` with `b ≤ x`)
/// would force `b = 1`, so only this direction is tested.
pub fn congruence_ok(prefix: &SearchPrefix, x: &BigUint) -> bool {
    let one = BigUint::one();
    let bases = prefix.bases();
    bases
        .iter()
        .enumerate()
        .filter(|(i, b)| *i == 0 || bases[i - 1] != **b)
        .all(|(_, b)| x % b != one)
}

fn start_point(prefix: &SearchPrefix, parity: Parity) -> BigUint {
    let floor = BigUint::from(parity.floor());
    let mut x = match prefix.last() {
        Some(last) if *last > floor => last.clone(),
        _ => floor,
    };
    if Parity::of(&x) != parity {
        x += 1u8;
    }
    x
}

fn align_up(mut x: BigUint, parity: Parity) -> BigUint {
    if Parity::of(&x) != parity {
        x += 1u8;
    }
    x
}

enum Mode {
    Scan { x: BigUint, remaining: u32 },
    Solved(Option<BigUint>),
    Done,
}

/// Admissible next bases for a prefix, in increasing order.
///
/// Yields every `x ≥ max(last base, parity floor)` of the branch parity
/// whose extension is not pruned for `k` and passes [`congruence_ok`]; the
/// stream ends at the first `x` with `U(prefix + x) < k`.
pub struct Candidates<'a> {
    prefix: &'a SearchPrefix,
    k: u64,
    mode: Mode,
}

pub fn next_candidates(prefix: &SearchPrefix, k: u64, parity: Parity) -> Candidates<'_> {
    let mode = if prefix.is_complete() || !prefix.lower_below(k) {
        Mode::Done
    } else {
        let start = start_point(prefix, parity);
        let kt = prefix.totient() * k;
        // viable prefix: L = P/T < k, so kT > P
        let gap = &kt - prefix.product();
        if prefix.len() + 1 == prefix.target_r() {
            let (x, rem) = (&kt - 1u8).div_rem(&gap);
            let hit = (rem == BigUint::ZERO
                && x >= start
                && Parity::of(&x) == parity
                && congruence_ok(prefix, &x))
            .then_some(x);
            Mode::Solved(hit)
        } else {
            let jump = align_up(&kt / &gap + 1u8, parity);
            let x = if jump > start { jump } else { start };
            let remaining = (prefix.target_r() - prefix.len()) as u32;
            Mode::Scan { x, remaining }
        }
    };
    Candidates { prefix, k, mode }
}

impl Iterator for Candidates<'_> {
    type Item = BigUint;

    fn next(&mut self) -> Option<BigUint> {
        match &mut self.mode {
            Mode::Done => None,
            Mode::Solved(hit) => {
                let out = hit.take();
                self.mode = Mode::Done;
                out
            }
            Mode::Scan { x, remaining } => {
                let p = self.prefix.product();
                let t = self.prefix.totient();
                loop {
                    // U(prefix + x) = (P·x^m − 1) / (T·(x − 1)^m), m = r − s
                    let num = p * Pow::pow(&*x, *remaining) - 1u8;
                    let den = t * Pow::pow(&(&*x - 1u8), *remaining) * self.k;
                    if num < den {
                        self.mode = Mode::Done;
                        return None;
                    }
                    let current = x.clone();
                    *x += 2u8;
                    debug_assert!(p * &current < t * (&current - 1u8) * self.k);
                    if congruence_ok(self.prefix, &current) {
                        return Some(current);
                    }
                }
            }
        }
    }
}

/// The unaccelerated candidate stream: every `x` from the start point in
/// steps of 2, filtered through [`prune_state`].
pub fn scan_candidates(prefix: &SearchPrefix, k: u64, parity: Parity) -> Vec<BigUint> {
    let mut out = Vec::new();
    if prefix.is_complete() || prune_state(prefix, k) == PruneState::Pruned {
        return out;
    }
    let mut x = start_point(prefix, parity);
    loop {
        let child = prefix.extended_unchecked(x.clone());
        if !child.upper_at_least(k) {
            return out;
        }
        if prune_state(&child, k) != PruneState::Pruned && congruence_ok(prefix, &x) {
            out.push(x.clone());
        }
        x += 2u8;
    }
}

fn descend(prefix: SearchPrefix, k: u64, parity: Parity, out: &mut Vec<SolutionRecord>) {
    let last_level = prefix.len() + 1 == prefix.target_r();
    for x in next_candidates(&prefix, k, parity) {
        let child = prefix.extended_unchecked(x);
        if last_level {
            debug_assert_eq!(prune_state(&child, k), PruneState::Solution);
            out.push(SolutionRecord::new(k, child.into_bases()));
        } else {
            descend(child, k, parity, out);
        }
    }
}

fn check_k(r: usize, k: u64, parity: Parity) -> Result<(), Error> {
    let range = k_range(r, parity)?;
    if range.contains(k) {
        Ok(())
    } else {
        Err(Error::KOutOfRange {
            k,
            min: range.min,
            max: range.max,
        })
    }
}

fn tasks_for_k(r: usize, k: u64, parity: Parity) -> Vec<TaskDescriptor> {
    let root = SearchPrefix::empty(r);
    next_candidates(&root, k, parity)
        .map(|first_base| TaskDescriptor {
            parity,
            k,
            first_base,
        })
        .collect()
}

/// One descriptor per `(k, first base)` pair of the branch.
pub fn partition_tasks(r: usize, parity: Parity) -> Result<Vec<TaskDescriptor>, Error> {
    let range = k_range(r, parity)?;
    Ok(range
        .iter()
        .flat_map(|k| tasks_for_k(r, k, parity))
        .collect())
}

/// Runs the subtree rooted at `[first_base]`; output sorted by bases.
pub fn run_task(r: usize, task: &TaskDescriptor) -> Result<Vec<SolutionRecord>, Error> {
    check_k(r, task.k, task.parity)?;
    let root = SearchPrefix::empty(r);
    let first = root.extended(task.first_base.clone())?;
    let mut out = Vec::new();
    match prune_state(&first, task.k) {
        PruneState::Viable => descend(first, task.k, task.parity, &mut out),
        PruneState::Solution => out.push(SolutionRecord::new(task.k, first.into_bases())),
        PruneState::Pruned => {}
    }
    out.sort();
    Ok(out)
}

/// Flattens per-task results into one sorted, deduplicated list.
///
/// Sorting is by `(r, k, bases)`, so the result does not depend on the order
/// in which task outputs arrive.
pub fn merge_records<I>(parts: I) -> Vec<SolutionRecord>
where
    I: IntoIterator<Item = Vec<SolutionRecord>>,
{
    let mut all: Vec<SolutionRecord> = parts.into_iter().flatten().collect();
    all.sort();
    all.dedup_by(|a, b| a.r == b.r && a.bases == b.bases);
    all
}

/// Every solution with `r` bases, the given parity and the given `k`,
/// sorted by bases.
pub fn enumerate(r: usize, k: u64, parity: Parity) -> Result<Vec<SolutionRecord>, Error> {
    check_k(r, k, parity)?;
    let parts = tasks_for_k(r, k, parity)
        .iter()
        .map(|t| run_task(r, t))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(merge_records(parts))
}

/// Every solution with `r` bases across all `k` (and both parities unless
/// filtered), sorted by `(k, bases)`.
pub fn enumerate_all(r: usize, parity: Option<Parity>) -> Result<Vec<SolutionRecord>, Error> {
    let parities = match parity {
        Some(p) => vec![p],
        None => Parity::BOTH.to_vec(),
    };
    let mut parts = Vec::new();
    for p in parities {
        for task in partition_tasks(r, p)? {
            parts.push(run_task(r, &task)?);
        }
    }
    Ok(merge_records(parts))
}
