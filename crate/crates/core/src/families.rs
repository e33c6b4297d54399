//! Infinite families of spoof Lehmer factorizations and the classification
//! of enumerated solutions against them.
//!
//! Generators only propose members. Every member goes through
//! [`Factorization::is_lehmer`] before it is exposed, and a published
//! parameter value that fails is kept in an [`AnomalyReport`].
//!
//! Families, writing `[a]^s` for `a` repeated `s` times:
//!
//! * `trivial_ones`: `[1]^s`, Lehmer for every `k`, never emitted as a member;
//! * `powers_of_two`: `[2]^s`, `k = 2^s − 1` (published for `s ≥ 2`);
//! * `augmented_powers_of_two`: `[2]^s · 2^s`, `k = 2^s + 1` (`s ≥ 1`);
//! * `diff_squares_1` … `diff_squares_10`: `G · ∏_{i<s} (x^(2^i) + 1) · (x^(2^s) − 1)`
//!   for a fixed prefix `G`, base `x` and `k` per row (`s ≥ 0`);
//! * `appended_powers_of_two`: `[2]^(o·s) · F` for an even Lehmer
//!   factorization or single even base `F`, where `o` is the order of 2
//!   modulo `φ̃(F)` (`s ≥ 1`).
//!
//! The difference-of-squares rows only work when `ε̃(G) = x − 1` and
//! `k · φ̃(G) = x`. Rows 7, 9 and 10 as published break those identities;
//! [`DiffSquaresParams::repaired`] rebuilds `x` and `k` from the prefix.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::search::SolutionRecord;
use crate::{Error, Factorization, KValue, Parity};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FamilyId {
    TrivialOnes,
    PowersOfTwo,
    AugmentedPowersOfTwo,
    /// Difference-of-squares row, 1 through 10.
    DiffSquares(u8),
    AppendedPowersOfTwo,
}

impl FamilyId {
    pub fn all() -> Vec<FamilyId> {
        let mut ids = vec![
            FamilyId::TrivialOnes,
            FamilyId::PowersOfTwo,
            FamilyId::AugmentedPowersOfTwo,
        ];
        ids.extend((1..=10).map(FamilyId::DiffSquares));
        ids.push(FamilyId::AppendedPowersOfTwo);
        ids
    }

    pub fn parse(name: &str) -> Option<FamilyId> {
        match name {
            "trivial_ones" => Some(FamilyId::TrivialOnes),
            "powers_of_two" => Some(FamilyId::PowersOfTwo),
            "augmented_powers_of_two" => Some(FamilyId::AugmentedPowersOfTwo),
            "appended_powers_of_two" => Some(FamilyId::AppendedPowersOfTwo),
            _ => {
                let row: u8 = name.strip_prefix("diff_squares_")?.parse().ok()?;
                (1..=10)
                    .contains(&row)
                    .then_some(FamilyId::DiffSquares(row))
            }
        }
    }

    /// Smallest parameter for which the family is claimed to hold.
    pub fn published_min_s(self) -> u32 {
        match self {
            FamilyId::PowersOfTwo => 2,
            FamilyId::TrivialOnes
            | FamilyId::AugmentedPowersOfTwo
            | FamilyId::AppendedPowersOfTwo => 1,
            FamilyId::DiffSquares(_) => 0,
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyId::TrivialOnes => f.write_str("trivial_ones"),
            FamilyId::PowersOfTwo => f.write_str("powers_of_two"),
            FamilyId::AugmentedPowersOfTwo => f.write_str("augmented_powers_of_two"),
            FamilyId::DiffSquares(row) => write!(f, "diff_squares_{row}"),
            FamilyId::AppendedPowersOfTwo => f.write_str("appended_powers_of_two"),
        }
    }
}

/// One difference-of-squares row: prefix multiset, base `x` and claimed `k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiffSquaresParams {
    pub prefix: Vec<u64>,
    pub x: u64,
    pub claimed_k: u64,
}

const PUBLISHED_ROWS: [(&[u64], u64, u64); 10] = [
    (&[], 2, 2),
    (&[2], 3, 3),
    (&[2, 2], 5, 5),
    (&[2, 2, 2], 9, 9),
    (&[2, 2, 2, 2], 17, 17),
    (&[2, 2, 2, 4], 33, 11),
    (&[2, 2, 2, 6, 8], 383, 11),
    (&[2, 2, 8, 12], 385, 5),
    (&[5, 5, 5, 43], 5374, 5),
    (&[2, 8, 8, 8, 206], 210943, 3),
];

impl DiffSquaresParams {
    /// Row `1..=10` with its constants as published.
    pub fn published(row: u8) -> Option<Self> {
        let (prefix, x, claimed_k) = *PUBLISHED_ROWS.get(usize::from(row).checked_sub(1)?)?;
        Some(Self {
            prefix: prefix.to_vec(),
            x,
            claimed_k,
        })
    }

    fn prefix_factorization(&self) -> Factorization {
        Factorization::from_bases(self.prefix.iter().copied()).expect("prefix bases are positive")
    }

    /// `ε̃(G) = x − 1` and `k · φ̃(G) = x`, the conditions under which every
    /// member is `k`-Lehmer.
    pub fn satisfies_identities(&self) -> bool {
        let g = self.prefix_factorization();
        let x = BigInt::from(self.x);
        g.evaluate() == &x - 1 && g.totient() * self.claimed_k == x
    }

    /// Derives `x = ε̃(G) + 1` and `k = x / φ̃(G)` from the prefix alone.
    pub fn repaired(&self) -> Option<Self> {
        let g = self.prefix_factorization();
        let x: BigInt = g.evaluate() + 1;
        let (k, rem) = x.div_rem(&g.totient());
        if !rem.is_zero() {
            return None;
        }
        Some(Self {
            prefix: self.prefix.clone(),
            x: u64::try_from(&x).ok()?,
            claimed_k: u64::try_from(&k).ok()?,
        })
    }

    /// Number of factors of the member with parameter `s`.
    pub fn member_len(&self, s: u32) -> usize {
        self.prefix.len() + s as usize + 1
    }

    pub fn member(&self, s: u32) -> Factorization {
        let x = BigInt::from(self.x);
        let mut bases: Vec<BigInt> = self.prefix.iter().map(|&b| BigInt::from(b)).collect();
        let mut power = x; // x^(2^i)
        for _ in 0..s {
            bases.push(&power + 1);
            power = &power * &power;
        }
        bases.push(power - 1);
        Factorization::from_bases(bases).expect("member bases are positive")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FamilyDescriptor {
    TrivialOnes {
        s: u32,
    },
    PowersOfTwo {
        s: u32,
    },
    AugmentedPowersOfTwo {
        s: u32,
    },
    DiffSquares {
        row: u8,
        params: DiffSquaresParams,
        s: u32,
    },
    AppendedPowersOfTwo {
        seed: Factorization,
        s: u32,
    },
}

impl FamilyDescriptor {
    /// Difference-of-squares row with its published constants.
    pub fn diff_squares(row: u8, s: u32) -> Result<Self, Error> {
        let params = DiffSquaresParams::published(row)
            .ok_or_else(|| Error::MalformedDescriptor(format!("no diff_squares row {row}")))?;
        Ok(FamilyDescriptor::DiffSquares { row, params, s })
    }

    pub fn family(&self) -> FamilyId {
        match self {
            FamilyDescriptor::TrivialOnes { .. } => FamilyId::TrivialOnes,
            FamilyDescriptor::PowersOfTwo { .. } => FamilyId::PowersOfTwo,
            FamilyDescriptor::AugmentedPowersOfTwo { .. } => FamilyId::AugmentedPowersOfTwo,
            FamilyDescriptor::DiffSquares { row, .. } => FamilyId::DiffSquares(*row),
            FamilyDescriptor::AppendedPowersOfTwo { .. } => FamilyId::AppendedPowersOfTwo,
        }
    }

    pub fn s(&self) -> u32 {
        match self {
            FamilyDescriptor::TrivialOnes { s }
            | FamilyDescriptor::PowersOfTwo { s }
            | FamilyDescriptor::AugmentedPowersOfTwo { s }
            | FamilyDescriptor::DiffSquares { s, .. }
            | FamilyDescriptor::AppendedPowersOfTwo { s, .. } => *s,
        }
    }

    /// Stable text label, e.g. `powers_of_two(s=2)` or
    /// `appended_powers_of_two(seed=2*2*4,s=1)`.
    pub fn label(&self) -> String {
        match self {
            FamilyDescriptor::AppendedPowersOfTwo { seed, s } => {
                let seed: Vec<String> = seed
                    .factors()
                    .iter()
                    .map(|f| match f.exponent {
                        1 => f.base.to_string(),
                        e => format!("{}^{e}", f.base),
                    })
                    .collect();
                format!("appended_powers_of_two(seed={},s={s})", seed.join("*"))
            }
            other => format!("{}(s={})", other.family(), other.s()),
        }
    }
}

impl fmt::Display for FamilyDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// The `k` a family asserts for its member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClaimedK {
    Exactly(BigInt),
    /// Trivial members satisfy the equation for every `k`.
    Any,
}

impl fmt::Display for ClaimedK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClaimedK::Exactly(k) => write!(f, "{k}"),
            ClaimedK::Any => f.write_str("any"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validity {
    Valid,
    Invalid { actual: KValue },
}

fn repeated(base: u64, count: u32) -> Vec<BigInt> {
    vec![BigInt::from(base); count as usize]
}

fn two_pow(e: u32) -> BigInt {
    BigInt::one() << e
}

/// Smallest `o ≥ 1` with `a^o ≡ 1 (mod m)`; `m = 1` gives 1.
pub fn multiplicative_order(a: &BigUint, m: &BigUint) -> Result<u64, Error> {
    Ok(order_at_most(a, m, u64::MAX)?.expect("the order of a unit is finite"))
}

/// The multiplicative order if it is at most `limit`, otherwise `None`.
pub fn order_at_most(a: &BigUint, m: &BigUint, limit: u64) -> Result<Option<u64>, Error> {
    if m.is_zero() || !a.gcd(m).is_one() {
        return Err(Error::NotCoprime {
            a: a.to_string(),
            m: m.to_string(),
        });
    }
    if m.is_one() {
        return Ok(Some(1));
    }
    let base = a % m;
    let mut value = base.clone();
    let mut order = 1u64;
    while !value.is_one() {
        if order >= limit {
            return Ok(None);
        }
        value = value * &base % m;
        order += 1;
    }
    Ok(Some(order))
}

fn appended_seed_parts(seed: &Factorization) -> Result<(BigUint, BigInt), Error> {
    let malformed = |why: &str| Err(Error::MalformedDescriptor(format!("seed {seed}: {why}")));
    if seed.is_empty() {
        return malformed("empty");
    }
    if !seed.is_positive() || seed.parity() != Parity::Even {
        return malformed("must be positive and even");
    }
    let single = seed.len() == 1 && seed.factors()[0].exponent == 1;
    let seed_k = match seed.k_of() {
        KValue::Exact(k) if single || seed.is_lehmer(&k) => k,
        _ => return malformed("must be a Lehmer factorization or a single base"),
    };
    let totient = seed.totient();
    let totient = totient.to_biguint().filter(|t| t.is_odd()).ok_or_else(|| {
        Error::MalformedDescriptor(format!("seed {seed}: totient is not odd and positive"))
    })?;
    Ok((totient, seed_k))
}

/// Builds the proposed member and its claimed `k`. Does not check validity.
pub fn generate(descriptor: &FamilyDescriptor) -> Result<(Factorization, ClaimedK), Error> {
    match descriptor {
        FamilyDescriptor::TrivialOnes { s } => {
            if *s == 0 {
                return Err(Error::MalformedDescriptor(
                    "trivial_ones needs s ≥ 1".into(),
                ));
            }
            Ok((Factorization::from_bases(repeated(1, *s))?, ClaimedK::Any))
        }
        FamilyDescriptor::PowersOfTwo { s } => Ok((
            Factorization::from_bases(repeated(2, *s))?,
            ClaimedK::Exactly(two_pow(*s) - 1),
        )),
        FamilyDescriptor::AugmentedPowersOfTwo { s } => {
            let mut bases = repeated(2, *s);
            bases.push(two_pow(*s));
            Ok((
                Factorization::from_bases(bases)?,
                ClaimedK::Exactly(two_pow(*s) + 1),
            ))
        }
        FamilyDescriptor::DiffSquares { row, params, .. }
            if !(1..=10).contains(row) || params.x < 2 =>
        {
            Err(Error::MalformedDescriptor(format!(
                "diff_squares row {row} with x = {}",
                params.x
            )))
        }
        FamilyDescriptor::DiffSquares { params, s, .. } => Ok((
            params.member(*s),
            ClaimedK::Exactly(BigInt::from(params.claimed_k)),
        )),
        FamilyDescriptor::AppendedPowersOfTwo { seed, s } => {
            let (totient, seed_k) = appended_seed_parts(seed)?;
            let order = multiplicative_order(&BigUint::from(2u8), &totient)?;
            let twos = u32::try_from(order * u64::from(*s))
                .map_err(|_| Error::MalformedDescriptor("too many appended factors".into()))?;
            let member = seed.union(&Factorization::from_bases(repeated(2, twos))?);
            // 2^n·ε̃(F) − 1 = 2^n·k·φ̃(F) + (2^n − 1)
            let scale = two_pow(twos);
            let totient = BigInt::from_biguint(Sign::Plus, totient);
            let k = &scale * seed_k + (&scale - 1) / totient;
            Ok((member, ClaimedK::Exactly(k)))
        }
    }
}

pub fn validate(descriptor: &FamilyDescriptor) -> Result<Validity, Error> {
    let (member, claimed) = generate(descriptor)?;
    let ok = match &claimed {
        ClaimedK::Exactly(k) => member.is_lehmer(k),
        ClaimedK::Any => member.is_composite() && member.k_of() == KValue::Indeterminate,
    };
    Ok(if ok {
        Validity::Valid
    } else {
        Validity::Invalid {
            actual: member.k_of(),
        }
    })
}

/// A validated, nontrivial family member with every descriptor producing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyMember {
    pub factorization: Factorization,
    pub k: BigInt,
    pub descriptors: Vec<FamilyDescriptor>,
}

impl FamilyMember {
    pub fn labels(&self) -> Vec<String> {
        let mut labels: Vec<String> = self
            .descriptors
            .iter()
            .map(FamilyDescriptor::label)
            .collect();
        labels.sort();
        labels.dedup();
        labels
    }
}

/// A published parameter value whose member fails the Lehmer equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Anomaly {
    pub descriptor: FamilyDescriptor,
    pub member: Factorization,
    pub claimed_k: ClaimedK,
    pub actual_k: KValue,
}

/// A difference-of-squares row whose published constants were replaced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowRepair {
    pub row: u8,
    pub published: DiffSquaresParams,
    pub repaired: DiffSquaresParams,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AnomalyReport {
    pub max_factors: usize,
    pub anomalies: Vec<Anomaly>,
    pub repairs: Vec<RowRepair>,
}

#[derive(Default)]
struct Sweep {
    members: BTreeMap<Factorization, (BigInt, Vec<FamilyDescriptor>)>,
    report: AnomalyReport,
}

impl Sweep {
    fn offer(&mut self, descriptor: FamilyDescriptor) {
        let (member, claimed) =
            generate(&descriptor).expect("sweep builds well-formed descriptors");
        match validate(&descriptor).expect("sweep builds well-formed descriptors") {
            Validity::Valid => {
                if let (ClaimedK::Exactly(k), false) = (&claimed, member.is_trivial()) {
                    let entry = self
                        .members
                        .entry(member)
                        .or_insert_with(|| (k.clone(), Vec::new()));
                    entry.1.push(descriptor);
                }
            }
            Validity::Invalid { actual } => {
                if descriptor.s() >= descriptor.family().published_min_s() {
                    self.report.anomalies.push(Anomaly {
                        descriptor,
                        member,
                        claimed_k: claimed,
                        actual_k: actual,
                    });
                }
            }
        }
    }

    fn appended_from(&mut self, seed: &Factorization, r_max: usize) {
        if seed.len() >= r_max {
            return;
        }
        let Ok((totient, _)) = appended_seed_parts(seed) else {
            return;
        };
        let budget = (r_max - seed.len()) as u64;
        let Ok(Some(order)) = order_at_most(&BigUint::from(2u8), &totient, budget) else {
            return;
        };
        for s in 1..=(budget / order) as u32 {
            self.offer(FamilyDescriptor::AppendedPowersOfTwo {
                seed: seed.clone(),
                s,
            });
        }
    }

    fn run(r_max: usize, extra_seeds: &[Factorization]) -> Sweep {
        let mut sweep = Sweep::default();
        sweep.report.max_factors = r_max;
        let r = r_max as u32;
        for s in 1..=r {
            sweep.offer(FamilyDescriptor::TrivialOnes { s });
        }
        for s in 0..=r {
            sweep.offer(FamilyDescriptor::PowersOfTwo { s });
        }
        for s in 0..r {
            sweep.offer(FamilyDescriptor::AugmentedPowersOfTwo { s });
        }
        for row in 1..=10u8 {
            let published = DiffSquaresParams::published(row).expect("rows 1..=10 exist");
            let mut variants = vec![published.clone()];
            if !published.satisfies_identities() {
                if let Some(repaired) = published.repaired().filter(|p| p.satisfies_identities()) {
                    sweep.report.repairs.push(RowRepair {
                        row,
                        published: published.clone(),
                        repaired: repaired.clone(),
                    });
                    variants.push(repaired);
                }
            }
            for params in variants {
                let mut s = 0;
                while params.member_len(s) <= r_max {
                    sweep.offer(FamilyDescriptor::DiffSquares {
                        row,
                        params: params.clone(),
                        s,
                    });
                    s += 1;
                }
            }
        }

        let mut seeds: BTreeSet<Factorization> = BTreeSet::new();
        if r_max >= 2 {
            // a single base x needs ord_{x−1}(2) ≤ r_max − 1, hence x ≤ 2^(r_max − 1)
            let cap = 1u64 << (r_max - 1).min(62);
            for x in (2..=cap).step_by(2) {
                seeds.insert(Factorization::from_bases([x]).expect("positive"));
            }
        }
        seeds.extend(
            sweep
                .members
                .keys()
                .chain(extra_seeds)
                .filter(|f| f.parity() == Parity::Even && f.len() < r_max)
                .cloned(),
        );
        for seed in &seeds {
            sweep.appended_from(seed, r_max);
        }
        sweep
    }
}

/// All validated nontrivial family members with at most `r_max` factors,
/// sorted by `(length, k, factorization)`.
///
/// Work grows like `2^r_max` (single-base seeds) and member sizes like
/// `x^(2^r_max)`, so this is meant for small `r_max`.
pub fn members_up_to(r_max: usize) -> Vec<FamilyMember> {
    collect_members(Sweep::run(r_max, &[]))
}

fn collect_members(sweep: Sweep) -> Vec<FamilyMember> {
    let mut out: Vec<FamilyMember> = sweep
        .members
        .into_iter()
        .map(|(factorization, (k, descriptors))| FamilyMember {
            factorization,
            k,
            descriptors,
        })
        .collect();
    out.sort_by(|a, b| {
        (a.factorization.len(), &a.k, &a.factorization).cmp(&(
            b.factorization.len(),
            &b.k,
            &b.factorization,
        ))
    });
    out
}

/// Published parameters that fail validation, plus any repaired rows.
pub fn anomaly_report(r_max: usize) -> AnomalyReport {
    Sweep::run(r_max, &[]).report
}

/// Matches factorizations against every family member up to `r_max` factors.
#[derive(Clone, Debug)]
pub struct Classifier {
    r_max: usize,
    members: Vec<FamilyMember>,
    index: BTreeMap<Factorization, usize>,
    report: AnomalyReport,
}

impl Classifier {
    pub fn new(r_max: usize) -> Self {
        Self::build(r_max, &[])
    }

    /// Also uses the even solutions among `records` with fewer than `r_max`
    /// bases as seeds for `appended_powers_of_two`.
    pub fn with_seeds(r_max: usize, records: &[SolutionRecord]) -> Self {
        let seeds: Vec<Factorization> = records
            .iter()
            .filter(|r| r.parity == Parity::Even && r.r < r_max)
            .map(SolutionRecord::factorization)
            .collect();
        Self::build(r_max, &seeds)
    }

    fn build(r_max: usize, seeds: &[Factorization]) -> Self {
        let sweep = Sweep::run(r_max, seeds);
        let report = sweep.report.clone();
        let members = collect_members(sweep);
        let index = members
            .iter()
            .enumerate()
            .map(|(i, m)| (m.factorization.clone(), i))
            .collect();
        Self {
            r_max,
            members,
            index,
            report,
        }
    }

    pub fn r_max(&self) -> usize {
        self.r_max
    }

    pub fn members(&self) -> &[FamilyMember] {
        &self.members
    }

    pub fn anomaly_report(&self) -> &AnomalyReport {
        &self.report
    }

    pub fn member_of(&self, factorization: &Factorization) -> Option<&FamilyMember> {
        self.index.get(factorization).map(|&i| &self.members[i])
    }

    /// Sorted family labels; empty means sporadic.
    pub fn classify(&self, record: &SolutionRecord) -> Vec<String> {
        self.member_of(&record.factorization())
            .map(FamilyMember::labels)
            .unwrap_or_default()
    }

    pub fn annotate(&self, records: &mut [SolutionRecord]) {
        for record in records {
            record.families = self.classify(record);
        }
    }
}

pub fn classify(record: &SolutionRecord, r_max: usize) -> Vec<String> {
    Classifier::new(r_max).classify(record)
}
