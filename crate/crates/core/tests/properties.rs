use lehmer_core::bounds::{lower_l, upper_u, SearchPrefix};
use lehmer_core::{kappa, ExactRatio, Factorization, KValue};
use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

fn ub(v: &[u64]) -> Vec<BigUint> {
    v.iter().map(|&b| BigUint::from(b)).collect()
}

fn sorted(mut v: Vec<u64>) -> Vec<u64> {
    v.sort_unstable();
    v
}

/// A sorted prefix of length `s ≤ r` plus a full sorted completion of it.
fn prefix_and_completion() -> impl Strategy<Value = (Vec<u64>, Vec<u64>, usize)> {
    (2usize..=6)
        .prop_flat_map(|r| (Just(r), 0..=r, prop::collection::vec(2u64..60, r)))
        .prop_flat_map(|(r, s, raw)| {
            let prefix = sorted(raw[..s].to_vec());
            let floor = prefix.last().copied().unwrap_or(2);
            let tail = prop::collection::vec(floor..floor + 5000, r - s);
            (Just(prefix), tail, Just(r))
        })
        .prop_map(|(prefix, tail, r)| {
            let mut full = prefix.clone();
            full.extend(sorted(tail));
            (prefix, full, r)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn k_of_matches_is_lehmer(bases in prop::collection::vec(2i64..200, 2..6), k in 0i64..70) {
        let f = Factorization::from_bases(bases).unwrap();
        let k = BigInt::from(k);
        let agrees = f.k_of() == KValue::Exact(k.clone());
        prop_assert_eq!(agrees, f.is_lehmer(&k));
    }

    #[test]
    fn higher_exponents_never_solve(
        factors in prop::collection::vec((2i64..500, 1u32..4), 1..6),
        bump in 0usize..6,
    ) {
        let mut factors = factors;
        let i = bump % factors.len();
        factors[i].1 += 1;
        let f = Factorization::new(factors).unwrap();
        prop_assert_eq!(f.k_of(), KValue::NotIntegral);
    }

    #[test]
    fn base_one_forces_triviality(
        bases in prop::collection::vec(2i64..100, 1..5),
        ones in 1usize..3,
        k in -20i64..70,
    ) {
        let mut all = bases;
        all.extend(std::iter::repeat_n(1, ones));
        let f = Factorization::from_bases(all).unwrap();
        prop_assert!(!f.is_lehmer(&BigInt::from(k)));
    }

    #[test]
    fn kappa_strictly_decreasing(bases in prop::collection::vec(2u64..=100, 2..7), pick in 0usize..7) {
        let i = pick % bases.len();
        let mut bumped = bases.clone();
        bumped[i] += 1;
        prop_assert!(kappa(&ub(&bumped)).unwrap() < kappa(&ub(&bases)).unwrap());
    }

    #[test]
    fn kappa_bounds(bases in prop::collection::vec(2u64..=100, 2..8)) {
        let r = bases.len() as u32;
        let value = kappa(&ub(&bases)).unwrap();
        let top = BigInt::from(2u8).pow(r) - 1;
        prop_assert!(value > BigInt::from(1));
        prop_assert!(value <= top);
        prop_assert_eq!(value == top, bases.iter().all(|&b| b == 2));
    }

    #[test]
    fn evaluate_and_totient_multiplicative(
        a in prop::collection::vec((-50i64..50, 1u32..4), 0..5),
        b in prop::collection::vec((-50i64..50, 1u32..4), 0..5),
    ) {
        let nz = |v: Vec<(i64, u32)>| v.into_iter().filter(|(x, _)| *x != 0).collect::<Vec<_>>();
        let f = Factorization::new(nz(a)).unwrap();
        let g = Factorization::new(nz(b)).unwrap();
        let fg = f.union(&g);
        prop_assert_eq!(fg.evaluate(), f.evaluate() * g.evaluate());
        prop_assert_eq!(fg.totient(), f.totient() * g.totient());
    }

    #[test]
    fn sandwich((prefix, full, r) in prefix_and_completion()) {
        let p = SearchPrefix::from_u64(&prefix, r).unwrap();
        let value = kappa(&ub(&full)).unwrap();
        let (lo, hi) = (lower_l(&p), upper_u(&p));
        prop_assert!(value <= hi);
        if prefix.len() < r {
            prop_assert!(lo < value);
        } else {
            prop_assert_eq!(lo, value);
        }
    }

    #[test]
    fn nesting((prefix, full, r) in prefix_and_completion()) {
        prop_assume!(prefix.len() < r);
        let p = SearchPrefix::from_u64(&prefix, r).unwrap();
        let q = SearchPrefix::from_u64(&full[..prefix.len() + 1], r).unwrap();
        prop_assert!(lower_l(&p) <= lower_l(&q));
        prop_assert!(lower_l(&q) <= upper_u(&q));
        prop_assert!(upper_u(&q) <= upper_u(&p));
    }

    #[test]
    fn bounds_decrease_in_arguments(
        raw in prop::collection::vec(2u64..80, 1..6),
        extra in 0usize..4,
        pick in 0usize..6,
    ) {
        let bases = sorted(raw);
        let r = bases.len() + extra;
        prop_assume!(r >= 2);
        let i = pick % bases.len();
        let mut bumped = bases.clone();
        bumped[i] += 1;
        prop_assume!(bumped.windows(2).all(|w| w[0] <= w[1]));
        let p = SearchPrefix::from_u64(&bases, r).unwrap();
        let q = SearchPrefix::from_u64(&bumped, r).unwrap();
        prop_assert!(lower_l(&q) < lower_l(&p));
        prop_assert!(upper_u(&q) < upper_u(&p));
    }

    #[test]
    fn lower_constant_in_r(raw in prop::collection::vec(2u64..500, 1..6), r in 2usize..10) {
        let bases = sorted(raw);
        prop_assume!(bases.len() < r);
        let a = SearchPrefix::from_u64(&bases, r).unwrap();
        let b = SearchPrefix::from_u64(&bases, r + 1).unwrap();
        prop_assert_eq!(lower_l(&a), lower_l(&b));
        prop_assert_eq!(lower_l(&SearchPrefix::empty(r)), ExactRatio::from_integer(1));
    }

    #[test]
    fn bounds_converge_to_parent_lower(raw in prop::collection::vec(2u64..50, 0..4), extra in 1usize..4) {
        let head = sorted(raw);
        let r = head.len() + extra + 1;
        let parent = SearchPrefix::from_u64(&head, r).unwrap();
        let target = lower_l(&parent);
        let gap = |u: u64| {
            let mut bases = head.clone();
            bases.push(u);
            let p = SearchPrefix::from_u64(&bases, r).unwrap();
            let (lo, hi) = (lower_l(&p), upper_u(&p));
            let diff = |x: &ExactRatio| {
                ExactRatio::new(
                    x.numer() * target.denom() - target.numer() * x.denom(),
                    x.denom() * target.denom(),
                ).unwrap()
            };
            (diff(&lo), diff(&hi))
        };
        let (lo_far, hi_far) = gap(1_000_000);
        let (lo_near, hi_near) = gap(1_000);
        prop_assert!(lo_far < lo_near);
        prop_assert!(hi_far < hi_near);
    }
}
