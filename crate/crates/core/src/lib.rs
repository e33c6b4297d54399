//! Exact enumeration of nontrivial positive spoof Lehmer factorizations.
//!
//! A spoof factorization is a multiset of `(base, exponent)` pairs whose bases
//! need not be prime. It is `k`-Lehmer when `k · φ̃(F) = ε̃(F) − 1` and it is
//! composite. This crate holds the arithmetic, the `L`/`U` bound functions
//! that drive the branch-and-bound search, the search itself, the known
//! infinite families, and a brute-force oracle used to cross-check the
//! search. Everything here is pure and allocation-only (`no_std` + `alloc`);
//! IO, parallel scheduling and file formats live in the `lehmer-cli` crate.
#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bounds;
mod error;
pub mod factorization;
pub mod families;
pub mod oracle;
pub mod ratio;
pub mod search;

pub use bounds::{k_range, lower_l, prune_state, upper_u, KRange, PruneState, SearchPrefix};
pub use error::Error;
pub use factorization::{kappa, Factor, Factorization, KValue, Parity};
pub use families::{
    classify, generate, members_up_to, multiplicative_order, validate, AnomalyReport, ClaimedK,
    Classifier, DiffSquaresParams, FamilyDescriptor, FamilyId, FamilyMember, Validity,
};
pub use oracle::{brute_force, cross_check, CrossCheckReport, WorkLimit};
pub use ratio::ExactRatio;
pub use search::{
    congruence_ok, enumerate, enumerate_all, merge_records, next_candidates, partition_tasks,
    run_task, scan_candidates, SolutionRecord, TaskDescriptor,
};

pub type Result<T, E = Error> = core::result::Result<T, E>;
