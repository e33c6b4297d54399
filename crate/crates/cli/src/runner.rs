//! Runs the search's subtree tasks on a rayon pool.
//!
//! Tasks are independent and each returns a sorted list, so the merged
//! output is the same for every thread count.

use std::num::NonZeroUsize;
use std::ops::RangeInclusive;

use lehmer_core::{
    merge_records, partition_tasks, run_task, Error, Parity, SolutionRecord, TaskDescriptor,
};
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuildError, ThreadPoolBuilder};

pub fn default_threads() -> NonZeroUsize {
    std::thread::available_parallelism().unwrap_or(NonZeroUsize::MIN)
}

pub fn pool(threads: NonZeroUsize) -> Result<ThreadPool, ThreadPoolBuildError> {
    ThreadPoolBuilder::new().num_threads(threads.get()).build()
}

fn run_all(
    pool: &ThreadPool,
    tasks: Vec<(usize, TaskDescriptor)>,
) -> Result<Vec<SolutionRecord>, Error> {
    let parts = pool.install(|| {
        tasks
            .par_iter()
            .map(|(r, task)| run_task(*r, task))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(merge_records(parts))
}

/// Solutions with `r` bases for the given parities, optionally restricted to
/// one `k`.
pub fn enumerate(
    pool: &ThreadPool,
    r: usize,
    parities: &[Parity],
    k: Option<u64>,
) -> Result<Vec<SolutionRecord>, Error> {
    let mut tasks = Vec::new();
    for &parity in parities {
        for task in partition_tasks(r, parity)? {
            if k.is_none_or(|k| task.k == k) {
                tasks.push((r, task));
            }
        }
    }
    run_all(pool, tasks)
}

/// Every solution with a base count in `rs`, sorted by `(r, k, bases)`.
pub fn enumerate_range(
    pool: &ThreadPool,
    rs: RangeInclusive<usize>,
) -> Result<Vec<SolutionRecord>, Error> {
    let mut tasks = Vec::new();
    for r in rs {
        for parity in Parity::BOTH {
            tasks.extend(partition_tasks(r, parity)?.into_iter().map(|t| (r, t)));
        }
    }
    run_all(pool, tasks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn threads(n: usize) -> ThreadPool {
        pool(NonZeroUsize::new(n).unwrap()).unwrap()
    }

    #[test]
    fn matches_sequential_search() {
        for r in 2..=5 {
            let par = enumerate(&threads(4), r, &Parity::BOTH, None).unwrap();
            assert_eq!(par, lehmer_core::enumerate_all(r, None).unwrap());
        }
    }

    #[test]
    fn single_k() {
        let got = enumerate(&threads(2), 6, &[Parity::Even], Some(13)).unwrap();
        let bases: Vec<Vec<u32>> = got
            .iter()
            .map(|rec| {
                rec.bases
                    .iter()
                    .map(|b| u32::try_from(b).unwrap())
                    .collect()
            })
            .collect();
        assert_eq!(bases, vec![vec![2, 2, 2, 4, 8, 16]]);
    }

    #[test]
    fn range_is_concatenation() {
        let all = enumerate_range(&threads(3), 2..=4).unwrap();
        let mut expected = Vec::new();
        for r in 2..=4 {
            expected.extend(lehmer_core::enumerate_all(r, None).unwrap());
        }
        assert_eq!(all, expected);
    }
}
