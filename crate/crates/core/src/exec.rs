//! Sequential and data-parallel execution of index-range workloads.
//!
//! With the `parallel` feature (default) [`Execution::Parallel`] runs on the
//! rayon pool; without it both variants run sequentially. Outputs are always
//! returned in index order, so reductions over them are schedule-independent.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether work actually fans out to threads in this build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// `(0..len).map(f).collect()`, possibly in parallel.
pub fn map_range<T, F>(execution: Execution, len: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if execution.is_parallel() {
        return (0..len).into_par_iter().map(f).collect();
    }
    let _ = execution;
    (0..len).map(f).collect()
}

/// Maps every element of `items`, preserving order.
pub fn map_slice<I, T, F>(execution: Execution, items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if execution.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = execution;
    items.iter().map(f).collect()
}

/// Counts indices in `0..len` satisfying `pred`.
pub fn count_range<F>(execution: Execution, len: u64, pred: F) -> u64
where
    F: Fn(u64) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if execution.is_parallel() {
        return (0..len).into_par_iter().filter(|&i| pred(i)).count() as u64;
    }
    let _ = execution;
    (0..len).filter(|&i| pred(i)).count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_agree() {
        let f = |i: u64| i * i % 17;
        assert_eq!(map_range(Execution::Sequential, 1000, f), map_range(Execution::Parallel, 1000, f));
        assert_eq!(
            count_range(Execution::Sequential, 1000, |i| i % 3 == 0),
            count_range(Execution::Parallel, 1000, |i| i % 3 == 0)
        );
        let items: Vec<u64> = (0..50).collect();
        assert_eq!(map_slice(Execution::Parallel, &items, |x| x + 1), (1..51).collect::<Vec<_>>());
    }
}
