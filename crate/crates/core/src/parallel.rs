//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (on by default) [`Execution::Parallel`] runs on
//! the rayon global pool; without it every mode runs sequentially. Both paths
//! visit work items in the same logical order and combine results in index
//! order, so outputs do not depend on the mode or the thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How data-parallel loops are executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether this mode actually uses worker threads in this build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// `Σ f(i)` for `i` in `0..n`.
pub fn sum_range<F>(exec: Execution, n: u64, f: F) -> u64
where
    F: Fn(u64) -> u64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n).into_par_iter().map(f).sum();
    }
    let _ = exec;
    (0..n).map(f).sum()
}

/// Order-preserving map over a slice.
pub fn map_slice<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Order-preserving fallible map; returns the first error in index order.
pub fn try_map_slice<T, R, E, F>(exec: Execution, items: &[T], f: F) -> Result<Vec<R>, E>
where
    T: Sync,
    R: Send,
    E: Send,
    F: Fn(&T) -> Result<R, E> + Sync + Send,
{
    map_slice(exec, items, f).into_iter().collect()
}
