//! Index-sharded execution of independent trials.
//!
//! Every campaign in the crate is a search over trial indices `0..count` where
//! trial `i` depends only on `(seed, i)`. Results are reported by lowest
//! index, so [`Execution::Sequential`] and [`Execution::Parallel`] return
//! identical values. Without the `parallel` feature both run sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    #[cfg(feature = "parallel")]
    fn is_parallel(self) -> bool {
        self == Execution::Parallel
    }
}

/// Lowest index `i < count` for which `f(i)` is `Some`, with its value.
pub fn find_map_first<T, F>(exec: Execution, count: usize, f: F) -> Option<(usize, T)>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..count).into_par_iter().find_map_first(|i| f(i).map(|v| (i, v)));
    }
    let _ = exec;
    (0..count).find_map(|i| f(i).map(|v| (i, v)))
}

/// `f(i)` for every `i < count`, in index order.
pub fn map_indexed<T, F>(exec: Execution, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..count).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..count).map(f).collect()
}
