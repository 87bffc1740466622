//! Data-parallel map helpers.
//!
//! Every scan in the crate is an ordered map over independent grid points.
//! [`Execution`] selects between a rayon-backed path and a plain iterator
//! at runtime; without the `parallel` feature both variants run
//! sequentially. Output order always follows input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// True when this variant actually dispatches to the thread pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    pub fn map_range<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// Ordered map that stops at the first error (sequential) or reports
    /// the error of the lowest failing index (parallel).
    pub fn try_map<T, R, E, F>(self, items: &[T], f: F) -> Result<Vec<R>, E>
    where
        T: Sync,
        R: Send,
        E: Send,
        F: Fn(&T) -> Result<R, E> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            let all: Vec<Result<R, E>> = items.par_iter().map(f).collect();
            return all.into_iter().collect();
        }
        items.iter().map(f).collect()
    }

    /// Sum of `f(i)` for `i in 0..n`, reduced in index order so the result
    /// does not depend on the thread schedule.
    pub fn sum_range<F>(self, n: usize, f: F) -> f64
    where
        F: Fn(usize) -> f64 + Sync + Send,
    {
        self.map_range(n, f).into_iter().sum()
    }
}
