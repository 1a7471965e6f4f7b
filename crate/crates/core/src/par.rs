//! Data-parallel map helpers.
//!
//! All per-item work in this crate is pure given an explicit substream, so
//! the parallel and sequential paths produce identical results; the
//! `parallel` feature only changes how the items are scheduled. `seq_map` is
//! always available so benchmarks can compare both paths in one build.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..n`, collecting results in index order.
#[cfg(feature = "parallel")]
pub fn par_map<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Map `f` over `0..n`, collecting results in index order.
#[cfg(not(feature = "parallel"))]
pub fn par_map<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    seq_map(n, f)
}

/// Sequential reference path for `par_map`.
pub fn seq_map<R, F>(n: usize, f: F) -> Vec<R>
where
    F: Fn(usize) -> R,
{
    (0..n).map(f).collect()
}
