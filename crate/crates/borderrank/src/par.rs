//! Data-parallel map facade.
//!
//! With the `parallel` feature (default) independent work items fan out over
//! rayon; without it the same entry points run sequentially. Output order is
//! the input order either way, so results are byte-identical across both
//! builds.

/// Maps `f` over the slice, in parallel when the `parallel` feature is on.
#[cfg(feature = "parallel")]
pub fn map_slice<T: Sync, U: Send, F: Fn(&T) -> U + Sync + Send>(items: &[T], f: F) -> Vec<U> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_slice<T: Sync, U: Send, F: Fn(&T) -> U + Sync + Send>(items: &[T], f: F) -> Vec<U> {
    map_slice_seq(items, f)
}

/// Sequential reference path; the benchmark suite compares against it.
pub fn map_slice_seq<T, U, F: Fn(&T) -> U>(items: &[T], f: F) -> Vec<U> {
    items.iter().map(f).collect()
}
