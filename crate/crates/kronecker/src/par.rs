//! Data-parallel map/reduce with a sequential fallback.

use crate::error::Result;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `merge`-reduces `f` over `items`, stopping at the first error.
#[cfg(feature = "parallel")]
pub fn map_reduce<T, A, F, I, M>(items: &[T], identity: I, f: F, merge: M) -> Result<A>
where
    T: Sync,
    A: Send,
    F: Fn(&T) -> Result<A> + Sync + Send,
    I: Fn() -> A + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    items.par_iter().map(f).try_reduce(&identity, |a, b| Ok(merge(a, b)))
}

#[cfg(not(feature = "parallel"))]
pub fn map_reduce<T, A, F, I, M>(items: &[T], identity: I, f: F, merge: M) -> Result<A>
where
    T: Sync,
    A: Send,
    F: Fn(&T) -> Result<A> + Sync + Send,
    I: Fn() -> A + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    items.iter().try_fold(identity(), |acc, t| Ok(merge(acc, f(t)?)))
}

/// Same reduction, always on the calling thread.
pub fn map_reduce_sequential<T, A, F, I, M>(items: &[T], identity: I, f: F, merge: M) -> Result<A>
where
    F: Fn(&T) -> Result<A>,
    I: Fn() -> A,
    M: Fn(A, A) -> A,
{
    items.iter().try_fold(identity(), |acc, t| Ok(merge(acc, f(t)?)))
}

pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}

/// Runs `f` with at most `threads` worker threads (ignored without the `parallel` feature).
#[cfg(feature = "parallel")]
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match threads {
        Some(n) if n > 0 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        _ => f(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_threads<R: Send>(_threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    f()
}
