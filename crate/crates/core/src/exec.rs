//! Feature-gated execution helpers. With the `parallel` feature the
//! closures run on rayon; otherwise the same work runs sequentially.
//! Callers must only pass order-independent reductions so results do not
//! depend on worker count.

/// Map `f` over `0..count` and sum the results.
#[cfg(feature = "parallel")]
pub fn sum_over<T, F>(count: usize, f: F) -> T
where
    T: Send + std::iter::Sum<T>,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).sum()
}

#[cfg(not(feature = "parallel"))]
pub fn sum_over<T, F>(count: usize, f: F) -> T
where
    T: Send + std::iter::Sum<T>,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..count).map(f).sum()
}
