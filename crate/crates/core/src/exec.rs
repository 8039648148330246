// Block executor. With the `parallel` feature blocks run on the rayon pool;
// reductions only ever add integers or combine per-block results in block
// order, so the output never depends on scheduling.

use alloc::vec::Vec;

#[cfg(feature = "parallel")]
pub(crate) fn map_blocks<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_blocks<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Sum integer counters produced by `n` independent blocks.
#[cfg(feature = "parallel")]
pub(crate) fn sum_counts<F>(n: usize, len: usize, f: F) -> Vec<u64>
where
    F: Fn(usize, &mut [u64]) + Sync + Send,
{
    use rayon::prelude::*;
    (0..n)
        .into_par_iter()
        .fold(
            || alloc::vec![0u64; len],
            |mut acc, b| {
                f(b, &mut acc);
                acc
            },
        )
        .reduce(
            || alloc::vec![0u64; len],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn sum_counts<F>(n: usize, len: usize, f: F) -> Vec<u64>
where
    F: Fn(usize, &mut [u64]) + Sync + Send,
{
    let mut acc = alloc::vec![0u64; len];
    for b in 0..n {
        f(b, &mut acc);
    }
    acc
}

/// Pairwise summation, used to combine per-block floating point partial sums.
pub(crate) fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => {
            let (a, b) = xs.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}
