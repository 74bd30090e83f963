//! Thin switch between rayon data parallelism and plain loops. With the
//! `parallel` feature (default) the heavy sweeps fan out across cores; the
//! sequential bodies are what the parallel versions must match bit for bit.

#[cfg(feature = "parallel")]
pub fn map_collect<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    F: Fn(T) -> R,
{
    items.into_iter().map(f).collect()
}

/// Applies `f` to each row index in `0..rows`, writing into disjoint
/// `row_len`-sized chunks of `out`.
#[cfg(feature = "parallel")]
pub fn for_each_row<T, F>(out: &mut [T], row_len: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync,
{
    use rayon::prelude::*;
    out.par_chunks_mut(row_len)
        .enumerate()
        .for_each(|(r, chunk)| f(r, chunk));
}

#[cfg(not(feature = "parallel"))]
pub fn for_each_row<T, F>(out: &mut [T], row_len: usize, f: F)
where
    F: Fn(usize, &mut [T]),
{
    for (r, chunk) in out.chunks_mut(row_len).enumerate() {
        f(r, chunk);
    }
}
