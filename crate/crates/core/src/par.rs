//! Data-parallel helpers with a sequential fallback.
//!
//! Reductions are always combined in chunk order so results do not depend
//! on the number of worker threads.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub(crate) fn for_each_chunk_mut<T, F>(data: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    data.par_chunks_mut(chunk)
        .enumerate()
        .for_each(|(i, c)| f(i, c));
    #[cfg(not(feature = "parallel"))]
    data.chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c));
}

pub(crate) fn chunked_sum<T, F>(data: &[T], chunk: usize, f: F) -> f64
where
    T: Sync,
    F: Fn(&[T]) -> f64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    let partials: Vec<f64> = data.par_chunks(chunk).map(&f).collect();
    #[cfg(not(feature = "parallel"))]
    let partials: Vec<f64> = data.chunks(chunk).map(&f).collect();
    partials.into_iter().sum()
}

pub(crate) fn chunked_max<T, F>(data: &[T], chunk: usize, f: F) -> f64
where
    T: Sync,
    F: Fn(&[T]) -> f64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    let partials: Vec<f64> = data.par_chunks(chunk).map(&f).collect();
    #[cfg(not(feature = "parallel"))]
    let partials: Vec<f64> = data.chunks(chunk).map(&f).collect();
    partials.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

/// `dst[c * rows + r] = src[r * cols + c]`.
pub(crate) fn transpose<T: Copy + Send + Sync>(src: &[T], dst: &mut [T], rows: usize, cols: usize) {
    debug_assert_eq!(src.len(), rows * cols);
    debug_assert_eq!(dst.len(), rows * cols);
    for_each_chunk_mut(dst, rows, |c, out| {
        for (r, slot) in out.iter_mut().enumerate() {
            *slot = src[r * cols + c];
        }
    });
}
