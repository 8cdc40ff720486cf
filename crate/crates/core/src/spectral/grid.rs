use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::par;

/// Uniform periodic grid on `[−L/2, L/2)³` with `N` points per axis.
///
/// Holds the FFT plans, so cloning is cheap and every field on the grid
/// shares them.
#[derive(Clone)]
pub struct Grid {
    inner: Arc<GridInner>,
}

struct GridInner {
    n: usize,
    length: f64,
    wavenumbers: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("n", &self.inner.n)
            .field("length", &self.inner.length)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.inner.n == other.inner.n && self.inner.length == other.inner.length
    }
}

impl Grid {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be a power of two and at least 16, got {n}"
            )));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "side length must be positive and finite, got {length}"
            )));
        }
        let base = 2.0 * std::f64::consts::PI / length;
        let wavenumbers = (0..n).map(|i| base * signed_mode(i, n) as f64).collect();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        Ok(Self {
            inner: Arc::new(GridInner {
                n,
                length,
                wavenumbers,
                forward,
                inverse,
            }),
        })
    }

    /// Points per axis.
    pub fn n(&self) -> usize {
        self.inner.n
    }

    pub fn length(&self) -> f64 {
        self.inner.length
    }

    pub fn spacing(&self) -> f64 {
        self.inner.length / self.inner.n as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(3)
    }

    /// Total number of samples, `N³`.
    pub fn len(&self) -> usize {
        self.inner.n.pow(3)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Physical coordinate of grid index `i` along any axis.
    pub fn coord(&self, i: usize) -> f64 {
        -0.5 * self.inner.length + i as f64 * self.spacing()
    }

    /// Angular wavenumber of FFT index `i` along any axis.
    pub fn wavenumber(&self, i: usize) -> f64 {
        self.inner.wavenumbers[i]
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.inner.wavenumbers
    }

    /// Wavenumber used for odd derivatives: the Nyquist mode is dropped so
    /// derivatives of real fields stay real.
    pub fn derivative_wavenumber(&self, i: usize) -> f64 {
        if i == self.inner.n / 2 {
            0.0
        } else {
            self.inner.wavenumbers[i]
        }
    }

    /// Whether FFT index `i` survives the two-thirds truncation.
    pub fn dealias_keep(&self, i: usize) -> bool {
        3 * signed_mode(i, self.inner.n).unsigned_abs() < self.inner.n as u64
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.inner.n + j) * self.inner.n + k
    }

    /// Splits a flat index into `(i, j, k)`.
    #[inline]
    pub fn unravel(&self, idx: usize) -> (usize, usize, usize) {
        let n = self.inner.n;
        (idx / (n * n), (idx / n) % n, idx % n)
    }

    /// Minimum-image displacement `x − c` reduced to `[−L/2, L/2)`.
    pub fn periodic_offset(&self, x: f64, c: f64) -> f64 {
        let l = self.inner.length;
        let d = x - c;
        d - l * (d / l + 0.5).floor()
    }

    pub(crate) fn forward_in_place(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inner.forward);
    }

    /// Inverse transform including the `1/N³` normalisation.
    pub(crate) fn inverse_in_place(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inner.inverse);
        let scale = 1.0 / self.len() as f64;
        par::for_each_chunk_mut(data, self.n() * self.n(), |_, c| {
            for z in c {
                *z *= scale;
            }
        });
    }

    fn transform(&self, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        let n = self.n();
        let plane = n * n;
        assert_eq!(data.len(), plane * n);
        // Innermost axis: contiguous lines, N per plane.
        par::for_each_chunk_mut(data, plane, |_, p| fft.process(p));
        // Middle axis: transpose each plane.
        par::for_each_chunk_mut(data, plane, |_, p| {
            let mut tmp = vec![Complex64::default(); plane];
            par_free_transpose(p, &mut tmp, n, n);
            fft.process(&mut tmp);
            par_free_transpose(&tmp, p, n, n);
        });
        // Outer axis: transpose the N × N² matrix.
        let mut tmp = vec![Complex64::default(); data.len()];
        par::transpose(data, &mut tmp, n, plane);
        par::for_each_chunk_mut(&mut tmp, plane, |_, c| fft.process(c));
        par::transpose(&tmp, data, plane, n);
    }
}

fn par_free_transpose(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    for r in 0..rows {
        for c in 0..cols {
            dst[c * rows + r] = src[r * cols + c];
        }
    }
}

/// Signed mode number of FFT index `i`: `0, 1, …, N/2−1, −N/2, …, −1`.
pub(crate) fn signed_mode(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}
