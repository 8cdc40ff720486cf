use num_complex::Complex64;

use super::grid::Grid;
use crate::error::{Error, Result};
use crate::par;

/// `max(x, 0)^e`, with small integer exponents specialised.
#[inline]
pub fn clamped_pow(x: f64, e: f64) -> f64 {
    let x = x.max(0.0);
    if e == 1.0 {
        x
    } else if e == 2.0 {
        x * x
    } else if e == 3.0 {
        x * x * x
    } else if e == e.trunc() && e.abs() <= 16.0 {
        x.powi(e as i32)
    } else {
        x.powf(e)
    }
}

/// Real samples on a [`Grid`], stored row-major with the last axis fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
}

/// Discrete Fourier coefficients of a field (unnormalised forward FFT).
#[derive(Debug, Clone)]
pub struct Spectrum {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl Field {
    pub fn from_values(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(Self {
            grid: grid.clone(),
            values,
        })
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: &Grid, c: f64) -> Self {
        Self {
            grid: grid.clone(),
            values: vec![c; grid.len()],
        }
    }

    /// Samples `f(x, y, z)` at every grid point.
    pub fn from_fn(grid: &Grid, f: impl Fn(f64, f64, f64) -> f64 + Sync + Send) -> Self {
        let mut values = vec![0.0; grid.len()];
        let n = grid.n();
        par::for_each_chunk_mut(&mut values, n * n, |i, plane| {
            let x = grid.coord(i);
            for (jk, v) in plane.iter_mut().enumerate() {
                *v = f(x, grid.coord(jk / n), grid.coord(jk % n));
            }
        });
        Self {
            grid: grid.clone(),
            values,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64 + Sync + Send) -> Self {
        let mut out = self.clone();
        let n = self.grid.n();
        par::for_each_chunk_mut(&mut out.values, n * n, |_, c| {
            for v in c {
                *v = f(*v);
            }
        });
        out
    }

    /// Pointwise combination of two fields on the same grid.
    pub fn zip_map(&self, other: &Field, f: impl Fn(f64, f64) -> f64 + Sync + Send) -> Result<Self> {
        self.check_same_grid(other)?;
        let mut out = self.clone();
        let n2 = self.grid.n() * self.grid.n();
        par::for_each_chunk_mut(&mut out.values, n2, |p, c| {
            let base = p * n2;
            for (off, v) in c.iter_mut().enumerate() {
                *v = f(*v, other.values[base + off]);
            }
        });
        Ok(out)
    }

    pub(crate) fn check_same_grid(&self, other: &Field) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::InvalidGrid(format!(
                "fields live on different grids ({:?} vs {:?})",
                self.grid, other.grid
            )));
        }
        Ok(())
    }

    fn chunk(&self) -> usize {
        self.grid.n() * self.grid.n()
    }

    pub fn min(&self) -> f64 {
        -par::chunked_max(&self.values, self.chunk(), |c| {
            c.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(-v))
        })
    }

    pub fn max(&self) -> f64 {
        par::chunked_max(&self.values, self.chunk(), |c| {
            c.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v))
        })
    }

    /// `max |u|`.
    pub fn linf_norm(&self) -> f64 {
        par::chunked_max(&self.values, self.chunk(), |c| {
            c.iter().fold(0.0, |m: f64, &v| m.max(v.abs()))
        })
    }

    /// Rectangle-rule integral `Σ f(u) h³`.
    pub fn integrate_with(&self, f: impl Fn(f64) -> f64 + Sync + Send) -> f64 {
        par::chunked_sum(&self.values, self.chunk(), |c| c.iter().map(|&v| f(v)).sum())
            * self.grid.cell_volume()
    }

    pub fn integral(&self) -> f64 {
        self.integrate_with(|v| v)
    }

    pub fn mean(&self) -> f64 {
        self.integral() / self.grid.length().powi(3)
    }

    /// `(∫ |u|^k)^{1/k}`. Integer `k` uses `|u|`; fractional `k` clamps
    /// negative samples to zero before powering.
    pub fn lk_norm(&self, k: f64) -> Result<f64> {
        if !(k >= 1.0) || !k.is_finite() {
            return Err(Error::InvalidParams(format!("norm index must be at least 1, got {k}")));
        }
        let s = if k == k.trunc() {
            self.integrate_with(|v| clamped_pow(v.abs(), k))
        } else {
            self.integrate_with(|v| clamped_pow(v, k))
        };
        Ok(s.powf(1.0 / k))
    }

    pub fn l2_norm(&self) -> f64 {
        self.integrate_with(|v| v * v).sqrt()
    }

    /// `∫ max(u, 0)^β`.
    pub fn nonlocal_mass(&self, beta: f64) -> f64 {
        self.integrate_with(|v| clamped_pow(v, beta))
    }

    pub fn spectrum(&self) -> Spectrum {
        let mut coeffs: Vec<Complex64> = self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.grid.forward_in_place(&mut coeffs);
        Spectrum {
            grid: self.grid.clone(),
            coeffs,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

impl Spectrum {
    pub fn zeros(grid: &Grid) -> Self {
        Self {
            grid: grid.clone(),
            coeffs: vec![Complex64::default(); grid.len()],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Inverse transform, keeping the real part.
    pub fn to_field(&self) -> Field {
        let mut data = self.coeffs.clone();
        self.grid.inverse_in_place(&mut data);
        Field {
            grid: self.grid.clone(),
            values: data.into_iter().map(|z| z.re).collect(),
        }
    }

    /// Multiplies every coefficient by `m(ξ₁, ξ₂, ξ₃)`, given FFT indices.
    pub fn apply(&mut self, m: impl Fn(usize, usize, usize) -> Complex64 + Sync + Send) {
        let grid = self.grid.clone();
        let n = grid.n();
        par::for_each_chunk_mut(&mut self.coeffs, n * n, |i, plane| {
            for (jk, z) in plane.iter_mut().enumerate() {
                *z *= m(i, jk / n, jk % n);
            }
        });
    }

    /// Real multiplier depending only on `|ξ|²`.
    pub fn apply_radial(&mut self, m: impl Fn(f64) -> f64 + Sync + Send) {
        let grid = self.grid.clone();
        self.apply(|i, j, k| {
            let k2 = grid.wavenumber(i).powi(2) + grid.wavenumber(j).powi(2) + grid.wavenumber(k).powi(2);
            Complex64::new(m(k2), 0.0)
        });
    }

    /// Zeroes modes outside the two-thirds band on any axis.
    pub fn dealias(&mut self) {
        let grid = self.grid.clone();
        self.apply(|i, j, k| {
            if grid.dealias_keep(i) && grid.dealias_keep(j) && grid.dealias_keep(k) {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::default()
            }
        });
    }

    /// `self ← a·self + b·other`.
    pub fn axpby(&mut self, a: f64, b: f64, other: &Spectrum) {
        let n2 = self.grid.n() * self.grid.n();
        par::for_each_chunk_mut(&mut self.coeffs, n2, |p, c| {
            let base = p * n2;
            for (off, z) in c.iter_mut().enumerate() {
                *z = *z * a + other.coeffs[base + off] * b;
            }
        });
    }

    /// `Σ |ĉ|²` scaled so that it equals `∫ u²` of the physical field.
    pub fn parseval_l2_squared(&self) -> f64 {
        let scale = self.grid.cell_volume() / self.grid.len() as f64;
        par::chunked_sum(&self.coeffs, self.grid.n() * self.grid.n(), |c| {
            c.iter().map(|z| z.norm_sqr()).sum()
        }) * scale
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn clamped_pow_specialisations() {
        assert_eq!(clamped_pow(-1e-12, 2.5), 0.0);
        assert_eq!(clamped_pow(2.0, 3.0), 8.0);
        assert_eq!(clamped_pow(2.0, 5.0), 32.0);
        assert!((clamped_pow(2.0, 0.5) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn gaussian_integral() {
        let g = Grid::new(64, 16.0).unwrap();
        let u = Field::from_fn(&g, |x, y, z| (-(x * x + y * y + z * z)).exp());
        assert!((u.lk_norm(1.0).unwrap() - PI.powf(1.5)).abs() < 1e-6);
        assert!((u.nonlocal_mass(1.0) - PI.powf(1.5)).abs() < 1e-6);
    }

    #[test]
    fn constant_norms() {
        let g = Grid::new(16, 3.0).unwrap();
        let c = 0.7;
        let u = Field::constant(&g, c);
        for k in [1.0, 1.5, 2.0, 3.0, 7.25] {
            let expected = c * 3f64.powf(3.0 / k);
            assert!((u.lk_norm(k).unwrap() - expected).abs() < 1e-12 * expected);
        }
        assert_eq!(u.linf_norm(), c);
        assert!(u.lk_norm(0.5).is_err());
    }

    #[test]
    fn round_trip_and_parseval() {
        let g = Grid::new(32, 7.0).unwrap();
        let u = Field::from_fn(&g, |x, y, z| (0.3 * x).sin() * (-(y * y)).exp() + 0.1 * z.cos() + 1.0);
        let s = u.spectrum();
        let back = s.to_field();
        let diff = u.zip_map(&back, |a, b| a - b).unwrap();
        assert!(diff.l2_norm() <= 1e-12 * u.l2_norm());
        let physical = u.l2_norm().powi(2);
        assert!((s.parseval_l2_squared() - physical).abs() <= 1e-12 * physical);
    }

    #[test]
    fn min_max_and_mean() {
        let g = Grid::new(16, 2.0).unwrap();
        let u = Field::from_fn(&g, |x, _, _| x);
        assert_eq!(u.min(), -1.0);
        assert!((u.max() - (1.0 - 2.0 / 16.0)).abs() < 1e-15);
        assert!((u.mean() + 1.0 / 16.0).abs() < 1e-14);
    }

    #[test]
    fn shape_mismatch_rejected() {
        let g = Grid::new(16, 1.0).unwrap();
        assert!(matches!(
            Field::from_values(&g, vec![0.0; 10]),
            Err(Error::ShapeMismatch { .. })
        ));
        let other = Field::zeros(&Grid::new(16, 2.0).unwrap());
        assert!(Field::zeros(&g).zip_map(&other, |a, _| a).is_err());
    }
}
