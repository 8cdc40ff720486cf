//! Newtonian potential and spectral derivatives on the periodic box.
//!
//! On the torus the potential solves `−Δv = u − ū` with the zero mode set
//! to zero. Only `∇v` enters the dynamics, so the additive gauge is
//! immaterial; the uniform background `ū` is what makes the periodic
//! problem solvable.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::{Field, Spectrum};
use crate::error::{Error, Result};

/// Constants of the whole-space kernel `K(x) = c_n |x|^{2−n}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelConstants {
    /// Volume of the unit ball, `π^{n/2} / Γ(n/2 + 1)`.
    pub b_n: f64,
    /// `1 / (n (n−2) b_n)`.
    pub c_n: f64,
}

impl KernelConstants {
    pub fn for_dimension(n: u32) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParams(format!(
                "the Newtonian kernel needs n >= 3, got {n}"
            )));
        }
        let nf = f64::from(n);
        let b_n = PI.powf(nf / 2.0) / libm::tgamma(nf / 2.0 + 1.0);
        let c_n = 1.0 / (nf * (nf - 2.0) * b_n);
        Ok(Self { b_n, c_n })
    }
}

/// Spectrum of the mean-zero potential: `v̂(ξ) = û(ξ)/|ξ|²`, `v̂(0) = 0`.
pub fn potential_spectrum(u_hat: &Spectrum) -> Spectrum {
    let mut v = u_hat.clone();
    v.apply_radial(|k2| if k2 == 0.0 { 0.0 } else { 1.0 / k2 });
    v
}

pub fn newtonian_potential(u: &Field) -> Field {
    potential_spectrum(&u.spectrum()).to_field()
}

/// Component `axis` of the spectral derivative, `i ξ_axis ĉ`.
pub fn derivative_spectrum(s: &Spectrum, axis: usize) -> Spectrum {
    let grid = s.grid().clone();
    let mut d = s.clone();
    d.apply(|i, j, k| {
        let idx = [i, j, k][axis];
        Complex64::new(0.0, grid.derivative_wavenumber(idx))
    });
    d
}

pub fn gradient_from_spectrum(s: &Spectrum) -> [Field; 3] {
    [0, 1, 2].map(|axis| derivative_spectrum(s, axis).to_field())
}

pub fn gradient(v: &Field) -> [Field; 3] {
    gradient_from_spectrum(&v.spectrum())
}

/// Spectrum of `∇·F` for a vector field given by its components.
pub fn divergence_spectrum(components: &[Field; 3]) -> Spectrum {
    let grid = components[0].grid().clone();
    let mut total = Spectrum::zeros(&grid);
    for (axis, c) in components.iter().enumerate() {
        total.axpby(1.0, 1.0, &derivative_spectrum(&c.spectrum(), axis));
    }
    total
}

pub fn divergence(components: &[Field; 3]) -> Field {
    divergence_spectrum(components).to_field()
}

pub fn laplacian(u: &Field) -> Field {
    let mut s = u.spectrum();
    s.apply_radial(|k2| -k2);
    s.to_field()
}

/// `∫|∇v|²` computed in spectral space.
pub fn dirichlet_energy(v: &Field) -> f64 {
    let mut s = v.spectrum();
    s.apply_radial(f64::sqrt);
    s.parseval_l2_squared()
}

/// Whole-space potential of a Gaussian of total mass `mass` and standard
/// width `width`, at radius `r`: `mass · erf(r/(√2 s)) / (4π r)`.
pub fn gaussian_free_potential(mass: f64, width: f64, r: f64) -> f64 {
    let a = std::f64::consts::SQRT_2 * width;
    if r < 1e-8 * width {
        return mass * 2.0 / (PI.sqrt() * a * 4.0 * PI);
    }
    mass * libm::erf(r / a) / (4.0 * PI * r)
}

/// Radial derivative of [`gaussian_free_potential`].
pub fn gaussian_free_potential_slope(mass: f64, width: f64, r: f64) -> f64 {
    let a = std::f64::consts::SQRT_2 * width;
    if r < 1e-8 * width {
        return 0.0;
    }
    let x = r / a;
    mass * (2.0 / PI.sqrt() * x * (-x * x).exp() - libm::erf(x)) / (4.0 * PI * r * r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;

    #[test]
    fn three_dimensional_constants() {
        let k = KernelConstants::for_dimension(3).unwrap();
        assert!((k.b_n - 4.0 / 3.0 * PI).abs() < 1e-14);
        assert!((k.c_n - 1.0 / (4.0 * PI)).abs() < 1e-14);
        // n = 4: b₄ = π²/2, c₄ = 1/(8 b₄).
        let k4 = KernelConstants::for_dimension(4).unwrap();
        assert!((k4.b_n - PI * PI / 2.0).abs() < 1e-13);
        assert!((k4.c_n - 1.0 / (4.0 * PI * PI)).abs() < 1e-14);
        assert!(KernelConstants::for_dimension(2).is_err());
    }

    #[test]
    fn cosine_source() {
        let l = 8.0;
        let g = Grid::new(16, l).unwrap();
        let kx = 2.0 * PI / l;
        let u = Field::from_fn(&g, |x, _, _| (kx * x).cos());
        let v = newtonian_potential(&u);
        let scale = (l / (2.0 * PI)).powi(2);
        for (idx, &val) in v.values().iter().enumerate() {
            let (i, _, _) = g.unravel(idx);
            let expected = scale * (kx * g.coord(i)).cos();
            assert!((val - expected).abs() < 1e-13, "{idx}");
        }
    }

    #[test]
    fn constant_source_has_no_force() {
        let g = Grid::new(16, 5.0).unwrap();
        let v = newtonian_potential(&Field::constant(&g, 2.5));
        for c in gradient(&v) {
            assert!(c.linf_norm() < 1e-14);
        }
    }

    #[test]
    fn gradient_of_resolved_modes() {
        let l = 6.0;
        let g = Grid::new(16, l).unwrap();
        let k = 2.0 * PI / l;
        let v = Field::from_fn(&g, |x, _, _| (k * x).sin());
        let [dx, dy, dz] = gradient(&v);
        for (idx, &val) in dx.values().iter().enumerate() {
            let (i, _, _) = g.unravel(idx);
            assert!((val - k * (k * g.coord(i)).cos()).abs() < 1e-13);
        }
        assert!(dy.linf_norm() < 1e-14 && dz.linf_norm() < 1e-14);

        let w = Field::from_fn(&g, |x, y, z| (k * x).sin() * (2.0 * k * y).sin() * (3.0 * k * z).sin());
        let [wx, wy, wz] = gradient(&w);
        for idx in 0..g.len() {
            let (i, j, kk) = g.unravel(idx);
            let (x, y, z) = (g.coord(i), g.coord(j), g.coord(kk));
            let ex = k * (k * x).cos() * (2.0 * k * y).sin() * (3.0 * k * z).sin();
            let ey = 2.0 * k * (k * x).sin() * (2.0 * k * y).cos() * (3.0 * k * z).sin();
            let ez = 3.0 * k * (k * x).sin() * (2.0 * k * y).sin() * (3.0 * k * z).cos();
            assert!((wx.values()[idx] - ex).abs() < 1e-12);
            assert!((wy.values()[idx] - ey).abs() < 1e-12);
            assert!((wz.values()[idx] - ez).abs() < 1e-12);
        }
    }

    #[test]
    fn divergence_of_gradient_inverts_potential() {
        let g = Grid::new(64, 20.0).unwrap();
        let u = Field::from_fn(&g, |x, y, z| {
            (-(x * x + y * y + z * z) / 2.0).exp() + 0.5 * (-((x - 1.0).powi(2) + y * y + (z + 2.0).powi(2))).exp()
        });
        let v = newtonian_potential(&u);
        let lap = divergence(&gradient(&v));
        let mean = u.mean();
        let diff = lap.zip_map(&u, |l, uu| l + (uu - mean)).unwrap();
        assert!(diff.l2_norm() < 1e-10, "{}", diff.l2_norm());
    }

    #[test]
    fn free_potential_limits() {
        let (m, s) = (2.0, 0.5);
        let far = gaussian_free_potential(m, s, 20.0);
        assert!((far - m / (4.0 * PI * 20.0)).abs() < 1e-15);
        let near = gaussian_free_potential(m, s, 1e-3);
        assert!((near - gaussian_free_potential(m, s, 0.0)).abs() < 1e-5);
        // slope vs central difference
        let r = 0.8;
        let h = 1e-5;
        let fd = (gaussian_free_potential(m, s, r + h) - gaussian_free_potential(m, s, r - h)) / (2.0 * h);
        assert!((fd - gaussian_free_potential_slope(m, s, r)).abs() < 1e-8);
    }
}
