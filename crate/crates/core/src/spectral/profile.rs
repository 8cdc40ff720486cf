//! Analytic initial profiles.
//!
//! Gaussians are evaluated at the minimum-image displacement, i.e. only the
//! nearest periodic copy contributes. Widths above `L/8` are rejected since
//! the neglected copies would then matter.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::field::Field;
use super::grid::Grid;
use super::potential::{gaussian_free_potential_slope, gradient};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianBump {
    pub amplitude: f64,
    pub width: f64,
    #[serde(default)]
    pub center: [f64; 3],
}

impl GaussianBump {
    /// `∫ A exp(−|x|²/(2s²)) = A (2π s²)^{3/2}`.
    pub fn mass(&self) -> f64 {
        self.amplitude * (2.0 * PI * self.width * self.width).powf(1.5)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ProfileSpec {
    Gaussian(GaussianBump),
    MultiBump { bumps: Vec<GaussianBump> },
    Constant { value: f64 },
}

/// Smooth multiplicative perturbation `1 + a·w(x)` with `|w| ≤ 1`, built
/// from random low-wavenumber cosines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    pub amplitude: f64,
    #[serde(default = "Perturbation::default_modes")]
    pub modes: usize,
    pub seed: u64,
}

impl Perturbation {
    fn default_modes() -> usize {
        4
    }
}

impl ProfileSpec {
    pub fn bumps(&self) -> &[GaussianBump] {
        match self {
            ProfileSpec::Gaussian(b) => std::slice::from_ref(b),
            ProfileSpec::MultiBump { bumps } => bumps,
            ProfileSpec::Constant { .. } => &[],
        }
    }

    pub fn validate(&self, length: f64) -> Result<()> {
        match self {
            ProfileSpec::Constant { value } => {
                if !(*value >= 0.0) || !value.is_finite() {
                    return Err(Error::InvalidProfile(format!(
                        "constant value must be finite and non-negative, got {value}"
                    )));
                }
            }
            ProfileSpec::MultiBump { bumps } if bumps.is_empty() => {
                return Err(Error::InvalidProfile("multi_bump needs at least one bump".into()));
            }
            _ => {}
        }
        for b in self.bumps() {
            if !(b.amplitude >= 0.0) || !b.amplitude.is_finite() {
                return Err(Error::InvalidProfile(format!(
                    "amplitude must be finite and non-negative, got {}",
                    b.amplitude
                )));
            }
            if !(b.width > 0.0) || !b.width.is_finite() {
                return Err(Error::InvalidProfile(format!("width must be positive, got {}", b.width)));
            }
            if b.width > length / 8.0 {
                return Err(Error::InvalidProfile(format!(
                    "width {} exceeds L/8 = {}; nearest-image periodisation would be inaccurate",
                    b.width,
                    length / 8.0
                )));
            }
            if b.center.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidProfile("center must be finite".into()));
            }
        }
        Ok(())
    }

    pub fn total_mass(&self, length: f64) -> f64 {
        match self {
            ProfileSpec::Constant { value } => value * length.powi(3),
            _ => self.bumps().iter().map(GaussianBump::mass).sum(),
        }
    }

    pub fn peak(&self) -> f64 {
        match self {
            ProfileSpec::Constant { value } => *value,
            _ => self.bumps().iter().map(|b| b.amplitude).fold(0.0, f64::max),
        }
    }

    /// Profile of `λ^{e} u(λx)`; for Gaussians the widths and centres shrink
    /// by `λ` and amplitudes grow by `λ^e`.
    pub fn rescaled(&self, lambda: f64, exponent: f64) -> ProfileSpec {
        let factor = lambda.powf(exponent);
        let scale = |b: &GaussianBump| GaussianBump {
            amplitude: b.amplitude * factor,
            width: b.width / lambda,
            center: b.center.map(|c| c / lambda),
        };
        match self {
            ProfileSpec::Gaussian(b) => ProfileSpec::Gaussian(scale(b)),
            ProfileSpec::MultiBump { bumps } => ProfileSpec::MultiBump {
                bumps: bumps.iter().map(scale).collect(),
            },
            ProfileSpec::Constant { value } => ProfileSpec::Constant {
                value: value * factor,
            },
        }
    }
}

pub fn sample_profile(grid: &Grid, spec: &ProfileSpec) -> Result<Field> {
    spec.validate(grid.length())?;
    if let ProfileSpec::Constant { value } = spec {
        return Ok(Field::constant(grid, *value));
    }
    let bumps = spec.bumps().to_vec();
    Ok(Field::from_fn(grid, move |x, y, z| {
        bumps
            .iter()
            .map(|b| {
                let dx = grid.periodic_offset(x, b.center[0]);
                let dy = grid.periodic_offset(y, b.center[1]);
                let dz = grid.periodic_offset(z, b.center[2]);
                b.amplitude * (-(dx * dx + dy * dy + dz * dz) / (2.0 * b.width * b.width)).exp()
            })
            .sum()
    }))
}

/// Multiplies `u` by `1 + a·w(x)`, where `w` is a normalised sum of random
/// cosines with integer mode numbers up to `modes` per axis. Deterministic
/// in `seed`.
pub fn perturb(u: &Field, p: &Perturbation) -> Result<Field> {
    if !(0.0..1.0).contains(&p.amplitude) {
        return Err(Error::InvalidProfile(format!(
            "perturbation amplitude must lie in [0, 1), got {}",
            p.amplitude
        )));
    }
    if p.modes == 0 {
        return Err(Error::InvalidProfile("perturbation needs at least one mode".into()));
    }
    let grid = u.grid().clone();
    let base = 2.0 * PI / grid.length();
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let m = p.modes as i64;
    let waves: Vec<([f64; 3], f64, f64)> = (0..6)
        .map(|_| {
            let k = [0, 1, 2].map(|_| base * rng.gen_range(-m..=m) as f64);
            (k, rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.5..1.0))
        })
        .collect();
    let norm: f64 = waves.iter().map(|w| w.2).sum();
    let a = p.amplitude;
    let w = Field::from_fn(&grid, move |x, y, z| {
        waves
            .iter()
            .map(|(k, phase, c)| c * (k[0] * x + k[1] * y + k[2] * z + phase).cos())
            .sum::<f64>()
            / norm
    });
    u.zip_map(&w, move |v, wv| v * (1.0 + a * wv))
}

/// Relative discrepancy between the periodic force `∇v` and the whole-space
/// force of the same Gaussian bumps, `max|∇v_torus − ∇v_free| / max|∇v_free|`.
///
/// Measures how much the box truncation distorts the chemotactic drift of
/// the initial state. `None` for profiles without bumps.
pub fn potential_discrepancy(u: &Field, spec: &ProfileSpec) -> Option<f64> {
    let bumps = spec.bumps();
    if bumps.is_empty() {
        return None;
    }
    let grid = u.grid().clone();
    let v = super::potential::newtonian_potential(u);
    let force = gradient(&v);
    let mut max_diff: f64 = 0.0;
    let mut max_free: f64 = 0.0;
    for idx in 0..grid.len() {
        let (i, j, k) = grid.unravel(idx);
        let x = [grid.coord(i), grid.coord(j), grid.coord(k)];
        let mut free = [0.0; 3];
        for b in bumps {
            let d = [0, 1, 2].map(|a| grid.periodic_offset(x[a], b.center[a]));
            let r = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
            if r == 0.0 {
                continue;
            }
            let slope = gaussian_free_potential_slope(b.mass(), b.width, r);
            for a in 0..3 {
                free[a] += slope * d[a] / r;
            }
        }
        let diff = (0..3)
            .map(|a| (force[a].values()[idx] - free[a]).powi(2))
            .sum::<f64>()
            .sqrt();
        let mag = free.iter().map(|f| f * f).sum::<f64>().sqrt();
        max_diff = max_diff.max(diff);
        max_free = max_free.max(mag);
    }
    (max_free > 0.0).then(|| max_diff / max_free)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_profile() {
        let g = Grid::new(16, 4.0).unwrap();
        let u = sample_profile(&g, &ProfileSpec::Constant { value: 0.3 }).unwrap();
        assert!(u.values().iter().all(|&v| v == 0.3));
    }

    #[test]
    fn gaussian_peak_at_center() {
        let g = Grid::new(32, 32.0).unwrap();
        let spec = ProfileSpec::Gaussian(GaussianBump {
            amplitude: 1.0,
            width: 1.0,
            center: [0.0; 3],
        });
        let u = sample_profile(&g, &spec).unwrap();
        assert_eq!(u.linf_norm(), 1.0);
        assert_eq!(u.values()[g.index(16, 16, 16)], 1.0);
    }

    #[test]
    fn two_bump_mass() {
        let g = Grid::new(64, 16.0).unwrap();
        let bumps = vec![
            GaussianBump { amplitude: 1.0, width: 0.8, center: [-3.0, 0.0, 1.0] },
            GaussianBump { amplitude: 0.5, width: 1.2, center: [3.0, 2.0, -1.5] },
        ];
        let expected: f64 = bumps.iter().map(GaussianBump::mass).sum();
        let u = sample_profile(&g, &ProfileSpec::MultiBump { bumps }).unwrap();
        assert!((u.lk_norm(1.0).unwrap() - expected).abs() < 1e-8);
    }

    #[test]
    fn wide_gaussian_rejected() {
        let g = Grid::new(16, 8.0).unwrap();
        let spec = ProfileSpec::Gaussian(GaussianBump { amplitude: 1.0, width: 1.01, center: [0.0; 3] });
        assert!(matches!(sample_profile(&g, &spec), Err(Error::InvalidProfile(_))));
    }

    #[test]
    fn bump_wraps_across_boundary() {
        let g = Grid::new(32, 8.0).unwrap();
        let spec = ProfileSpec::Gaussian(GaussianBump { amplitude: 1.0, width: 0.5, center: [3.9, 0.0, 0.0] });
        let u = sample_profile(&g, &spec).unwrap();
        // x = −4 is 0.1 away from the centre through the boundary.
        let v = u.values()[g.index(0, 16, 16)];
        assert!((v - (-0.01f64 / 0.5).exp()).abs() < 1e-12);
    }

    #[test]
    fn perturbation_is_seeded_and_bounded() {
        let g = Grid::new(16, 8.0).unwrap();
        let u = Field::constant(&g, 1.0);
        let p = Perturbation { amplitude: 0.1, modes: 3, seed: 7 };
        let a = perturb(&u, &p).unwrap();
        let b = perturb(&u, &p).unwrap();
        assert_eq!(a, b);
        assert!(a.min() >= 0.9 - 1e-12 && a.max() <= 1.1 + 1e-12);
        let c = perturb(&u, &Perturbation { seed: 8, ..p }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn rescaled_profile_parameters() {
        let b = GaussianBump { amplitude: 2.0, width: 1.0, center: [1.0, -2.0, 0.0] };
        let r = ProfileSpec::Gaussian(b).rescaled(2.0, 1.0);
        assert_eq!(
            r,
            ProfileSpec::Gaussian(GaussianBump { amplitude: 4.0, width: 0.5, center: [0.5, -1.0, 0.0] })
        );
    }
}
