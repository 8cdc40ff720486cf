//! Integrating-factor steppers. Diffusion is propagated exactly by
//! `E(τ) = e^{−|ξ|²τ}`; transport and reaction are explicit.
//!
//! * IMEX1: `û₁ = E(dt)(û + dt N̂(u))`
//! * IMEX2: `û* = E(dt/2)(û + dt/2 N̂(u))`, `û₁ = E(dt)û + dt E(dt/2) N̂(u*)`

use super::config::{Scheme, SolverConfig};
use super::rhs::{apply_heat, nonlinear_spectrum};
use super::step::{advance, RunState};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::spectral::Field;

pub(crate) fn imex1_update(u: &Field, dt: f64, params: &ModelParams, config: &SolverConfig) -> Result<Field> {
    let mut u_hat = u.spectrum();
    let n = nonlinear_spectrum(u, &u_hat, params, config.terms)?;
    u_hat.axpby(1.0, dt, &n);
    apply_heat(&mut u_hat, dt, config.terms);
    Ok(u_hat.to_field())
}

pub(crate) fn imex2_update(u: &Field, dt: f64, params: &ModelParams, config: &SolverConfig) -> Result<Field> {
    let terms = config.terms;
    let u_hat = u.spectrum();
    let n0 = nonlinear_spectrum(u, &u_hat, params, terms)?;
    let mut mid = u_hat.clone();
    mid.axpby(1.0, 0.5 * dt, &n0);
    apply_heat(&mut mid, 0.5 * dt, terms);
    let mid_field = mid.to_field();
    let mut n1 = nonlinear_spectrum(&mid_field, &mid, params, terms)?;
    apply_heat(&mut n1, 0.5 * dt, terms);
    let mut out = u_hat;
    apply_heat(&mut out, dt, terms);
    out.axpby(1.0, dt, &n1);
    Ok(out.to_field())
}

/// One accepted IMEX step of the scheme named in `config`.
pub fn step_imex(state: &RunState, params: &ModelParams, config: &SolverConfig) -> Result<RunState> {
    let update = match config.scheme {
        Scheme::Imex1 => imex1_update,
        Scheme::Imex2 => imex2_update,
        Scheme::Duhamel => {
            return Err(Error::InvalidConfig(
                "step_imex needs scheme IMEX1 or IMEX2".to_string(),
            ))
        }
    };
    advance(state, config, |u, dt| update(u, dt, params, config).map(Ok))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrators::config::TermMask;
    use crate::spectral::Grid;

    fn params(l: f64) -> ModelParams {
        ModelParams::new(3, 1.0, 2.0, 3.0, l).unwrap()
    }

    fn cfg(scheme: Scheme) -> SolverConfig {
        SolverConfig { scheme, ..SolverConfig::default() }
    }

    #[test]
    fn zero_is_a_fixed_point() {
        let g = Grid::new(16, 4.0).unwrap();
        for scheme in [Scheme::Imex1, Scheme::Imex2] {
            let s = RunState::new(Field::zeros(&g), 0.01);
            let next = step_imex(&s, &params(4.0), &cfg(scheme)).unwrap();
            assert!(next.u.linf_norm() == 0.0);
            assert!((next.t - 0.01).abs() < 1e-16);
            assert_eq!(next.step_count, 1);
        }
    }

    #[test]
    fn duhamel_scheme_is_rejected() {
        let g = Grid::new(16, 4.0).unwrap();
        let s = RunState::new(Field::zeros(&g), 0.01);
        assert!(step_imex(&s, &params(4.0), &cfg(Scheme::Duhamel)).is_err());
    }

    /// Heat kernel from a Gaussian of variance s²: variance s² + 2t per axis.
    #[test]
    fn pure_diffusion_matches_heat_kernel() {
        let l = 24.0;
        let g = Grid::new(64, l).unwrap();
        let s2 = 1.0;
        let gauss = |var: f64| {
            move |x: f64, y: f64, z: f64| {
                (-(x * x + y * y + z * z) / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).powf(1.5)
            }
        };
        let u0 = Field::from_fn(&g, gauss(s2));
        let config = SolverConfig {
            terms: TermMask::heat_only(),
            ..cfg(Scheme::Imex2)
        };
        let mut state = RunState::new(u0, 0.1);
        for _ in 0..5 {
            state = step_imex(&state, &params(l), &config).unwrap();
        }
        let exact = Field::from_fn(&g, gauss(s2 + 2.0 * state.t));
        let err = state.u.zip_map(&exact, |a, b| a - b).unwrap().linf_norm();
        assert!(err < 1e-8 * exact.linf_norm(), "{err}");
    }

    #[test]
    fn overshooting_step_is_halved() {
        // u ≡ 1, L = 4: Euler gives 1 − 63 dt, negative for dt > 1/63.
        let g = Grid::new(16, 4.0).unwrap();
        let s = RunState::new(Field::constant(&g, 1.0), 0.05);
        let next = step_imex(&s, &params(4.0), &cfg(Scheme::Imex1)).unwrap();
        assert_eq!(next.dt, 0.0125);
        assert_eq!(next.rejected, 2);
        assert!((next.u.min() - (1.0 - 63.0 * 0.0125)).abs() < 1e-12);

        let tight = SolverConfig { dt_min: 0.02, ..cfg(Scheme::Imex1) };
        let out = step_imex(&s, &params(4.0), &tight);
        assert!(matches!(out, Err(Error::DtUnderflow { .. })), "{out:?}");
    }
}
