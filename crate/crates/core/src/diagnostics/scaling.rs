//! Scaling `u_λ(x, t) = λ^{n/β} u(λx, λ²t)`.
//!
//! The transform keeps `∫u^β` fixed. When `σ = α − 1 = 2β/n` every term of
//! the equation scales like `u_t`, so `u_λ` solves the same problem on the
//! box shrunk by `λ`. The covariance test exploits that the shrunken box with
//! the same number of points maps grid onto grid: no interpolation is needed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrators::{run, RunVerdict, SolverConfig};
use crate::model::ModelParams;
use crate::spectral::{sample_profile, Field, Grid, ProfileSpec};

/// Smallest resolved feature, in grid cells.
pub const MIN_CELLS_PER_WIDTH: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingSpec {
    pub lambda: f64,
    pub params: ModelParams,
}

impl ScalingSpec {
    pub const LAMBDA_RANGE: (f64, f64) = (0.25, 4.0);

    pub fn new(lambda: f64, params: ModelParams) -> Result<Self> {
        let spec = Self { lambda, params };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = Self::LAMBDA_RANGE;
        if !(self.lambda >= lo && self.lambda <= hi) {
            return Err(Error::InvalidParams(format!(
                "scaling factor must lie in [{lo}, {hi}], got {}",
                self.lambda
            )));
        }
        self.params.validate()
    }

    /// Amplitude exponent `n/β`.
    pub fn exponent(&self) -> f64 {
        f64::from(self.params.n) / self.params.beta
    }
}

fn check_resolution(profile: &ProfileSpec, grid: &Grid) -> Result<()> {
    let h = grid.spacing();
    for b in profile.bumps() {
        if b.width < MIN_CELLS_PER_WIDTH * h {
            return Err(Error::Resolution(format!(
                "feature width {} is below {MIN_CELLS_PER_WIDTH} grid cells (h = {h})",
                b.width
            )));
        }
    }
    Ok(())
}

/// Samples `λ^{n/β} u₀(λx)` on `grid` from the analytic profile.
pub fn scaling_rescale(profile: &ProfileSpec, grid: &Grid, spec: &ScalingSpec) -> Result<Field> {
    spec.validate()?;
    let scaled = profile.rescaled(spec.lambda, spec.exponent());
    check_resolution(&scaled, grid)?;
    sample_profile(grid, &scaled)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub lambda: f64,
    pub t_probe: f64,
    /// `‖w_λ(t) − (w)_λ(t)‖₂ / ‖w_λ(t)‖₂`.
    pub residual: f64,
    pub base_verdict: RunVerdict,
    pub scaled_verdict: RunVerdict,
}

/// Evolves `u₀` on the box of side `L` to `λ²t` and `(u₀)_λ` on the box of
/// side `L/λ` to `t`, then compares the second with the rescaled first.
///
/// `solver.dt_init` and `solver.dt_min` refer to the unscaled run; the
/// scaled run uses them divided by `λ²`.
pub fn scaling_solution_test(
    profile: &ProfileSpec,
    grid: &Grid,
    spec: &ScalingSpec,
    t_probe: f64,
    solver: &SolverConfig,
) -> Result<ScalingReport> {
    spec.validate()?;
    let p = spec.params;
    if (p.sigma + 1.0 - p.alpha).abs() > 1e-9 * p.alpha {
        return Err(Error::Precondition(format!(
            "the covariance test needs sigma + 1 = alpha, got sigma = {}, alpha = {}",
            p.sigma, p.alpha
        )));
    }
    if p.n != 3 {
        return Err(Error::Precondition(format!("simulations are three-dimensional, got n = {}", p.n)));
    }
    if !(t_probe > 0.0) {
        return Err(Error::Precondition(format!("t_probe must be positive, got {t_probe}")));
    }
    let lambda = spec.lambda;
    let l2 = lambda * lambda;
    let factor = lambda.powf(spec.exponent());

    check_resolution(profile, grid)?;
    let base_params = ModelParams { domain_length: grid.length(), ..p };
    let base_u0 = sample_profile(grid, profile)?;
    let base_cfg = SolverConfig { t_end: l2 * t_probe, ..*solver };
    let base = run(&base_u0, &base_params, &base_cfg)?;

    let small = Grid::new(grid.n(), grid.length() / lambda)?;
    let scaled_profile = profile.rescaled(lambda, spec.exponent());
    check_resolution(&scaled_profile, &small)?;
    let scaled_params = ModelParams { domain_length: small.length(), ..p };
    let scaled_u0 = sample_profile(&small, &scaled_profile)?;
    let scaled_cfg = SolverConfig {
        t_end: t_probe,
        dt_init: solver.dt_init / l2,
        dt_min: solver.dt_min / l2,
        ..*solver
    };
    let scaled = run(&scaled_u0, &scaled_params, &scaled_cfg)?;

    // Point i of the small box sits at x = x_i/λ, so (w)_λ(x_i/λ) = λ^{n/β} w(x_i).
    let mapped = Field::from_values(
        &small,
        base.final_state.values().iter().map(|v| factor * v).collect(),
    )?;
    let diff = scaled.final_state.zip_map(&mapped, |a, b| a - b)?;
    let norm = scaled.final_state.l2_norm();
    let residual = if norm > 0.0 { diff.l2_norm() / norm } else { diff.l2_norm() };
    Ok(ScalingReport {
        lambda,
        t_probe,
        residual,
        base_verdict: base.verdict,
        scaled_verdict: scaled.verdict,
    })
}
