use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrators::{rhs, RunResult};
use crate::model::ModelParams;
use crate::spectral::Field;

/// Slack added to the `L^β` bound before comparing with the trace.
pub const LBETA_SLACK: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LbetaBound {
    /// `1 + (β−1)/(β+σ−1)`.
    pub constant: f64,
    /// `max(∫u₀^β, constant)`.
    pub bound: f64,
    pub max_observed: f64,
    pub holds: bool,
}

/// Bound constant `1 + (β−1)/(β+σ−1)`, stated for `σ + 1 = α` only.
pub fn lbeta_bound_constant(params: &ModelParams) -> Result<f64> {
    if (params.sigma + 1.0 - params.alpha).abs() > 1e-9 * params.alpha {
        return Err(Error::Precondition(format!(
            "the L^beta bound is only available for sigma + 1 = alpha, got sigma = {}, alpha = {}",
            params.sigma, params.alpha
        )));
    }
    Ok(1.0 + (params.beta - 1.0) / (params.beta + params.sigma - 1.0))
}

pub fn lbeta_bound(result: &RunResult, params: &ModelParams) -> Result<LbetaBound> {
    let constant = lbeta_bound_constant(params)?;
    let initial = result.trace.first().map_or(0.0, |r| r.nonlocal_mass);
    let bound = initial.max(constant);
    let max_observed = result.trace.iter().map(|r| r.nonlocal_mass).fold(0.0, f64::max);
    Ok(LbetaBound {
        constant,
        bound,
        max_observed,
        holds: result.trace.iter().all(|r| r.nonlocal_mass <= bound + LBETA_SLACK),
    })
}

/// True iff every trace sample satisfies `∫u^β ≤ bound + 1e−3`.
pub fn lbeta_bound_check(result: &RunResult, params: &ModelParams) -> Result<bool> {
    lbeta_bound(result, params).map(|b| b.holds)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PdeResidual {
    pub value: f64,
    /// Set when the right-hand side is too small to normalise by and
    /// `value` is the absolute residual.
    pub absolute: bool,
}

/// `‖(u₁ − u₀)/dt − rhs((u₀+u₁)/2)‖₂ / ‖rhs((u₀+u₁)/2)‖₂`.
pub fn pde_residual(before: &Field, after: &Field, dt: f64, params: &ModelParams) -> Result<PdeResidual> {
    if !(dt > 0.0) {
        return Err(Error::Precondition(format!("dt must be positive, got {dt}")));
    }
    let mid = before.zip_map(after, |a, b| 0.5 * (a + b))?;
    let f = rhs(&mid, params)?;
    let diff = after
        .zip_map(before, |a, b| (a - b) / dt)?
        .zip_map(&f, |d, r| d - r)?;
    let num = diff.l2_norm();
    let den = f.l2_norm();
    if den <= 1e-10 * mid.l2_norm() || den == 0.0 {
        Ok(PdeResidual { value: num, absolute: true })
    } else {
        Ok(PdeResidual { value: num / den, absolute: false })
    }
}
