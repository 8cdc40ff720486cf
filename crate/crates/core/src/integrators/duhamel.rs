//! Picard iteration on the mild form
//! `u(t+dt) = E(dt)u + ∫₀^dt E(dt−s) N(u(t+s)) ds`.
//!
//! The outer integral uses the midpoint rule; the midpoint state comes from
//! the trapezoid rule on `[0, dt/2]`. Each sweep re-evaluates `N` at the
//! current midpoint iterate, so the map is a contraction for small `dt`.

use serde::Serialize;

use super::config::SolverConfig;
use super::rhs::{apply_heat, nonlinear_spectrum};
use super::step::{advance, Rejection, RunState};
use crate::error::Result;
use crate::model::ModelParams;
use crate::spectral::{Field, Spectrum};

/// Consecutive growing iterate distances that count as non-contraction.
const GROWTH_STREAK: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum PicardStatus {
    Converged,
    /// `picard_max_iters` reached without meeting `picard_tol`.
    Exhausted,
    NonContraction,
}

#[derive(Debug, Clone)]
pub struct PicardOutcome {
    pub u: Field,
    /// Number of evaluations of the map.
    pub iterations: usize,
    /// Last `L^∞` distance between successive endpoint iterates.
    pub last_distance: f64,
    pub status: PicardStatus,
}

/// Iterates the mild-form map for one step of length `dt` from `u`.
pub fn picard_step(u: &Field, dt: f64, params: &ModelParams, config: &SolverConfig) -> Result<PicardOutcome> {
    let terms = config.terms;
    let u_hat = u.spectrum();
    let n0 = nonlinear_spectrum(u, &u_hat, params, terms)?;

    let mut half_u = u_hat.clone();
    apply_heat(&mut half_u, 0.5 * dt, terms);
    let mut full_u = u_hat.clone();
    apply_heat(&mut full_u, dt, terms);
    let mut half_n0 = n0;
    apply_heat(&mut half_n0, 0.5 * dt, terms);

    let mut mid = half_u.clone();
    mid.axpby(1.0, 0.5 * dt, &half_n0);

    let mut previous: Option<Field> = None;
    let mut last_distance = f64::INFINITY;
    let mut streak = 0;
    for iteration in 1..=config.picard_max_iters {
        let mid_field = mid.to_field();
        let nk = nonlinear_spectrum(&mid_field, &mid, params, terms)?;
        let mut half_nk = nk.clone();
        apply_heat(&mut half_nk, 0.5 * dt, terms);
        let mut end: Spectrum = full_u.clone();
        end.axpby(1.0, dt, &half_nk);
        let end_field = end.to_field();

        if let Some(prev) = &previous {
            let distance = end_field.zip_map(prev, |a, b| a - b)?.linf_norm();
            if distance < config.picard_tol {
                return Ok(PicardOutcome {
                    u: end_field,
                    iterations: iteration,
                    last_distance: distance,
                    status: PicardStatus::Converged,
                });
            }
            streak = if distance > last_distance { streak + 1 } else { 0 };
            last_distance = distance;
            if streak >= GROWTH_STREAK {
                return Ok(PicardOutcome {
                    u: end_field,
                    iterations: iteration,
                    last_distance,
                    status: PicardStatus::NonContraction,
                });
            }
        }

        mid = half_u.clone();
        mid.axpby(1.0, 0.25 * dt, &half_n0);
        mid.axpby(1.0, 0.25 * dt, &nk);
        previous = Some(end_field);
    }
    Ok(PicardOutcome {
        u: previous.expect("at least one iteration"),
        iterations: config.picard_max_iters,
        last_distance,
        status: PicardStatus::Exhausted,
    })
}

pub fn step_duhamel(state: &RunState, params: &ModelParams, config: &SolverConfig) -> Result<RunState> {
    advance(state, config, |u, dt| {
        let out = picard_step(u, dt, params, config)?;
        Ok(match out.status {
            PicardStatus::NonContraction => Err(Rejection::NonContraction),
            _ => Ok(out.u),
        })
    })
}
