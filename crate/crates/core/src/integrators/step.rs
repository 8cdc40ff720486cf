use super::config::SolverConfig;
use crate::error::{Error, Result};
use crate::spectral::Field;

/// Relative undershoot tolerated in an accepted state: samples down to
/// `−NEGATIVITY_BUDGET · max u` are clamped to zero, anything lower rejects
/// the step.
pub const NEGATIVITY_BUDGET: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct RunState {
    pub t: f64,
    pub u: Field,
    /// Step to attempt next; after a step, the step that was taken.
    pub dt: f64,
    pub step_count: usize,
    /// Cumulative number of rejected attempts.
    pub rejected: usize,
}

impl RunState {
    pub fn new(u: Field, dt: f64) -> Self {
        Self {
            t: 0.0,
            u,
            dt,
            step_count: 0,
            rejected: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Rejection {
    NonContraction,
}

pub(crate) fn within_budget(u: &Field) -> bool {
    u.min() >= -NEGATIVITY_BUDGET * u.max().max(0.0)
}

pub(crate) fn clamp_negatives(u: &mut Field) {
    for v in u.values_mut() {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
}

/// Runs `attempt` with the state's `dt`, halving on rejection until it is
/// accepted or the step falls below `dt_min`.
pub(crate) fn advance(
    state: &RunState,
    config: &SolverConfig,
    mut attempt: impl FnMut(&Field, f64) -> Result<std::result::Result<Field, Rejection>>,
) -> Result<RunState> {
    let mut dt = state.dt;
    let mut rejected = state.rejected;
    loop {
        match attempt(&state.u, dt)? {
            Ok(mut u) if within_budget(&u) => {
                clamp_negatives(&mut u);
                return Ok(RunState {
                    t: state.t + dt,
                    u,
                    dt,
                    step_count: state.step_count + 1,
                    rejected,
                });
            }
            _ => {
                rejected += 1;
                dt *= 0.5;
                if dt < config.dt_min {
                    return Err(Error::DtUnderflow {
                        t: state.t,
                        dt,
                        dt_min: config.dt_min,
                    });
                }
            }
        }
    }
}
