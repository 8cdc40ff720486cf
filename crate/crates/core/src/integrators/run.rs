//! Adaptive time loop with numerical blow-up detection.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::config::{Scheme, SolverConfig};
use super::duhamel::step_duhamel;
use super::imex::step_imex;
use super::rhs::transport_speed;
use super::step::{clamp_negatives, within_budget, RunState};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::spectral::Field;

/// How a run ended. `BlowupDetected` only says that the sup norm crossed the
/// configured threshold; it is a numerical observation, not a proof.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RunVerdict {
    ReachedTEnd,
    BlowupDetected,
    DtUnderflow,
}

impl RunVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            RunVerdict::ReachedTEnd => "ReachedTEnd",
            RunVerdict::BlowupDetected => "BlowupDetected",
            RunVerdict::DtUnderflow => "DtUnderflow",
        }
    }
}

impl std::fmt::Display for RunVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub t: f64,
    /// Step that produced this sample; zero for the initial row.
    pub dt: f64,
    pub l1: f64,
    /// `‖u‖_{L^β}`.
    pub lbeta: f64,
    /// `‖u‖_{L^{β+α−1}}`.
    pub lbam1: f64,
    pub linf: f64,
    /// `∫ u^β`.
    pub nonlocal_mass: f64,
}

impl TraceRow {
    pub fn measure(t: f64, dt: f64, u: &Field, params: &ModelParams) -> Self {
        let mass = u.nonlocal_mass(params.beta);
        let k = params.beta + params.alpha - 1.0;
        Self {
            t,
            dt,
            l1: u.integrate_with(f64::abs),
            lbeta: mass.powf(1.0 / params.beta),
            lbam1: u.integrate_with(|v| v.max(0.0).powf(k)).powf(1.0 / k),
            linf: u.linf_norm(),
            nonlocal_mass: mass,
        }
    }
}

pub const TRACE_HEADER: &str = "t,dt,l1,lbeta,lbam1,linf,nonlocal_mass,scheme";

#[derive(Debug, Clone)]
pub struct RunResult {
    pub trace: Vec<TraceRow>,
    pub verdict: RunVerdict,
    pub final_state: Field,
    pub scheme: Scheme,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl RunResult {
    pub fn final_time(&self) -> f64 {
        self.trace.last().map_or(0.0, |r| r.t)
    }

    pub fn final_row(&self) -> &TraceRow {
        self.trace.last().expect("trace holds the initial row")
    }

    pub fn write_trace_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{TRACE_HEADER}")?;
        for r in &self.trace {
            writeln!(
                w,
                "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{}",
                r.t,
                r.dt,
                r.l1,
                r.lbeta,
                r.lbam1,
                r.linf,
                r.nonlocal_mass,
                self.scheme.as_str()
            )?;
        }
        Ok(())
    }
}

/// `cfl · min(h / max σu^{σ−1}|∇v|, 1/(α ‖u‖_∞^{α−1} (1 + ∫u^β)))`.
pub fn stable_dt(u: &Field, params: &ModelParams, config: &SolverConfig) -> f64 {
    let h = u.grid().spacing();
    let transport = if config.terms.transport {
        let speed = transport_speed(u, params);
        if speed > 0.0 { h / speed } else { f64::INFINITY }
    } else {
        f64::INFINITY
    };
    let reaction = if config.terms.reaction {
        let linf = u.linf_norm();
        let rate = params.alpha * linf.powf(params.alpha - 1.0) * (1.0 + u.nonlocal_mass(params.beta));
        if rate > 0.0 { 1.0 / rate } else { f64::INFINITY }
    } else {
        f64::INFINITY
    };
    config.cfl_safety * transport.min(reaction)
}

pub fn step(state: &RunState, params: &ModelParams, config: &SolverConfig) -> Result<RunState> {
    match config.scheme {
        Scheme::Imex1 | Scheme::Imex2 => step_imex(state, params, config),
        Scheme::Duhamel => step_duhamel(state, params, config),
    }
}

/// Advances `u0` to `t_end` or until the run is stopped by the blow-up or
/// step-size criteria.
pub fn run(u0: &Field, params: &ModelParams, config: &SolverConfig) -> Result<RunResult> {
    params.validate()?;
    config.validate()?;
    if !u0.is_finite() {
        return Err(Error::NonFinite { term: "initial data" });
    }
    if !within_budget(u0) {
        return Err(Error::Precondition(format!(
            "initial data must be nonnegative, min is {}",
            u0.min()
        )));
    }
    let mut u = u0.clone();
    clamp_negatives(&mut u);
    let threshold = config.blowup_linf_factor * u.linf_norm();

    let mut trace = vec![TraceRow::measure(0.0, 0.0, &u, params)];
    let mut state = RunState::new(u, config.dt_init);
    let mut verdict = RunVerdict::ReachedTEnd;
    while state.t < config.t_end {
        let remaining = config.t_end - state.t;
        let proposal = stable_dt(&state.u, params, config).min(config.dt_init);
        if proposal < config.dt_min && remaining > config.dt_min {
            verdict = RunVerdict::DtUnderflow;
            break;
        }
        let last = remaining <= proposal * (1.0 + 1e-9);
        state.dt = if last { remaining } else { proposal };
        state = match step(&state, params, config) {
            Ok(s) => s,
            Err(Error::DtUnderflow { .. }) => {
                verdict = RunVerdict::DtUnderflow;
                break;
            }
            Err(e) => return Err(e),
        };
        if last && (state.t - config.t_end).abs() <= 1e-12 * config.t_end {
            state.t = config.t_end;
        }
        let row = TraceRow::measure(state.t, state.dt, &state.u, params);
        trace.push(row);
        if threshold > 0.0 && row.linf > threshold {
            verdict = RunVerdict::BlowupDetected;
            break;
        }
    }
    Ok(RunResult {
        trace,
        verdict,
        final_state: state.u,
        scheme: config.scheme,
        accepted_steps: state.step_count,
        rejected_steps: state.rejected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;

    /// RK4 with a fine fixed step for `y′ = y^α (1 − y^β L³)`.
    fn scalar_oracle(y0: f64, t: f64, alpha: f64, beta: f64, l: f64) -> f64 {
        let f = |y: f64| y.powf(alpha) * (1.0 - y.powf(beta) * l.powi(3));
        let steps = 200_000;
        let h = t / steps as f64;
        let mut y = y0;
        for _ in 0..steps {
            let k1 = f(y);
            let k2 = f(y + 0.5 * h * k1);
            let k3 = f(y + 0.5 * h * k2);
            let k4 = f(y + h * k3);
            y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        y
    }

    #[test]
    fn zero_data_stays_zero() {
        let g = Grid::new(16, 4.0).unwrap();
        let p = ModelParams::new(3, 1.0, 2.0, 3.0, 4.0).unwrap();
        let config = SolverConfig { t_end: 0.1, ..SolverConfig::default() };
        let r = run(&Field::zeros(&g), &p, &config).unwrap();
        assert_eq!(r.verdict, RunVerdict::ReachedTEnd);
        assert_eq!(r.final_time(), 0.1);
        assert!(r.trace.iter().all(|row| row.linf == 0.0 && row.l1 == 0.0));
        assert!(r.trace.windows(2).all(|w| w[1].t > w[0].t));
    }

    #[test]
    fn homogeneous_run_tracks_scalar_ode() {
        let l = 2.0;
        let g = Grid::new(16, l).unwrap();
        let p = ModelParams::new(3, 1.0, 2.0, 3.0, l).unwrap();
        let config = SolverConfig {
            t_end: 1.0,
            dt_init: 2e-3,
            dt_min: 1e-9,
            cfl_safety: 0.1,
            ..SolverConfig::default()
        };
        let r = run(&Field::constant(&g, 0.2), &p, &config).unwrap();
        assert_eq!(r.verdict, RunVerdict::ReachedTEnd);
        for row in r.trace.iter().step_by(50) {
            let y = scalar_oracle(0.2, row.t, 2.0, 3.0, l);
            assert!((row.linf - y).abs() < 1e-6, "t={} {} vs {y}", row.t, row.linf);
        }
    }

    #[test]
    fn trace_csv_has_stable_columns() {
        let g = Grid::new(16, 4.0).unwrap();
        let p = ModelParams::new(3, 1.0, 2.0, 3.0, 4.0).unwrap();
        let config = SolverConfig { t_end: 0.02, ..SolverConfig::default() };
        let r = run(&Field::constant(&g, 0.1), &p, &config).unwrap();
        let mut buf = Vec::new();
        r.write_trace_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(TRACE_HEADER));
        assert_eq!(lines.count(), r.trace.len());
        assert!(text.lines().nth(1).unwrap().ends_with(",IMEX2"));
    }

    #[test]
    fn negative_initial_data_is_rejected() {
        let g = Grid::new(16, 4.0).unwrap();
        let p = ModelParams::new(3, 1.0, 2.0, 3.0, 4.0).unwrap();
        let mut u = Field::constant(&g, 1.0);
        u.values_mut()[5] = -0.1;
        assert!(matches!(run(&u, &p, &SolverConfig::default()), Err(Error::Precondition(_))));
    }
}
