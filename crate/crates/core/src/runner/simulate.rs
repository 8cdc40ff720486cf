use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::integrators::{run, RunResult, RunVerdict};
use crate::model::{classify_regime, existence_time_estimate, Verdict};
use crate::spectral::{io::write_snapshot, perturb, potential_discrepancy, sample_profile, Field};

/// Scalar outcome of one simulation, shared by `simulate` and sweep rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub verdict: RunVerdict,
    pub t_final: f64,
    pub steps: usize,
    pub rejected: usize,
    pub l1: f64,
    pub lbeta: f64,
    pub linf: f64,
    pub nonlocal_mass: f64,
}

impl RunSummary {
    pub fn of(result: &RunResult) -> Self {
        let last = result.final_row();
        Self {
            verdict: result.verdict,
            t_final: last.t,
            steps: result.accepted_steps,
            rejected: result.rejected_steps,
            l1: last.l1,
            lbeta: last.lbeta,
            linf: last.linf,
            nonlocal_mass: last.nonlocal_mass,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Simulation {
    pub initial: Field,
    pub result: RunResult,
    /// Relative mismatch of the initial force against the whole-space force.
    pub potential_discrepancy: Option<f64>,
    pub seed: Option<u64>,
}

/// Samples the initial state, applying the perturbation with `seed` when
/// given (overriding the configured seed).
pub fn initial_state(config: &ExperimentConfig, seed: Option<u64>) -> Result<(Field, Option<u64>)> {
    let grid = config.grid.build()?;
    let mut u0 = sample_profile(&grid, &config.profile)?;
    let mut used = None;
    if let Some(mut p) = config.perturbation {
        if let Some(s) = seed {
            p.seed = s;
        }
        used = Some(p.seed);
        u0 = perturb(&u0, &p)?;
    }
    Ok((u0, used))
}

pub fn simulate(config: &ExperimentConfig, seed: Option<u64>) -> Result<Simulation> {
    let (u0, seed) = initial_state(config, seed)?;
    let discrepancy = potential_discrepancy(&u0, &config.profile);
    let result = run(&u0, &config.model, &config.solver)?;
    Ok(Simulation {
        initial: u0,
        result,
        potential_discrepancy: discrepancy,
        seed,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulationReport {
    pub config: ExperimentConfig,
    pub seed: Option<u64>,
    pub regime: Verdict,
    /// Lower bound on the existence time from the scalar majorant.
    pub existence_time_estimate: f64,
    pub potential_discrepancy: Option<f64>,
    pub summary: RunSummary,
    pub trace_path: PathBuf,
    pub field_path: Option<PathBuf>,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| Error::Io(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Runs the experiment and writes the trace CSV, the JSON report and,
/// when requested, the final field under `out_dir`.
pub fn cmd_simulate(config: &ExperimentConfig, out_dir: &Path, seed: Option<u64>) -> Result<SimulationReport> {
    let sim = simulate(config, seed)?;
    let trace_path = out_dir.join(&config.outputs.trace_path);
    let mut w = create(&trace_path)?;
    match sim.seed {
        Some(s) => writeln!(w, "# seed={s}")?,
        None => writeln!(w, "# seed=none")?,
    }
    sim.result.write_trace_csv(&mut w)?;
    w.flush()?;

    let field_path = if config.outputs.field_dump {
        let p = trace_path.with_extension("field.bin");
        let mut fw = create(&p)?;
        write_snapshot(&mut fw, &sim.result.final_state, sim.result.final_time())?;
        fw.flush()?;
        Some(p)
    } else {
        None
    };

    let report = SimulationReport {
        config: config.clone(),
        seed: sim.seed,
        regime: classify_regime(&config.model)?.verdict,
        existence_time_estimate: existence_time_estimate(sim.initial.linf_norm(), &config.model)?,
        potential_discrepancy: sim.potential_discrepancy,
        summary: RunSummary::of(&sim.result),
        trace_path,
        field_path,
    };
    write_json(&out_dir.join(&config.outputs.report_path), &report)?;
    Ok(report)
}
