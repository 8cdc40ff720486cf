//! `chemolab`: classify parameter regimes, run simulations and sweeps, and
//! execute the property check suite.
//!
//! Exit codes: 0 success, 1 invalid input or failed check, 2 I/O or format
//! error, 3 numerical abort.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chemolab_core::model::{classify_regime, exponent_ledger, ModelParams};
use chemolab_core::runner::{
    cmd_check, cmd_scaling_test, cmd_simulate, cmd_sweep, parse_config, parse_sweep, Fault,
};
use chemolab_core::{Error, Result};
use clap::{Parser, Subcommand};
use serde_json::json;

#[derive(Parser)]
#[command(name = "chemolab", version, about = "Chemotaxis-growth laboratory with nonlocal reaction")]
struct Cli {
    /// Directory receiving every output file.
    #[arg(long, global = true, env = "CHEMOLAB_OUT_DIR", default_value = ".")]
    out: PathBuf,

    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for the initial-data perturbation, overriding the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the regime verdict and inequality margins for one exponent tuple.
    Classify {
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        /// Also print the exponent ledger at this L^k index.
        #[arg(long)]
        k: Option<f64>,
    },
    /// Run one experiment and write its trace and report.
    Simulate { config: PathBuf },
    /// Evaluate a parameter sweep and write `sweep.csv`.
    Sweep { spec: PathBuf },
    /// Run the property suite and write `check_report.json`.
    Check {
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
    /// Compare a run against its rescaled counterpart on a shrunken box.
    ScalingTest {
        config: PathBuf,
        #[arg(long, default_value_t = 1.5)]
        lambda: f64,
        #[arg(long, default_value_t = 0.05)]
        t_probe: f64,
    },
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Format(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn classify(n: u32, sigma: f64, alpha: f64, beta: f64, k: Option<f64>) -> Result<()> {
    let params = ModelParams::new(n, sigma, alpha, beta, 1.0)?;
    let regime = classify_regime(&params)?;
    let mut out = json!({ "params": params, "regime": regime });
    if let Some(k) = k {
        out["ledger"] = json!(exponent_ledger(&params, k)?);
    }
    print_json(&out)
}

fn sweep(spec_path: &Path, out_dir: &Path, threads: Option<usize>, seed: Option<u64>) -> Result<()> {
    let spec = parse_sweep(spec_path)?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::Io(format!("cannot create {}: {e}", out_dir.display())))?;
    let path = out_dir.join("sweep.csv");
    let file = File::create(&path).map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    let cells = cmd_sweep(&spec, threads, seed, &mut w)?;
    w.flush()?;
    let failed = cells.iter().filter(|c| c.regime.is_err() || matches!(c.run, Some(Err(_)))).count();
    eprintln!("{} cells written to {} ({failed} with errors)", cells.len(), path.display());
    Ok(())
}

fn check(out_dir: &Path, fault: Option<&str>) -> Result<bool> {
    let fault = match fault {
        None => None,
        Some(s) => Some(Fault::parse(s).ok_or_else(|| Error::InvalidConfig(format!("unknown fault {s:?}")))?),
    };
    let report = cmd_check(&out_dir.join("check_report.json"), fault)?;
    for r in &report.records {
        println!("{:<28} {}  margin {:+.3e}", r.check_name, if r.pass { "pass" } else { "FAIL" }, r.margin);
    }
    if !report.ok() {
        eprintln!("failed checks: {}", report.failed.join(", "));
    }
    Ok(report.ok())
}

fn dispatch(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Classify { n, sigma, alpha, beta, k } => classify(n, sigma, alpha, beta, k).map(|_| true),
        Command::Simulate { config } => {
            let cfg = parse_config(&config)?;
            let report = cmd_simulate(&cfg, &cli.out, cli.seed)?;
            print_json(&json!(report.summary))?;
            Ok(true)
        }
        Command::Sweep { spec } => sweep(&spec, &cli.out, cli.threads, cli.seed).map(|_| true),
        Command::Check { inject_fault } => check(&cli.out, inject_fault.as_deref()),
        Command::ScalingTest { config, lambda, t_probe } => {
            let cfg = parse_config(&config)?;
            let report = cmd_scaling_test(&cfg, lambda, t_probe, &cli.out)?;
            print_json(&json!(report))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
