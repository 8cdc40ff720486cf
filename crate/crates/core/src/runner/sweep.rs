//! Parameter sweeps over up to two exponents.
//!
//! ```json
//! {
//!   "axes":  [ { "name": "alpha", "min": 1.1, "max": 6.0, "steps": 50 },
//!              { "name": "beta",  "min": 1.1, "max": 8.0, "steps": 50 } ],
//!   "fixed": { "n": 3, "sigma": 1.0 },
//!   "mode":  "ClassifyOnly",
//!   "balance": false,
//!   "max_cells": 4096,
//!   "template": { ...experiment document, required for "Simulate"... }
//! }
//! ```
//!
//! Cells are numbered row-major with the first axis outermost. With
//! `"balance": true`, `sigma` is set to `alpha − 1` in every cell.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::config::{parse_config_value, ExperimentConfig, Walker};
use super::simulate::{simulate, RunSummary};
use crate::error::{Error, Result};
use crate::model::{classify_regime, ModelParams, Regime};

pub const DEFAULT_MAX_CELLS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Exponent {
    #[serde(rename = "alpha")]
    Alpha,
    #[serde(rename = "beta")]
    Beta,
    #[serde(rename = "sigma")]
    Sigma,
}

impl Exponent {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "alpha" => Some(Exponent::Alpha),
            "beta" => Some(Exponent::Beta),
            "sigma" => Some(Exponent::Sigma),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepAxis {
    pub name: Exponent,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl SweepAxis {
    pub fn value(&self, i: usize) -> f64 {
        if self.steps <= 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.steps - 1) as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepMode {
    ClassifyOnly,
    Simulate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub axes: Vec<SweepAxis>,
    /// Values for the exponents not swept; `n` defaults to 3.
    pub fixed: ModelParams,
    pub mode: SweepMode,
    pub balance: bool,
    pub max_cells: usize,
    pub template: Option<ExperimentConfig>,
}

impl SweepSpec {
    pub fn cell_count(&self) -> usize {
        self.axes.iter().map(|a| a.steps.max(1)).product()
    }

    /// Parameters of cell `index`; validity is checked per cell later.
    pub fn cell_params(&self, index: usize) -> ModelParams {
        let mut p = self.fixed;
        let mut rest = index;
        let mut coords = vec![0; self.axes.len()];
        for (slot, axis) in self.axes.iter().enumerate().rev() {
            let steps = axis.steps.max(1);
            coords[slot] = rest % steps;
            rest /= steps;
        }
        for (axis, &i) in self.axes.iter().zip(&coords) {
            let v = axis.value(i);
            match axis.name {
                Exponent::Alpha => p.alpha = v,
                Exponent::Beta => p.beta = v,
                Exponent::Sigma => p.sigma = v,
            }
        }
        if self.balance {
            p.sigma = p.alpha - 1.0;
        }
        p
    }
}

pub fn parse_sweep_str(text: &str) -> Result<SweepSpec> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| Error::ConfigViolations(vec![format!("<root>: invalid JSON: {e}")]))?;
    let mut w = Walker::default();
    let Some(root) = w.object(&doc, "", &["axes", "fixed", "mode", "balance", "max_cells", "template"]) else {
        return Err(Error::ConfigViolations(w.errors));
    };

    let mode = match w.string(root, "", "mode") {
        None | Some("ClassifyOnly") => SweepMode::ClassifyOnly,
        Some("Simulate") => SweepMode::Simulate,
        Some(other) => {
            w.fail("mode", format!("expected ClassifyOnly or Simulate, got {other:?}"));
            SweepMode::ClassifyOnly
        }
    };
    let balance = w.boolean(root, "", "balance", false);
    let max_cells = w.uint(root, "", "max_cells", Some(DEFAULT_MAX_CELLS as u64)) as usize;

    let mut axes = Vec::new();
    match root.get("axes").and_then(Value::as_array) {
        None => w.fail("axes", "expected an array of one or two axes"),
        Some(list) => {
            if list.is_empty() || list.len() > 2 {
                w.fail("axes", format!("expected one or two axes, got {}", list.len()));
            }
            for (i, a) in list.iter().enumerate() {
                let path = format!("axes[{i}]");
                let Some(obj) = w.object(a, &path, &["name", "min", "max", "steps"]) else { continue };
                let name = match w.string(obj, &path, "name").map(|s| (s, Exponent::parse(s))) {
                    Some((_, Some(e))) => e,
                    Some((s, None)) => {
                        w.fail(&format!("{path}.name"), format!("expected alpha, beta or sigma, got {s:?}"));
                        continue;
                    }
                    None => {
                        w.fail(&format!("{path}.name"), "missing required field");
                        continue;
                    }
                };
                let axis = SweepAxis {
                    name,
                    min: w.num(obj, &path, "min", None),
                    max: w.num(obj, &path, "max", None),
                    steps: w.uint(obj, &path, "steps", None) as usize,
                };
                if !(axis.min <= axis.max) {
                    w.fail(&path, format!("min ({}) must not exceed max ({})", axis.min, axis.max));
                }
                if axis.steps == 0 {
                    w.fail(&format!("{path}.steps"), "must be at least 1");
                }
                if balance && name == Exponent::Sigma {
                    w.fail(&format!("{path}.name"), "sigma is derived from alpha when balance is set");
                }
                if axes.iter().any(|x: &SweepAxis| x.name == name) {
                    w.fail(&format!("{path}.name"), "each exponent may be swept once");
                }
                axes.push(axis);
            }
        }
    }

    let template = match (root.get("template"), mode) {
        (Some(t), _) => {
            let mut tw = Walker::default();
            let cfg = parse_config_value(&mut tw, t);
            w.errors.extend(tw.errors.into_iter().map(|e| format!("template.{e}")));
            cfg
        }
        (None, SweepMode::Simulate) => {
            w.fail("template", "required in Simulate mode");
            None
        }
        (None, SweepMode::ClassifyOnly) => None,
    };

    let swept = |e: Exponent| axes.iter().any(|a| a.name == e);
    let length = template.as_ref().map_or(1.0, |t| t.grid.length);
    let mut fixed = ModelParams { n: 3, sigma: f64::NAN, alpha: f64::NAN, beta: f64::NAN, domain_length: length };
    if let Some(v) = root.get("fixed") {
        if let Some(obj) = w.object(v, "fixed", &["n", "sigma", "alpha", "beta"]) {
            fixed.n = u32::try_from(w.uint(obj, "fixed", "n", Some(3))).unwrap_or(u32::MAX);
            fixed.sigma = w.num(obj, "fixed", "sigma", Some(f64::NAN));
            fixed.alpha = w.num(obj, "fixed", "alpha", Some(f64::NAN));
            fixed.beta = w.num(obj, "fixed", "beta", Some(f64::NAN));
        }
    }
    for (e, v, name) in [
        (Exponent::Alpha, fixed.alpha, "alpha"),
        (Exponent::Beta, fixed.beta, "beta"),
        (Exponent::Sigma, fixed.sigma, "sigma"),
    ] {
        let derived = e == Exponent::Sigma && balance;
        if !swept(e) && !derived && v.is_nan() {
            w.fail(&format!("fixed.{name}"), "required because it is not swept");
        }
    }

    let spec = SweepSpec { axes, fixed, mode, balance, max_cells, template };
    let cells = spec.cell_count();
    if cells > spec.max_cells {
        w.fail("axes", format!("{cells} cells exceed the cap of {}", spec.max_cells));
    }
    w.finish(spec)
}

pub fn parse_sweep(path: &Path) -> Result<SweepSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_sweep_str(&text)
}

#[derive(Debug, Clone)]
pub struct CellOutcome {
    pub index: usize,
    pub params: ModelParams,
    pub regime: std::result::Result<Regime, String>,
    pub run: Option<std::result::Result<RunSummary, String>>,
}

fn evaluate_cell(spec: &SweepSpec, index: usize, seed: Option<u64>) -> CellOutcome {
    let params = spec.cell_params(index);
    let regime = classify_regime(&params).map_err(|e| e.to_string());
    let run = match (spec.mode, &spec.template, &regime) {
        (SweepMode::Simulate, Some(t), Ok(_)) => {
            let cfg = ExperimentConfig { model: params, ..t.clone() };
            let cell_seed = seed.map(|s| s.wrapping_add(index as u64));
            Some(simulate(&cfg, cell_seed).map(|s| RunSummary::of(&s.result)).map_err(|e| e.to_string()))
        }
        (SweepMode::Simulate, _, Err(e)) => Some(Err(e.clone())),
        _ => None,
    };
    CellOutcome { index, params, regime, run }
}

/// Evaluates every cell on a pool of `threads` workers (all cores when
/// `None`); the result is ordered by cell index regardless of scheduling.
pub fn run_sweep(spec: &SweepSpec, threads: Option<usize>, seed: Option<u64>) -> Result<Vec<CellOutcome>> {
    let cells = spec.cell_count();
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(t) = threads {
            builder = builder.num_threads(t.max(1));
        }
        let pool = builder.build().map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
        Ok(pool.install(|| (0..cells).into_par_iter().map(|i| evaluate_cell(spec, i, seed)).collect()))
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        Ok((0..cells).map(|i| evaluate_cell(spec, i, seed)).collect())
    }
}

pub const CLASSIFY_COLUMNS: [&str; 10] = [
    "cell",
    "n",
    "sigma",
    "alpha",
    "beta",
    "verdict",
    "growth_over_aggregation",
    "subcritical_margin",
    "aggregation_margin",
    "criticality",
];

pub const SIMULATE_COLUMNS: [&str; 8] = [
    "run_verdict",
    "t_final",
    "steps",
    "l1",
    "lbeta",
    "linf",
    "nonlocal_mass",
    "rejected",
];

/// Writes the phase-diagram table: a `#` header line with the mode, cell
/// count and seed, then one row per cell. Failures land in the `error`
/// column.
pub fn write_sweep_csv<W: Write>(mut out: W, spec: &SweepSpec, cells: &[CellOutcome], seed: Option<u64>) -> Result<()> {
    let seed_text = seed.map_or("none".to_string(), |s| s.to_string());
    writeln!(out, "# mode={:?} cells={} seed={seed_text}", spec.mode, cells.len())?;
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    let simulate = spec.mode == SweepMode::Simulate;
    let mut header: Vec<&str> = CLASSIFY_COLUMNS.to_vec();
    if simulate {
        header.extend(SIMULATE_COLUMNS);
    }
    header.push("error");
    w.write_record(&header).map_err(io)?;
    for c in cells {
        let p = &c.params;
        let mut row = vec![c.index.to_string(), p.n.to_string(), p.sigma.to_string(), p.alpha.to_string(), p.beta.to_string()];
        let mut error = String::new();
        match &c.regime {
            Ok(r) => {
                let wt = &r.witness;
                row.push(r.verdict.to_string());
                for m in [wt.growth_over_aggregation, wt.subcritical_margin, wt.aggregation_margin, wt.criticality] {
                    row.push(m.to_string());
                }
            }
            Err(e) => {
                row.extend(std::iter::repeat(String::new()).take(5));
                error = e.clone();
            }
        }
        if simulate {
            match &c.run {
                Some(Ok(s)) => {
                    row.push(s.verdict.to_string());
                    row.push(s.t_final.to_string());
                    row.push(s.steps.to_string());
                    for v in [s.l1, s.lbeta, s.linf, s.nonlocal_mass] {
                        row.push(v.to_string());
                    }
                    row.push(s.rejected.to_string());
                }
                other => {
                    row.extend(std::iter::repeat(String::new()).take(SIMULATE_COLUMNS.len()));
                    if let Some(Err(e)) = other {
                        if error.is_empty() {
                            error = e.clone();
                        }
                    }
                }
            }
        }
        row.push(error);
        w.write_record(&row).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_sweep<W: Write>(spec: &SweepSpec, threads: Option<usize>, seed: Option<u64>, out: W) -> Result<Vec<CellOutcome>> {
    let cells = run_sweep(spec, threads, seed)?;
    write_sweep_csv(out, spec, &cells, seed)?;
    Ok(cells)
}
