//! JSON experiment documents.
//!
//! ```json
//! {
//!   "model":   { "n": 3, "sigma": 1.0, "alpha": 2.0, "beta": 3.0 },
//!   "grid":    { "N": 64, "L": 16.0 },
//!   "solver":  { "t_end": 1.0, "scheme": "IMEX2" },
//!   "profile": { "type": "gaussian", "amplitude": 0.5, "width": 1.0 },
//!   "perturbation": { "amplitude": 0.05, "modes": 4, "seed": 7 },
//!   "outputs": { "trace_path": "trace.csv", "field_dump": false, "report_path": "report.json" }
//! }
//! ```
//!
//! `model.n` defaults to 3, `solver`, `perturbation` and `outputs` are
//! optional, and every solver field falls back to [`SolverConfig::default`].
//! Unknown keys are reported as violations.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::integrators::{Scheme, SolverConfig};
use crate::model::ModelParams;
use crate::spectral::{GaussianBump, Grid, Perturbation, ProfileSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L")]
    pub length: f64,
}

impl GridSpec {
    pub fn build(&self) -> Result<Grid> {
        Grid::new(self.n, self.length)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputSpec {
    pub trace_path: PathBuf,
    pub field_dump: bool,
    pub report_path: PathBuf,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            trace_path: PathBuf::from("trace.csv"),
            field_dump: false,
            report_path: PathBuf::from("report.json"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub model: ModelParams,
    pub grid: GridSpec,
    pub solver: SolverConfig,
    pub profile: ProfileSpec,
    pub perturbation: Option<Perturbation>,
    pub outputs: OutputSpec,
}

/// Collects violations while walking a JSON tree.
#[derive(Default)]
pub(crate) struct Walker {
    pub errors: Vec<String>,
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

impl Walker {
    pub fn fail(&mut self, path: &str, msg: impl std::fmt::Display) {
        let at = if path.is_empty() { "<root>" } else { path };
        self.errors.push(format!("{at}: {msg}"));
    }

    pub fn object<'a>(&mut self, v: &'a Value, path: &str, allowed: &[&str]) -> Option<&'a Map<String, Value>> {
        let Some(obj) = v.as_object() else {
            self.fail(path, "expected an object");
            return None;
        };
        for key in obj.keys() {
            if !allowed.contains(&key.as_str()) {
                self.fail(&join(path, key), format!("unknown key (expected one of {})", allowed.join(", ")));
            }
        }
        Some(obj)
    }

    pub fn child<'a>(&mut self, obj: &'a Map<String, Value>, path: &str, key: &str) -> Option<&'a Value> {
        let v = obj.get(key);
        if v.is_none() {
            self.fail(&join(path, key), "missing required field");
        }
        v
    }

    pub fn num(&mut self, obj: &Map<String, Value>, path: &str, key: &str, default: Option<f64>) -> f64 {
        match (obj.get(key), default) {
            (None, Some(d)) => d,
            (None, None) => {
                self.fail(&join(path, key), "missing required field");
                f64::NAN
            }
            (Some(v), _) => v.as_f64().unwrap_or_else(|| {
                self.fail(&join(path, key), format!("expected a number, got {v}"));
                f64::NAN
            }),
        }
    }

    pub fn uint(&mut self, obj: &Map<String, Value>, path: &str, key: &str, default: Option<u64>) -> u64 {
        match (obj.get(key), default) {
            (None, Some(d)) => d,
            (None, None) => {
                self.fail(&join(path, key), "missing required field");
                0
            }
            (Some(v), _) => v.as_u64().unwrap_or_else(|| {
                self.fail(&join(path, key), format!("expected a non-negative integer, got {v}"));
                0
            }),
        }
    }

    pub fn boolean(&mut self, obj: &Map<String, Value>, path: &str, key: &str, default: bool) -> bool {
        match obj.get(key) {
            None => default,
            Some(v) => v.as_bool().unwrap_or_else(|| {
                self.fail(&join(path, key), format!("expected true or false, got {v}"));
                default
            }),
        }
    }

    pub fn string<'a>(&mut self, obj: &'a Map<String, Value>, path: &str, key: &str) -> Option<&'a str> {
        match obj.get(key) {
            None => None,
            Some(v) => {
                let s = v.as_str();
                if s.is_none() {
                    self.fail(&join(path, key), format!("expected a string, got {v}"));
                }
                s
            }
        }
    }

    pub fn finish<T>(self, value: T) -> Result<T> {
        if self.errors.is_empty() {
            Ok(value)
        } else {
            Err(Error::ConfigViolations(self.errors))
        }
    }
}

fn parse_model(w: &mut Walker, v: &Value, length: f64) -> ModelParams {
    let path = "model";
    let Some(obj) = w.object(v, path, &["n", "sigma", "alpha", "beta"]) else {
        return ModelParams { n: 3, sigma: f64::NAN, alpha: f64::NAN, beta: f64::NAN, domain_length: length };
    };
    let n = w.uint(obj, path, "n", Some(3));
    let params = ModelParams {
        n: u32::try_from(n).unwrap_or(u32::MAX),
        sigma: w.num(obj, path, "sigma", None),
        alpha: w.num(obj, path, "alpha", None),
        beta: w.num(obj, path, "beta", None),
        domain_length: length,
    };
    let missing = [params.sigma, params.alpha, params.beta].iter().any(|x| x.is_nan());
    for msg in params.violations() {
        // Missing fields were reported already; skip their "must be finite".
        if missing && msg.contains("must be finite") {
            continue;
        }
        if msg.starts_with("domain_length") {
            continue;
        }
        let field = msg.split_whitespace().next().unwrap_or("").to_string();
        w.fail(&join(path, &field), msg);
    }
    if params.n != 3 && n >= 3 {
        w.fail(&join(path, "n"), format!("simulations are three-dimensional, got n = {n}"));
    }
    params
}

fn parse_grid(w: &mut Walker, v: &Value) -> GridSpec {
    let path = "grid";
    let Some(obj) = w.object(v, path, &["N", "L"]) else {
        return GridSpec { n: 0, length: f64::NAN };
    };
    let n = w.uint(obj, path, "N", None) as usize;
    let length = w.num(obj, path, "L", None);
    if n != 0 && !(n.is_power_of_two() && n >= 16) {
        w.fail(&join(path, "N"), format!("must be a power of two and at least 16, got {n}"));
    }
    if n > 512 {
        w.fail(&join(path, "N"), format!("must be at most 512, got {n}"));
    }
    if !length.is_nan() && !(length > 0.0 && length.is_finite()) {
        w.fail(&join(path, "L"), format!("must be positive and finite, got {length}"));
    }
    GridSpec { n, length }
}

fn parse_solver(w: &mut Walker, v: Option<&Value>) -> SolverConfig {
    let d = SolverConfig::default();
    let Some(v) = v else { return d };
    let path = "solver";
    let allowed = [
        "dt_init",
        "dt_min",
        "cfl_safety",
        "t_end",
        "blowup_linf_factor",
        "picard_tol",
        "picard_max_iters",
        "scheme",
    ];
    let Some(obj) = w.object(v, path, &allowed) else { return d };
    let scheme = match w.string(obj, path, "scheme") {
        None => d.scheme,
        Some(s) => Scheme::parse(s).unwrap_or_else(|| {
            w.fail(&join(path, "scheme"), format!("expected IMEX1, IMEX2 or Duhamel, got {s:?}"));
            d.scheme
        }),
    };
    let cfg = SolverConfig {
        dt_init: w.num(obj, path, "dt_init", Some(d.dt_init)),
        dt_min: w.num(obj, path, "dt_min", Some(d.dt_min)),
        cfl_safety: w.num(obj, path, "cfl_safety", Some(d.cfl_safety)),
        t_end: w.num(obj, path, "t_end", Some(d.t_end)),
        blowup_linf_factor: w.num(obj, path, "blowup_linf_factor", Some(d.blowup_linf_factor)),
        picard_tol: w.num(obj, path, "picard_tol", Some(d.picard_tol)),
        picard_max_iters: w.uint(obj, path, "picard_max_iters", Some(d.picard_max_iters as u64)) as usize,
        scheme,
        terms: d.terms,
    };
    for msg in cfg.violations() {
        let field = msg.split_whitespace().next().unwrap_or("solver").to_string();
        w.errors.push(format!("{field}: {msg}"));
    }
    cfg
}

fn parse_bump(w: &mut Walker, v: &Value, path: &str, allow_type: bool) -> GaussianBump {
    let allowed: &[&str] = if allow_type {
        &["type", "amplitude", "width", "center"]
    } else {
        &["amplitude", "width", "center"]
    };
    let Some(obj) = w.object(v, path, allowed) else {
        return GaussianBump { amplitude: f64::NAN, width: f64::NAN, center: [0.0; 3] };
    };
    let mut center = [0.0; 3];
    if let Some(c) = obj.get("center") {
        match c.as_array().map(|a| a.iter().map(Value::as_f64).collect::<Option<Vec<f64>>>()) {
            Some(Some(xs)) if xs.len() == 3 => center.copy_from_slice(&xs),
            _ => w.fail(&join(path, "center"), format!("expected three numbers, got {c}")),
        }
    }
    GaussianBump {
        amplitude: w.num(obj, path, "amplitude", None),
        width: w.num(obj, path, "width", None),
        center,
    }
}

fn parse_profile(w: &mut Walker, v: &Value, length: f64) -> ProfileSpec {
    let path = "profile";
    let fallback = ProfileSpec::Constant { value: 0.0 };
    let Some(obj) = v.as_object() else {
        w.fail(path, "expected an object");
        return fallback;
    };
    let kind = w.string(obj, path, "type");
    let spec = match kind {
        Some("gaussian") => ProfileSpec::Gaussian(parse_bump(w, v, path, true)),
        Some("multi_bump") => {
            w.object(v, path, &["type", "bumps"]);
            match obj.get("bumps").and_then(Value::as_array) {
                Some(list) => ProfileSpec::MultiBump {
                    bumps: list
                        .iter()
                        .enumerate()
                        .map(|(i, b)| parse_bump(w, b, &format!("{path}.bumps[{i}]"), false))
                        .collect(),
                },
                None => {
                    w.fail(&join(path, "bumps"), "expected an array of bumps");
                    return fallback;
                }
            }
        }
        Some("constant") => {
            w.object(v, path, &["type", "value"]);
            ProfileSpec::Constant { value: w.num(obj, path, "value", None) }
        }
        Some(other) => {
            w.fail(&join(path, "type"), format!("expected gaussian, multi_bump or constant, got {other:?}"));
            return fallback;
        }
        None => {
            w.fail(&join(path, "type"), "missing required field");
            return fallback;
        }
    };
    let has_nan = spec.bumps().iter().any(|b| b.amplitude.is_nan() || b.width.is_nan());
    if !has_nan && length.is_finite() && length > 0.0 {
        if let Err(e) = spec.validate(length) {
            w.fail(path, e);
        }
    }
    spec
}

fn parse_perturbation(w: &mut Walker, v: Option<&Value>) -> Option<Perturbation> {
    let v = v?;
    if v.is_null() {
        return None;
    }
    let path = "perturbation";
    let obj = w.object(v, path, &["amplitude", "modes", "seed"])?;
    let p = Perturbation {
        amplitude: w.num(obj, path, "amplitude", None),
        modes: w.uint(obj, path, "modes", Some(4)) as usize,
        seed: w.uint(obj, path, "seed", Some(0)),
    };
    if !(0.0..1.0).contains(&p.amplitude) && !p.amplitude.is_nan() {
        w.fail(&join(path, "amplitude"), format!("must lie in [0, 1), got {}", p.amplitude));
    }
    if p.modes == 0 {
        w.fail(&join(path, "modes"), "must be at least 1");
    }
    Some(p)
}

fn parse_outputs(w: &mut Walker, v: Option<&Value>) -> OutputSpec {
    let d = OutputSpec::default();
    let Some(v) = v else { return d };
    let path = "outputs";
    let Some(obj) = w.object(v, path, &["trace_path", "field_dump", "report_path"]) else {
        return d;
    };
    OutputSpec {
        trace_path: w.string(obj, path, "trace_path").map_or(d.trace_path, PathBuf::from),
        field_dump: w.boolean(obj, path, "field_dump", false),
        report_path: w.string(obj, path, "report_path").map_or(d.report_path, PathBuf::from),
    }
}

pub(crate) fn parse_config_value(w: &mut Walker, doc: &Value) -> Option<ExperimentConfig> {
    let root = w.object(
        doc,
        "",
        &["model", "grid", "solver", "profile", "perturbation", "outputs"],
    )?;
    let grid = match w.child(root, "", "grid") {
        Some(v) => parse_grid(w, v),
        None => GridSpec { n: 0, length: f64::NAN },
    };
    let model = match w.child(root, "", "model") {
        Some(v) => parse_model(w, v, grid.length),
        None => ModelParams { n: 3, sigma: f64::NAN, alpha: f64::NAN, beta: f64::NAN, domain_length: grid.length },
    };
    let solver = parse_solver(w, root.get("solver"));
    let profile = match w.child(root, "", "profile") {
        Some(v) => parse_profile(w, v, grid.length),
        None => ProfileSpec::Constant { value: 0.0 },
    };
    let perturbation = parse_perturbation(w, root.get("perturbation"));
    let outputs = parse_outputs(w, root.get("outputs"));
    Some(ExperimentConfig { model, grid, solver, profile, perturbation, outputs })
}

/// Parses and validates a configuration document, reporting every
/// violation at once.
pub fn parse_config_str(text: &str) -> Result<ExperimentConfig> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| Error::ConfigViolations(vec![format!("<root>: invalid JSON: {e}")]))?;
    let mut w = Walker::default();
    let cfg = parse_config_value(&mut w, &doc);
    match cfg {
        Some(c) => w.finish(c),
        None => Err(Error::ConfigViolations(w.errors)),
    }
}

pub fn parse_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_config_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "model": {"sigma": 1, "alpha": 2, "beta": 3},
        "grid": {"N": 32, "L": 16},
        "profile": {"type": "gaussian", "amplitude": 0.5, "width": 1.0}
    }"#;

    fn violations(text: &str) -> Vec<String> {
        match parse_config_str(text) {
            Err(Error::ConfigViolations(v)) => v,
            other => panic!("expected violations, got {other:?}"),
        }
    }

    #[test]
    fn minimal_document_gets_defaults() {
        let c = parse_config_str(MINIMAL).unwrap();
        assert_eq!(c.model.n, 3);
        assert_eq!(c.model.domain_length, 16.0);
        assert_eq!(c.solver, SolverConfig::default());
        assert_eq!(c.outputs, OutputSpec::default());
        assert_eq!(c.perturbation, None);
    }

    #[test]
    fn alpha_below_one_cites_hypotheses() {
        let v = violations(&MINIMAL.replace("\"alpha\": 2", "\"alpha\": 0.5"));
        assert_eq!(v.len(), 1, "{v:?}");
        assert!(v[0].starts_with("model.alpha: alpha must exceed 1"), "{}", v[0]);
        assert!(v[0].contains("sigma >= 1"));
    }

    #[test]
    fn dt_order_echoes_both_values() {
        let doc = MINIMAL.replace(
            "\"profile\"",
            "\"solver\": {\"dt_init\": 0.001, \"dt_min\": 0.01}, \"profile\"",
        );
        let v = violations(&doc);
        assert_eq!(v.len(), 1, "{v:?}");
        assert!(v[0].contains("0.01") && v[0].contains("0.001"), "{}", v[0]);
    }

    #[test]
    fn all_violations_are_reported() {
        let doc = r#"{
            "model": {"sigma": 0.5, "alpha": 0.5, "beta": 3, "gamma": 1},
            "grid": {"N": 30, "L": -1},
            "solver": {"scheme": "RK4", "cfl_safety": 3},
            "profile": {"type": "gaussian", "width": 1.0}
        }"#;
        let v = violations(doc);
        let paths: Vec<&str> = v.iter().map(|s| s.split(':').next().unwrap()).collect();
        for p in [
            "model.gamma",
            "model.sigma",
            "model.alpha",
            "grid.N",
            "grid.L",
            "solver.scheme",
            "solver.cfl_safety",
            "profile.amplitude",
        ] {
            assert!(paths.contains(&p), "{p} missing from {v:?}");
        }
    }

    #[test]
    fn missing_sections_and_bad_json() {
        let v = violations("{}");
        assert_eq!(v.len(), 3, "{v:?}");
        let v = violations("{ not json");
        assert!(v[0].contains("invalid JSON"));
    }

    #[test]
    fn missing_file_is_io() {
        let e = parse_config(Path::new("/nonexistent/config.json")).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn profile_width_is_checked_against_box() {
        let v = violations(&MINIMAL.replace("\"width\": 1.0", "\"width\": 3.0"));
        assert!(v[0].starts_with("profile:") && v[0].contains("L/8"), "{v:?}");
    }
}
