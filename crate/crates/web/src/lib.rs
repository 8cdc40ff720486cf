//! WebAssembly bindings behind `www/index.html`.
//!
//! Each export returns a JSON string so the page needs no generated type
//! glue beyond `wasm-bindgen`'s string passing. Failures come back as
//! `{"error": "..."}`.

use chemolab_core::integrators::{run, SolverConfig};
use chemolab_core::model::{classify_regime, existence_time_estimate, ModelParams};
use chemolab_core::spectral::{sample_profile, GaussianBump, Grid, ProfileSpec};
use chemolab_core::Result;
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

/// Largest side of the phase diagram, in cells.
pub const MAX_DIAGRAM_SIDE: usize = 200;
/// Grid size of the in-browser simulation.
pub const DEMO_N: usize = 16;

fn respond(r: Result<Value>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

fn linspace(lo: f64, hi: f64, steps: usize, i: usize) -> f64 {
    if steps <= 1 {
        lo
    } else {
        lo + (hi - lo) * i as f64 / (steps - 1) as f64
    }
}

pub fn phase_diagram_value(sigma: f64, alpha: (f64, f64), beta: (f64, f64), side: usize) -> Result<Value> {
    let side = side.clamp(1, MAX_DIAGRAM_SIDE);
    let mut verdicts = Vec::with_capacity(side * side);
    let mut margins = Vec::with_capacity(side * side);
    // Rows run over β from top to bottom so the array maps onto a canvas.
    for row in 0..side {
        let b = linspace(beta.1, beta.0, side, row);
        for col in 0..side {
            let a = linspace(alpha.0, alpha.1, side, col);
            let r = classify_regime(&ModelParams::new(3, sigma, a, b, 1.0)?)?;
            verdicts.push(r.verdict.as_str());
            margins.push(r.witness.subcritical_margin);
        }
    }
    Ok(json!({ "side": side, "verdicts": verdicts, "subcritical_margin": margins }))
}

/// Verdicts on a `side × side` grid over `α × β` at fixed `σ`, `n = 3`.
#[wasm_bindgen]
pub fn phase_diagram(sigma: f64, alpha_min: f64, alpha_max: f64, beta_min: f64, beta_max: f64, side: usize) -> String {
    respond(phase_diagram_value(sigma, (alpha_min, alpha_max), (beta_min, beta_max), side))
}

pub fn existence_curve_value(sigma: f64, alpha: f64, sup_max: f64, samples: usize) -> Result<Value> {
    let params = ModelParams::new(3, sigma, alpha, 2.0, 1.0)?;
    let samples = samples.clamp(2, 400);
    let mut points = Vec::with_capacity(samples);
    for i in 1..=samples {
        let y0 = sup_max * i as f64 / samples as f64;
        points.push([y0, existence_time_estimate(y0, &params)?]);
    }
    Ok(json!({ "points": points }))
}

/// Majorant blow-up time as a function of `‖u₀‖_∞` on `(0, sup_max]`.
#[wasm_bindgen]
pub fn existence_curve(sigma: f64, alpha: f64, sup_max: f64, samples: usize) -> String {
    respond(existence_curve_value(sigma, alpha, sup_max, samples))
}

pub fn simulate_value(sigma: f64, alpha: f64, beta: f64, amplitude: f64, t_end: f64) -> Result<Value> {
    let length = 8.0;
    let grid = Grid::new(DEMO_N, length)?;
    let params = ModelParams::new(3, sigma, alpha, beta, length)?;
    let profile = ProfileSpec::Gaussian(GaussianBump { amplitude, width: 1.0, center: [0.0; 3] });
    profile.validate(length)?;
    let u0 = sample_profile(&grid, &profile)?;
    let solver = SolverConfig { t_end: t_end.clamp(1e-3, 5.0), dt_init: 0.02, dt_min: 1e-7, ..SolverConfig::default() };
    let result = run(&u0, &params, &solver)?;
    let n = grid.n();
    let mid = n / 2;
    let slice: Vec<f64> = (0..n * n).map(|ij| result.final_state.values()[grid.index(ij / n, ij % n, mid)]).collect();
    let trace: Vec<[f64; 3]> = result.trace.iter().map(|r| [r.t, r.linf, r.nonlocal_mass]).collect();
    Ok(json!({
        "verdict": result.verdict.as_str(),
        "regime": classify_regime(&params)?.verdict.as_str(),
        "n": n,
        "slice": slice,
        "trace": trace,
    }))
}

/// Runs a Gaussian bump on a 16³ box of side 8 and returns the `L^∞`
/// trace and the final mid-plane slice.
#[wasm_bindgen]
pub fn simulate_small(sigma: f64, alpha: f64, beta: f64, amplitude: f64, t_end: f64) -> String {
    respond(simulate_value(sigma, alpha, beta, amplitude, t_end))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagram_corners() {
        let v = phase_diagram_value(1.0, (2.0, 6.0), (1.5, 8.0), 5).unwrap();
        let verdicts = v["verdicts"].as_array().unwrap();
        assert_eq!(verdicts.len(), 25);
        // Top-left: α = 2, β = 8 sits well inside the first global case.
        assert_eq!(verdicts[0], "GlobalCase1");
    }

    #[test]
    fn curve_is_decreasing() {
        let v = existence_curve_value(1.0, 2.0, 2.0, 4).unwrap();
        let pts = v["points"].as_array().unwrap();
        let t: Vec<f64> = pts.iter().map(|p| p[1].as_f64().unwrap()).collect();
        assert!(t.windows(2).all(|w| w[1] < w[0]));
        assert!((t[1] - 0.5).abs() < 1e-6);
    }

    #[test]
    fn small_run_reaches_end() {
        let v = simulate_value(1.0, 2.0, 3.0, 0.5, 0.1).unwrap();
        assert_eq!(v["verdict"], "ReachedTEnd");
        assert_eq!(v["slice"].as_array().unwrap().len(), DEMO_N * DEMO_N);
    }

    #[test]
    fn errors_are_reported_as_json() {
        let s = simulate_small(1.0, 0.5, 3.0, 0.5, 0.1);
        assert!(s.contains("alpha must exceed 1"), "{s}");
    }
}
