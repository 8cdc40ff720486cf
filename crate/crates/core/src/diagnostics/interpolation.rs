//! Interpolation inequality
//! `‖v‖_q^q ≤ C(n) C₀^{−λq/(2−λq)} ‖v‖_r^γ + C₀ ‖∇v‖₂²`
//! with `λ = (1/r − 1/q)/(1/r − 1/p)` and `γ = 2(1−λ)q/(2−λq)`.
//!
//! `C(n)` is not known in closed form. [`calibrate_constant`] fits the
//! smallest value that makes the inequality hold on a probe family; that
//! value is empirical metadata, not a proven constant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{sobolev_exponent, ModelParams};
use crate::spectral::{dirichlet_energy, sample_profile, Field, GaussianBump, Grid, ProfileSpec};

/// Relative headroom added on top of the largest ratio seen in calibration.
pub const CALIBRATION_HEADROOM: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterpolationExponents {
    pub r: f64,
    pub q: f64,
    pub lambda_interp: f64,
    pub gamma: f64,
    /// `λq/(2−λq)`, the power of `1/C₀` on the first term.
    pub c0_power: f64,
}

/// Exponents of the inequality, or the violated index condition.
pub fn interpolation_exponents(r: f64, q: f64, n: u32) -> Result<InterpolationExponents> {
    let p = sobolev_exponent(n)?;
    if !(r >= 1.0) {
        return Err(Error::InvalidIndices(format!("1 <= r violated: r = {r}")));
    }
    if !(r < q) {
        return Err(Error::InvalidIndices(format!("r < q violated: r = {r}, q = {q}")));
    }
    if !(q < p) {
        return Err(Error::InvalidIndices(format!("q < p violated: q = {q}, p = {p}")));
    }
    let cap = 2.0 / r + 1.0 - 2.0 / p;
    if !(q / r < cap) {
        return Err(Error::InvalidIndices(format!(
            "q/r < 2/r + 1 - 2/p violated: q/r = {}, bound = {cap}",
            q / r
        )));
    }
    let lambda_interp = (1.0 / r - 1.0 / q) / (1.0 / r - 1.0 / p);
    let gamma = 2.0 * (1.0 - lambda_interp) * q / (2.0 - lambda_interp * q);
    Ok(InterpolationExponents {
        r,
        q,
        lambda_interp,
        gamma,
        c0_power: lambda_interp * q / (2.0 - lambda_interp * q),
    })
}

/// Norms of `v` entering the inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterpolationNorms {
    /// `‖v‖_q^q`.
    pub lq_q: f64,
    /// `‖v‖_r`.
    pub lr: f64,
    /// `‖∇v‖₂²`.
    pub grad_sq: f64,
}

impl InterpolationNorms {
    pub fn of(v: &Field, r: f64, q: f64) -> Result<Self> {
        Ok(Self {
            lq_q: v.lk_norm(q)?.powf(q),
            lr: v.lk_norm(r)?,
            grad_sq: dirichlet_energy(v),
        })
    }

    /// Norms of `a·v`.
    pub fn scaled(&self, a: f64, q: f64) -> Self {
        Self {
            lq_q: a.powf(q) * self.lq_q,
            lr: a * self.lr,
            grad_sq: a * a * self.grad_sq,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterpolationCheck {
    pub r: f64,
    pub q: f64,
    pub c0: f64,
    pub c_n: f64,
    pub lambda_interp: f64,
    pub gamma: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

impl InterpolationCheck {
    pub fn holds(&self) -> bool {
        self.margin >= 0.0
    }
}

fn evaluate(e: &InterpolationExponents, norms: &InterpolationNorms, c0: f64, c_n: f64) -> InterpolationCheck {
    let lhs = norms.lq_q;
    let rhs = c_n * c0.powf(-e.c0_power) * norms.lr.powf(e.gamma) + c0 * norms.grad_sq;
    InterpolationCheck {
        r: e.r,
        q: e.q,
        c0,
        c_n,
        lambda_interp: e.lambda_interp,
        gamma: e.gamma,
        lhs,
        rhs,
        margin: rhs - lhs,
    }
}

/// Evaluates both sides for `v` with the constant `c_n` standing in for `C(n)`.
pub fn interpolation_check(
    v: &Field,
    r: f64,
    q: f64,
    c0: f64,
    c_n: f64,
    params: &ModelParams,
) -> Result<InterpolationCheck> {
    if !(c0 > 0.0) {
        return Err(Error::InvalidParams(format!("C0 must be positive, got {c0}")));
    }
    let e = interpolation_exponents(r, q, params.n)?;
    Ok(evaluate(&e, &InterpolationNorms::of(v, r, q)?, c0, c_n))
}

/// Smallest `C` with `‖av‖_q^q − C₀‖∇(av)‖² ≤ C C₀^{−e} ‖av‖_r^γ` for every
/// amplitude `a > 0`. The supremum over `a` is attained where the
/// derivative of the ratio vanishes, which has a closed form.
pub fn required_constant(e: &InterpolationExponents, norms: &InterpolationNorms, c0: f64) -> f64 {
    let (a_q, g, r_norm) = (norms.lq_q, c0 * norms.grad_sq, norms.lr);
    let denom = c0.powf(-e.c0_power) * r_norm.powf(e.gamma);
    if denom == 0.0 || a_q == 0.0 {
        return 0.0;
    }
    let (q, gamma) = (e.q, e.gamma);
    if (q - 2.0).abs() < 1e-12 {
        return ((a_q - g) / denom).max(0.0);
    }
    // d/da [A a^{q−γ} − G a^{2−γ}] = 0  ⇒  a^{q−2} = (2−γ)G / ((q−γ)A).
    let a = ((2.0 - gamma) * g / ((q - gamma) * a_q)).powf(1.0 / (q - 2.0));
    if !a.is_finite() || a <= 0.0 {
        return 0.0;
    }
    ((a_q * a.powf(q - gamma) - g * a.powf(2.0 - gamma)) / denom).max(0.0)
}

/// `(r, q)` pairs from a fixed lattice that satisfy the index conditions.
pub fn valid_index_set(n: u32) -> Vec<(f64, f64)> {
    let rs = [1.0, 1.25, 1.5, 2.0, 2.5, 3.0];
    let qs = [1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 5.0];
    let mut out = Vec::new();
    for &r in &rs {
        for &q in &qs {
            if interpolation_exponents(r, q, n).is_ok() {
                out.push((r, q));
            }
        }
    }
    out
}

pub const PROBE_C0: [f64; 3] = [0.1, 1.0, 10.0];
pub const PROBE_WIDTHS: [f64; 3] = [0.5, 1.0, 2.0];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Calibration {
    pub c_n: f64,
    /// Probe that needed the largest constant: `(width, r, q, c0)`.
    pub worst: (f64, f64, f64, f64),
    pub probes: usize,
}

/// Unit-amplitude centred Gaussians, one field per width.
pub fn probe_family(grid: &Grid, widths: &[f64]) -> Result<Vec<Field>> {
    widths
        .iter()
        .map(|&s| {
            sample_profile(
                grid,
                &ProfileSpec::Gaussian(GaussianBump {
                    amplitude: 1.0,
                    width: s,
                    center: [0.0; 3],
                }),
            )
        })
        .collect()
}

/// Fits `C(n)` as the largest constant required by any probe, over all
/// amplitudes, the given `C₀` values and index pairs.
pub fn calibrate_constant(
    probes: &[(f64, Field)],
    indices: &[(f64, f64)],
    c0s: &[f64],
    n: u32,
) -> Result<Calibration> {
    let mut best = 0.0;
    let mut worst = (0.0, 0.0, 0.0, 0.0);
    let mut count = 0;
    for (width, v) in probes {
        for &(r, q) in indices {
            let e = interpolation_exponents(r, q, n)?;
            let norms = InterpolationNorms::of(v, r, q)?;
            for &c0 in c0s {
                count += 1;
                let need = required_constant(&e, &norms, c0);
                if need > best {
                    best = need;
                    worst = (*width, r, q, c0);
                }
            }
        }
    }
    Ok(Calibration {
        c_n: best * (1.0 + CALIBRATION_HEADROOM),
        worst,
        probes: count,
    })
}
