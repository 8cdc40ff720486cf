//! Exponent algebra behind the `L^k` energy estimates.
//!
//! For an index `k` the energy identity is closed by two interpolation
//! steps (one for the growth term `u^{k+α−1}`, one for the aggregation term
//! `u^{k+η−1}`, `η = σ+1`) followed by a Hölder split through `L^β`. The
//! ledger evaluates every exponent those steps produce, the admissibility
//! conditions on `α, β, η, k`, and the ratio `D/B`, which equals
//! `β − (α−1)` identically.

use serde::{Deserialize, Serialize};

use super::params::{sobolev_exponent, ModelParams};
use crate::error::{Error, Result};

const DENOMINATOR_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LedgerFlags {
    /// `α < 1 + (1 − 2/p) β`.
    pub growth_subcritical: bool,
    /// `A₁ (1 − 1/p) < A₀`.
    pub aggregation_controlled: bool,
    /// `k > max(K₀, β − (α−1))`.
    pub k_admissible: bool,
    /// `max(p(η−1)/(p−2), p(α−1)/(p−2), 1, k/2) < k' < min(k+α−1, k+η−1)`.
    pub k_prime_bracketed: bool,
}

impl LedgerFlags {
    pub fn all(&self) -> bool {
        self.growth_subcritical
            && self.aggregation_controlled
            && self.k_admissible
            && self.k_prime_bracketed
    }
}

/// Signed distances behind each flag; positive means the flag holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LedgerMargins {
    pub growth_subcritical: f64,
    pub aggregation_controlled: f64,
    pub k_admissible: f64,
    pub k_prime_lower: f64,
    pub k_prime_upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentLedger {
    pub p: f64,
    pub k: f64,
    pub k_prime: f64,
    pub theta: f64,
    pub b_alpha: f64,
    pub b_eta: f64,
    pub lambda_alpha: f64,
    pub lambda_eta: f64,
    pub a0: f64,
    pub a1: f64,
    pub d: f64,
    pub b: f64,
    /// `D/B`; `None` when `B` vanishes.
    pub d_over_b: Option<f64>,
    pub k0: f64,
    pub flags: LedgerFlags,
    pub margins: LedgerMargins,
}

impl ExponentLedger {
    /// `D/B − (β − (α−1))`, the residual of the closed-form identity.
    pub fn identity_residual(&self, params: &ModelParams) -> Option<f64> {
        self.d_over_b
            .map(|r| r - (params.beta - (params.alpha - 1.0)))
    }
}

fn checked_div(quantity: &'static str, num: f64, den: f64) -> Result<f64> {
    if !den.is_finite() || den.abs() < DENOMINATOR_FLOOR {
        return Err(Error::DegenerateLedger {
            quantity,
            denominator: den,
        });
    }
    Ok(num / den)
}

/// Interpolation exponents `(λ, b)` for the term `u^{k+e−1}` controlled by
/// `‖u‖_{L^{k'}}` and `‖∇u^{k/2}‖₂`.
fn interpolation_pair(
    k: f64,
    k_prime: f64,
    e: f64,
    p: f64,
    names: (&'static str, &'static str),
) -> Result<(f64, f64)> {
    let top = k + e - 1.0;
    let lambda = checked_div(
        names.0,
        k / (2.0 * k_prime) - k / (2.0 * top),
        k / (2.0 * k_prime) - 1.0 / p,
    )?;
    let b = checked_div(names.1, (1.0 - lambda) * top, 1.0 - lambda * top / k)?;
    Ok((lambda, b))
}

pub fn exponent_ledger(params: &ModelParams, k: f64) -> Result<ExponentLedger> {
    params.validate()?;
    if !(k > 1.0) || !k.is_finite() {
        return Err(Error::InvalidParams(format!("k must exceed 1, got {k}")));
    }
    let p = sobolev_exponent(params.n)?;
    let (alpha, beta, eta) = (params.alpha, params.beta, params.eta());

    let k_prime = (k + alpha - 1.0 + beta) / 2.0;
    let (lambda_alpha, b_alpha) =
        interpolation_pair(k, k_prime, alpha, p, ("lambda_alpha", "b_alpha"))?;
    let (lambda_eta, b_eta) = interpolation_pair(k, k_prime, eta, p, ("lambda_eta", "b_eta"))?;
    let theta = checked_div(
        "theta",
        1.0 / beta - 1.0 / k_prime,
        1.0 / beta - 1.0 / (k + alpha - 1.0),
    )?;

    let a0 = 0.5 - 1.0 / p - (alpha - 1.0) / (2.0 * beta);
    let a1 = (eta - alpha) / beta;
    let s = alpha + beta - 1.0;
    let d = a0 * (s / 2.0 - (eta - 1.0)) - a1 / (2.0 * p) * s;
    let b = a0 / 2.0 - a1 * (0.5 - 1.0 / (2.0 * p));
    let d_over_b = (b.abs() >= DENOMINATOR_FLOOR).then(|| d / b);

    let k0 = [
        2.0 * (eta - 1.0) / (p - 2.0),
        2.0 * (alpha - 1.0) / (p - 2.0),
        2.0 * p * (eta - 1.0) / (p - 2.0) - beta - (alpha - 1.0),
        2.0 * p * (alpha - 1.0) / (p - 2.0) - beta - (alpha - 1.0),
    ]
    .into_iter()
    .fold(f64::NEG_INFINITY, f64::max);

    let k_prime_floor = [
        p * (eta - 1.0) / (p - 2.0),
        p * (alpha - 1.0) / (p - 2.0),
        1.0,
        k / 2.0,
    ]
    .into_iter()
    .fold(f64::NEG_INFINITY, f64::max);
    let k_prime_ceiling = (k + alpha - 1.0).min(k + eta - 1.0);

    let margins = LedgerMargins {
        growth_subcritical: 1.0 + (1.0 - 2.0 / p) * beta - alpha,
        aggregation_controlled: a0 - a1 * (1.0 - 1.0 / p),
        k_admissible: k - k0.max(beta - (alpha - 1.0)),
        k_prime_lower: k_prime - k_prime_floor,
        k_prime_upper: k_prime_ceiling - k_prime,
    };
    let flags = LedgerFlags {
        growth_subcritical: margins.growth_subcritical > 0.0,
        aggregation_controlled: margins.aggregation_controlled > 0.0,
        k_admissible: margins.k_admissible > 0.0,
        k_prime_bracketed: margins.k_prime_lower > 0.0 && margins.k_prime_upper > 0.0,
    };

    Ok(ExponentLedger {
        p,
        k,
        k_prime,
        theta,
        b_alpha,
        b_eta,
        lambda_alpha,
        lambda_eta,
        a0,
        a1,
        d,
        b,
        d_over_b,
        k0,
        flags,
        margins,
    })
}
