//! Regime classification in the (σ, α, β, n) exponent space.
//!
//! Two global-existence regions are known: growth-dominated
//! (`σ+1 ≤ α < 1 + 2β/n`) and aggregation-dominated
//! (`α < σ+1`, `(σ+1)(n+2) < 2β + 2α + n`). On the balance line `σ+1 = α`
//! the scaling-critical relation `α − 1 = 2β/n` separates the proven global
//! region from the region where finite-time blow-up is only conjectured.

use serde::{Deserialize, Serialize};

use super::params::ModelParams;
use crate::error::Result;

/// Relative tolerance for the equalities `σ+1 = α` and `α−1 = 2β/n`.
pub const EQUALITY_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    GlobalCase1,
    GlobalCase2,
    Critical,
    ConjecturedBlowup,
    Indeterminate,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::GlobalCase1 => "GlobalCase1",
            Verdict::GlobalCase2 => "GlobalCase2",
            Verdict::Critical => "Critical",
            Verdict::ConjecturedBlowup => "ConjecturedBlowup",
            Verdict::Indeterminate => "Indeterminate",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Signed margins of every inequality the classifier evaluates.
///
/// Positive margins mean the strict inequality holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeWitness {
    /// `α − (σ+1)`: growth exponent minus aggregation exponent.
    pub growth_over_aggregation: f64,
    /// `1 + 2β/n − α`: distance below the scaling-critical growth exponent.
    pub subcritical_margin: f64,
    /// `2β + 2α + n − (σ+1)(n+2)`.
    pub aggregation_margin: f64,
    /// `α − 1 − 2β/n`: signed distance from the scaling balance.
    pub criticality: f64,
    /// `σ+1 = α` within [`EQUALITY_RTOL`].
    pub balanced: bool,
    /// `α−1 = 2β/n` within [`EQUALITY_RTOL`].
    pub critical: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Regime {
    pub verdict: Verdict,
    pub witness: RegimeWitness,
}

impl Regime {
    /// Order in which verdicts are tested; the first match wins.
    pub const PRECEDENCE: [Verdict; 5] = [
        Verdict::Critical,
        Verdict::ConjecturedBlowup,
        Verdict::GlobalCase1,
        Verdict::GlobalCase2,
        Verdict::Indeterminate,
    ];
}

fn nearly_equal(a: f64, b: f64) -> bool {
    (a - b).abs() <= EQUALITY_RTOL * a.abs().max(b.abs())
}

pub fn classify_regime(params: &ModelParams) -> Result<Regime> {
    params.validate()?;
    let n = f64::from(params.n);
    let (sigma, alpha, beta) = (params.sigma, params.alpha, params.beta);
    let eta = params.eta();

    let witness = RegimeWitness {
        growth_over_aggregation: alpha - eta,
        subcritical_margin: 1.0 + 2.0 * beta / n - alpha,
        aggregation_margin: 2.0 * beta + 2.0 * alpha + n - (sigma + 1.0) * (n + 2.0),
        criticality: alpha - 1.0 - 2.0 * beta / n,
        balanced: nearly_equal(eta, alpha),
        critical: nearly_equal(alpha - 1.0, 2.0 * beta / n),
    };

    let holds = |v: Verdict| match v {
        Verdict::Critical => witness.balanced && witness.critical,
        Verdict::ConjecturedBlowup => {
            witness.balanced && !witness.critical && witness.criticality > 0.0
        }
        Verdict::GlobalCase1 => {
            (witness.balanced || eta < alpha)
                && !witness.critical
                && witness.subcritical_margin > 0.0
        }
        Verdict::GlobalCase2 => {
            !witness.balanced && alpha < eta && witness.aggregation_margin > 0.0
        }
        Verdict::Indeterminate => true,
    };
    let verdict = Regime::PRECEDENCE
        .into_iter()
        .find(|&v| holds(v))
        .unwrap_or(Verdict::Indeterminate);
    Ok(Regime { verdict, witness })
}
