use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponents and dimension of the chemotaxis-growth system
/// `u_t = Δu − ∇·(u^σ ∇v) + u^α (1 − ∫u^β)`, `v = K∗u`, together with the
/// side length of the periodic box used to approximate the whole space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: u32,
    pub sigma: f64,
    pub alpha: f64,
    pub beta: f64,
    pub domain_length: f64,
}

impl ModelParams {
    /// Builds and validates a parameter set.
    pub fn new(n: u32, sigma: f64, alpha: f64, beta: f64, domain_length: f64) -> Result<Self> {
        let params = Self {
            n,
            sigma,
            alpha,
            beta,
            domain_length,
        };
        params.validate()?;
        Ok(params)
    }

    /// Aggregation exponent shifted by one, `η = σ + 1`.
    pub fn eta(&self) -> f64 {
        self.sigma + 1.0
    }

    /// Checks the standing hypotheses `n ≥ 3`, `σ ≥ 1`, `α > 1`, `β > 1`
    /// and a positive, finite box length. Reports the first violation.
    pub fn validate(&self) -> Result<()> {
        match self.violations().into_iter().next() {
            None => Ok(()),
            Some(msg) => Err(Error::InvalidParams(msg)),
        }
    }

    /// Every violated hypothesis, in field order.
    pub fn violations(&self) -> Vec<String> {
        const HYPOTHESES: &str = "standing hypothesis alpha > 1, beta > 1, sigma >= 1";
        let mut out = Vec::new();
        if self.n < 3 {
            out.push(format!(
                "n must be at least 3, got {} (the Newtonian kernel and the Sobolev exponent need n >= 3)",
                self.n
            ));
        }
        let checks: [(&str, f64, bool, &str); 4] = [
            ("sigma", self.sigma, self.sigma >= 1.0, "be at least 1"),
            ("alpha", self.alpha, self.alpha > 1.0, "exceed 1"),
            ("beta", self.beta, self.beta > 1.0, "exceed 1"),
            ("domain_length", self.domain_length, self.domain_length > 0.0, "be positive"),
        ];
        for (name, value, ok, rule) in checks {
            if !value.is_finite() {
                out.push(format!("{name} must be finite, got {value}"));
            } else if !ok && name == "domain_length" {
                out.push(format!("{name} must {rule}, got {value}"));
            } else if !ok {
                out.push(format!("{name} must {rule}, got {value} ({HYPOTHESES})"));
            }
        }
        out
    }
}

/// Sobolev exponent `p = 2n/(n−2)`.
pub fn sobolev_exponent(n: u32) -> Result<f64> {
    if n < 3 {
        return Err(Error::InvalidParams(format!(
            "n must be at least 3 for the Sobolev exponent, got {n}"
        )));
    }
    let n = f64::from(n);
    Ok(2.0 * n / (n - 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sobolev_exponent_values() {
        assert_eq!(sobolev_exponent(3).unwrap(), 6.0);
        assert_eq!(sobolev_exponent(4).unwrap(), 4.0);
        assert_eq!(sobolev_exponent(6).unwrap(), 3.0);
        assert!(sobolev_exponent(2).is_err());
    }

    #[test]
    fn eta_tracks_sigma() {
        let p = ModelParams::new(3, 2.5, 2.0, 3.0, 16.0).unwrap();
        assert_eq!(p.eta(), 3.5);
    }

    #[test]
    fn rejects_each_standing_hypothesis() {
        let cases = [
            (ModelParams::new(2, 1.0, 2.0, 3.0, 1.0), "n must be"),
            (ModelParams::new(3, 0.5, 2.0, 3.0, 1.0), "sigma must be"),
            (ModelParams::new(3, 1.0, 0.5, 3.0, 1.0), "alpha must exceed 1"),
            (ModelParams::new(3, 1.0, 2.0, 1.0, 1.0), "beta must exceed 1"),
            (ModelParams::new(3, 1.0, 2.0, 3.0, 0.0), "domain_length"),
            (ModelParams::new(3, f64::NAN, 2.0, 3.0, 1.0), "finite"),
        ];
        for (res, needle) in cases {
            let msg = res.unwrap_err().to_string();
            assert!(msg.contains(needle), "{msg}");
        }
    }

    #[test]
    fn lists_every_violation() {
        let p = ModelParams { n: 2, sigma: 0.5, alpha: 1.0, beta: 3.0, domain_length: -1.0 };
        let v = p.violations();
        assert_eq!(v.len(), 4, "{v:?}");
        assert!(v[2].starts_with("alpha must exceed 1"));
    }
}
