use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    /// Integrating-factor Euler.
    #[serde(rename = "IMEX1")]
    Imex1,
    /// Integrating-factor midpoint.
    #[serde(rename = "IMEX2")]
    Imex2,
    /// Picard iteration on the mild (Duhamel) form.
    #[serde(rename = "Duhamel")]
    Duhamel,
}

impl Scheme {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::Imex1 => "IMEX1",
            Scheme::Imex2 => "IMEX2",
            Scheme::Duhamel => "Duhamel",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "IMEX1" => Some(Scheme::Imex1),
            "IMEX2" => Some(Scheme::Imex2),
            "Duhamel" => Some(Scheme::Duhamel),
            _ => None,
        }
    }
}

/// Switches for the individual terms of the equation. Everything is on by
/// default; turning terms off isolates pieces of the solver for testing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermMask {
    pub diffusion: bool,
    pub transport: bool,
    pub reaction: bool,
}

impl Default for TermMask {
    fn default() -> Self {
        Self {
            diffusion: true,
            transport: true,
            reaction: true,
        }
    }
}

impl TermMask {
    pub fn heat_only() -> Self {
        Self {
            diffusion: true,
            transport: false,
            reaction: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// First step and upper bound on every step.
    pub dt_init: f64,
    pub dt_min: f64,
    pub cfl_safety: f64,
    pub t_end: f64,
    /// Blow-up is reported once `‖u‖_∞` exceeds this multiple of `‖u₀‖_∞`.
    pub blowup_linf_factor: f64,
    pub picard_tol: f64,
    pub picard_max_iters: usize,
    pub scheme: Scheme,
    pub terms: TermMask,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            dt_init: 1e-2,
            dt_min: 1e-10,
            cfl_safety: 0.5,
            t_end: 1.0,
            blowup_linf_factor: 1e6,
            picard_tol: 1e-10,
            picard_max_iters: 50,
            scheme: Scheme::Imex2,
            terms: TermMask::default(),
        }
    }
}

impl SolverConfig {
    /// Every violated constraint, in field order.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !(self.dt_min > 0.0) {
            v.push(format!("solver.dt_min must be positive, got {}", self.dt_min));
        }
        if !(self.dt_init > 0.0) || !self.dt_init.is_finite() {
            v.push(format!("solver.dt_init must be positive, got {}", self.dt_init));
        }
        if !(self.dt_min < self.dt_init) {
            v.push(format!(
                "solver.dt_min ({}) must be smaller than solver.dt_init ({})",
                self.dt_min, self.dt_init
            ));
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            v.push(format!("solver.cfl_safety must lie in (0, 1], got {}", self.cfl_safety));
        }
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            v.push(format!("solver.t_end must be positive, got {}", self.t_end));
        }
        if !(self.blowup_linf_factor > 1.0) {
            v.push(format!(
                "solver.blowup_linf_factor must exceed 1, got {}",
                self.blowup_linf_factor
            ));
        }
        if !(self.picard_tol > 0.0) {
            v.push(format!("solver.picard_tol must be positive, got {}", self.picard_tol));
        }
        if self.picard_max_iters == 0 {
            v.push("solver.picard_max_iters must be at least 1".to_string());
        }
        v
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(v.join("; ")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        SolverConfig::default().validate().unwrap();
    }

    #[test]
    fn reports_all_violations() {
        let cfg = SolverConfig {
            dt_min: 0.5,
            dt_init: 0.1,
            cfl_safety: 2.0,
            t_end: -1.0,
            ..SolverConfig::default()
        };
        let v = cfg.violations();
        assert_eq!(v.len(), 3, "{v:?}");
        assert!(v[0].contains("0.5") && v[0].contains("0.1"));
    }

    #[test]
    fn scheme_names() {
        for s in [Scheme::Imex1, Scheme::Imex2, Scheme::Duhamel] {
            assert_eq!(Scheme::parse(s.as_str()), Some(s));
            let json = serde_json::to_string(&s).unwrap();
            assert_eq!(json, format!("\"{}\"", s.as_str()));
        }
    }
}
