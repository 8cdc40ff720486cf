//! Right-hand side `Δu − ∇·(u^σ ∇v) + u^α (1 − ∫u^β)`.
//!
//! The nonlinear part is assembled pseudo-spectrally: powers and products
//! are formed pointwise, transformed, and truncated to the two-thirds band.
//! The chemotactic flux is differentiated in spectral space, so its
//! integral over the box vanishes to rounding.

use super::config::TermMask;
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::spectral::{clamped_pow, divergence_spectrum, gradient_from_spectrum, potential_spectrum, Field, Spectrum};

/// Dealiased spectrum of the nonlinear terms `−∇·(u^σ∇v) + u^α(1 − ∫u^β)`.
pub(crate) fn nonlinear_spectrum(
    u: &Field,
    u_hat: &Spectrum,
    params: &ModelParams,
    terms: TermMask,
) -> Result<Spectrum> {
    let grid = u.grid();
    let mut total = Spectrum::zeros(grid);
    if terms.transport {
        let force = gradient_from_spectrum(&potential_spectrum(u_hat));
        let sigma = params.sigma;
        let flux = force.map(|f| {
            u.zip_map(&f, |uv, fv| clamped_pow(uv, sigma) * fv)
                .expect("fields share a grid")
        });
        if flux.iter().any(|f| !f.is_finite()) {
            return Err(Error::NonFinite { term: "transport" });
        }
        total.axpby(0.0, -1.0, &divergence_spectrum(&flux));
    }
    if terms.reaction {
        let mass = u.nonlocal_mass(params.beta);
        let factor = 1.0 - mass;
        let alpha = params.alpha;
        let reaction = u.map(|v| clamped_pow(v, alpha) * factor);
        if !reaction.is_finite() {
            return Err(Error::NonFinite { term: "reaction" });
        }
        total.axpby(1.0, 1.0, &reaction.spectrum());
    }
    total.dealias();
    if !total.is_finite() {
        return Err(Error::NonFinite { term: "nonlinear transform" });
    }
    Ok(total)
}

/// Largest characteristic speed of the chemotactic transport,
/// `max σ u^{σ−1} |∇v|`.
pub fn transport_speed(u: &Field, params: &ModelParams) -> f64 {
    let force = gradient_from_spectrum(&potential_spectrum(&u.spectrum()));
    let sigma = params.sigma;
    let speed2 = force[0]
        .zip_map(&force[1], |a, b| a * a + b * b)
        .and_then(|s| s.zip_map(&force[2], |s, c| s + c * c))
        .expect("fields share a grid");
    let weighted = u
        .zip_map(&speed2, |uv, s2| sigma * clamped_pow(uv, sigma - 1.0) * s2.sqrt())
        .expect("fields share a grid");
    weighted.linf_norm()
}

pub fn rhs_with(u: &Field, params: &ModelParams, terms: TermMask) -> Result<Field> {
    if !u.is_finite() {
        return Err(Error::NonFinite { term: "state" });
    }
    let u_hat = u.spectrum();
    let mut total = nonlinear_spectrum(u, &u_hat, params, terms)?;
    if terms.diffusion {
        let mut lap = u_hat;
        lap.apply_radial(|k2| -k2);
        if !lap.is_finite() {
            return Err(Error::NonFinite { term: "diffusion" });
        }
        total.axpby(1.0, 1.0, &lap);
    }
    Ok(total.to_field())
}

/// Full right-hand side of the equation at state `u`.
pub fn rhs(u: &Field, params: &ModelParams) -> Result<Field> {
    rhs_with(u, params, TermMask::default())
}

/// Heat semigroup multiplier `e^{−|ξ|² τ}` applied in place.
pub(crate) fn apply_heat(s: &mut Spectrum, tau: f64, terms: TermMask) {
    if terms.diffusion && tau != 0.0 {
        s.apply_radial(|k2| (-k2 * tau).exp());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;
    use std::f64::consts::PI;

    fn params(sigma: f64, alpha: f64, beta: f64, l: f64) -> ModelParams {
        ModelParams::new(3, sigma, alpha, beta, l).unwrap()
    }

    #[test]
    fn homogeneous_state_reduces_to_reaction() {
        let l = 2.0;
        let g = Grid::new(16, l).unwrap();
        let c = 0.3;
        let p = params(1.0, 2.0, 3.0, l);
        let r = rhs(&Field::constant(&g, c), &p).unwrap();
        let expected = c.powi(2) * (1.0 - c.powi(3) * l.powi(3));
        for &v in r.values() {
            assert!((v - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn homogeneous_steady_state() {
        let l = 3.0;
        let g = Grid::new(16, l).unwrap();
        let p = params(2.0, 2.5, 1.7, l);
        let c = l.powf(-3.0 / p.beta);
        let r = rhs(&Field::constant(&g, c), &p).unwrap();
        assert!(r.linf_norm() < 1e-14, "{}", r.linf_norm());
    }

    #[test]
    fn single_mode_against_hand_expansion() {
        // u = c₀ + ε cos(κx), σ = 1, α = 2, β = 3:
        //   Δu = −κ² ε cos,   −∇·(u∇v) = c₀ ε cos + ε² cos(2κx),
        //   u²(1 − L³(c₀³ + 3c₀ε²/2)).
        let l = 10.0;
        let g = Grid::new(32, l).unwrap();
        let (c0, eps) = (0.4, 0.1);
        let kappa = 2.0 * PI * 2.0 / l;
        let p = params(1.0, 2.0, 3.0, l);
        let u = Field::from_fn(&g, |x, _, _| c0 + eps * (kappa * x).cos());
        let r = rhs(&u, &p).unwrap();
        let mass = l.powi(3) * (c0.powi(3) + 1.5 * c0 * eps * eps);
        for (idx, &val) in r.values().iter().enumerate() {
            let (i, _, _) = g.unravel(idx);
            let x = g.coord(i);
            let uu = c0 + eps * (kappa * x).cos();
            let expected = -kappa * kappa * eps * (kappa * x).cos()
                + c0 * eps * (kappa * x).cos()
                + eps * eps * (2.0 * kappa * x).cos()
                + uu * uu * (1.0 - mass);
            assert!((val - expected).abs() < 1e-10, "{idx}: {val} vs {expected}");
        }
    }

    #[test]
    fn flux_integrates_to_zero() {
        let l = 12.0;
        let g = Grid::new(32, l).unwrap();
        let p = params(1.5, 2.0, 3.0, l);
        let u = Field::from_fn(&g, |x, y, z| (-(x * x + 2.0 * y * y + z * z) / 2.0).exp());
        let terms = TermMask { diffusion: false, transport: true, reaction: false };
        let r = rhs_with(&u, &p, terms).unwrap();
        assert!(r.integral().abs() < 1e-12);
    }

    #[test]
    fn nan_state_is_reported() {
        let g = Grid::new(16, 1.0).unwrap();
        let mut u = Field::zeros(&g);
        u.values_mut()[3] = f64::NAN;
        assert!(matches!(rhs(&u, &params(1.0, 2.0, 3.0, 1.0)), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn speed_of_uniform_state_is_zero() {
        let g = Grid::new(16, 4.0).unwrap();
        assert!(transport_speed(&Field::constant(&g, 2.0), &params(2.0, 2.0, 3.0, 4.0)) < 1e-12);
    }
}
