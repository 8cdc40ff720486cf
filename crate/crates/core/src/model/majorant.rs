//! Existence-time bound from the scalar majorant `y' = y^{σ+1} + y^α`.
//!
//! The sup norm of a solution is dominated by `y` started at `‖u₀‖_∞`, so
//! the blow-up time of `y` is a lower bound on the local existence time.

use super::params::ModelParams;
use crate::error::{Error, Result};

/// The majorant is declared blown up once it exceeds this value.
pub const MAJORANT_CAP: f64 = 1e12;

const REL_TOL: f64 = 1e-11;
const MAX_STEPS: usize = 1_000_000;

fn rk4(f: &impl Fn(f64) -> f64, y: f64, h: f64) -> f64 {
    let k1 = f(y);
    let k2 = f(y + 0.5 * h * k1);
    let k3 = f(y + 0.5 * h * k2);
    let k4 = f(y + h * k3);
    y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

/// Blow-up time of `y' = y^{σ+1} + y^α`, `y(0) = sup_u0`.
///
/// Integrates with classical RK4 under step-doubling error control until
/// `y` passes [`MAJORANT_CAP`], then adds the remaining time of the dominant
/// power law, `Y / ((m−1) f(Y))` with `m = max(σ+1, α)`.
pub fn existence_time_estimate(sup_u0: f64, params: &ModelParams) -> Result<f64> {
    params.validate()?;
    if !(sup_u0 >= 0.0) || !sup_u0.is_finite() {
        return Err(Error::InvalidParams(format!(
            "sup_u0 must be finite and non-negative, got {sup_u0}"
        )));
    }
    if sup_u0 == 0.0 {
        return Ok(f64::INFINITY);
    }
    let (eta, alpha) = (params.eta(), params.alpha);
    let f = |y: f64| y.powf(eta) + y.powf(alpha);
    let m = eta.max(alpha);

    let mut t = 0.0;
    let mut y = sup_u0;
    let mut h = 1e-3 * y / f(y);
    for _ in 0..MAX_STEPS {
        if y >= MAJORANT_CAP {
            return Ok(t + y / ((m - 1.0) * f(y)));
        }
        let full = rk4(&f, y, h);
        let half = rk4(&f, rk4(&f, y, 0.5 * h), 0.5 * h);
        let err = (half - full).abs() / 15.0;
        let tol = REL_TOL * half.abs();
        if !half.is_finite() || !full.is_finite() || err > tol {
            let shrink = if err.is_finite() && err > 0.0 {
                (0.9 * (tol / err).powf(0.2)).clamp(0.1, 0.5)
            } else {
                0.1
            };
            h *= shrink;
            continue;
        }
        t += h;
        y = half + (half - full) / 15.0;
        let grow = if err > 0.0 {
            (0.9 * (tol / err).powf(0.2)).min(2.0)
        } else {
            2.0
        };
        h *= grow.max(1.0);
    }
    Err(Error::Precondition(format!(
        "majorant integration did not reach the cap after {MAX_STEPS} steps"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(sigma: f64, alpha: f64) -> ModelParams {
        ModelParams::new(3, sigma, alpha, 3.0, 1.0).unwrap()
    }

    #[test]
    fn zero_data_never_blows_up() {
        assert_eq!(existence_time_estimate(0.0, &params(1.0, 2.0)).unwrap(), f64::INFINITY);
    }

    #[test]
    fn riccati_closed_form() {
        // y' = 2y² blows up at 1/(2 y₀).
        for (y0, expected) in [(1.0, 0.5), (2.0, 0.25), (0.1, 5.0)] {
            let t = existence_time_estimate(y0, &params(1.0, 2.0)).unwrap();
            assert!((t - expected).abs() < 1e-8 * expected, "{y0}: {t}");
        }
    }

    #[test]
    fn equal_powers_closed_form() {
        // σ+1 = α = m: y' = 2y^m, T = y₀^{1−m} / (2(m−1)).
        for m in [2.5, 3.0, 4.0] {
            let y0 = 0.7;
            let t = existence_time_estimate(y0, &params(m - 1.0, m)).unwrap();
            let expected = y0.powf(1.0 - m) / (2.0 * (m - 1.0));
            assert!((t - expected).abs() < 1e-8 * expected, "{m}: {t} vs {expected}");
        }
    }

    /// Independent route: T = ∫_{y₀}^∞ dy / f(y), mapped to s = y₀/y ∈ (0, 1]
    /// and integrated by composite Gauss–Legendre.
    fn quadrature_blowup_time(y0: f64, eta: f64, alpha: f64) -> f64 {
        const X: [f64; 5] = [0.0, -0.538_469_310_105_683_1, 0.538_469_310_105_683_1, -0.906_179_845_938_664, 0.906_179_845_938_664];
        const W: [f64; 5] = [0.568_888_888_888_888_9, 0.478_628_670_499_366_5, 0.478_628_670_499_366_5, 0.236_926_885_056_189_1, 0.236_926_885_056_189_1];
        let g = |s: f64| {
            let y = y0 / s;
            y0 / (s * s * (y.powf(eta) + y.powf(alpha)))
        };
        let panels = 4000;
        let mut total = 0.0;
        for i in 0..panels {
            let (a, b) = (i as f64 / panels as f64, (i + 1) as f64 / panels as f64);
            let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
            total += half * X.iter().zip(W).map(|(x, w)| w * g(mid + half * x)).sum::<f64>();
        }
        total
    }

    #[test]
    fn agrees_with_quadrature_for_unequal_powers() {
        for (sigma, alpha, y0) in [(1.0, 3.0, 0.8), (2.0, 2.5, 1.3), (1.5, 4.0, 0.5)] {
            let t = existence_time_estimate(y0, &params(sigma, alpha)).unwrap();
            let oracle = quadrature_blowup_time(y0, sigma + 1.0, alpha);
            assert!((t - oracle).abs() < 1e-7 * oracle, "{sigma} {alpha}: {t} vs {oracle}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn decreasing_in_initial_sup(
            sigma in 1.0f64..3.0, alpha in 1.2f64..4.0, y0 in 0.05f64..5.0, bump in 1.05f64..3.0,
        ) {
            let p = params(sigma, alpha);
            let t_small = existence_time_estimate(y0, &p).unwrap();
            let t_large = existence_time_estimate(y0 * bump, &p).unwrap();
            prop_assert!(t_large < t_small);
        }
    }
}
