//! The sharp permanence/extinction threshold
//! 𝓡 = avg(β s₀) / (c̄ + avg(η y₀)), computed by two independent routes:
//! direct quadrature of the defining averages, and the root λ* of
//! W(0, ω, λ) = 1 where W is the evolution operator of the scalar
//! linearization along the predator disease-free orbit.

use crate::aux_orbits::{self, AuxOrbit, AuxOrbitError};
use crate::model::Coefficients;
use crate::quad::{self, DEFAULT_PANELS};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ThresholdError {
    #[error("denominator c̄ + avg(η y₀) = {0} is not positive")]
    ZeroDenominator(f64),
    #[error("λ must be positive, got {0}")]
    LambdaOutOfRange(f64),
    #[error("no sign change of log W on the bracket [{0}, {1}]")]
    BracketFailure(f64, f64),
    #[error(transparent)]
    AuxOrbit(#[from] AuxOrbitError),
}

/// Regime classification with a symmetric indeterminate band around 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Extinction,
    Permanence,
    Indeterminate,
}

const REGIME_TOL: f64 = 1e-6;

/// The threshold with both computation routes and its building blocks.
#[derive(Debug, Clone)]
pub struct ThresholdReport {
    pub r_quadrature: f64,
    pub r_lambda_root: f64,
    /// all-averages variant β̄(Λ̄/μ̄)/(c̄ + η̄ r̄/b̄); reported, never used
    /// for classification
    pub r_averages: f64,
    pub regime: Regime,
    pub beta_s0_avg: f64,
    pub c_avg: f64,
    pub eta_y0_avg: f64,
    pub diagnostics: Vec<String>,
}

/// Compute 𝓡 and classify the regime.
pub fn compute_r(params: &Coefficients) -> Result<ThresholdReport, ThresholdError> {
    let s0 = aux_orbits::s0(params)?;
    let y0 = aux_orbits::y0(params)?;
    compute_r_with_orbits(params, &s0, &y0)
}

/// Same as [`compute_r`] with pre-built auxiliary orbits.
pub fn compute_r_with_orbits(
    params: &Coefficients,
    s0: &AuxOrbit,
    y0: &AuxOrbit,
) -> Result<ThresholdReport, ThresholdError> {
    let beta_s0_avg = s0.average_product(&params.beta);
    let eta_y0_avg = y0.average_product(&params.eta);
    let c_avg = params.c.average();
    let denom = c_avg + eta_y0_avg;
    if denom <= 1e-14 {
        return Err(ThresholdError::ZeroDenominator(denom));
    }
    let r_quadrature = beta_s0_avg / denom;
    let r_lambda_root = lambda_root_with_orbits(params, s0, y0)?;
    let r_averages = r_averages(params);
    let mut diagnostics = Vec::new();
    if (r_quadrature - r_lambda_root).abs() > 1e-6 {
        diagnostics.push(format!(
            "threshold routes disagree: quadrature {r_quadrature} vs lambda-root {r_lambda_root}"
        ));
    }
    if (r_quadrature - 1.0) * (r_averages - 1.0) < 0.0 {
        diagnostics.push(format!(
            "threshold {r_quadrature} and all-averages variant {r_averages} straddle 1"
        ));
    }
    let regime = if (r_quadrature - 1.0).abs() < REGIME_TOL {
        Regime::Indeterminate
    } else if r_quadrature > 1.0 {
        Regime::Permanence
    } else {
        Regime::Extinction
    };
    Ok(ThresholdReport {
        r_quadrature,
        r_lambda_root,
        r_averages,
        regime,
        beta_s0_avg,
        c_avg,
        eta_y0_avg,
        diagnostics,
    })
}

/// The all-averages variant β̄(Λ̄/μ̄)/(c̄ + η̄ r̄/b̄).
pub fn r_averages(params: &Coefficients) -> f64 {
    let denom = params.c.average()
        + params.eta.average() * params.r.average() / params.b.average();
    params.beta.average() * (params.lambda.average() / params.mu.average()) / denom
}

/// Evolution operator of w' = (β(t)s₀(t)/λ - c(t) - η(t)y₀(t)) w:
/// W(s, t, λ) = exp(∫ₛᵗ β s₀/λ - c - η y₀).
pub fn w(
    params: &Coefficients,
    s0: &AuxOrbit,
    y0: &AuxOrbit,
    s: f64,
    t: f64,
    lambda: f64,
) -> Result<f64, ThresholdError> {
    Ok(log_w(params, s0, y0, s, t, lambda)?.exp())
}

fn log_w(
    params: &Coefficients,
    s0: &AuxOrbit,
    y0: &AuxOrbit,
    s: f64,
    t: f64,
    lambda: f64,
) -> Result<f64, ThresholdError> {
    if lambda <= 0.0 {
        return Err(ThresholdError::LambdaOutOfRange(lambda));
    }
    if s == t {
        return Ok(0.0);
    }
    Ok(quad::simpson(
        |u| {
            params.beta.eval(u) * s0.value(u) / lambda
                - params.c.eval(u)
                - params.eta.eval(u) * y0.value(u)
        },
        s,
        t,
        DEFAULT_PANELS,
    ))
}

/// Root λ* of W(0, ω, λ) = 1, by bisection on log W followed by a Newton
/// polish to |log W| < 1e-12.
pub fn lambda_root(params: &Coefficients) -> Result<f64, ThresholdError> {
    let s0 = aux_orbits::s0(params)?;
    let y0 = aux_orbits::y0(params)?;
    lambda_root_with_orbits(params, &s0, &y0)
}

pub fn lambda_root_with_orbits(
    params: &Coefficients,
    s0: &AuxOrbit,
    y0: &AuxOrbit,
) -> Result<f64, ThresholdError> {
    let omega = params.period();
    let g = |lambda: f64| log_w(params, s0, y0, 0.0, omega, lambda).unwrap();
    let (mut lo, mut hi) = (1e-6, 1e6);
    let (glo, ghi) = (g(lo), g(hi));
    // g is strictly decreasing in λ when avg(β s₀) > 0
    if glo.signum() == ghi.signum() {
        return Err(ThresholdError::BracketFailure(lo, hi));
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if g(mid).signum() == glo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-9 * hi {
            break;
        }
    }
    let mut lambda = 0.5 * (lo + hi);
    // g(λ) = ω(avg(β s₀)/λ - c̄ - avg(η y₀)); g'(λ) = -ω avg(β s₀)/λ²
    for _ in 0..30 {
        let gl = g(lambda);
        if gl.abs() < 1e-12 {
            break;
        }
        let beta_s0 = s0.average_product(&params.beta);
        let dg = -omega * beta_s0 / (lambda * lambda);
        if dg == 0.0 {
            break;
        }
        lambda -= gl / dg;
    }
    Ok(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aux_orbits;
    use crate::presets;

    fn constant_params() -> Coefficients {
        presets::constant(1.0, 0.4, 0.5, 0.1, 0.2, 0.5, 0.3, 0.6)
    }

    #[test]
    fn constant_closed_form() {
        // s₀ = 2, y₀ = 0.5, 𝓡 = 0.8/(0.1+0.1) = 4
        let rep = compute_r(&constant_params()).unwrap();
        assert!((rep.r_quadrature - 4.0).abs() < 1e-9, "{}", rep.r_quadrature);
        assert!((rep.r_lambda_root - 4.0).abs() < 1e-8);
        assert_eq!(rep.regime, Regime::Permanence);
    }

    #[test]
    fn seasonal_thresholds() {
        let rep = compute_r(&presets::seasonal(0.45)).unwrap();
        assert!((rep.r_quadrature - 0.926).abs() < 0.005, "{}", rep.r_quadrature);
        assert_eq!(rep.regime, Regime::Extinction);
        let rep = compute_r(&presets::seasonal(0.6)).unwrap();
        assert!((rep.r_quadrature - 1.238).abs() < 0.005, "{}", rep.r_quadrature);
        assert_eq!(rep.regime, Regime::Permanence);
    }

    #[test]
    fn w_identity_and_monotonicity() {
        let p = presets::seasonal(0.45);
        let s0 = aux_orbits::s0(&p).unwrap();
        let y0 = aux_orbits::y0(&p).unwrap();
        for &s in &[0.0, 0.3, 0.77] {
            assert_eq!(w(&p, &s0, &y0, s, s, 2.0).unwrap(), 1.0);
        }
        // W(0, ω, 𝓡) = 1
        let rep = compute_r(&p).unwrap();
        let v = w(&p, &s0, &y0, 0.0, 1.0, rep.r_quadrature).unwrap();
        assert!((v - 1.0).abs() < 1e-8, "{v}");
        // strictly decreasing in λ
        let mut prev = f64::INFINITY;
        for i in 1..=10 {
            let lambda = 0.2 * i as f64;
            let v = w(&p, &s0, &y0, 0.0, 1.0, lambda).unwrap();
            assert!(v < prev);
            prev = v;
        }
        assert!(w(&p, &s0, &y0, 0.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn routes_agree() {
        for gamma in [0.45, 0.6] {
            let rep = compute_r(&presets::seasonal(gamma)).unwrap();
            assert!(
                (rep.r_quadrature - rep.r_lambda_root).abs() < 1e-8,
                "gamma {gamma}: {} vs {}",
                rep.r_quadrature,
                rep.r_lambda_root
            );
            assert!(rep.diagnostics.is_empty());
        }
    }

    #[test]
    fn lambda_root_seasonal() {
        let root = lambda_root(&presets::seasonal(0.45)).unwrap();
        assert!((root - 0.926).abs() < 0.005, "{root}");
    }

    #[test]
    fn threshold_scales_linearly_in_beta() {
        let p = presets::seasonal(0.45);
        let base = compute_r(&p).unwrap();
        let scaled = compute_r(&presets::seasonal(0.45 * 1.7)).unwrap();
        assert!(
            (scaled.r_quadrature - 1.7 * base.r_quadrature).abs() < 1e-10,
            "{} vs {}",
            scaled.r_quadrature,
            1.7 * base.r_quadrature
        );
    }

    #[test]
    fn floquet_cross_check() {
        // I-multiplier of the predator disease-free orbit equals
        // exp(ω (c̄ + avg(η y₀)) (𝓡 - 1))
        for gamma in [0.45, 0.6] {
            let p = presets::seasonal(gamma);
            let rep = compute_r(&p).unwrap();
            let (_, o2) = aux_orbits::disease_free_orbits(&p).unwrap();
            let expected =
                (1.0 * (rep.c_avg + rep.eta_y0_avg) * (rep.r_quadrature - 1.0)).exp();
            let got = o2.infection_multiplier();
            assert!(
                (got - expected).abs() / expected.abs() < 1e-6,
                "gamma {gamma}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn averages_variant() {
        // β̄(Λ̄/μ̄)/(c̄+η̄r̄/b̄) for the seasonal set, γ = 0.6:
        // 0.6·(0.7/0.6)/(0.1+0.7·0.2/0.3) = 1.2352...
        let v = r_averages(&presets::seasonal(0.6));
        assert!((v - 0.7 / (0.1 + 0.7 * 0.2 / 0.3)).abs() < 1e-12);
    }
}
