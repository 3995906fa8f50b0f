//! Ready-made coefficient bundles used by the shipped scenarios, the
//! tests, and the benchmarks.

use crate::model::Coefficients;
use crate::periodic::PeriodicFn;
use std::f64::consts::PI;

/// The seasonal parameter set of the shipped study configs, with the
/// incidence amplitude scale γ as the free parameter:
///
/// Λ = 0.7(1+0.9cos(π+2πt)), μ = 0.6(1+0.9cos(2πt)), c = 0.1,
/// b = 0.3(1+0.7cos(π+2πt)), r = 0.2(1+0.7cos(2πt)), k = 0.9,
/// η = 0.7(1+0.7cos(π+2πt)), β = γ(1+0.7cos(2πt)), ω = 1.
///
/// γ = 0.45 puts the system in the extinction regime (𝓡 ≈ 0.93);
/// γ = 0.6 in the permanence regime (𝓡 ≈ 1.24).
pub fn seasonal(gamma: f64) -> Coefficients {
    let omega = 1.0;
    Coefficients {
        lambda: PeriodicFn::harmonic(0.7, 0.9, PI, omega).unwrap(),
        mu: PeriodicFn::harmonic(0.6, 0.9, 0.0, omega).unwrap(),
        c: PeriodicFn::constant(0.1, omega).unwrap(),
        b: PeriodicFn::harmonic(0.3, 0.7, PI, omega).unwrap(),
        r: PeriodicFn::harmonic(0.2, 0.7, 0.0, omega).unwrap(),
        k: PeriodicFn::constant(0.9, omega).unwrap(),
        eta: PeriodicFn::harmonic(0.7, 0.7, PI, omega).unwrap(),
        beta: PeriodicFn::harmonic(gamma, 0.7, 0.0, omega).unwrap(),
    }
}

/// Constant coefficients with period 1, in the order
/// (Λ, β, μ, c, η, k, r, b).
#[allow(clippy::too_many_arguments)]
pub fn constant(
    lambda: f64,
    beta: f64,
    mu: f64,
    c: f64,
    eta: f64,
    k: f64,
    r: f64,
    b: f64,
) -> Coefficients {
    let omega = 1.0;
    Coefficients {
        lambda: PeriodicFn::constant(lambda, omega).unwrap(),
        beta: PeriodicFn::constant(beta, omega).unwrap(),
        mu: PeriodicFn::constant(mu, omega).unwrap(),
        c: PeriodicFn::constant(c, omega).unwrap(),
        eta: PeriodicFn::constant(eta, omega).unwrap(),
        k: PeriodicFn::constant(k, omega).unwrap(),
        r: PeriodicFn::constant(r, omega).unwrap(),
        b: PeriodicFn::constant(b, omega).unwrap(),
    }
}
