//! Endemic periodic orbit search: damped Newton shooting on the period
//! map P, with the Jacobian Φ - Id taken from the monodromy, and Floquet
//! classification of the result.

use crate::integrate::{self, IntegrateError, Method};
use crate::linalg;
use crate::model::{Coefficients, State};
use crate::threshold::{self, Regime, ThresholdError};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EndemicError {
    #[error("endemic search refused: threshold {0} is not in the permanence regime")]
    RegimeMismatch(f64),
    #[error("Newton iteration failed to converge; best residual {residual} at {best:?}")]
    NewtonDivergence { best: State, residual: f64 },
    #[error("iterate collapsed onto the disease-free orbit (min I = {0})")]
    CollapsedToDiseaseFree(f64),
    #[error(transparent)]
    Threshold(#[from] ThresholdError),
    #[error(transparent)]
    Integrate(#[from] IntegrateError),
}

/// Floquet classification of a periodic orbit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stability {
    Stable,
    Unstable,
    Nonhyperbolic { tol: f64 },
}

const HYPERBOLICITY_TOL: f64 = 1e-6;
const NEWTON_TOL: f64 = 1e-10;
const MAX_NEWTON_ITER: usize = 50;
const MAX_HALVINGS: usize = 20;
const COLLAPSE_FLOOR: f64 = 1e-10;

/// An ω-periodic orbit of the full system found by shooting.
#[derive(Debug, Clone)]
pub struct PeriodicOrbit {
    pub x0: State,
    pub period: f64,
    /// |P(x₀) - x₀| in max norm
    pub residual: f64,
    pub multipliers: [Complex64; 3],
    pub samples: Vec<(f64, State)>,
    pub stability: Stability,
}

impl PeriodicOrbit {
    pub fn min_infected(&self) -> f64 {
        self.samples.iter().map(|(_, x)| x.i).fold(f64::INFINITY, f64::min)
    }
}

/// The period map P(x): the solution at t = ω with initial condition x
/// at t = 0.
pub fn poincare(params: &Coefficients, x: State) -> Result<State, IntegrateError> {
    let omega = params.period();
    Ok(integrate::integrate_system(params, 0.0, x, omega, Method::default(), None)?.last().1)
}

/// Classify by multiplier moduli against the hyperbolicity band.
pub fn classify_stability(multipliers: &[Complex64; 3]) -> Stability {
    let max_mod = multipliers.iter().map(|m| m.norm()).fold(0.0, f64::max);
    if max_mod < 1.0 - HYPERBOLICITY_TOL {
        Stability::Stable
    } else if multipliers.iter().any(|m| m.norm() > 1.0 + HYPERBOLICITY_TOL) {
        Stability::Unstable
    } else {
        Stability::Nonhyperbolic { tol: HYPERBOLICITY_TOL }
    }
}

/// Find the endemic periodic orbit. Refuses outside the permanence
/// regime. Without a seed, transients are washed out by integrating
/// from (s₀(0), 0.1, y₀(0)) for 50 periods.
pub fn find_endemic_orbit(
    params: &Coefficients,
    seed: Option<State>,
) -> Result<PeriodicOrbit, EndemicError> {
    let report = threshold::compute_r(params)?;
    if report.regime != Regime::Permanence {
        return Err(EndemicError::RegimeMismatch(report.r_quadrature));
    }
    let omega = params.period();
    let mut x = match seed {
        Some(s) => s,
        None => {
            let s0 = crate::aux_orbits::s0(params).map_err(|e| {
                EndemicError::Threshold(ThresholdError::AuxOrbit(e))
            })?;
            let y0 = crate::aux_orbits::y0(params).map_err(|e| {
                EndemicError::Threshold(ThresholdError::AuxOrbit(e))
            })?;
            let start = State::new(s0.initial_value(), 0.1, y0.initial_value());
            integrate::integrate_system(params, 0.0, start, 50.0 * omega, Method::default(), None)?
                .last()
                .1
        }
    };

    let mut best = x;
    let mut best_residual = f64::INFINITY;
    for _ in 0..MAX_NEWTON_ITER {
        let mono = integrate::monodromy(params, x, 0.0)?;
        let px = mono.endpoint;
        let g = [px.s - x.s, px.i - x.i, px.y - x.y];
        let residual = g.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if residual < best_residual {
            best_residual = residual;
            best = x;
        }
        if residual < NEWTON_TOL {
            return finish_orbit(params, x, residual);
        }
        // Newton direction: (Φ - Id) d = -G
        let mut a = mono.matrix;
        for (i, row) in a.iter_mut().enumerate() {
            row[i] -= 1.0;
        }
        let d = match linalg::solve3(&a, &[-g[0], -g[1], -g[2]]) {
            Some(d) => d,
            None => {
                return Err(EndemicError::NewtonDivergence { best, residual: best_residual })
            }
        };
        // damped update: halve until the residual decreases
        let mut accepted = false;
        let mut scale = 1.0;
        for _ in 0..=MAX_HALVINGS {
            let trial = State::new(x.s + scale * d[0], x.i + scale * d[1], x.y + scale * d[2]);
            if trial.s > 0.0 && trial.y > 0.0 && trial.i > -COLLAPSE_FLOOR {
                if trial.i.abs() < COLLAPSE_FLOOR {
                    return Err(EndemicError::CollapsedToDiseaseFree(trial.i));
                }
                let p_trial = poincare(params, trial)?;
                let r_trial = p_trial.dist(trial);
                if r_trial < residual {
                    x = trial;
                    accepted = true;
                    break;
                }
            }
            scale *= 0.5;
        }
        if !accepted {
            return Err(EndemicError::NewtonDivergence { best, residual: best_residual });
        }
    }
    Err(EndemicError::NewtonDivergence { best, residual: best_residual })
}

fn finish_orbit(
    params: &Coefficients,
    x0: State,
    residual: f64,
) -> Result<PeriodicOrbit, EndemicError> {
    let omega = params.period();
    let mono = integrate::monodromy(params, x0, 0.0)?;
    let traj = integrate::integrate_system(
        params,
        0.0,
        x0,
        omega,
        Method::default(),
        Some(omega / 200.0),
    )?;
    let min_i = traj.min_infected();
    if min_i < COLLAPSE_FLOOR {
        return Err(EndemicError::CollapsedToDiseaseFree(min_i));
    }
    Ok(PeriodicOrbit {
        x0,
        period: omega,
        residual,
        multipliers: mono.multipliers,
        samples: traj.samples,
        stability: classify_stability(&mono.multipliers),
    })
}
