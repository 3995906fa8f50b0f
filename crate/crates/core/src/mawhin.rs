//! The computable objects of the continuation-degree existence argument:
//! a priori bounds on the log-coordinate periodic solutions, the unique
//! positive root of the averaged algebraic system (through its quadratic
//! reduction), the degree determinant and its sign, and an empirical
//! permanence floor for the infected component.

use crate::integrate::{self, IntegrateError, Method};
use crate::model::{Coefficients, State};
use crate::periodic::{PeriodicError, PeriodicFn};
use crate::threshold::{self, Regime, ThresholdError};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MawhinError {
    #[error(transparent)]
    Periodic(#[from] PeriodicError),
    #[error("argument of ln is {1} <= 0 while computing {0}")]
    NonpositiveBound(&'static str, f64),
    #[error("averaged-threshold hypothesis violated: all-averages variant is {0} <= 1")]
    HypothesisViolated(f64),
    #[error("internal consistency failure: no positive root of the quadratic ({0})")]
    NoPositiveRoot(String),
    #[error("degree determinant is {0} >= 0")]
    SignViolation(f64),
    #[error("permanence floor requested outside the permanence regime (threshold {0})")]
    RegimeMismatch(f64),
    #[error(transparent)]
    Threshold(#[from] ThresholdError),
    #[error(transparent)]
    Integrate(#[from] IntegrateError),
}

/// A priori bounds for the log-coordinate periodic solutions:
/// A₁ ≤ e^{u₁}+e^{u₂} ≤ A₂, B₁ ≤ e^{u₃} ≤ B₂, and the box
/// θᵢ⁻ ≤ uᵢ ≤ θᵢ⁺.
#[derive(Debug, Clone)]
pub struct MawhinBounds {
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
    pub theta1: (f64, f64),
    pub theta2: (f64, f64),
    pub theta3: (f64, f64),
    /// permanence floor for the infected component used in θ₁⁻, θ₂⁻;
    /// an estimate unless supplied by the caller
    pub m: f64,
}

/// Compute the bounds given a permanence floor m > 0 for I.
///
/// A₂ = (Λ/μ)ᵘ, B₁ = (r/b)ˡ, B₂ = ((r + kη·A₂)/b)ᵘ, A₁ = (Λ/(c + η·B₂))ˡ,
/// with kη the pointwise product.
pub fn compute_bounds(params: &Coefficients, m: f64) -> Result<MawhinBounds, MawhinError> {
    assert!(m > 0.0, "permanence floor must be positive");
    let a2 = params.lambda.sup_ratio(&params.mu)?;
    let b1 = params.r.inf_ratio(&params.b)?;
    let keta = PeriodicFn::product(params.k.clone(), params.eta.clone())?;
    let b2_num = PeriodicFn::sum(params.r.clone(), keta.scaled(a2))?;
    let b2 = b2_num.sup_ratio(&params.b)?;
    let a1_den = PeriodicFn::sum(params.c.clone(), params.eta.clone().scaled(b2))?;
    let a1 = params.lambda.inf_ratio(&a1_den)?;

    let ln_checked = |name: &'static str, v: f64| -> Result<f64, MawhinError> {
        if v <= 0.0 {
            Err(MawhinError::NonpositiveBound(name, v))
        } else {
            Ok(v.ln())
        }
    };
    let theta3 = (ln_checked("B1", b1)?, ln_checked("B2", b2)?);
    let theta2 = (ln_checked("m", m)?, ln_checked("A2", a2)?);
    let s_floor = params.lambda.inf() / (params.beta.sup() * m + params.mu.sup());
    let theta1 = (ln_checked("Lambda^l/(beta^u m + mu^u)", s_floor)?, theta2.1);
    Ok(MawhinBounds { a1, a2, b1, b2, theta1, theta2, theta3, m })
}

/// The unique positive root of the averaged algebraic system
///
/// Λ̄ - β̄ e^{p₁+p₂} - μ̄ e^{p₁} = 0,
/// β̄ e^{p₁} - c̄ - η̄ e^{p₃} = 0,
/// r̄ - b̄ e^{p₃} + avg(kη) e^{p₂} = 0,
///
/// obtained through the quadratic in e^{p₂}.
#[derive(Debug, Clone)]
pub struct AlgebraicRoot {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    /// (a, b, c) of a·x² + b·x + c = 0 in x = e^{p₂}
    pub quadratic: (f64, f64, f64),
    pub discriminant: f64,
    /// numeric value of the degree determinant at the root
    pub determinant: f64,
    /// any bound exceeding |p₁|+|p₂|+|p₃|
    pub m0: f64,
    /// notes such as the avg(kη) vs k̄·η̄ discrepancy
    pub diagnostics: Vec<String>,
}

impl AlgebraicRoot {
    /// The root in original coordinates (e^{p₁}, e^{p₂}, e^{p₃}).
    pub fn exp_root(&self) -> State {
        State::new(self.p1.exp(), self.p2.exp(), self.p3.exp())
    }
}

/// Residual tolerance for the averaged equations at the root.
const ROOT_RESIDUAL_TOL: f64 = 1e-10;

pub fn solve_algebraic_root(params: &Coefficients) -> Result<AlgebraicRoot, MawhinError> {
    let lam = params.lambda.average();
    let beta = params.beta.average();
    let mu = params.mu.average();
    let c = params.c.average();
    let eta = params.eta.average();
    let r = params.r.average();
    let b = params.b.average();
    let keta = PeriodicFn::product(params.k.clone(), params.eta.clone())?.average();

    let r_avg = threshold::r_averages(params);
    if r_avg <= 1.0 {
        return Err(MawhinError::HypothesisViolated(r_avg));
    }

    let qa = keta * eta / b;
    let qb = c + mu * eta * keta / (beta * b) + eta * r / b;
    let qc = (mu / beta) * (c + eta * r / b) - lam; // negative under the hypothesis
    let disc = qb * qb - 4.0 * qa * qc;
    let x = if qa.abs() < 1e-14 {
        // degenerate leading coefficient: linear branch
        -qc / qb
    } else {
        // Citardauq form of the positive root; avoids cancellation when
        // the constant term is tiny near the hypothesis boundary
        2.0 * (-qc) / (qb + disc.sqrt())
    };
    if x.is_nan() || x <= 0.0 {
        return Err(MawhinError::NoPositiveRoot(format!("e^p2 = {x}")));
    }
    let ep2 = x;
    let ep3 = (r + keta * ep2) / b;
    if ep3.is_nan() || ep3 <= 0.0 {
        return Err(MawhinError::NoPositiveRoot(format!("e^p3 = {ep3}")));
    }
    let ep1 = (c + eta * ep3) / beta;
    let (p1, p2, p3) = (ep1.ln(), ep2.ln(), ep3.ln());

    // the root must satisfy all three averaged equations
    let res = [
        lam - beta * ep1 * ep2 - mu * ep1,
        beta * ep1 - c - eta * ep3,
        r - b * ep3 + keta * ep2,
    ];
    if res.iter().any(|v| v.abs() >= ROOT_RESIDUAL_TOL) {
        return Err(MawhinError::NoPositiveRoot(format!("residuals {res:?}")));
    }

    let mut diagnostics = Vec::new();
    let separable = params.k.average() * eta;
    if (keta - separable).abs() > 1e-12 {
        diagnostics.push(format!(
            "avg(kη) = {keta} differs from k̄·η̄ = {separable}; product average used throughout"
        ));
    }

    let mut root = AlgebraicRoot {
        p1,
        p2,
        p3,
        quadratic: (qa, qb, qc),
        discriminant: disc,
        determinant: 0.0,
        m0: p1.abs() + p2.abs() + p3.abs() + 1.0,
        diagnostics,
    };
    root.determinant = degree_determinant(&root, params)?;
    Ok(root)
}

/// Evaluate the degree determinant
///
/// | -Λ̄e^{-p₁}  -β̄e^{p₂}      0        |
/// |  β̄e^{p₁}    0           -η̄e^{p₃}  |
/// |  0          avg(kη)e^{p₂} -b̄e^{p₃} |
///
/// at the root, assert it is negative (degree -1), and return its value.
pub fn degree_determinant(root: &AlgebraicRoot, params: &Coefficients) -> Result<f64, MawhinError> {
    let lam = params.lambda.average();
    let beta = params.beta.average();
    let eta = params.eta.average();
    let b = params.b.average();
    let keta = PeriodicFn::product(params.k.clone(), params.eta.clone())?.average();
    let (ep1, ep2, ep3) = (root.p1.exp(), root.p2.exp(), root.p3.exp());
    let m = [
        [-lam / ep1, -beta * ep2, 0.0],
        [beta * ep1, 0.0, -eta * ep3],
        [0.0, keta * ep2, -b * ep3],
    ];
    let det = crate::linalg::det3(&m);
    if det >= 0.0 {
        return Err(MawhinError::SignViolation(det));
    }
    Ok(det)
}

/// Closed-form value of the same determinant, from expanding along the
/// first row: -(Λ̄ η̄ avg(kη) e^{-p₁+p₂+p₃} + b̄ β̄² e^{p₁+p₂+p₃}).
/// Serves as the second route for the determinant check.
pub fn degree_determinant_closed_form(root: &AlgebraicRoot, params: &Coefficients) -> f64 {
    let lam = params.lambda.average();
    let beta = params.beta.average();
    let eta = params.eta.average();
    let b = params.b.average();
    let keta = PeriodicFn::product(params.k.clone(), params.eta.clone())
        .expect("periods validated")
        .average();
    -(lam * eta * keta * (-root.p1 + root.p2 + root.p3).exp()
        + b * beta * beta * (root.p1 + root.p2 + root.p3).exp())
}

/// Empirical permanence floor for I: integrate a 5×5×5 grid of positive
/// initial conditions for 100 periods, discard the first half, and
/// return half the smallest infected value seen. An estimate, not the
/// non-constructive theoretical constant.
pub fn estimate_permanence_floor(params: &Coefficients) -> Result<f64, MawhinError> {
    let report = threshold::compute_r(params)?;
    if report.regime != Regime::Permanence {
        return Err(MawhinError::RegimeMismatch(report.r_quadrature));
    }
    let omega = params.period();
    let grid: Vec<f64> = (0..5).map(|i| 0.05 + i as f64 * (3.0 - 0.05) / 4.0).collect();
    let mut starts = Vec::new();
    for &s in &grid {
        for &i in &grid {
            for &y in &grid {
                starts.push(State::new(s, i, y));
            }
        }
    }
    let mins: Result<Vec<f64>, IntegrateError> = starts
        .par_iter()
        .map(|&x0| {
            let warm = integrate::integrate_system(
                params,
                0.0,
                x0,
                50.0 * omega,
                Method::default(),
                None,
            )?;
            let traj = integrate::integrate_system(
                params,
                50.0 * omega,
                warm.last().1,
                100.0 * omega,
                Method::default(),
                Some(omega / 200.0),
            )?;
            Ok(traj.min_infected())
        })
        .collect();
    let min_i = mins?.into_iter().fold(f64::INFINITY, f64::min);
    Ok(0.5 * min_i)
}
