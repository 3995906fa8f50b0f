//! ω-periodic scalar coefficient functions: evaluation, average f̄,
//! supremum fᵘ, infimum fˡ, and pointwise quotient extremes.

use crate::quad::{self, DEFAULT_PANELS};
use thiserror::Error;

/// Grid resolution for extremum scans.
const SCAN_POINTS: usize = 4096;
/// Golden-section refinement tolerance in t.
const SCAN_TOL: f64 = 1e-12;
/// Divisors below this on the scan grid are treated as vanishing.
const DIVISOR_FLOOR: f64 = 1e-14;

#[derive(Debug, Error)]
pub enum PeriodicError {
    #[error("period must be positive, got {0}")]
    NonpositivePeriod(f64),
    #[error("sampled form needs at least 4 grid values, got {0}")]
    TooFewSamples(usize),
    #[error("sample value at index {0} is not finite")]
    NonFiniteSample(usize),
    #[error("periods differ: {0} vs {1}")]
    PeriodMismatch(f64, f64),
    #[error("divisor attains {value} at t={t}, below the positivity floor")]
    DivisorVanishes { t: f64, value: f64 },
}

/// The functional form of a periodic coefficient.
#[derive(Debug, Clone)]
enum Form {
    Constant(f64),
    /// t ↦ base · (1 + amp · cos(phase + 2πt/ω))
    Harmonic { base: f64, amp: f64, phase: f64 },
    /// values on a uniform grid over [0, ω), periodic cubic interpolation
    Sampled(PeriodicSpline),
    Product(Box<PeriodicFn>, Box<PeriodicFn>),
    Sum(Box<PeriodicFn>, Box<PeriodicFn>),
}

/// An ω-periodic scalar coefficient function.
#[derive(Debug, Clone)]
pub struct PeriodicFn {
    form: Form,
    period: f64,
}

impl PeriodicFn {
    pub fn constant(value: f64, period: f64) -> Result<Self, PeriodicError> {
        check_period(period)?;
        Ok(PeriodicFn { form: Form::Constant(value), period })
    }

    /// t ↦ base · (1 + amp · cos(phase + 2πt/ω)). This family covers every
    /// seasonal coefficient used in the shipped scenarios.
    pub fn harmonic(base: f64, amp: f64, phase: f64, period: f64) -> Result<Self, PeriodicError> {
        check_period(period)?;
        Ok(PeriodicFn { form: Form::Harmonic { base, amp, phase }, period })
    }

    /// Values at N uniform grid points over [0, ω); evaluation uses a
    /// periodic cubic spline (the value at ω wraps to the first sample).
    pub fn sampled(values: Vec<f64>, period: f64) -> Result<Self, PeriodicError> {
        check_period(period)?;
        if values.len() < 4 {
            return Err(PeriodicError::TooFewSamples(values.len()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(PeriodicError::NonFiniteSample(i));
        }
        let spline = PeriodicSpline::fit(values, period);
        Ok(PeriodicFn { form: Form::Sampled(spline), period })
    }

    /// Pointwise product f·g. Used for coefficients like k(t)η(t) whose
    /// average must be the average of the product, never the product of
    /// the averages.
    pub fn product(f: PeriodicFn, g: PeriodicFn) -> Result<Self, PeriodicError> {
        if f.period != g.period {
            return Err(PeriodicError::PeriodMismatch(f.period, g.period));
        }
        let period = f.period;
        Ok(PeriodicFn { form: Form::Product(Box::new(f), Box::new(g)), period })
    }

    /// Pointwise sum f+g.
    pub fn sum(f: PeriodicFn, g: PeriodicFn) -> Result<Self, PeriodicError> {
        if f.period != g.period {
            return Err(PeriodicError::PeriodMismatch(f.period, g.period));
        }
        let period = f.period;
        Ok(PeriodicFn { form: Form::Sum(Box::new(f), Box::new(g)), period })
    }

    /// f scaled by a constant, as a Product node.
    pub fn scaled(self, factor: f64) -> Self {
        let period = self.period;
        let c = PeriodicFn::constant(factor, period).unwrap();
        PeriodicFn::product(c, self).unwrap()
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// f(t mod ω).
    pub fn eval(&self, t: f64) -> f64 {
        let tm = t.rem_euclid(self.period);
        match &self.form {
            Form::Constant(v) => *v,
            Form::Harmonic { base, amp, phase } => {
                base * (1.0 + amp * (phase + 2.0 * std::f64::consts::PI * tm / self.period).cos())
            }
            Form::Sampled(sp) => sp.eval(tm),
            Form::Product(f, g) => f.eval(tm) * g.eval(tm),
            Form::Sum(f, g) => f.eval(tm) + g.eval(tm),
        }
    }

    /// f̄ = (1/ω)∫₀^ω f. Exact for the constant and harmonic forms,
    /// composite Simpson otherwise.
    pub fn average(&self) -> f64 {
        match &self.form {
            Form::Constant(v) => *v,
            // the cosine term integrates to zero over a full period
            Form::Harmonic { base, .. } => *base,
            _ => quad::simpson(|t| self.eval(t), 0.0, self.period, DEFAULT_PANELS) / self.period,
        }
    }

    /// fᵘ = max over one period (grid scan + golden-section refinement).
    pub fn sup(&self) -> f64 {
        match &self.form {
            Form::Constant(v) => *v,
            _ => quad::grid_max(|t| self.eval(t), self.period, SCAN_POINTS, SCAN_TOL),
        }
    }

    /// fˡ = min over one period.
    pub fn inf(&self) -> f64 {
        match &self.form {
            Form::Constant(v) => *v,
            _ => quad::grid_min(|t| self.eval(t), self.period, SCAN_POINTS, SCAN_TOL),
        }
    }

    /// (f/g)ᵘ, the supremum of the pointwise quotient.
    pub fn sup_ratio(&self, g: &PeriodicFn) -> Result<f64, PeriodicError> {
        self.check_ratio(g)?;
        Ok(quad::grid_max(|t| self.eval(t) / g.eval(t), self.period, SCAN_POINTS, SCAN_TOL))
    }

    /// (f/g)ˡ, the infimum of the pointwise quotient.
    pub fn inf_ratio(&self, g: &PeriodicFn) -> Result<f64, PeriodicError> {
        self.check_ratio(g)?;
        Ok(quad::grid_min(|t| self.eval(t) / g.eval(t), self.period, SCAN_POINTS, SCAN_TOL))
    }

    fn check_ratio(&self, g: &PeriodicFn) -> Result<(), PeriodicError> {
        if self.period != g.period {
            return Err(PeriodicError::PeriodMismatch(self.period, g.period));
        }
        let h = self.period / SCAN_POINTS as f64;
        for i in 0..SCAN_POINTS {
            let t = i as f64 * h;
            let v = g.eval(t);
            if v <= DIVISOR_FLOOR {
                return Err(PeriodicError::DivisorVanishes { t, value: v });
            }
        }
        Ok(())
    }
}

/// Periodic cubic spline on a uniform grid (natural continuity at the
/// wrap: the spline and its first two derivatives are continuous across
/// t = ω ≡ 0).
#[derive(Debug, Clone)]
struct PeriodicSpline {
    values: Vec<f64>,
    /// second derivatives at the nodes
    m: Vec<f64>,
    h: f64,
    period: f64,
}

impl PeriodicSpline {
    fn fit(values: Vec<f64>, period: f64) -> Self {
        let n = values.len();
        let h = period / n as f64;
        // Cyclic tridiagonal system  M_{i-1} + 4 M_i + M_{i+1} = rhs_i,
        // rhs_i = 6 (y_{i+1} - 2 y_i + y_{i-1}) / h², solved by
        // Sherman-Morrison against the plain tridiagonal solve.
        let rhs: Vec<f64> = (0..n)
            .map(|i| {
                let ym = values[(i + n - 1) % n];
                let y0 = values[i];
                let yp = values[(i + 1) % n];
                6.0 * (yp - 2.0 * y0 + ym) / (h * h)
            })
            .collect();
        let m = solve_cyclic_tridiagonal(1.0, 4.0, 1.0, &rhs);
        PeriodicSpline { values, m, h, period }
    }

    fn eval(&self, t: f64) -> f64 {
        let n = self.values.len();
        let tm = t.rem_euclid(self.period);
        let mut i = (tm / self.h) as usize;
        if i >= n {
            i = n - 1;
        }
        let j = (i + 1) % n;
        let a = (tm - i as f64 * self.h) / self.h;
        let b = 1.0 - a;
        let h2 = self.h * self.h / 6.0;
        b * self.values[i]
            + a * self.values[j]
            + h2 * ((b * b * b - b) * self.m[i] + (a * a * a - a) * self.m[j])
    }
}

/// Solve the cyclic tridiagonal system with constant bands
/// (sub, diag, sup) via the Sherman-Morrison correction.
fn solve_cyclic_tridiagonal(sub: f64, diag: f64, sup: f64, rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    assert!(n >= 3);
    let gamma = -diag;
    // modified diagonal
    let mut d = vec![diag; n];
    d[0] = diag - gamma;
    d[n - 1] = diag - sub * sup / gamma;
    let y = solve_tridiagonal(sub, &d, sup, rhs);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = sub;
    let z = solve_tridiagonal(sub, &d, sup, &u);
    let factor = (y[0] + sup / gamma * y[n - 1]) / (1.0 + z[0] + sup / gamma * z[n - 1]);
    y.iter().zip(&z).map(|(yi, zi)| yi - factor * zi).collect()
}

/// Thomas algorithm with constant off-diagonals and per-row diagonal.
fn solve_tridiagonal(sub: f64, diag: &[f64], sup: f64, rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - sub * c[i - 1];
        c[i] = sup / m;
        d[i] = (rhs[i] - sub * d[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

fn check_period(period: f64) -> Result<(), PeriodicError> {
    if period > 0.0 && period.is_finite() {
        Ok(())
    } else {
        Err(PeriodicError::NonpositivePeriod(period))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn eval_constant() {
        let f = PeriodicFn::constant(0.1, 1.0).unwrap();
        assert_eq!(f.eval(7.3), 0.1);
    }

    #[test]
    fn eval_harmonic_at_phase_pi() {
        // 0.7(1 + 0.9 cos(π + 2πt)) at t = 0 is 0.7·0.1 = 0.07
        let f = PeriodicFn::harmonic(0.7, 0.9, PI, 1.0).unwrap();
        assert!((f.eval(0.0) - 0.07).abs() < 1e-14);
    }

    #[test]
    fn eval_harmonic_quarter_period() {
        let f = PeriodicFn::harmonic(0.6, 0.9, 0.0, 1.0).unwrap();
        assert!((f.eval(0.25) - 0.6).abs() < 1e-14);
    }

    #[test]
    fn average_constant_and_harmonic() {
        assert_eq!(PeriodicFn::constant(0.3, 2.0).unwrap().average(), 0.3);
        assert_eq!(PeriodicFn::harmonic(0.6, 0.9, 0.0, 1.0).unwrap().average(), 0.6);
    }

    #[test]
    fn average_sampled_sin_squared() {
        let n = 1024;
        let values: Vec<f64> = (0..n)
            .map(|i| (PI * i as f64 / n as f64).sin().powi(2))
            .collect();
        let f = PeriodicFn::sampled(values, 1.0).unwrap();
        assert!((f.average() - 0.5).abs() < 1e-10);
    }

    #[test]
    fn sampled_interpolates_nodes_and_periodicity() {
        let n = 64;
        let values: Vec<f64> =
            (0..n).map(|i| (2.0 * PI * i as f64 / n as f64).sin() + 2.0).collect();
        let f = PeriodicFn::sampled(values.clone(), 1.0).unwrap();
        for (i, v) in values.iter().enumerate() {
            assert!((f.eval(i as f64 / n as f64) - v).abs() < 1e-12);
        }
        // off-node accuracy of the spline against the generating function
        for i in 0..200 {
            let t = i as f64 / 200.0 + 0.0013;
            let exact = (2.0 * PI * t).sin() + 2.0;
            assert!((f.eval(t) - exact).abs() < 1e-5);
        }
        assert!((f.eval(0.37) - f.eval(1.37)).abs() < 1e-12);
    }

    #[test]
    fn sup_inf_harmonic() {
        let f = PeriodicFn::harmonic(0.7, 0.9, PI, 1.0).unwrap();
        assert!((f.sup() - 1.33).abs() < 1e-10);
        assert!((f.inf() - 0.07).abs() < 1e-10);
        let c = PeriodicFn::constant(0.3, 1.0).unwrap();
        assert_eq!(c.sup(), 0.3);
        assert_eq!(c.inf(), 0.3);
    }

    #[test]
    fn ratio_constants() {
        let f = PeriodicFn::constant(1.0, 1.0).unwrap();
        let g = PeriodicFn::constant(2.0, 1.0).unwrap();
        assert!((f.sup_ratio(&g).unwrap() - 0.5).abs() < 1e-14);
        assert!((f.inf_ratio(&g).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn ratio_of_identical_functions_is_one() {
        let f = PeriodicFn::harmonic(1.0, 0.5, 0.0, 1.0).unwrap();
        assert!((f.sup_ratio(&f).unwrap() - 1.0).abs() < 1e-12);
        assert!((f.inf_ratio(&f).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ratio_against_brute_force_grid() {
        // (r/b)^ℓ for the seasonal study coefficients
        let r = PeriodicFn::harmonic(0.2, 0.7, 0.0, 1.0).unwrap();
        let b = PeriodicFn::harmonic(0.3, 0.7, PI, 1.0).unwrap();
        let inf = r.inf_ratio(&b).unwrap();
        let sup = r.sup_ratio(&b).unwrap();
        // brute-force 8192-point oracle
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..8192 {
            let t = i as f64 / 8192.0;
            let v = r.eval(t) / b.eval(t);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        assert!((inf - lo).abs() < 1e-8, "inf {inf} vs oracle {lo}");
        assert!((sup - hi).abs() < 1e-8, "sup {sup} vs oracle {hi}");
    }

    #[test]
    fn sup_ratio_lambda_over_mu_brute_force() {
        let lam = PeriodicFn::harmonic(0.7, 0.9, PI, 1.0).unwrap();
        let mu = PeriodicFn::harmonic(0.6, 0.9, 0.0, 1.0).unwrap();
        let sup = lam.sup_ratio(&mu).unwrap();
        let mut hi = f64::NEG_INFINITY;
        for i in 0..8192 {
            let t = i as f64 / 8192.0;
            hi = hi.max(lam.eval(t) / mu.eval(t));
        }
        assert!((sup - hi).abs() < 1e-8);
    }

    #[test]
    fn vanishing_divisor_rejected() {
        let f = PeriodicFn::constant(1.0, 1.0).unwrap();
        let g = PeriodicFn::harmonic(0.5, 1.0, 0.0, 1.0).unwrap(); // touches 0
        assert!(matches!(f.sup_ratio(&g), Err(PeriodicError::DivisorVanishes { .. })));
    }

    #[test]
    fn product_average_is_average_of_product() {
        // avg of cos² = 1/2·base², not (avg cos)² = base²
        let f = PeriodicFn::harmonic(1.0, 1.0, 0.0, 1.0).unwrap(); // 1 + cos
        let p = PeriodicFn::product(f.clone(), f).unwrap();
        // avg (1+cos)² = 1 + 1/2 = 1.5
        assert!((p.average() - 1.5).abs() < 1e-10);
    }

    #[test]
    fn period_mismatch_rejected() {
        let f = PeriodicFn::constant(1.0, 1.0).unwrap();
        let g = PeriodicFn::constant(1.0, 2.0).unwrap();
        assert!(matches!(PeriodicFn::product(f, g), Err(PeriodicError::PeriodMismatch(_, _))));
    }
}
