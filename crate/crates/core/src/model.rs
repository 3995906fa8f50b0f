//! The model itself: coefficient bundle, state types, and the three
//! right-hand sides (original coordinates, log coordinates, and the
//! λ-scaled homotopy used by the continuation argument), plus the exact
//! Jacobian of the original field.

use crate::linalg::Mat3;
use crate::periodic::PeriodicFn;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("coefficient {0} has period {1}, expected {2}")]
    PeriodMismatch(&'static str, f64, f64),
    #[error("coefficient {0} must be nonnegative but attains minimum {1}")]
    NegativeCoefficient(&'static str, f64),
    #[error("positive-average condition violated: {0}")]
    NonpositiveAverage(String),
    #[error("homotopy parameter must lie in (0, 1], got {0}")]
    LambdaOutOfRange(f64),
}

/// A point (S, I, Y): susceptible prey, infected prey, predators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub s: f64,
    pub i: f64,
    pub y: f64,
}

impl State {
    pub fn new(s: f64, i: f64, y: f64) -> Self {
        State { s, i, y }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.s, self.i, self.y]
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        State { s: v[0], i: v[1], y: v[2] }
    }

    pub fn is_finite(&self) -> bool {
        self.s.is_finite() && self.i.is_finite() && self.y.is_finite()
    }

    /// Componentwise log; requires a positive state.
    pub fn ln(self) -> LogState {
        LogState { u1: self.s.ln(), u2: self.i.ln(), u3: self.y.ln() }
    }

    /// Max-norm distance.
    pub fn dist(self, other: State) -> f64 {
        (self.s - other.s)
            .abs()
            .max((self.i - other.i).abs())
            .max((self.y - other.y).abs())
    }
}

/// Log coordinates (u₁, u₂, u₃) = (ln S, ln I, ln Y).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogState {
    pub u1: f64,
    pub u2: f64,
    pub u3: f64,
}

impl LogState {
    pub fn new(u1: f64, u2: f64, u3: f64) -> Self {
        LogState { u1, u2, u3 }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.u1, self.u2, self.u3]
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        LogState { u1: v[0], u2: v[1], u3: v[2] }
    }

    pub fn exp(self) -> State {
        State { s: self.u1.exp(), i: self.u2.exp(), y: self.u3.exp() }
    }
}

/// All coefficient values at one instant.
#[derive(Debug, Clone, Copy)]
pub struct CoefficientValues {
    pub lambda: f64,
    pub beta: f64,
    pub mu: f64,
    pub c: f64,
    pub eta: f64,
    pub k: f64,
    pub r: f64,
    pub b: f64,
}

/// The full parameter bundle: recruitment Λ, incidence β, prey death μ,
/// infected-prey death c, predation η, conversion k, predator growth r,
/// predator competition b. All share one period ω.
#[derive(Debug, Clone)]
pub struct Coefficients {
    pub lambda: PeriodicFn,
    pub beta: PeriodicFn,
    pub mu: PeriodicFn,
    pub c: PeriodicFn,
    pub eta: PeriodicFn,
    pub k: PeriodicFn,
    pub r: PeriodicFn,
    pub b: PeriodicFn,
}

impl Coefficients {
    /// Validate the bundle: equal periods, nonnegativity of every
    /// coefficient except r (which may change sign), and positive
    /// averages of Λ, μ, r, b, β. Average violations come back as
    /// warnings unless `strict`, in which case they are errors.
    pub fn validated(self, strict: bool) -> Result<(Self, Vec<String>), ModelError> {
        let omega = self.lambda.period();
        for (name, f) in self.named() {
            if f.period() != omega {
                return Err(ModelError::PeriodMismatch(name, f.period(), omega));
            }
        }
        // r is exempt from nonnegativity
        for (name, f) in self.named() {
            if name == "r" {
                continue;
            }
            let lo = f.inf();
            if lo < 0.0 {
                return Err(ModelError::NegativeCoefficient(name, lo));
            }
        }
        let mut warnings = Vec::new();
        for (name, f) in [
            ("lambda", &self.lambda),
            ("mu", &self.mu),
            ("r", &self.r),
            ("b", &self.b),
            ("beta", &self.beta),
        ] {
            let avg = f.average();
            if avg <= 0.0 {
                warnings.push(format!("average of {name} is {avg}, expected > 0"));
            }
        }
        if strict && !warnings.is_empty() {
            return Err(ModelError::NonpositiveAverage(warnings.join("; ")));
        }
        Ok((self, warnings))
    }

    fn named(&self) -> [(&'static str, &PeriodicFn); 8] {
        [
            ("lambda", &self.lambda),
            ("beta", &self.beta),
            ("mu", &self.mu),
            ("c", &self.c),
            ("eta", &self.eta),
            ("k", &self.k),
            ("r", &self.r),
            ("b", &self.b),
        ]
    }

    pub fn period(&self) -> f64 {
        self.lambda.period()
    }

    /// All coefficients evaluated at t.
    pub fn at(&self, t: f64) -> CoefficientValues {
        CoefficientValues {
            lambda: self.lambda.eval(t),
            beta: self.beta.eval(t),
            mu: self.mu.eval(t),
            c: self.c.eval(t),
            eta: self.eta.eval(t),
            k: self.k.eval(t),
            r: self.r.eval(t),
            b: self.b.eval(t),
        }
    }

    /// Right-hand side of the system in (S, I, Y) coordinates.
    pub fn field(&self, t: f64, x: State) -> State {
        let p = self.at(t);
        State {
            s: p.lambda - p.beta * x.s * x.i - p.mu * x.s,
            i: p.beta * x.s * x.i - p.c * x.i - p.eta * x.y * x.i,
            y: x.y * (p.r - p.b * x.y + p.k * p.eta * x.i),
        }
    }

    /// Right-hand side after the substitution (S, I, Y) = (e^u₁, e^u₂, e^u₃).
    pub fn log_field(&self, t: f64, u: LogState) -> LogState {
        let p = self.at(t);
        LogState {
            u1: p.lambda * (-u.u1).exp() - p.beta * u.u2.exp() - p.mu,
            u2: p.beta * u.u1.exp() - p.c - p.eta * u.u3.exp(),
            u3: p.r - p.b * u.u3.exp() + p.k * p.eta * u.u2.exp(),
        }
    }

    /// λ-scaled log field, λ ∈ (0, 1].
    pub fn homotopy_field(&self, lambda: f64, t: f64, u: LogState) -> Result<LogState, ModelError> {
        if !(lambda > 0.0 && lambda <= 1.0) {
            return Err(ModelError::LambdaOutOfRange(lambda));
        }
        let f = self.log_field(t, u);
        Ok(LogState { u1: lambda * f.u1, u2: lambda * f.u2, u3: lambda * f.u3 })
    }

    /// Exact Jacobian of [`Coefficients::field`] with respect to (S, I, Y).
    pub fn jacobian(&self, t: f64, x: State) -> Mat3 {
        let p = self.at(t);
        [
            [-p.beta * x.i - p.mu, -p.beta * x.s, 0.0],
            [p.beta * x.i, p.beta * x.s - p.c - p.eta * x.y, -p.eta * x.i],
            [0.0, p.k * p.eta * x.y, p.r - 2.0 * p.b * x.y + p.k * p.eta * x.i],
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn constant_params() -> Coefficients {
        presets::constant(1.0, 0.4, 0.5, 0.1, 0.2, 0.5, 0.3, 0.6)
    }

    #[test]
    fn face_equilibria_of_constant_system() {
        let p = constant_params();
        // O1: (Λ/μ, 0, 0)
        let f = p.field(0.0, State::new(2.0, 0.0, 0.0));
        assert!(f.s.abs() < 1e-14 && f.i.abs() < 1e-14 && f.y.abs() < 1e-14);
        // O2: (Λ/μ, 0, r/b)
        let f = p.field(3.7, State::new(2.0, 0.0, 0.5));
        assert!(f.s.abs() < 1e-14 && f.i.abs() < 1e-14 && f.y.abs() < 1e-14);
    }

    #[test]
    fn field_matches_hand_expansion() {
        let p = presets::seasonal(0.6);
        let x = State::new(1.0, 1.0, 1.0);
        let f = p.field(0.0, x);
        // hand expansion at t = 0 with cos(0)=1, cos(π)=-1:
        // Λ=0.7·0.1=0.07, μ=0.6·1.9=1.14, β=0.6·1.7=1.02, c=0.1,
        // η=0.7·0.3=0.21, k=0.9, r=0.2·1.7=0.34, b=0.3·0.3=0.09
        let (lam, mu, beta, c, eta, k, r, b) = (0.07, 1.14, 1.02, 0.1, 0.21, 0.9, 0.34, 0.09);
        assert!((f.s - (lam - beta - mu)).abs() < 1e-12);
        assert!((f.i - (beta - c - eta)).abs() < 1e-12);
        assert!((f.y - (r - b + k * eta)).abs() < 1e-12);
    }

    #[test]
    fn log_field_exp_conjugacy_identity() {
        let p = presets::seasonal(0.6);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let t: f64 = rng.gen_range(0.0..1.0);
            let u = LogState::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-2.0..0.5),
                rng.gen_range(-1.0..1.0),
            );
            let x = u.exp();
            let lf = p.log_field(t, u);
            let f = p.field(t, x);
            assert!((lf.u1 - f.s / x.s).abs() < 1e-12);
            assert!((lf.u2 - f.i / x.i).abs() < 1e-12);
            assert!((lf.u3 - f.y / x.y).abs() < 1e-12);
        }
    }

    #[test]
    fn log_field_at_origin_constant_params() {
        let p = constant_params();
        let f = p.log_field(0.0, LogState::new(0.0, 0.0, 0.0));
        // (Λ-β-μ, β-c-η, r-b+kη) with these constants
        assert!((f.u1 - (1.0 - 0.4 - 0.5)).abs() < 1e-14);
        assert!((f.u2 - (0.4 - 0.1 - 0.2)).abs() < 1e-14);
        assert!((f.u3 - (0.3 - 0.6 + 0.5 * 0.2)).abs() < 1e-14);
    }

    #[test]
    fn homotopy_scales_log_field() {
        let p = presets::seasonal(0.6);
        let u = LogState::new(0.2, -1.0, 0.1);
        let full = p.log_field(0.3, u);
        let half = p.homotopy_field(0.5, 0.3, u).unwrap();
        assert!((half.u1 - 0.5 * full.u1).abs() < 1e-14);
        assert!((half.u2 - 0.5 * full.u2).abs() < 1e-14);
        assert!((half.u3 - 0.5 * full.u3).abs() < 1e-14);
        let one = p.homotopy_field(1.0, 0.3, u).unwrap();
        assert_eq!(one.to_array(), full.to_array());
        assert!(p.homotopy_field(0.0, 0.3, u).is_err());
        assert!(p.homotopy_field(1.5, 0.3, u).is_err());
    }

    #[test]
    fn jacobian_vs_finite_differences() {
        let p = presets::seasonal(0.6);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let h = 1e-6;
        for _ in 0..100 {
            let t: f64 = rng.gen_range(0.0..1.0);
            let x = State::new(
                rng.gen_range(0.1..3.0),
                rng.gen_range(0.1..3.0),
                rng.gen_range(0.1..3.0),
            );
            let jac = p.jacobian(t, x);
            for col in 0..3 {
                let mut xp = x.to_array();
                let mut xm = x.to_array();
                xp[col] += h;
                xm[col] -= h;
                let fp = p.field(t, State::from_array(xp)).to_array();
                let fm = p.field(t, State::from_array(xm)).to_array();
                for row in 0..3 {
                    let fd = (fp[row] - fm[row]) / (2.0 * h);
                    let scale = jac[row][col].abs().max(1.0);
                    assert!(
                        (jac[row][col] - fd).abs() / scale < 1e-6,
                        "entry ({row},{col}): {} vs fd {fd}",
                        jac[row][col]
                    );
                }
            }
        }
    }

    #[test]
    fn jacobian_structure_on_infection_free_face() {
        let p = presets::seasonal(0.6);
        let jac = p.jacobian(0.4, State::new(1.3, 0.0, 0.8));
        assert_eq!(jac[1][0], 0.0);
        assert_eq!(jac[1][2], 0.0);
    }

    #[test]
    fn jacobian_center_entry_at_predator_face_equilibrium() {
        let p = constant_params();
        let x = State::new(2.0, 0.0, 0.5);
        let jac = p.jacobian(0.0, x);
        // βS - c - ηY
        assert!((jac[1][1] - (0.4 * 2.0 - 0.1 - 0.2 * 0.5)).abs() < 1e-14);
    }

    #[test]
    fn face_invariance_of_field() {
        let p = presets::seasonal(0.45);
        let f = p.field(0.7, State::new(1.0, 0.0, 0.6));
        assert_eq!(f.i, 0.0);
        let f = p.field(0.7, State::new(1.0, 0.4, 0.0));
        assert_eq!(f.y, 0.0);
    }

    #[test]
    fn negative_required_coefficient_rejected() {
        let p = presets::seasonal(0.45);
        let bad = Coefficients {
            mu: PeriodicFn::harmonic(0.6, 1.2, 0.0, 1.0).unwrap(),
            ..p
        };
        assert!(matches!(
            bad.validated(false),
            Err(ModelError::NegativeCoefficient("mu", _))
        ));
    }

    #[test]
    fn signed_r_is_allowed_nonstrict_warns_on_average() {
        let p = presets::seasonal(0.45);
        let signed = Coefficients {
            r: PeriodicFn::harmonic(-0.1, 0.5, 0.0, 1.0).unwrap(),
            ..p
        };
        let (_, warnings) = signed.clone().validated(false).unwrap();
        assert!(warnings.iter().any(|w| w.contains("r")));
        assert!(matches!(
            signed.validated(true),
            Err(ModelError::NonpositiveAverage(_))
        ));
    }
}
