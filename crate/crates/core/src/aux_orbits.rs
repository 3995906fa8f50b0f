//! The unique positive ω-periodic solutions s₀ of s' = Λ - μs and y₀ of
//! y' = y(r - by), and the two disease-free orbits assembled from them.
//!
//! Both constructions go through the same affine machinery: the linear
//! equation is solved by variation of constants, and the logistic one is
//! reduced to it by the reciprocal substitution z = 1/y, which satisfies
//! z' = -r z + b.

use crate::integrate::{self, IntegrateError, Method, Monodromy};
use crate::model::{Coefficients, State};
use crate::periodic::PeriodicFn;
use crate::quad::{self, CumulativeIntegral, DEFAULT_PANELS};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AuxOrbitError {
    #[error("affine period map is not a contraction: average of {0} is {1} <= 0")]
    NonContractive(&'static str, f64),
    #[error("reciprocal orbit attains {0} <= 1e-12; the logistic orbit degenerates")]
    DegenerateOrbit(f64),
    #[error(transparent)]
    Integrate(#[from] IntegrateError),
}

/// Which scalar auxiliary equation an orbit solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuxKind {
    /// s' = Λ(t) - μ(t) s
    Linear,
    /// y' = y (r(t) - b(t) y), stored through z = 1/y
    Logistic,
}

/// A positive ω-periodic scalar orbit, evaluable at any time through the
/// variation-of-constants closed form.
#[derive(Debug, Clone)]
pub struct AuxOrbit {
    kind: AuxKind,
    omega: f64,
    /// value of the *stored* variable at t = 0 (s₀(0) or z₀(0))
    initial: f64,
    /// ∫₀^t of the decay coefficient (μ or r)
    decay_int: CumulativeIntegral,
    /// ∫₀^t forcing · exp(decay_int) (Λ e^∫μ or b e^∫r)
    forcing_int: CumulativeIntegral,
    /// |x(ω) - x(0)| from an independent one-period integration
    pub return_residual: f64,
    /// independently computed Poincaré fixed point, for cross-validation
    pub poincare_initial: f64,
}

impl AuxOrbit {
    /// Orbit value at any time (periodic extension).
    pub fn value(&self, t: f64) -> f64 {
        let tm = t.rem_euclid(self.omega);
        let raw = (-self.decay_int.value(tm)).exp() * (self.initial + self.forcing_int.value(tm));
        match self.kind {
            AuxKind::Linear => raw,
            AuxKind::Logistic => 1.0 / raw,
        }
    }

    /// Value at t = 0.
    pub fn initial_value(&self) -> f64 {
        self.value(0.0)
    }

    pub fn period(&self) -> f64 {
        self.omega
    }

    pub fn kind(&self) -> AuxKind {
        self.kind
    }

    /// Average of t ↦ w(t)·orbit(t) over one period (the true average of
    /// the pointwise product).
    pub fn average_product(&self, w: &PeriodicFn) -> f64 {
        quad::simpson(|t| w.eval(t) * self.value(t), 0.0, self.omega, DEFAULT_PANELS) / self.omega
    }

    /// Plain average of the orbit.
    pub fn average(&self) -> f64 {
        quad::simpson(|t| self.value(t), 0.0, self.omega, DEFAULT_PANELS) / self.omega
    }

    /// Dense samples over one period.
    pub fn samples(&self, n: usize) -> Vec<(f64, f64)> {
        (0..=n)
            .map(|i| {
                let t = self.omega * i as f64 / n as f64;
                (t, self.value(t))
            })
            .collect()
    }
}

/// The unique positive periodic orbit of s' = Λ(t) - μ(t) s.
///
/// Closed form: s₀(0) = ∫₀^ω Λ e^{∫₀^u μ} du / (e^{∫₀^ω μ} - 1), then
/// forward variation of constants. Cross-validated by a Poincaré
/// fixed-point solve of the affine period map built with the ODE
/// integrator.
pub fn s0(params: &Coefficients) -> Result<AuxOrbit, AuxOrbitError> {
    let mu_avg = params.mu.average();
    if mu_avg <= 0.0 {
        return Err(AuxOrbitError::NonContractive("mu", mu_avg));
    }
    build_affine_orbit(params, AuxKind::Linear)
}

/// The unique positive periodic orbit of y' = y(r(t) - b(t) y), via
/// z = 1/y and the affine equation z' = -r z + b.
pub fn y0(params: &Coefficients) -> Result<AuxOrbit, AuxOrbitError> {
    let r_avg = params.r.average();
    if r_avg <= 0.0 {
        return Err(AuxOrbitError::NonContractive("r", r_avg));
    }
    let orbit = build_affine_orbit(params, AuxKind::Logistic)?;
    // z must stay positive on the period for y = 1/z to make sense
    let mut z_min = f64::INFINITY;
    for i in 0..=4096 {
        let t = orbit.omega * i as f64 / 4096.0;
        let z = (-orbit.decay_int.value(t)).exp() * (orbit.initial + orbit.forcing_int.value(t));
        z_min = z_min.min(z);
    }
    if z_min <= 1e-12 {
        return Err(AuxOrbitError::DegenerateOrbit(z_min));
    }
    Ok(orbit)
}

fn build_affine_orbit(params: &Coefficients, kind: AuxKind) -> Result<AuxOrbit, AuxOrbitError> {
    let omega = params.period();
    let (decay, forcing): (&PeriodicFn, &PeriodicFn) = match kind {
        AuxKind::Linear => (&params.mu, &params.lambda),
        AuxKind::Logistic => (&params.r, &params.b),
    };
    let decay_int = CumulativeIntegral::build(|t| decay.eval(t), omega, DEFAULT_PANELS);
    let forcing_int = CumulativeIntegral::build(
        |t| forcing.eval(t) * decay_int.value(t).exp(),
        omega,
        DEFAULT_PANELS,
    );
    let denom = decay_int.total().exp() - 1.0;
    let initial = forcing_int.total() / denom;

    // independent route: the affine period map x ↦ α x + g from two
    // integrator runs, fixed point g / (1 - α)
    // both kinds reduce to x' = forcing - decay·x (z = 1/y in the
    // logistic case)
    let rhs = |t: f64, x: &[f64; 1]| [forcing.eval(t) - decay.eval(t) * x[0]];
    let from = |x0: f64| -> Result<f64, IntegrateError> { integrate_ode_one(rhs, omega, x0) };
    let g = from(0.0)?;
    let alpha = from(1.0)? - g;
    let poincare_initial = g / (1.0 - alpha);

    let return_end = from(initial)?;
    let return_residual = (return_end - initial).abs();

    Ok(AuxOrbit {
        kind,
        omega,
        initial,
        decay_int,
        forcing_int,
        return_residual,
        poincare_initial,
    })
}

fn integrate_ode_one(
    rhs: impl Fn(f64, &[f64; 1]) -> [f64; 1],
    omega: f64,
    x0: f64,
) -> Result<f64, IntegrateError> {
    let out = integrate::integrate_ode(
        rhs,
        0.0,
        [x0],
        omega,
        Method::Adaptive { abs_tol: 1e-12, rel_tol: 1e-12 },
        None,
    )?;
    Ok(out.last().unwrap().1[0])
}

/// Which disease-free orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitLabel {
    /// (s₀, 0, 0): no infection, no predators
    PreyOnly,
    /// (s₀, 0, y₀): predators at the logistic periodic state
    PreyAndPredator,
}

/// A disease-free periodic orbit of the full system with its Floquet
/// multipliers.
#[derive(Debug, Clone)]
pub struct DiseaseFreeOrbit {
    pub label: OrbitLabel,
    pub initial: State,
    pub monodromy: Monodromy,
}

impl DiseaseFreeOrbit {
    /// The multiplier governing infection perturbations. Along a
    /// disease-free orbit the I-row of the variational flow is
    /// decoupled, so this is exactly Φ[1][1].
    pub fn infection_multiplier(&self) -> f64 {
        self.monodromy.matrix[1][1]
    }

    /// One-period return defect of the assembled orbit in the full
    /// 3-D system.
    pub fn return_residual(&self) -> f64 {
        self.monodromy.endpoint.dist(self.initial)
    }
}

/// Assemble both disease-free orbits and attach full-system Floquet
/// multipliers.
pub fn disease_free_orbits(
    params: &Coefficients,
) -> Result<(DiseaseFreeOrbit, DiseaseFreeOrbit), AuxOrbitError> {
    let s = s0(params)?;
    let y = y0(params)?;
    let o1_init = State::new(s.initial_value(), 0.0, 0.0);
    let o2_init = State::new(s.initial_value(), 0.0, y.initial_value());
    let o1 = DiseaseFreeOrbit {
        label: OrbitLabel::PreyOnly,
        initial: o1_init,
        monodromy: integrate::monodromy(params, o1_init, 0.0)?,
    };
    let o2 = DiseaseFreeOrbit {
        label: OrbitLabel::PreyAndPredator,
        initial: o2_init,
        monodromy: integrate::monodromy(params, o2_init, 0.0)?,
    };
    Ok((o1, o2))
}
