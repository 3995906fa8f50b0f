//! Time integration with dense uniform sampling, plus joint integration
//! of the variational equation to obtain monodromy matrices and Floquet
//! multipliers.

use crate::linalg::{self, Mat3};
use crate::model::{Coefficients, LogState, State};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IntegrateError {
    #[error("step size underflow at t={0}")]
    StepFailure(f64),
    #[error("state became non-finite at t={0}")]
    NonFiniteState(f64),
    #[error("integration span must be positive: t0={0}, t1={1}")]
    EmptySpan(f64, f64),
}

/// Integration method. The adaptive embedded 5(4) pair is the default;
/// fixed-step classical RK4 serves as a cross-check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Adaptive { abs_tol: f64, rel_tol: f64 },
    FixedRk4 { step: f64 },
}

impl Default for Method {
    fn default() -> Self {
        Method::Adaptive { abs_tol: 1e-10, rel_tol: 1e-10 }
    }
}

/// A dense solution path: strictly increasing sample times, the first
/// sample equal to the supplied initial condition.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub method: Method,
    pub samples: Vec<(f64, State)>,
}

impl Trajectory {
    pub fn last(&self) -> (f64, State) {
        *self.samples.last().unwrap()
    }

    /// Minimum of the infected component over all samples.
    pub fn min_infected(&self) -> f64 {
        self.samples.iter().map(|(_, x)| x.i).fold(f64::INFINITY, f64::min)
    }
}

// Dormand-Prince 5(4) tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
// 5th-order weights equal the last A row; the embedded 4th-order weights:
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate x' = f(t, x) from (t0, x0) to t1, emitting samples at every
/// multiple of `sample_every` past t0 (plus the endpoint). With `None`
/// only the endpoints are stored.
pub fn integrate_ode<const N: usize>(
    f: impl Fn(f64, &[f64; N]) -> [f64; N],
    t0: f64,
    x0: [f64; N],
    t1: f64,
    method: Method,
    sample_every: Option<f64>,
) -> Result<Vec<(f64, [f64; N])>, IntegrateError> {
    if t0.is_nan() || t1.is_nan() || t1 <= t0 {
        return Err(IntegrateError::EmptySpan(t0, t1));
    }
    let mut outputs = vec![(t0, x0)];
    let targets = sample_times(t0, t1, sample_every);
    let mut t = t0;
    let mut x = x0;
    // persistent adaptive step across output targets
    let mut h_adaptive = (t1 - t0).min(1e-2);
    for target in targets {
        match method {
            Method::Adaptive { abs_tol, rel_tol } => {
                advance_adaptive(&f, &mut t, &mut x, target, abs_tol, rel_tol, &mut h_adaptive)?;
            }
            Method::FixedRk4 { step } => {
                advance_rk4(&f, &mut t, &mut x, target, step)?;
            }
        }
        outputs.push((target, x));
    }
    Ok(outputs)
}

fn sample_times(t0: f64, t1: f64, sample_every: Option<f64>) -> Vec<f64> {
    match sample_every {
        None => vec![t1],
        Some(dt) => {
            assert!(dt > 0.0);
            let mut ts = Vec::new();
            let mut k = 1usize;
            loop {
                let t = t0 + k as f64 * dt;
                if t >= t1 - 1e-12 * (1.0 + t1.abs()) {
                    break;
                }
                ts.push(t);
                k += 1;
            }
            ts.push(t1);
            ts
        }
    }
}

fn advance_adaptive<const N: usize>(
    f: &impl Fn(f64, &[f64; N]) -> [f64; N],
    t: &mut f64,
    x: &mut [f64; N],
    target: f64,
    abs_tol: f64,
    rel_tol: f64,
    h: &mut f64,
) -> Result<(), IntegrateError> {
    while *t < target {
        let mut step = h.min(target - *t);
        loop {
            let (x5, err) = dp_step(f, *t, x, step, abs_tol, rel_tol);
            if x5.iter().any(|v| !v.is_finite()) {
                return Err(IntegrateError::NonFiniteState(*t));
            }
            if err <= 1.0 {
                *t += step;
                *x = x5;
                let factor = if err > 0.0 { 0.9 * err.powf(-0.2) } else { 5.0 };
                *h = step * factor.clamp(0.2, 5.0);
                break;
            }
            let factor = (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
            step *= factor;
            if step < 1e-14 * (1.0 + t.abs()) {
                return Err(IntegrateError::StepFailure(*t));
            }
        }
    }
    Ok(())
}

/// One Dormand-Prince step; returns the 5th-order solution and the
/// scaled error norm of the embedded 4th-order difference.
fn dp_step<const N: usize>(
    f: &impl Fn(f64, &[f64; N]) -> [f64; N],
    t: f64,
    x: &[f64; N],
    h: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> ([f64; N], f64) {
    let mut k = [[0.0; N]; 7];
    k[0] = f(t, x);
    for stage in 0..6 {
        let mut xs = *x;
        for (j, kj) in k.iter().enumerate().take(stage + 1) {
            let a = A[stage][j];
            if a != 0.0 {
                for n in 0..N {
                    xs[n] += h * a * kj[n];
                }
            }
        }
        k[stage + 1] = f(t + C[stage] * h, &xs);
    }
    // the 5th-order solution uses the last A row as weights (FSAL pair),
    // so it already sits in the stage-6 state; rebuild it explicitly
    let mut x5 = *x;
    for (j, kj) in k.iter().enumerate().take(6) {
        let w = A[5][j];
        if w != 0.0 {
            for n in 0..N {
                x5[n] += h * w * kj[n];
            }
        }
    }
    let mut x4 = *x;
    for (j, kj) in k.iter().enumerate() {
        let w = B4[j];
        if w != 0.0 {
            for n in 0..N {
                x4[n] += h * w * kj[n];
            }
        }
    }
    let mut err_sq = 0.0;
    for n in 0..N {
        let scale = abs_tol + rel_tol * x[n].abs().max(x5[n].abs());
        let e = (x5[n] - x4[n]) / scale;
        err_sq += e * e;
    }
    (x5, (err_sq / N as f64).sqrt())
}

fn advance_rk4<const N: usize>(
    f: &impl Fn(f64, &[f64; N]) -> [f64; N],
    t: &mut f64,
    x: &mut [f64; N],
    target: f64,
    step: f64,
) -> Result<(), IntegrateError> {
    if step <= 0.0 {
        return Err(IntegrateError::StepFailure(*t));
    }
    let span = target - *t;
    let n_steps = (span / step).ceil().max(1.0) as usize;
    let h = span / n_steps as f64;
    for _ in 0..n_steps {
        let k1 = f(*t, x);
        let mut xs = *x;
        for n in 0..N {
            xs[n] = x[n] + 0.5 * h * k1[n];
        }
        let k2 = f(*t + 0.5 * h, &xs);
        for n in 0..N {
            xs[n] = x[n] + 0.5 * h * k2[n];
        }
        let k3 = f(*t + 0.5 * h, &xs);
        for n in 0..N {
            xs[n] = x[n] + h * k3[n];
        }
        let k4 = f(*t + h, &xs);
        for n in 0..N {
            x[n] += (h / 6.0) * (k1[n] + 2.0 * k2[n] + 2.0 * k3[n] + k4[n]);
        }
        *t += h;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(IntegrateError::NonFiniteState(*t));
        }
    }
    *t = target;
    Ok(())
}

/// Integrate the original (S, I, Y) system.
pub fn integrate_system(
    params: &Coefficients,
    t0: f64,
    x0: State,
    t1: f64,
    method: Method,
    sample_every: Option<f64>,
) -> Result<Trajectory, IntegrateError> {
    let raw = integrate_ode(
        |t, x: &[f64; 3]| params.field(t, State::from_array(*x)).to_array(),
        t0,
        x0.to_array(),
        t1,
        method,
        sample_every,
    )?;
    Ok(Trajectory {
        method,
        samples: raw.into_iter().map(|(t, x)| (t, State::from_array(x))).collect(),
    })
}

/// Integrate the log-coordinate system.
pub fn integrate_log(
    params: &Coefficients,
    t0: f64,
    u0: LogState,
    t1: f64,
    method: Method,
    sample_every: Option<f64>,
) -> Result<Vec<(f64, LogState)>, IntegrateError> {
    let raw = integrate_ode(
        |t, u: &[f64; 3]| params.log_field(t, LogState::from_array(*u)).to_array(),
        t0,
        u0.to_array(),
        t1,
        method,
        sample_every,
    )?;
    Ok(raw.into_iter().map(|(t, u)| (t, LogState::from_array(u))).collect())
}

/// The period map derivative Φ(t₀+ω, t₀) along the solution through x₀,
/// with its eigenvalues (the Floquet multipliers when x₀ lies on an
/// ω-periodic orbit).
#[derive(Debug, Clone)]
pub struct Monodromy {
    pub matrix: Mat3,
    pub multipliers: [Complex64; 3],
    /// ∫ tr J(t, x(t)) dt over the period (for the Liouville identity)
    pub trace_integral: f64,
    /// solution endpoint x(t₀+ω)
    pub endpoint: State,
}

impl Monodromy {
    pub fn det(&self) -> f64 {
        linalg::det3(&self.matrix)
    }

    /// Relative defect in det Φ = exp(∫ tr J).
    pub fn liouville_residual(&self) -> f64 {
        let expected = self.trace_integral.exp();
        (self.det() - expected).abs() / expected.abs()
    }
}

/// Integrate x' = f(t, x) jointly with Φ' = J(t, x) Φ, Φ(t₀) = Id, over
/// one period, plus the running trace integral.
pub fn monodromy(params: &Coefficients, x0: State, t0: f64) -> Result<Monodromy, IntegrateError> {
    let omega = params.period();
    // layout: [S, I, Y, Φ row-major x9, ∫ tr J]
    let mut y0 = [0.0f64; 13];
    y0[0] = x0.s;
    y0[1] = x0.i;
    y0[2] = x0.y;
    y0[3] = 1.0;
    y0[7] = 1.0;
    y0[11] = 1.0;
    let rhs = |t: f64, y: &[f64; 13]| {
        let x = State::new(y[0], y[1], y[2]);
        let f = params.field(t, x);
        let j = params.jacobian(t, x);
        let mut dy = [0.0; 13];
        dy[0] = f.s;
        dy[1] = f.i;
        dy[2] = f.y;
        for row in 0..3 {
            for col in 0..3 {
                let mut v = 0.0;
                for m in 0..3 {
                    v += j[row][m] * y[3 + 3 * m + col];
                }
                dy[3 + 3 * row + col] = v;
            }
        }
        dy[12] = j[0][0] + j[1][1] + j[2][2];
        dy
    };
    let out = integrate_ode(rhs, t0, y0, t0 + omega, Method::default(), None)?;
    let (_, y) = *out.last().unwrap();
    let mut phi = [[0.0; 3]; 3];
    for row in 0..3 {
        for col in 0..3 {
            phi[row][col] = y[3 + 3 * row + col];
        }
    }
    Ok(Monodromy {
        matrix: phi,
        multipliers: linalg::eig3(&phi),
        trace_integral: y[12],
        endpoint: State::new(y[0], y[1], y[2]),
    })
}
