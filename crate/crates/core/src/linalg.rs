//! Small fixed-size linear algebra for the 3-dimensional state space:
//! determinants, linear solves, and eigenvalues of a 3×3 real matrix via
//! the characteristic cubic (Cardano plus a polishing Newton step).

use num_complex::Complex64;

pub type Mat3 = [[f64; 3]; 3];
pub type Vec3 = [f64; 3];

pub const IDENTITY: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

pub fn det3(m: &Mat3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

pub fn mat_vec(m: &Mat3, v: &Vec3) -> Vec3 {
    let mut out = [0.0; 3];
    for i in 0..3 {
        out[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
    }
    out
}

/// Solve A x = b by Gaussian elimination with partial pivoting.
/// Returns None when A is singular to working precision.
pub fn solve3(a: &Mat3, b: &Vec3) -> Option<Vec3> {
    let mut m = *a;
    let mut v = *b;
    for col in 0..3 {
        let piv = (col..3)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        v.swap(col, piv);
        let pivot = m[col];
        for row in col + 1..3 {
            let f = m[row][col] / pivot[col];
            for (mk, pk) in m[row].iter_mut().zip(pivot).skip(col) {
                *mk -= f * pk;
            }
            v[row] -= f * v[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut s = v[row];
        for k in row + 1..3 {
            s -= m[row][k] * x[k];
        }
        if m[row][row].abs() < 1e-300 {
            return None;
        }
        x[row] = s / m[row][row];
    }
    Some(x)
}

/// Eigenvalues of a 3×3 real matrix from its characteristic polynomial
/// λ³ + c2 λ² + c1 λ + c0, solved in closed form and polished by two
/// complex Newton steps.
pub fn eig3(m: &Mat3) -> [Complex64; 3] {
    let tr = m[0][0] + m[1][1] + m[2][2];
    // sum of principal 2x2 minors
    let m2 = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0]
        + m[1][1] * m[2][2]
        - m[1][2] * m[2][1];
    let det = det3(m);
    let (c2, c1, c0) = (-tr, m2, -det);
    let mut roots = solve_cubic(c2, c1, c0);
    let poly = |z: Complex64| ((z + c2) * z + c1) * z + c0;
    for root in roots.iter_mut() {
        // Newton polish, accepting only improving steps (a multiple root
        // makes the raw step ill-conditioned)
        for _ in 0..2 {
            let p = poly(*root);
            let dp = (3.0 * *root + 2.0 * c2) * *root + c1;
            if dp.norm() > 1e-300 {
                let trial = *root - p / dp;
                if poly(trial).norm() < p.norm() {
                    *root = trial;
                }
            }
        }
        // collapse a tiny spurious imaginary part from the polish
        if root.im.abs() < 1e-12 * (1.0 + root.re.abs()) {
            *root = Complex64::new(root.re, 0.0);
        }
    }
    roots
}

/// Roots of λ³ + a λ² + b λ + c.
fn solve_cubic(a: f64, b: f64, c: f64) -> [Complex64; 3] {
    // depressed cubic t³ + p t + q with λ = t - a/3
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let disc = (q / 2.0) * (q / 2.0) + (p / 3.0) * (p / 3.0) * (p / 3.0);
    let ts: [Complex64; 3] = if disc > 0.0 {
        // one real root, one complex-conjugate pair
        let sq = disc.sqrt();
        let u = cbrt(-q / 2.0 + sq);
        let v = cbrt(-q / 2.0 - sq);
        let t0 = u + v;
        let re = -t0 / 2.0;
        let im = (u - v) * 3.0f64.sqrt() / 2.0;
        [
            Complex64::new(t0, 0.0),
            Complex64::new(re, im),
            Complex64::new(re, -im),
        ]
    } else {
        // three real roots: trigonometric form
        let rho = (-p / 3.0).max(0.0).sqrt();
        if rho < 1e-300 {
            [Complex64::new(0.0, 0.0); 3]
        } else {
            let arg = (-q / (2.0 * rho * rho * rho)).clamp(-1.0, 1.0);
            let theta = arg.acos() / 3.0;
            let mut out = [Complex64::new(0.0, 0.0); 3];
            for (k, slot) in out.iter_mut().enumerate() {
                let ang = theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0;
                *slot = Complex64::new(2.0 * rho * ang.cos(), 0.0);
            }
            out
        }
    };
    [ts[0] - shift, ts[1] - shift, ts[2] - shift]
}

fn cbrt(x: f64) -> f64 {
    x.signum() * x.abs().cbrt()
}
