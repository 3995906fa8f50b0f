//! Quadrature and scalar extremum search helpers shared by the rest of the
//! crate: composite Simpson, cumulative integrals with cubic-Hermite
//! evaluation between nodes, and grid-then-golden-section extremization.

/// Composite Simpson rule with `panels` subintervals (midpoint flavour:
/// each panel contributes (h/6)(f(a) + 4 f(mid) + f(b)), so any panel
/// count works and the rule is 4th order).
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    assert!(panels > 0);
    let h = (b - a) / panels as f64;
    let mut acc = 0.0;
    for i in 0..panels {
        let x0 = a + i as f64 * h;
        let x1 = x0 + h;
        acc += (h / 6.0) * (f(x0) + 4.0 * f(0.5 * (x0 + x1)) + f(x1));
    }
    acc
}

/// Default panel count for all Simpson integrals in the crate.
pub const DEFAULT_PANELS: usize = 2048;

/// Cumulative integral F(t) = ∫₀^t f of a smooth integrand on [0, len],
/// built once on a uniform grid and evaluated anywhere by cubic Hermite
/// interpolation (the exact derivative F' = f is known at the nodes, so
/// the interpolation error is O(h⁴)).
#[derive(Debug, Clone)]
pub struct CumulativeIntegral {
    h: f64,
    len: f64,
    /// integrand at the nodes (derivative of the cumulative values)
    f: Vec<f64>,
    /// cumulative Simpson sums at the nodes
    cum: Vec<f64>,
}

impl CumulativeIntegral {
    pub fn build<F: Fn(f64) -> f64>(f: F, len: f64, panels: usize) -> Self {
        assert!(len > 0.0 && panels > 0);
        let h = len / panels as f64;
        let mut fv = Vec::with_capacity(panels + 1);
        for i in 0..=panels {
            fv.push(f(i as f64 * h));
        }
        let mut cum = Vec::with_capacity(panels + 1);
        cum.push(0.0);
        for i in 0..panels {
            let x0 = i as f64 * h;
            let seg = (h / 6.0) * (fv[i] + 4.0 * f(x0 + 0.5 * h) + fv[i + 1]);
            let prev = *cum.last().unwrap();
            cum.push(prev + seg);
        }
        CumulativeIntegral { h, len, f: fv, cum }
    }

    /// F(t) for t in [0, len] (clamped at the ends).
    pub fn value(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, self.len);
        let mut i = (t / self.h) as usize;
        if i >= self.cum.len() - 1 {
            i = self.cum.len() - 2;
        }
        let s = (t - i as f64 * self.h) / self.h;
        let (y0, y1) = (self.cum[i], self.cum[i + 1]);
        let (d0, d1) = (self.f[i] * self.h, self.f[i + 1] * self.h);
        // cubic Hermite basis
        let s2 = s * s;
        let s3 = s2 * s;
        y0 * (2.0 * s3 - 3.0 * s2 + 1.0)
            + d0 * (s3 - 2.0 * s2 + s)
            + y1 * (-2.0 * s3 + 3.0 * s2)
            + d1 * (s3 - s2)
    }

    /// F(len), the full integral.
    pub fn total(&self) -> f64 {
        *self.cum.last().unwrap()
    }
}

/// Golden-section maximization of a unimodal function on [a, b] to
/// tolerance `tol` in the argument. Returns (argmax, max).
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Maximum of f over [0, len]: dense grid scan followed by golden-section
/// refinement around the best grid node.
pub fn grid_max<F: Fn(f64) -> f64>(f: F, len: f64, points: usize, tol: f64) -> f64 {
    let h = len / points as f64;
    let mut best_i = 0usize;
    let mut best = f64::NEG_INFINITY;
    for i in 0..points {
        let v = f(i as f64 * h);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let a = best_i as f64 * h - h;
    let b = best_i as f64 * h + h;
    let (_, refined) = golden_max(&f, a, b, tol);
    refined.max(best)
}

/// Minimum of f over [0, len], by negation of [`grid_max`].
pub fn grid_min<F: Fn(f64) -> f64>(f: F, len: f64, points: usize, tol: f64) -> f64 {
    -grid_max(|t| -f(t), len, points, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_polynomial_exact() {
        // Simpson is exact on cubics
        let v = simpson(|x| x * x * x - 2.0 * x, 0.0, 2.0, 4);
        assert!((v - (4.0 - 4.0)).abs() < 1e-13);
    }

    #[test]
    fn simpson_sine() {
        let v = simpson(|x| x.sin(), 0.0, std::f64::consts::PI, 64);
        assert!((v - 2.0).abs() < 1e-7);
        let v = simpson(|x| x.sin(), 0.0, std::f64::consts::PI, 2048);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn cumulative_matches_closed_form() {
        let ci = CumulativeIntegral::build(|t| (2.0 * t).cos(), 1.0, 256);
        for &t in &[0.0f64, 0.1, 0.33333, 0.71, 1.0] {
            let exact = 0.5 * (2.0 * t).sin();
            assert!((ci.value(t) - exact).abs() < 1e-11, "t={t}");
        }
        assert!((ci.total() - 0.5 * 2.0f64.sin()).abs() < 1e-12);
    }

    #[test]
    fn grid_extrema_cosine() {
        let sup = grid_max(|t| (2.0 * std::f64::consts::PI * t).cos(), 1.0, 4096, 1e-12);
        let inf = grid_min(|t| (2.0 * std::f64::consts::PI * t).cos(), 1.0, 4096, 1e-12);
        assert!((sup - 1.0).abs() < 1e-12);
        assert!((inf + 1.0).abs() < 1e-12);
    }
}
