//! Quadrature helpers: Gauss-Legendre rules, composite integration with
//! tolerance-driven panel doubling, and exact integrals of exponentially
//! weighted piecewise-linear data (used by the resolvent formulas).

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre polynomial.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        // Chebyshev-based initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and P_n'(x).
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss-Legendre integral of `f` over `[a, b]` with `panels`
/// equal panels of `order` points each.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, order: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        let mut s = 0.0;
        for (x, w) in nodes.iter().zip(&weights) {
            s += w * f(mid + 0.5 * h * x);
        }
        total += 0.5 * h * s;
    }
    total
}

/// Doubles the panel count until two successive composite estimates agree
/// to `tol` (absolute); serves as the independent "adaptive quadrature"
/// oracle in tests.
pub fn integrate_to_tol(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let mut panels = 4;
    let mut prev = integrate(&f, a, b, panels, 16);
    loop {
        panels *= 2;
        let next = integrate(&f, a, b, panels, 16);
        if (next - prev).abs() <= tol || panels >= 4096 {
            return next;
        }
        prev = next;
    }
}

/// `∫_a^b e^{rate*(y - x0)} * g(y) dy` for `g` linear on `[a, b]` with
/// endpoint values `ga`, `gb`. Exact up to rounding; written against the
/// reference point `x0` so the caller controls the exponential scale.
pub fn exp_weighted_linear(rate: f64, x0: f64, a: f64, b: f64, ga: f64, gb: f64) -> f64 {
    let h = b - a;
    if h == 0.0 {
        return 0.0;
    }
    let u = rate * h;
    // ∫_0^1 e^{u s} (ga + (gb-ga) s) ds, scaled by h * e^{rate*(a - x0)}.
    let (i0, i1) = if u.abs() < 1e-6 {
        // series to avoid cancellation for small u
        (
            1.0 + u / 2.0 + u * u / 6.0 + u * u * u / 24.0,
            0.5 + u / 3.0 + u * u / 8.0 + u * u * u / 30.0,
        )
    } else {
        let e = u.exp();
        ((e - 1.0) / u, (e * (u - 1.0) + 1.0) / (u * u))
    };
    h * (rate * (a - x0)).exp() * (ga * i0 + (gb - ga) * i1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_integrates_polynomials_exactly() {
        // order-8 rule is exact through degree 15
        let v = integrate(|x| x.powi(10) + 3.0 * x.powi(3), 0.0, 1.0, 1, 8);
        assert!((v - (1.0 / 11.0 + 0.75)).abs() < 1e-14);
    }

    #[test]
    fn gaussian_normalization() {
        let v = integrate_to_tol(
            |x| (-x * x / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt(),
            -10.0,
            10.0,
            1e-13,
        );
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exp_weighted_linear_matches_closed_form() {
        // ∫_1^2 e^{0.5 y} (2 + 3(y-1)) dy against high-order quadrature
        let num = integrate(|y| (0.5 * y).exp() * (2.0 + 3.0 * (y - 1.0)), 1.0, 2.0, 4, 16);
        let v = exp_weighted_linear(0.5, 0.0, 1.0, 2.0, 2.0, 5.0);
        assert!((v - num).abs() < 1e-12);
        // small-rate branch
        let num2 = integrate(|y| (1e-8 * y).exp() * (1.0 + y), 0.0, 1.0, 4, 16);
        let v2 = exp_weighted_linear(1e-8, 0.0, 0.0, 1.0, 1.0, 2.0);
        assert!((v2 - num2).abs() < 1e-13);
    }
}
