//! Cosine family of the skew-Brownian generator by the method of images,
//! its dual acting on continuous observables, the dual resolvent, the
//! Weierstrass (Gaussian-average) formula, and the killed-Brownian
//! resolvent.
//!
//! Shift operators act exactly on grids: the time argument must be an
//! integer number of cells (no silent interpolation), so the cosine
//! functional equation can be tested to rounding accuracy.

use crate::density::{Grid, LineDensity};
use crate::error::{Error, Result};
use crate::kernels::SkewParams;
use crate::quad::{exp_weighted_linear, integrate, integrate_to_tol};

/// Number of cells corresponding to the shift `t`, or an error if `t` is
/// not commensurate with the grid.
pub fn shift_cells(t: f64, dx: f64) -> Result<usize> {
    let u = t.abs() / dx;
    let k = u.round();
    if (u - k).abs() > 1e-9 {
        Err(Error::NonCommensurateShift { t, dx })
    } else {
        Ok(k as usize)
    }
}

/// Basic cosine family `C(t) phi(x) = (phi(x+t) + phi(x-t)) / 2` with the
/// image-method corrections near the interface; acts on cell-averaged
/// data, zero outside the grid.
pub fn cosine_apply(phi: &LineDensity, t: f64, sp: &SkewParams) -> Result<LineDensity> {
    let n = phi.grid.n_cells;
    let m = phi.grid.interface_index();
    let k = shift_cells(t, phi.grid.dx())? as isize;
    let get = |j: isize| -> f64 {
        if j < 0 || j >= n as isize {
            0.0
        } else {
            phi.values[j as usize]
        }
    };
    let c = (sp.q - sp.p) / (2.0 * (sp.p + sp.q));
    let mut out = vec![0.0; n];
    for i in 0..n as isize {
        let mut v = 0.5 * (get(i + k) + get(i - k));
        if i >= m as isize - k && i < m as isize {
            // cell centers in (-t, 0): reflected image of the right part
            v += c * (get(n as isize - 1 - i - k) + get(i + k));
        } else if i >= m as isize && i < m as isize + k {
            // cell centers in (0, t)
            v -= c * (get(n as isize - 1 - i + k) + get(i - k));
        }
        out[i as usize] = v;
    }
    Ok(LineDensity {
        grid: phi.grid,
        values: out,
    })
}

/// Dual cosine family on cell-averaged samples; the exact discrete adjoint
/// of [`cosine_apply`] (used for the duality check).
pub fn dual_cosine_apply_cells(f: &LineDensity, t: f64, sp: &SkewParams) -> Result<LineDensity> {
    let n = f.grid.n_cells;
    let m = f.grid.interface_index();
    let k = shift_cells(t, f.grid.dx())? as isize;
    let get = |j: isize| -> f64 {
        if j < 0 || j >= n as isize {
            0.0
        } else {
            f.values[j as usize]
        }
    };
    let c = (sp.q - sp.p) / (2.0 * (sp.p + sp.q));
    let mut out = vec![0.0; n];
    for i in 0..n as isize {
        let mut v = 0.5 * (get(i + k) + get(i - k));
        if i >= m as isize - k && i < m as isize {
            v += c * (get(n as isize - 1 - i - k) - get(i + k));
        } else if i >= m as isize && i < m as isize + k {
            v -= c * (get(n as isize - 1 - i + k) - get(i - k));
        }
        out[i as usize] = v;
    }
    Ok(LineDensity {
        grid: f.grid,
        values: out,
    })
}

/// A continuous observable sampled at grid nodes, with recorded limits at
/// plus/minus infinity (the space of the dual family).
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub grid: Grid,
    /// `n_cells + 1` node values; node j sits at `-L + j dx`.
    pub values: Vec<f64>,
    pub lim_neg: f64,
    pub lim_pos: f64,
}

impl GridFunction {
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64, lim_neg: f64, lim_pos: f64) -> Self {
        let dx = grid.dx();
        let values = (0..=grid.n_cells)
            .map(|j| f(-grid.half_width + j as f64 * dx))
            .collect();
        GridFunction {
            grid,
            values,
            lim_neg,
            lim_pos,
        }
    }

    pub fn node_x(&self, j: usize) -> f64 {
        -self.grid.half_width + j as f64 * self.grid.dx()
    }

    /// Node value with out-of-grid indices replaced by the limits.
    pub fn get(&self, j: isize) -> f64 {
        if j < 0 {
            self.lim_neg
        } else if j as usize >= self.values.len() {
            self.lim_pos
        } else {
            self.values[j as usize]
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values
            .iter()
            .map(|v| v.abs())
            .fold(self.lim_neg.abs().max(self.lim_pos.abs()), f64::max)
    }

    pub fn sup_distance(&self, other: &GridFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// One-sided first derivatives at 0 by second-order stencils,
    /// `(f'(0-), f'(0+))`. The two-sided derivative may not exist at the
    /// interface; only these limits are meaningful.
    pub fn one_sided_derivs_at_zero(&self) -> (f64, f64) {
        let m = self.grid.n_cells / 2;
        let dx = self.grid.dx();
        let left = (3.0 * self.values[m] - 4.0 * self.values[m - 1] + self.values[m - 2])
            / (2.0 * dx);
        let right = (-3.0 * self.values[m] + 4.0 * self.values[m + 1] - self.values[m + 2])
            / (2.0 * dx);
        (left, right)
    }
}

/// Dual cosine family on node samples.
///
/// Sup-norm bounded by `M(p, q) = 2 max(p, q) / (p + q)`.
pub fn dual_cosine_apply(f: &GridFunction, t: f64, sp: &SkewParams) -> Result<GridFunction> {
    let n = f.grid.n_cells as isize; // node count is n + 1
    let m = n / 2;
    let k = shift_cells(t, f.grid.dx())? as isize;
    let c = (sp.q - sp.p) / (2.0 * (sp.p + sp.q));
    let mut out = vec![0.0; (n + 1) as usize];
    for j in 0..=n {
        let mut v = 0.5 * (f.get(j + k) + f.get(j - k));
        if j > m - k && j <= m {
            // -t < x <= 0
            v += c * (f.get(2 * m - j - k) - f.get(j + k));
        } else if j > m && j < m + k {
            // 0 < x < t
            v -= c * (f.get(2 * m - j + k) - f.get(j - k));
        }
        out[j as usize] = v;
    }
    Ok(GridFunction {
        grid: f.grid,
        values: out,
        lim_neg: f.lim_neg,
        lim_pos: f.lim_pos,
    })
}

/// Pointwise dual cosine action on an analytic observable.
pub fn dual_cosine_eval(f: &impl Fn(f64) -> f64, t: f64, x: f64, sp: &SkewParams) -> f64 {
    let u = t.abs();
    let base = 0.5 * (f(x + u) + f(x - u));
    let c = (sp.q - sp.p) / (2.0 * (sp.p + sp.q));
    if x.abs() >= u {
        base
    } else if x <= 0.0 {
        base + c * (f(-x - u) - f(x + u))
    } else {
        base - c * (f(u - x) - f(x - u))
    }
}

/// Coefficients of the dual resolvent solution.
#[derive(Debug, Clone, Copy)]
pub struct DualResolventCoeffs {
    pub c_minus: f64,
    pub c_plus: f64,
    pub d_minus: f64,
    pub d_plus: f64,
}

impl DualResolventCoeffs {
    /// Continuity at 0: `C- + D- = C+ + D+`.
    pub fn continuity_residual(&self) -> f64 {
        (self.c_minus + self.d_minus) - (self.c_plus + self.d_plus)
    }
}

/// Solves `lambda^2 f - f'' = g` in the dual domain (continuity at 0 and
/// `p f'(0+) = q f'(0-)`), returning the solution on the grid and the
/// closed-form coefficients.
///
/// Quadrature treats `g` as piecewise linear between nodes and constant
/// (equal to the recorded limits) beyond the grid; the exponentially
/// weighted integrals are evaluated in closed form per cell.
pub fn dual_resolvent(
    g: &GridFunction,
    lambda: f64,
    sp: &SkewParams,
) -> Result<(GridFunction, DualResolventCoeffs)> {
    if !(lambda > 0.0) {
        return Err(Error::NonPositiveLambda(lambda));
    }
    let n = g.grid.n_cells;
    let m = n / 2;
    let dx = g.grid.dx();
    let l = g.grid.half_width;

    // C- = (1/2l) ∫_{-inf}^0 e^{ly} g, C+ = (1/2l) ∫_0^inf e^{-ly} g
    let mut int_minus = g.lim_neg * (-lambda * l).exp() / lambda;
    for j in 0..m {
        let (a, b) = (g.node_x(j), g.node_x(j + 1));
        int_minus += exp_weighted_linear(lambda, 0.0, a, b, g.values[j], g.values[j + 1]);
    }
    let mut int_plus = g.lim_pos * (-lambda * l).exp() / lambda;
    for j in m..n {
        let (a, b) = (g.node_x(j), g.node_x(j + 1));
        int_plus += exp_weighted_linear(-lambda, 0.0, a, b, g.values[j], g.values[j + 1]);
    }
    let c_minus = int_minus / (2.0 * lambda);
    let c_plus = int_plus / (2.0 * lambda);
    let s = sp.p + sp.q;
    let d_minus = (2.0 * sp.p / s) * c_plus + ((sp.q - sp.p) / s) * c_minus;
    let d_plus = ((sp.p - sp.q) / s) * c_plus + (2.0 * sp.q / s) * c_minus;
    let coeffs = DualResolventCoeffs {
        c_minus,
        c_plus,
        d_minus,
        d_plus,
    };

    // f(x) = D± e^{∓lx} + (1/2l) ∫_{half-axis} e^{-l|x-y|} g(y) dy,
    // assembled from one-sided exponential convolutions via prefix
    // recursions (O(n) total).
    let decay = (-lambda * dx).exp();

    // right half: nodes m..=n
    let mut toward = vec![0.0; n + 1]; // ∫_0^{x_j} e^{-l(x_j - y)} g dy
    for j in m + 1..=n {
        let local = exp_weighted_linear(
            lambda,
            g.node_x(j),
            g.node_x(j - 1),
            g.node_x(j),
            g.values[j - 1],
            g.values[j],
        );
        toward[j] = toward[j - 1] * decay + local;
    }
    let mut away = vec![0.0; n + 1]; // ∫_{x_j}^inf e^{-l(y - x_j)} g dy
    away[n] = g.lim_pos / lambda;
    for j in (m..n).rev() {
        let local = exp_weighted_linear(
            -lambda,
            g.node_x(j),
            g.node_x(j),
            g.node_x(j + 1),
            g.values[j],
            g.values[j + 1],
        );
        away[j] = away[j + 1] * decay + local;
    }

    // left half: nodes 0..=m
    let mut toward_l = vec![0.0; n + 1]; // ∫_{x_j}^0 e^{-l(y - x_j)} g dy
    for j in (0..m).rev() {
        let local = exp_weighted_linear(
            -lambda,
            g.node_x(j),
            g.node_x(j),
            g.node_x(j + 1),
            g.values[j],
            g.values[j + 1],
        );
        toward_l[j] = toward_l[j + 1] * decay + local;
    }
    let mut away_l = vec![0.0; n + 1]; // ∫_{-inf}^{x_j} e^{-l(x_j - y)} g dy
    away_l[0] = g.lim_neg / lambda;
    for j in 1..=m {
        let local = exp_weighted_linear(
            lambda,
            g.node_x(j),
            g.node_x(j - 1),
            g.node_x(j),
            g.values[j - 1],
            g.values[j],
        );
        away_l[j] = away_l[j - 1] * decay + local;
    }

    let mut fvals = vec![0.0; n + 1];
    for j in 0..=n {
        let x = g.node_x(j);
        fvals[j] = if j >= m {
            d_plus * (-lambda * x).exp() + (toward[j] + away[j]) / (2.0 * lambda)
        } else {
            d_minus * (lambda * x).exp() + (toward_l[j] + away_l[j]) / (2.0 * lambda)
        };
    }
    let f = GridFunction {
        grid: g.grid,
        values: fvals,
        lim_neg: g.lim_neg / (lambda * lambda),
        lim_pos: g.lim_pos / (lambda * lambda),
    };
    Ok((f, coeffs))
}

/// Weierstrass formula: `e^{t (1/2) D*} f(x) = sqrt(2/(pi t)) ∫_0^inf
/// e^{-s^2/2t} C*(s) f(x) ds`, evaluated pointwise on an analytic
/// observable by Gauss-Legendre quadrature split at the case boundary
/// `s = |x|`.
pub fn weierstrass_eval(
    f: &impl Fn(f64) -> f64,
    t: f64,
    x: f64,
    sp: &SkewParams,
) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    let upper = 10.0 * t.sqrt();
    let integrand = |s: f64| (-s * s / (2.0 * t)).exp() * dual_cosine_eval(f, s, x, sp);
    let split = x.abs().min(upper);
    let mut total = 0.0;
    if split > 0.0 {
        total += integrate(integrand, 0.0, split, 32, 16);
    }
    if upper > split {
        total += integrate(integrand, split, upper, 64, 16);
    }
    Ok((2.0 / (std::f64::consts::PI * t)).sqrt() * total)
}

/// Resolvent of the killed Brownian generator on the half-line:
/// `R_l f(x) = (2l)^{-1/2} ∫_0^inf (e^{-sqrt(2l)|x-y|} -
/// e^{-sqrt(2l)(x+y)}) f(y) dy`; vanishes at x = 0.
pub fn killed_resolvent_apply<F>(f: F, lambda: f64) -> Result<impl Fn(f64) -> f64>
where
    F: Fn(f64) -> f64 + Copy,
{
    if !(lambda > 0.0) {
        return Err(Error::NonPositiveLambda(lambda));
    }
    let kappa = (2.0 * lambda).sqrt();
    Ok(move |x: f64| {
        let upper = x + 60.0 / kappa;
        let kernel =
            move |y: f64| ((-kappa * (x - y).abs()).exp() - (-kappa * (x + y)).exp()) * f(y);
        let mut total = 0.0;
        if x > 0.0 {
            total += integrate_to_tol(kernel, 0.0, x, 1e-12);
        }
        total += integrate_to_tol(kernel, x.max(0.0), upper, 1e-12);
        total / kappa
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{gamma, heat_kernel};
    use crate::quad::integrate_to_tol;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sp() -> SkewParams {
        SkewParams::new(0.7, 0.3).unwrap()
    }

    #[test]
    fn shift_commensurability() {
        assert_eq!(shift_cells(0.5, 0.125).unwrap(), 4);
        assert_eq!(shift_cells(-0.5, 0.125).unwrap(), 4);
        assert!(shift_cells(0.3, 0.125).is_err());
    }

    #[test]
    fn cosine_t_zero_is_identity() {
        let grid = Grid::new(2.0, 32).unwrap();
        let phi = LineDensity::from_fn(grid, |x| (x + 0.3).sin());
        assert_eq!(cosine_apply(&phi, 0.0, &sp()).unwrap(), phi);
    }

    #[test]
    fn cosine_on_odd_data_is_basic_cosine() {
        let grid = Grid::new(2.0, 64).unwrap();
        let phi = LineDensity::from_fn(grid, |x| x * (-x * x).exp());
        let t = 8.0 * grid.dx();
        let skewed = cosine_apply(&phi, t, &sp()).unwrap();
        let plain = cosine_apply(&phi, t, &SkewParams::new(0.5, 0.5).unwrap()).unwrap();
        for i in 0..grid.n_cells {
            assert!((skewed.values[i] - plain.values[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn cosine_even_data_matches_alternate_form() {
        let grid = Grid::new(2.0, 64).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let half: Vec<f64> = (0..32).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut vals = half.clone();
        vals.reverse();
        vals.extend_from_slice(&half);
        let phi = LineDensity { grid, values: vals };
        let s = sp();
        let k = 9;
        let t = k as f64 * grid.dx();
        let full = cosine_apply(&phi, t, &s).unwrap();
        // alternate even-data form: C(t)phi + theta [phi(x+t) 1_{(-t,0)} - phi(x-t) 1_{(0,t)}]
        let plain = cosine_apply(&phi, t, &SkewParams::new(0.5, 0.5).unwrap()).unwrap();
        let theta = (s.q - s.p) / (s.p + s.q);
        let n = grid.n_cells as isize;
        let m = grid.interface_index() as isize;
        let get = |j: isize| if j < 0 || j >= n { 0.0 } else { phi.values[j as usize] };
        for i in 0..n {
            let mut v = plain.values[i as usize];
            if i >= m - k && i < m {
                v += theta * get(i + k);
            } else if i >= m && i < m + k {
                v -= theta * get(i - k);
            }
            assert!((full.values[i as usize] - v).abs() < 1e-14);
        }
    }

    #[test]
    fn discrete_duality() {
        let grid = Grid::new(2.0, 64).unwrap();
        let s = sp();
        let t = 11.0 * grid.dx();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let phi = LineDensity {
                grid,
                values: (0..64).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            };
            let f = LineDensity {
                grid,
                values: (0..64).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            };
            let lhs: f64 = cosine_apply(&phi, t, &s)
                .unwrap()
                .values
                .iter()
                .zip(&f.values)
                .map(|(a, b)| a * b)
                .sum();
            let rhs: f64 = dual_cosine_apply_cells(&f, t, &s)
                .unwrap()
                .values
                .iter()
                .zip(&phi.values)
                .map(|(a, b)| a * b)
                .sum();
            assert!((lhs - rhs).abs() < 1e-10 * lhs.abs().max(1.0));
        }
    }

    #[test]
    fn dual_cosine_functional_equation() {
        let grid = Grid::new(4.0, 256).unwrap();
        let s = sp();
        // constant outside |x| < 1 so that shifted reads stay exact
        let f = GridFunction::from_fn(
            grid,
            |x| {
                if x.abs() < 1.0 {
                    (1.0 - x * x).powi(2) + 0.2
                } else {
                    0.2
                }
            },
            0.2,
            0.2,
        );
        let dx = grid.dx();
        let (t, u) = (40.0 * dx, 17.0 * dx);
        let lhs = dual_cosine_apply(&dual_cosine_apply(&f, u, &s).unwrap(), t, &s).unwrap();
        let a = dual_cosine_apply(&f, t + u, &s).unwrap();
        let b = dual_cosine_apply(&f, t - u, &s).unwrap();
        for j in 0..=grid.n_cells {
            let sum = a.values[j] + b.values[j];
            assert!((2.0 * lhs.values[j] - sum).abs() < 1e-12);
        }
    }

    #[test]
    fn dual_cosine_norm_bound() {
        let grid = Grid::new(2.0, 64).unwrap();
        let s = sp();
        let m_bound = 2.0 * s.p.max(s.q) / (s.p + s.q);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut attained: f64 = 0.0;
        for _ in 0..200 {
            let f = GridFunction {
                grid,
                values: (0..=64).map(|_| rng.gen_range(-1.0..1.0)).collect(),
                lim_neg: rng.gen_range(-1.0..1.0),
                lim_pos: rng.gen_range(-1.0..1.0),
            };
            let t = rng.gen_range(1..40) as f64 * grid.dx();
            let out = dual_cosine_apply(&f, t, &s).unwrap();
            let ratio = out.sup_norm() / f.sup_norm();
            assert!(ratio <= m_bound * (1.0 + 1e-9));
            attained = attained.max(ratio);
        }
        assert!(attained > 1.0); // genuinely exceeds the contraction bound
    }

    #[test]
    fn dual_resolvent_constant_g() {
        let grid = Grid::new(10.0, 1000).unwrap();
        let g = GridFunction::from_fn(grid, |_| 1.0, 1.0, 1.0);
        for lambda in [0.5, 1.0, 2.0] {
            let (f, c) = dual_resolvent(&g, lambda, &sp()).unwrap();
            let expect = 1.0 / (lambda * lambda);
            for j in 0..=grid.n_cells {
                assert!((f.values[j] - expect).abs() < 1e-10);
            }
            assert!((c.c_minus - 0.5 * expect).abs() < 1e-12);
            assert!((c.c_plus - 0.5 * expect).abs() < 1e-12);
            assert!((c.d_minus - 0.5 * expect).abs() < 1e-12);
            assert!((c.d_plus - 0.5 * expect).abs() < 1e-12);
            assert!(c.continuity_residual().abs() < 1e-12);
        }
        assert!(dual_resolvent(&g, 0.0, &sp()).is_err());
    }

    #[test]
    fn dual_resolvent_ode_residual_second_order() {
        let s = sp();
        let lambda = 1.0;
        let gfun = |x: f64| (-(x - 0.5) * (x - 0.5)).exp() + 0.1;
        let mut residuals = Vec::new();
        for n in [800usize, 1600, 3200] {
            let grid = Grid::new(12.0, n).unwrap();
            let g = GridFunction::from_fn(grid, gfun, 0.1, 0.1);
            let (f, _) = dual_resolvent(&g, lambda, &s).unwrap();
            let dx = grid.dx();
            let m = n / 2;
            let mut worst: f64 = 0.0;
            for j in 2..n - 1 {
                if j == m || j == m - 1 || j == m + 1 {
                    continue; // second derivative jump across the interface
                }
                let fpp = (f.values[j - 1] - 2.0 * f.values[j] + f.values[j + 1]) / (dx * dx);
                let r = lambda * lambda * f.values[j] - fpp - g.values[j];
                worst = worst.max(r.abs());
            }
            residuals.push(worst);
        }
        assert!(residuals[1] < 0.4 * residuals[0]);
        assert!(residuals[2] < 0.4 * residuals[1]);
    }

    #[test]
    fn dual_resolvent_boundary_law() {
        let s = sp();
        let grid = Grid::new(12.0, 2400).unwrap();
        let g = GridFunction::from_fn(grid, |x| 1.0 / (1.0 + (x - 1.0) * (x - 1.0)), 0.0, 0.0);
        let (f, _) = dual_resolvent(&g, 0.8, &s).unwrap();
        let (dl, dr) = f.one_sided_derivs_at_zero();
        assert!((s.p * dr - s.q * dl).abs() < 1e-5);
    }

    #[test]
    fn weierstrass_reduces_to_heat_for_equal_weights() {
        let s = SkewParams::new(0.5, 0.5).unwrap();
        let f = |x: f64| (-x * x / 2.0).exp();
        let t = 1.0;
        for x in [-2.0, -0.4, 0.0, 0.7, 1.9] {
            let w = weierstrass_eval(&f, t, x, &s).unwrap();
            let direct = integrate_to_tol(|y| heat_kernel(t, y - x) * f(y), -14.0, 14.0, 1e-12);
            assert!((w - direct).abs() < 1e-6);
        }
    }

    #[test]
    fn weierstrass_matches_gamma_expectation() {
        let s = sp();
        let f = |x: f64| 1.0 / (1.0 + (x - 0.5) * (x - 0.5));
        let t = 0.8;
        for i in 0..21 {
            let x = -2.5 + 0.25 * i as f64;
            if x == 0.0 {
                continue;
            }
            let w = weierstrass_eval(&f, t, x, &s).unwrap();
            let direct = integrate_to_tol(|y| gamma(t, x, y, &s).unwrap() * f(y), -15.0, 0.0, 1e-12)
                + integrate_to_tol(|y| gamma(t, x, y, &s).unwrap() * f(y), 0.0, 15.0, 1e-12);
            assert!((w - direct).abs() < 1e-6, "x = {x}: {w} vs {direct}");
        }
    }

    #[test]
    fn killed_resolvent_examples() {
        let lambda = 0.5;
        let r = killed_resolvent_apply(|_| 1.0, lambda).unwrap();
        // f = 1 gives (1/l)(1 - e^{-sqrt(2l) x}); at x = 1, l = 1/2: 2(1 - e^{-1})
        let expect = 2.0 * (1.0 - (-1.0f64).exp());
        assert!((r(1.0) - expect).abs() < 1e-9);
        assert!(r(0.0).abs() < 1e-12);
        let r2 = killed_resolvent_apply(|y: f64| (y).sin() / (1.0 + y), lambda).unwrap();
        assert!(r2(0.0).abs() < 1e-12);
        assert!(killed_resolvent_apply(|_| 1.0, -1.0).is_err());
    }

    #[test]
    fn killed_resolvent_identity() {
        // R_l - R_m = (m - l) R_l R_m applied to a test function
        let (l, m) = (0.5, 1.0);
        let f = |y: f64| (-0.3 * y).exp() * (1.0 + y).recip();
        let rl = killed_resolvent_apply(f, l).unwrap();
        let rm = killed_resolvent_apply(f, m).unwrap();
        let rm_then_rl = killed_resolvent_apply(
            |y| killed_resolvent_apply(f, m).unwrap()(y),
            l,
        )
        .unwrap();
        for x in [0.2, 1.0, 3.0] {
            let lhs = rl(x) - rm(x);
            let rhs = (m - l) * rm_then_rl(x);
            assert!((lhs - rhs).abs() < 1e-6, "x = {x}: {lhs} vs {rhs}");
        }
    }
}
