//! Closed-form limiting objects: skew Brownian transition densities and
//! the minimal (killed) Brownian kernel, with quadrature application to
//! cell-averaged densities.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erf;

use crate::density::LineDensity;
use crate::error::{Error, Result};

/// Skewness weights of the limiting diffusion.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SkewParams {
    pub p: f64,
    pub q: f64,
    /// `(p - q) / (p + q)`, in [-1, 1].
    pub theta: f64,
}

impl SkewParams {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p >= 0.0) || !(q >= 0.0) || !(p + q > 0.0) {
            return Err(Error::DegenerateSkewWeights);
        }
        Ok(SkewParams {
            p,
            q,
            theta: (p - q) / (p + q),
        })
    }
}

/// Heat kernel `(2 pi t)^{-1/2} exp(-d^2 / 2t)`.
#[inline]
pub fn heat_kernel(t: f64, d: f64) -> f64 {
    (-d * d / (2.0 * t)).exp() / (2.0 * std::f64::consts::PI * t).sqrt()
}

/// Transition density of the skew Brownian motion started at `x > 0`.
pub fn gamma_plus(t: f64, x: f64, y: f64, sp: &SkewParams) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    if !(x > 0.0) {
        return Err(Error::WrongSide { x, side: "x > 0" });
    }
    Ok(if y > 0.0 {
        heat_kernel(t, y - x) + sp.theta * heat_kernel(t, y + x)
    } else {
        (2.0 * sp.q / (sp.p + sp.q)) * heat_kernel(t, y - x)
    })
}

/// Transition density of the skew Brownian motion started at `x < 0`.
pub fn gamma_minus(t: f64, x: f64, y: f64, sp: &SkewParams) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    if !(x < 0.0) {
        return Err(Error::WrongSide { x, side: "x < 0" });
    }
    Ok(if y < 0.0 {
        heat_kernel(t, y - x) - sp.theta * heat_kernel(t, y + x)
    } else {
        (2.0 * sp.p / (sp.p + sp.q)) * heat_kernel(t, y - x)
    })
}

/// Dispatches on the sign of the starting point.
pub fn gamma(t: f64, x: f64, y: f64, sp: &SkewParams) -> Result<f64> {
    if x > 0.0 {
        gamma_plus(t, x, y, sp)
    } else if x < 0.0 {
        gamma_minus(t, x, y, sp)
    } else {
        Err(Error::WrongSide { x, side: "x != 0" })
    }
}

/// Evolves a density under the skew Brownian semigroup:
/// `rho_t(y) = ∫ gamma^{sign x}(t, x, y) rho_0(x) dx` (midpoint rule on
/// the grid; the kernel transpose of the expectation semigroup).
pub fn skew_density_evolve(rho0: &LineDensity, t: f64, sp: &SkewParams) -> Result<LineDensity> {
    if t < 0.0 {
        return Err(Error::NonPositiveTime(t));
    }
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    let grid = rho0.grid;
    let dx = grid.dx();
    let n = grid.n_cells;
    let xs: Vec<f64> = (0..n).map(|i| grid.cell_center(i)).collect();
    let mut out = vec![0.0; n];
    for (i, &x) in xs.iter().enumerate() {
        let w = rho0.values[i] * dx;
        if w == 0.0 {
            continue;
        }
        for (j, &y) in xs.iter().enumerate() {
            out[j] += w * gamma(t, x, y, sp)?;
        }
    }
    Ok(LineDensity { grid, values: out })
}

/// Transition density of the minimal (killed) Brownian motion on the
/// positive half-line.
pub fn minimal_bm_kernel(t: f64, x: f64, y: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    if !(x > 0.0) || y < 0.0 {
        return Err(Error::WrongSide {
            x: if x <= 0.0 { x } else { y },
            side: "x > 0, y >= 0",
        });
    }
    Ok(heat_kernel(t, x - y) - heat_kernel(t, x + y))
}

/// Survival probability of a Brownian particle started at `x` (either
/// sign) that is killed upon first touching 0, by time `t`.
pub fn survival_probability(t: f64, x: f64) -> f64 {
    if t <= 0.0 {
        1.0
    } else {
        erf(x.abs() / (2.0 * t).sqrt())
    }
}

/// Evolves a density under the minimal Brownian semigroup: the two
/// half-axes are disjoint, each evolved with the killed kernel.
pub fn minimal_density_evolve(rho0: &LineDensity, t: f64) -> Result<LineDensity> {
    if t < 0.0 {
        return Err(Error::NonPositiveTime(t));
    }
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    let grid = rho0.grid;
    let dx = grid.dx();
    let n = grid.n_cells;
    let xs: Vec<f64> = (0..n).map(|i| grid.cell_center(i)).collect();
    let mut out = vec![0.0; n];
    for (i, &x) in xs.iter().enumerate() {
        let w = rho0.values[i] * dx;
        if w == 0.0 {
            continue;
        }
        let right = x > 0.0;
        for (j, &y) in xs.iter().enumerate() {
            if (y > 0.0) == right {
                out[j] += w * minimal_bm_kernel(t, x.abs(), y.abs())?;
            }
        }
    }
    Ok(LineDensity { grid, values: out })
}

/// Analytic surviving mass `∫ rho_0(x) erf(|x| / sqrt(2t)) dx`.
pub fn minimal_surviving_mass(rho0: &LineDensity, t: f64) -> f64 {
    let grid = rho0.grid;
    let dx = grid.dx();
    rho0.values
        .iter()
        .enumerate()
        .map(|(i, v)| v * survival_probability(t, grid.cell_center(i)) * dx)
        .sum()
}
