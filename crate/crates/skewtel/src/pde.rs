//! Deterministic evolution under the scaled generator
//! `G_eps = (1/eps) A + (1/eps^2)(B - I)`: operator splitting of the exact
//! flip exponential with first-order upwind transport and the interface
//! flux redistribution, plus the exact resolvent of `A` and closed-form
//! kernel eigenfunction / determinant self-tests.

use serde::{Deserialize, Serialize};

use crate::density::TwoLineDensity;
use crate::error::{Error, Result};
use crate::params::InterfaceParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Splitting {
    Lie,
    Strang,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Transport Courant number in (0, 1]; at 1 the upwind step is an
    /// exact one-cell shift.
    pub cfl: f64,
    pub splitting: Splitting,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            cfl: 1.0,
            splitting: Splitting::Strang,
        }
    }
}

/// Output of a transport step or a full evolution, with the mass ledger.
#[derive(Debug, Clone)]
pub struct Evolved {
    pub density: TwoLineDensity,
    /// Mass that left through the domain edges at ±L.
    pub edge_outflow: f64,
    /// Mass destroyed at the interface (p0/q0 terms).
    pub killed_mass: f64,
}

/// One upwind transport step of length `dt` at speeds ±1/eps.
///
/// The flux leaving the upper line from the left of 0 (`F_L`) and the
/// lower line from the right of 0 (`F_R`) is redistributed:
/// upper inflow right of 0 gets `p F_L + q' F_R`, lower inflow left of 0
/// gets `p' F_L + q F_R`, and `p0 F_L + q0 F_R` is destroyed.
pub fn advance_transport(
    d: &TwoLineDensity,
    eps: f64,
    dt: f64,
    params: &InterfaceParams,
) -> Result<Evolved> {
    let grid = d.grid;
    let n = grid.n_cells;
    let m = grid.interface_index();
    let dx = grid.dx();
    let nu = dt / (eps * dx);
    if nu > 1.0 + 1e-12 {
        return Err(Error::CflViolated(nu));
    }
    let nu = nu.min(1.0);

    // interface fluxes, in cell-value units
    let flux_left = nu * d.up[m - 1];
    let flux_right = nu * d.down[m];

    let mut out = TwoLineDensity::zeros(grid);
    // upper line moves right
    for i in 0..n {
        let inflow = if i == 0 {
            0.0
        } else if i == m {
            params.p * flux_left + params.q_prime * flux_right
        } else {
            nu * d.up[i - 1]
        };
        out.up[i] = d.up[i] - nu * d.up[i] + inflow;
    }
    // lower line moves left
    for i in 0..n {
        let inflow = if i == n - 1 {
            0.0
        } else if i == m - 1 {
            params.p_prime * flux_left + params.q * flux_right
        } else {
            nu * d.down[i + 1]
        };
        out.down[i] = d.down[i] - nu * d.down[i] + inflow;
    }

    let edge_outflow = (nu * d.up[n - 1] + nu * d.down[0]) * dx;
    let killed_mass = (params.p0 * flux_left + params.q0 * flux_right) * dx;
    Ok(Evolved {
        density: out,
        edge_outflow,
        killed_mass,
    })
}

/// Evolves `d0` to macroscopic time `t_macro` under `G_eps` by splitting
/// the exact flip exponential against upwind transport.
pub fn evolve_g_epsilon(
    d0: &TwoLineDensity,
    eps: f64,
    t_macro: f64,
    params: &InterfaceParams,
    config: &SolverConfig,
) -> Result<Evolved> {
    if t_macro < 0.0 {
        return Err(Error::NonPositiveTime(t_macro));
    }
    if !(eps > 0.0) {
        return Err(Error::Config(format!("epsilon must be > 0, got {eps}")));
    }
    let dx = d0.grid.dx();
    let dt = config.cfl * eps * dx;
    let mut density = d0.clone();
    let mut edge_outflow = 0.0;
    let mut killed_mass = 0.0;
    let mut remaining = t_macro;
    while remaining > 1e-14 * t_macro.max(1.0) {
        let step = dt.min(remaining);
        let s_flip = step / (eps * eps);
        density = match config.splitting {
            Splitting::Strang => {
                let half = density.flip(0.5 * s_flip)?;
                let moved = advance_transport(&half, eps, step, params)?;
                edge_outflow += moved.edge_outflow;
                killed_mass += moved.killed_mass;
                moved.density.flip(0.5 * s_flip)?
            }
            Splitting::Lie => {
                let flipped = density.flip(s_flip)?;
                let moved = advance_transport(&flipped, eps, step, params)?;
                edge_outflow += moved.edge_outflow;
                killed_mass += moved.killed_mass;
                moved.density
            }
        };
        remaining -= step;
    }
    Ok(Evolved {
        density,
        edge_outflow,
        killed_mass,
    })
}

/// Closed-form kernel data of `lambda - G_eps` on the unconstrained
/// domain: decay rate `mu`, weights `w±`, and the two exponential
/// eigenfunctions.
#[derive(Debug, Clone, Copy)]
pub struct EigenPair {
    pub epsilon: f64,
    pub lambda: f64,
    /// `sqrt(lambda (lambda eps^2 + 2))`.
    pub mu: f64,
    /// `lambda eps^2 + mu eps + 1`.
    pub w_plus: f64,
    /// `lambda eps^2 - mu eps + 1`; satisfies `w_plus * w_minus = 1`.
    pub w_minus: f64,
}

pub fn kernel_eigenfunctions(eps: f64, lambda: f64) -> EigenPair {
    let mu = (lambda * (lambda * eps * eps + 2.0)).sqrt();
    EigenPair {
        epsilon: eps,
        lambda,
        mu,
        w_plus: lambda * eps * eps + mu * eps + 1.0,
        w_minus: lambda * eps * eps - mu * eps + 1.0,
    }
}

impl EigenPair {
    /// Left eigenfunction, supported on x < 0.
    pub fn phi_minus(&self, x: f64, line: i8) -> f64 {
        if x < 0.0 {
            (self.mu * x).exp() * if line == 1 { 1.0 } else { self.w_plus }
        } else {
            0.0
        }
    }

    /// Right eigenfunction, supported on x > 0.
    pub fn phi_plus(&self, x: f64, line: i8) -> f64 {
        if x > 0.0 {
            (-self.mu * x).exp() * if line == 1 { 1.0 } else { self.w_minus }
        } else {
            0.0
        }
    }

    pub fn phi_minus_deriv(&self, x: f64, line: i8) -> f64 {
        self.mu * self.phi_minus(x, line)
    }

    pub fn phi_plus_deriv(&self, x: f64, line: i8) -> f64 {
        -self.mu * self.phi_plus(x, line)
    }
}

/// Determinant of the 2x2 interface map restricted to the kernel of
/// `lambda - G_eps`, spanned by `phi_minus`, `phi_plus`:
/// `det M = p q w_- + (1 - q' w_-)(p' - w_+)`.
///
/// With no killing this reduces to
/// `-2 lambda eps^2 - eps (p+q)(mu - lambda eps)`; as `eps -> 0` it tends
/// to `-gamma_kill`.
pub fn det_m(eps: f64, lambda: f64, params: &InterfaceParams) -> f64 {
    let e = kernel_eigenfunctions(eps, lambda);
    params.p * params.q * e.w_minus
        + (1.0 - params.q_prime * e.w_minus) * (params.p_prime - e.w_plus)
}

/// Exact resolvent of the transport generator `A`: solves
/// `lambda phi - A phi = psi` with the interface conditions built in.
///
/// `psi` is taken piecewise constant per cell; the exponential integrals
/// of the closed-form solution are then evaluated exactly, so the
/// returned `phi` satisfies the interface conditions by construction.
pub fn resolvent_a(
    psi: &TwoLineDensity,
    lambda: f64,
    params: &InterfaceParams,
) -> Result<TwoLineDensity> {
    if !(lambda > 0.0) {
        return Err(Error::NonPositiveLambda(lambda));
    }
    let grid = psi.grid;
    let n = grid.n_cells;
    let m = grid.interface_index();
    let dx = grid.dx();
    let full = (-lambda * dx).exp();
    let half = (-lambda * dx / 2.0).exp();
    let w_full = (1.0 - full) / lambda; // ∫ over one cell of e^{-l s} ds
    let w_half = (1.0 - half) / lambda;

    let mut phi = TwoLineDensity::zeros(grid);

    // x < 0, upper line: phi(x,1) = ∫_{-inf}^x e^{-l(x-y)} psi(y,1) dy
    let mut acc = 0.0; // value at the running left node
    for i in 0..m {
        phi.up[i] = acc * half + psi.up[i] * w_half;
        acc = acc * full + psi.up[i] * w_full;
    }
    let c1 = acc; // ∫_{-inf}^0 e^{l y} psi(y,1) dy

    // x > 0, lower line: phi(x,-1) = ∫_x^{inf} e^{-l(y-x)} psi(y,-1) dy
    let mut acc = 0.0; // value at the running right node
    for i in (m..n).rev() {
        phi.down[i] = acc * half + psi.down[i] * w_half;
        acc = acc * full + psi.down[i] * w_full;
    }
    let c4 = acc; // ∫_0^{inf} e^{-l y} psi(y,-1) dy

    // x > 0, upper line: (p C1 + q' C4) e^{-l x} + ∫_0^x e^{-l(x-y)} psi(y,1) dy
    let mut acc = params.p * c1 + params.q_prime * c4;
    for i in m..n {
        phi.up[i] = acc * half + psi.up[i] * w_half;
        acc = acc * full + psi.up[i] * w_full;
    }

    // x < 0, lower line: (p' C1 + q C4) e^{l x} + ∫_x^0 e^{-l(y-x)} psi(y,-1) dy
    let mut acc = params.p_prime * c1 + params.q * c4;
    for i in (0..m).rev() {
        phi.down[i] = acc * half + psi.down[i] * w_half;
        acc = acc * full + psi.down[i] * w_full;
    }

    Ok(phi)
}
