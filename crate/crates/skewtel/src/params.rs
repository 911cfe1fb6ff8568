//! Interface probabilities and the diffusive scaling parameters.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when checking the sum constraints `p + p' <= 1`,
/// `q + q' <= 1`; absorbs decimal-literal rounding.
pub const PROB_TOL: f64 = 1e-12;

/// The six interface probabilities.
///
/// A particle reaching the interface from the left (upper line, moving
/// right) is transmitted with probability `p`, reflected with `p'`, killed
/// with `p0 = 1 - p - p'`. From the right (lower line, moving left) the
/// corresponding probabilities are `q`, `q'`, `q0 = 1 - q - q'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterfaceParams {
    pub p: f64,
    pub p_prime: f64,
    pub q: f64,
    pub q_prime: f64,
    /// Kill probability from the left, `1 - p - p'` (clamped to 0 near 0).
    pub p0: f64,
    /// Kill probability from the right, `1 - q - q'` (clamped to 0 near 0).
    pub q0: f64,
}

impl InterfaceParams {
    /// Validates the four raw probabilities and derives `p0`, `q0`.
    pub fn validate(p: f64, p_prime: f64, q: f64, q_prime: f64) -> Result<Self> {
        for (name, v) in [
            ("p", p),
            ("p'", p_prime),
            ("q", q),
            ("q'", q_prime),
        ] {
            if !(0.0..=1.0).contains(&v) || !v.is_finite() {
                return Err(Error::ProbabilityOutOfRange { name, value: v });
            }
        }
        if p + p_prime > 1.0 + PROB_TOL {
            return Err(Error::ProbabilitySum {
                constraint: "p+p'<=1",
                sum: p + p_prime,
            });
        }
        if q + q_prime > 1.0 + PROB_TOL {
            return Err(Error::ProbabilitySum {
                constraint: "q+q'<=1",
                sum: q + q_prime,
            });
        }
        let clamp = |x: f64| if x.abs() <= PROB_TOL { 0.0 } else { x.max(0.0) };
        let p0 = clamp(1.0 - p - p_prime);
        let q0 = clamp(1.0 - q - q_prime);
        Ok(InterfaceParams {
            p,
            p_prime,
            q,
            q_prime,
            p0,
            q0,
        })
    }

    /// Effective-killing constant `p*q0 + q*p0 + p0*q0`.
    ///
    /// Positive exactly when the minimal-Brownian limit applies.
    pub fn gamma_kill(&self) -> f64 {
        self.p * self.q0 + self.q * self.p0 + self.p0 * self.q0
    }

    /// True when no probability mass is lost at the interface.
    pub fn is_mass_conserving(&self) -> bool {
        self.p0 == 0.0 && self.q0 == 0.0
    }
}

/// Diffusive space-time scaling: micro time `t/eps^2`, micro space `x/eps`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ScaledModel {
    pub epsilon: f64,
    /// Poisson rate of direction flips in microscopic time (default 1).
    pub flip_intensity: f64,
    /// Macroscopic horizon.
    pub t_macro: f64,
}

impl ScaledModel {
    pub fn new(epsilon: f64, t_macro: f64) -> Result<Self> {
        Self::with_flip_intensity(epsilon, 1.0, t_macro)
    }

    pub fn with_flip_intensity(epsilon: f64, flip_intensity: f64, t_macro: f64) -> Result<Self> {
        if !(epsilon > 0.0) {
            return Err(Error::Config(format!("epsilon must be > 0, got {epsilon}")));
        }
        if !(flip_intensity > 0.0) {
            return Err(Error::Config(format!(
                "flip_intensity must be > 0, got {flip_intensity}"
            )));
        }
        if !(t_macro >= 0.0) {
            return Err(Error::Config(format!("t_macro must be >= 0, got {t_macro}")));
        }
        Ok(ScaledModel {
            epsilon,
            flip_intensity,
            t_macro,
        })
    }
}
