//! Numerical laboratory for a unit-speed motion on two copies of the real
//! line with Poisson direction flips and a transmit/reflect/kill interface
//! at x = 0, together with its diffusive limits.
//!
//! The crate has four layers:
//!
//! - [`params`] / [`density`]: interface probabilities, cell-averaged
//!   densities on the two-line state space, the line-averaging projection P
//!   and the exact flip step `exp(s(B - I))`.
//! - [`mc`]: exact event-driven Monte Carlo of the microscopic particle,
//!   with diffusive rescaling and deterministic parallel ensembles.
//! - [`pde`]: deterministic evolution under `G_eps = (1/eps) A +
//!   (1/eps^2)(B - I)` by Strang splitting (exact flip + upwind transport
//!   with the interface flux rule), plus the exact resolvent of `A` and
//!   closed-form kernel eigenfunction self-tests.
//! - [`kernels`] / [`cosine`]: closed-form limit objects — skew Brownian
//!   transition densities, the minimal (killed) Brownian kernel and
//!   resolvent, the cosine family built by the method of images, its dual,
//!   and the Weierstrass formula tying them together.
//!
//! [`harness`] orchestrates the two convergence experiments (no-kill limit
//! to skew Brownian motion, effective-killing limit to minimal Brownian
//! motion) and the kernel validation battery, with CSV/JSON reporting.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod cosine;
pub mod density;
pub mod error;
pub mod harness;
pub mod kernels;
pub mod mc;
pub mod params;
pub mod pde;
pub mod quad;

pub use density::{Grid, LineDensity, TwoLineDensity};
pub use error::Error;
pub use params::{InterfaceParams, ScaledModel};
