//! The closed-form limiting kernels and their defining identities.
//!
//! Prints the skew Brownian transition density on both sides of the
//! interface, checks its normalization and the right-mass law, and shows
//! the killed-Brownian survival probability against its erf closed form.

use skewtel::kernels::{
    gamma_minus, gamma_plus, minimal_bm_kernel, survival_probability, SkewParams,
};
use skewtel::quad::integrate_to_tol;

fn main() {
    let sp = SkewParams::new(0.7, 0.3).expect("weights");
    let t = 1.0;

    println!("skew kernel, start x = 0.5 (theta = {:.3}):", sp.theta);
    for y in [-2.0, -1.0, -0.25, 0.25, 1.0, 2.0] {
        let v = gamma_plus(t, 0.5, y, &sp).unwrap();
        println!("  gamma+(1, 0.5, {y:>5}) = {v:.6}");
    }
    println!("skew kernel, start x = -0.5:");
    for y in [-2.0, -0.25, 0.25, 2.0] {
        let v = gamma_minus(t, -0.5, y, &sp).unwrap();
        println!("  gamma-(1, -0.5, {y:>5}) = {v:.6}");
    }

    let mass = integrate_to_tol(|y| gamma_plus(t, 0.5, y, &sp).unwrap(), -14.0, 14.0, 1e-12);
    println!("normalization: integral = {mass:.12}");

    // started just right of 0, the long-run right-side mass is p/(p+q)
    let right = integrate_to_tol(|y| gamma_plus(t, 1e-6, y, &sp).unwrap(), 0.0, 14.0, 1e-10);
    println!(
        "right-mass law: {right:.6} vs p/(p+q) = {:.6}",
        sp.p / (sp.p + sp.q)
    );

    println!("killed Brownian kernel from x = 0.5:");
    let surv = integrate_to_tol(|y| minimal_bm_kernel(t, 0.5, y).unwrap(), 0.0, 14.0, 1e-12);
    println!(
        "  kernel mass = {surv:.8}, erf closed form = {:.8}",
        survival_probability(t, 0.5)
    );
}
