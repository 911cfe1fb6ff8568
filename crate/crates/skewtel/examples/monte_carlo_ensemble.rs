//! Event-driven Monte Carlo cross-validated against the deterministic
//! solver.
//!
//! Simulates an ensemble of telegraph particles with the
//! transmit/reflect/kill interface, bins the surviving positions, and
//! compares the empirical density to the finite-volume evolution of the
//! same initial datum. The run is reproducible: results depend on the
//! seed but not on the worker thread count.

use skewtel::density::{Grid, TwoLineDensity};
use skewtel::harness::mc_l1_standard_error;
use skewtel::mc::{simulate_ensemble, InitialCondition};
use skewtel::params::{InterfaceParams, ScaledModel};
use skewtel::pde::{evolve_g_epsilon, SolverConfig};

fn main() {
    let params = InterfaceParams::validate(0.4, 0.3, 0.4, 0.3).expect("params");
    let grid = Grid::new(8.0, 512).expect("grid");
    let d0 = TwoLineDensity::gaussian_on_line(grid, -1.0, 0.5, 1);
    let eps = 0.1;
    let t = 1.0;
    let n_particles = 100_000;

    let model = ScaledModel::new(eps, t).expect("model");
    let solver = evolve_g_epsilon(&d0, eps, t, &params, &SolverConfig::default()).expect("pde");
    let counts = simulate_ensemble(
        &InitialCondition::Density(d0),
        grid,
        &model,
        &params,
        n_particles,
        42,
    )
    .expect("ensemble");

    let empirical = counts.to_two_line_density(grid);
    let distance = empirical.l1_distance(&solver.density).expect("same grid");
    let se = mc_l1_standard_error(&counts);

    println!("particles:            {n_particles}");
    println!("killed (MC):          {:.4}", counts.killed_fraction());
    println!(
        "killed (solver):      {:.4}",
        1.0 - solver.density.total_mass() - solver.edge_outflow
    );
    println!("L1(MC, solver):       {distance:.4}");
    println!("estimated L1 noise:   {se:.4}");
    println!("within 3*SE + 0.02:   {}", distance <= 3.0 * se + 0.02);
}
