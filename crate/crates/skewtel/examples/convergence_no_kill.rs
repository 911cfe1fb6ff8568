//! Epsilon sweep toward the skew Brownian limit.
//!
//! Evolves a Gaussian datum (all mass on the upper line) under the scaled
//! two-line dynamics for a ladder of epsilon values and compares, in L1,
//! against the closed-form skew Brownian evolution of the projected datum.

use skewtel::harness::{
    run_convergence_no_kill, ExperimentConfig, GridConfig, InitialConfig, Mode, RawParams,
};

fn main() {
    let config = ExperimentConfig {
        mode: Mode::NoKillLimit,
        params: RawParams {
            p: 0.7,
            p_prime: 0.3,
            q: 0.3,
            q_prime: 0.7,
        },
        epsilons: vec![0.4, 0.2, 0.1, 0.05],
        t_macro: 1.0,
        grid: GridConfig {
            half_width: 8.0,
            n_cells: 1024,
        },
        initial: InitialConfig::default(),
        mc: None,
        table: None,
        output: None,
        report_runtime: false,
    };
    let exp = config.validated().expect("valid config");
    let report = run_convergence_no_kill(&exp, 1).expect("run");

    println!("{:>8} {:>14} {:>12} {:>14}", "epsilon", "l1_error", "mass", "edge_leakage");
    for row in &report.rows {
        println!(
            "{:>8} {:>14.6} {:>12.6} {:>14.2e}",
            row.epsilon, row.l1_error_pde, row.mass_solver, row.edge_leakage
        );
    }
    println!(
        "monotone decay: {}, final error: {:.4}",
        report.monotone_decay, report.final_error
    );
}
