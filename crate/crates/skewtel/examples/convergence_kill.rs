//! Epsilon sweep toward the minimal (killed) Brownian limit.
//!
//! With kill probabilities p0 = q0 = 0.3 at the interface, the scaled
//! dynamics loses mass; the limit is Brownian motion killed at 0, whose
//! surviving mass has the closed form `integral rho0(x) erf(|x|/sqrt(2t))`.

use skewtel::harness::{
    analytic_surviving_mass, run_convergence_kill, ExperimentConfig, GridConfig, InitialConfig,
    Mode, RawParams,
};

fn main() {
    let config = ExperimentConfig {
        mode: Mode::KillLimit,
        params: RawParams {
            p: 0.4,
            p_prime: 0.3,
            q: 0.4,
            q_prime: 0.3,
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
    let report = run_convergence_kill(&exp, 1).expect("run");
    let analytic = analytic_surviving_mass(&exp);

    println!(
        "{:>8} {:>14} {:>12} {:>14}",
        "epsilon", "l1_error", "mass", "killed_frac"
    );
    for row in &report.rows {
        println!(
            "{:>8} {:>14.6} {:>12.6} {:>14.6}",
            row.epsilon, row.l1_error_pde, row.mass_solver, row.killed_fraction
        );
    }
    println!(
        "analytic limit surviving mass: {:.6} (solver at smallest eps: {:.6})",
        analytic,
        report.rows.last().unwrap().mass_solver
    );
}
