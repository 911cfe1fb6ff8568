//! Command-line front end: parses a JSON experiment config, runs the
//! requested study, writes CSV/JSON artifacts.
//!
//! Exit codes: 0 all checks pass, 1 a validation/acceptance check failed,
//! 2 configuration error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use skewtel::harness::{
    emit_convergence_report, emit_kernel_table, emit_validation_report, parse_config,
    run_convergence_kill, run_convergence_no_kill, run_kernel_validation, run_simulate,
};

#[derive(Parser)]
#[command(name = "skewtel", about = "Two-line telegraph process laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON experiment configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (overrides the config's `output`; default ".").
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Monte Carlo base seed (overrides the config's `mc.seed`).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker thread count (default: all cores). Results do not depend
    /// on this value.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Convergence study toward the skew Brownian limit (no killing).
    ConvergeNokill,
    /// Convergence study toward the minimal (killed) Brownian limit.
    ConvergeKill,
    /// Closed-form identity battery for the kernels and operators.
    ValidateKernels,
    /// Monte Carlo ensemble cross-validated against the solver.
    Simulate,
    /// Export the limiting transition densities on a (t, x, y) lattice.
    KernelTable,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(2);
        }
    }

    let Some(config_path) = cli.config.as_deref() else {
        eprintln!("error: --config <file> is required");
        return ExitCode::from(2);
    };
    let config = match parse_config(config_path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    let exp = match config.validated() {
        Ok(v) => v,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    let out_dir = cli
        .out
        .or_else(|| config.output.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    let seed = cli
        .seed
        .or(config.mc.as_ref().map(|m| m.seed))
        .unwrap_or(0);

    let outcome = match cli.command {
        Command::ConvergeNokill => run_convergence_no_kill(&exp, seed).and_then(|report| {
            emit_convergence_report(&report, &out_dir)?;
            println!(
                "no-kill convergence: monotone = {}, final l1 error = {}",
                report.monotone_decay, report.final_error
            );
            Ok(report.monotone_decay)
        }),
        Command::ConvergeKill => run_convergence_kill(&exp, seed).and_then(|report| {
            emit_convergence_report(&report, &out_dir)?;
            println!(
                "kill convergence: monotone = {}, final l1 error = {}",
                report.monotone_decay, report.final_error
            );
            Ok(report.monotone_decay)
        }),
        Command::ValidateKernels => run_kernel_validation(&exp).and_then(|report| {
            emit_validation_report(&report, &out_dir)?;
            for c in &report.checks {
                println!(
                    "{}: {} (error {} <= tol {})",
                    c.name,
                    if c.pass { "PASS" } else { "FAIL" },
                    c.error,
                    c.tolerance
                );
            }
            Ok(report.all_pass)
        }),
        Command::Simulate => run_simulate(&exp, seed).and_then(|report| {
            emit_convergence_report(&report, &out_dir)?;
            println!("simulate: final mc/solver l1 distance = {}", report.final_error);
            Ok(true)
        }),
        Command::KernelTable => emit_kernel_table(&exp, &out_dir).map(|()| true),
    };

    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
