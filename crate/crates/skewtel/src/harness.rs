//! Experiment orchestration: JSON configuration, the two convergence
//! studies (mass-conserving skew limit and killed limit), the kernel
//! validation battery, Monte Carlo / solver cross-validation, kernel
//! tables, and CSV/JSON reporting.
//!
//! Reports are deterministic given (config, seed): numbers are written
//! with Rust's shortest round-trip float formatting and runtimes are
//! reported as 0 unless `report_runtime` is set (wall-clock timings are
//! inherently non-reproducible, so they go to stderr by default).

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cosine::{dual_cosine_apply, dual_cosine_eval, dual_resolvent, GridFunction};
use crate::density::{Grid, TwoLineDensity};
use crate::error::{Error, Result};
use crate::kernels::{
    gamma, gamma_minus, gamma_plus, minimal_density_evolve, minimal_surviving_mass,
    skew_density_evolve, SkewParams,
};
use crate::mc::{simulate_ensemble, InitialCondition};
use crate::params::{InterfaceParams, ScaledModel};
use crate::pde::{det_m, evolve_g_epsilon, kernel_eigenfunctions, SolverConfig};
use crate::quad::integrate_to_tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    NoKillLimit,
    KillLimit,
    KernelValidation,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawParams {
    pub p: f64,
    pub p_prime: f64,
    pub q: f64,
    pub q_prime: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub half_width: f64,
    pub n_cells: usize,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    pub n_particles: u64,
    #[serde(default)]
    pub seed: u64,
}

/// Initial datum: a normalized Gaussian placed on one line.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    pub center: f64,
    pub sigma: f64,
    /// +1 or -1.
    pub line: i8,
}

impl Default for InitialConfig {
    /// Mass starts a few diffusion lengths left of the interface: enough
    /// interaction by t = 1 to exercise it, little enough that the
    /// finite-epsilon interface layer does not dominate the error.
    fn default() -> Self {
        InitialConfig {
            center: -2.0,
            sigma: 0.5,
            line: 1,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableConfig {
    pub ts: Vec<f64>,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl Default for TableConfig {
    fn default() -> Self {
        TableConfig {
            ts: vec![0.25, 1.0, 4.0],
            xs: vec![-3.0, -1.0, -0.1, 0.1, 1.0, 3.0],
            ys: (0..41).map(|i| -4.0 + 0.2 * i as f64).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub params: RawParams,
    pub epsilons: Vec<f64>,
    pub t_macro: f64,
    pub grid: GridConfig,
    #[serde(default)]
    pub initial: InitialConfig,
    #[serde(default)]
    pub mc: Option<McConfig>,
    #[serde(default)]
    pub table: Option<TableConfig>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// When false (the default) `runtime_s` is written as 0 so output is
    /// byte-reproducible; measured timings go to stderr.
    #[serde(default)]
    pub report_runtime: bool,
}

/// Config with the invariants checked and derived objects constructed.
#[derive(Debug, Clone)]
pub struct ValidatedExperiment {
    pub config: ExperimentConfig,
    pub params: InterfaceParams,
    pub grid: Grid,
}

impl ExperimentConfig {
    pub fn validated(&self) -> Result<ValidatedExperiment> {
        let params = InterfaceParams::validate(
            self.params.p,
            self.params.p_prime,
            self.params.q,
            self.params.q_prime,
        )?;
        let grid = Grid::new(self.grid.half_width, self.grid.n_cells)?;
        if self.epsilons.is_empty() {
            return Err(Error::Config("epsilons must be non-empty".into()));
        }
        for w in self.epsilons.windows(2) {
            if !(w[1] < w[0]) {
                return Err(Error::Config(format!(
                    "epsilons must be strictly decreasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        if !(*self.epsilons.last().unwrap() > 0.0) {
            return Err(Error::Config("all epsilons must be > 0".into()));
        }
        if !(self.t_macro > 0.0) {
            return Err(Error::Config(format!(
                "t_macro must be > 0, got {}",
                self.t_macro
            )));
        }
        if self.initial.line != 1 && self.initial.line != -1 {
            return Err(Error::Config(format!(
                "initial.line must be +1 or -1, got {}",
                self.initial.line
            )));
        }
        if !(self.initial.sigma > 0.0) {
            return Err(Error::Config("initial.sigma must be > 0".into()));
        }
        match self.mode {
            Mode::NoKillLimit => {
                if !params.is_mass_conserving() {
                    return Err(Error::Config(format!(
                        "the mass-conserving skew limit needs p+p' = 1 and q+q' = 1 \
                         (no killing); got p0 = {}, q0 = {}",
                        params.p0, params.q0
                    )));
                }
                if !(params.p + params.q > 0.0) {
                    return Err(Error::Config(
                        "the skew limit needs p + q > 0; with p = q = 0 every particle \
                         is reflected and the two half-lines never communicate"
                            .into(),
                    ));
                }
            }
            Mode::KillLimit => {
                if params.gamma_kill() <= 0.0 {
                    return Err(Error::Config(format!(
                        "the killed-Brownian limit needs effective killing \
                         p*q0 + q*p0 + p0*q0 > 0, but it is 0 for these parameters \
                         (p0 = {}, q0 = {}). A one-sided kill probability is not \
                         enough on its own: if p0 = 0 then q0 and p must both be \
                         positive, so that mass arriving from the left can cross and \
                         then be killed from the right; otherwise the killed Brownian \
                         motion is not a good approximation of the process",
                        params.p0, params.q0
                    )));
                }
            }
            Mode::KernelValidation => {}
        }
        Ok(ValidatedExperiment {
            config: self.clone(),
            params,
            grid,
        })
    }
}

pub fn parse_config(path: &Path) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path)?;
    let config: ExperimentConfig = serde_json::from_str(&text)?;
    Ok(config)
}

/// One per-epsilon result row; field order matches the CSV schema.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConvergenceRow {
    pub epsilon: f64,
    pub t: f64,
    pub l1_error_pde: f64,
    pub l1_error_mc: f64,
    pub mass_solver: f64,
    pub mass_limit: f64,
    pub killed_fraction: f64,
    pub edge_leakage: f64,
    pub runtime_s: f64,
}

pub const CSV_HEADER: &str =
    "epsilon,t,l1_error_pde,l1_error_mc,mass_solver,mass_limit,killed_fraction,edge_leakage,runtime_s";

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub mode: Mode,
    pub rows: Vec<ConvergenceRow>,
    /// Whether l1_error_pde strictly decreases along the epsilon ladder.
    pub monotone_decay: bool,
    pub final_error: f64,
}

fn limit_density(
    d0: &TwoLineDensity,
    t: f64,
    params: &InterfaceParams,
    mode: Mode,
) -> Result<TwoLineDensity> {
    let rho0 = d0.to_line_density();
    let rho = match mode {
        Mode::NoKillLimit => {
            let sp = SkewParams::new(params.p, params.q)?;
            skew_density_evolve(&rho0, t, &sp)?
        }
        Mode::KillLimit => minimal_density_evolve(&rho0, t)?,
        Mode::KernelValidation => {
            return Err(Error::Config(
                "kernel validation has no limit density".into(),
            ))
        }
    };
    Ok(rho.split())
}

fn run_convergence(exp: &ValidatedExperiment, mode: Mode, seed: u64) -> Result<ConvergenceReport> {
    let cfg = &exp.config;
    let d0 = TwoLineDensity::gaussian_on_line(
        exp.grid,
        cfg.initial.center,
        cfg.initial.sigma,
        cfg.initial.line,
    );
    let mass0 = d0.total_mass();
    let limit = limit_density(&d0, cfg.t_macro, &exp.params, mode)?;
    let mass_limit = limit.total_mass();

    let rows: Result<Vec<ConvergenceRow>> = cfg
        .epsilons
        .par_iter()
        .enumerate()
        .map(|(idx, &eps)| {
            let started = Instant::now();
            let out = evolve_g_epsilon(
                &d0,
                eps,
                cfg.t_macro,
                &exp.params,
                &SolverConfig::default(),
            )?;
            let l1_error_pde = out.density.l1_distance(&limit)?;
            let l1_error_mc = match &cfg.mc {
                Some(mc) => {
                    let model = ScaledModel::new(eps, cfg.t_macro)?;
                    let counts = simulate_ensemble(
                        &InitialCondition::Density(d0.clone()),
                        exp.grid,
                        &model,
                        &exp.params,
                        mc.n_particles,
                        seed.wrapping_add(idx as u64),
                    )?;
                    counts.to_two_line_density(exp.grid).l1_distance(&limit)?
                }
                None => f64::NAN,
            };
            let runtime = started.elapsed().as_secs_f64();
            eprintln!("epsilon = {eps}: l1_error_pde = {l1_error_pde:.6} ({runtime:.2} s)");
            Ok(ConvergenceRow {
                epsilon: eps,
                t: cfg.t_macro,
                l1_error_pde,
                l1_error_mc,
                mass_solver: out.density.total_mass(),
                mass_limit,
                killed_fraction: out.killed_mass / mass0,
                edge_leakage: out.edge_outflow,
                runtime_s: if cfg.report_runtime { runtime } else { 0.0 },
            })
        })
        .collect();
    let rows = rows?;

    for row in &rows {
        if row.edge_leakage >= 1e-6 {
            eprintln!(
                "warning: edge leakage {} at epsilon = {}; enlarge the grid \
                 (L should exceed |x0| + 8 sqrt(t) at diffusive speeds)",
                row.edge_leakage, row.epsilon
            );
        }
    }
    let monotone_decay = rows
        .windows(2)
        .all(|w| w[1].l1_error_pde < w[0].l1_error_pde);
    let final_error = rows.last().map(|r| r.l1_error_pde).unwrap_or(f64::NAN);
    Ok(ConvergenceReport {
        mode,
        rows,
        monotone_decay,
        final_error,
    })
}

/// Convergence study toward the skew Brownian limit (no killing).
pub fn run_convergence_no_kill(exp: &ValidatedExperiment, seed: u64) -> Result<ConvergenceReport> {
    if exp.config.mode != Mode::NoKillLimit {
        return Err(Error::Config(
            "config mode must be no_kill_limit for this subcommand".into(),
        ));
    }
    run_convergence(exp, Mode::NoKillLimit, seed)
}

/// Convergence study toward the minimal (killed) Brownian limit.
pub fn run_convergence_kill(exp: &ValidatedExperiment, seed: u64) -> Result<ConvergenceReport> {
    if exp.config.mode != Mode::KillLimit {
        return Err(Error::Config(
            "config mode must be kill_limit for this subcommand".into(),
        ));
    }
    run_convergence(exp, Mode::KillLimit, seed)
}

/// Monte Carlo / solver cross-validation: at each epsilon, simulates an
/// ensemble and reports its L1 distance to the deterministic solver in
/// the `l1_error_mc` column (the limit-related columns are NaN).
pub fn run_simulate(exp: &ValidatedExperiment, seed: u64) -> Result<ConvergenceReport> {
    let cfg = &exp.config;
    let mc = cfg.mc.as_ref().ok_or_else(|| {
        Error::Config("simulate requires the `mc` section (n_particles, seed)".into())
    })?;
    let d0 = TwoLineDensity::gaussian_on_line(
        exp.grid,
        cfg.initial.center,
        cfg.initial.sigma,
        cfg.initial.line,
    );
    let rows: Result<Vec<ConvergenceRow>> = cfg
        .epsilons
        .par_iter()
        .enumerate()
        .map(|(idx, &eps)| {
            let started = Instant::now();
            let out = evolve_g_epsilon(
                &d0,
                eps,
                cfg.t_macro,
                &exp.params,
                &SolverConfig::default(),
            )?;
            let model = ScaledModel::new(eps, cfg.t_macro)?;
            let counts = simulate_ensemble(
                &InitialCondition::Density(d0.clone()),
                exp.grid,
                &model,
                &exp.params,
                mc.n_particles,
                seed.wrapping_add(idx as u64),
            )?;
            let empirical = counts.to_two_line_density(exp.grid);
            let l1_error_mc = empirical.l1_distance(&out.density)?;
            let runtime = started.elapsed().as_secs_f64();
            Ok(ConvergenceRow {
                epsilon: eps,
                t: cfg.t_macro,
                l1_error_pde: f64::NAN,
                l1_error_mc,
                mass_solver: out.density.total_mass(),
                mass_limit: f64::NAN,
                killed_fraction: counts.killed_fraction(),
                edge_leakage: out.edge_outflow,
                runtime_s: if cfg.report_runtime { runtime } else { 0.0 },
            })
        })
        .collect();
    let rows = rows?;
    let final_error = rows.last().map(|r| r.l1_error_mc).unwrap_or(f64::NAN);
    Ok(ConvergenceReport {
        mode: cfg.mode,
        rows,
        monotone_decay: true,
        final_error,
    })
}

/// Estimated L1 sampling error of an ensemble histogram: sum over cells
/// of the standard error of the binned proportion, times dx / dx = mass.
pub fn mc_l1_standard_error(counts: &crate::mc::EnsembleCounts) -> f64 {
    let n = counts.n_particles as f64;
    counts
        .counts_up
        .iter()
        .chain(counts.counts_down.iter())
        .map(|&c| {
            let p = c as f64 / n;
            (p * (1.0 - p) / n).sqrt()
        })
        .sum()
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationCheck {
    pub name: &'static str,
    pub error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<ValidationCheck>,
    pub all_pass: bool,
}

fn check(name: &'static str, error: f64, tolerance: f64) -> ValidationCheck {
    ValidationCheck {
        name,
        error,
        tolerance,
        pass: error.is_finite() && error <= tolerance,
    }
}

/// Integration window capturing the heat kernel mass around `x` to far
/// below the battery tolerances.
fn kernel_window(x: f64, t: f64) -> f64 {
    x.abs() + 12.0 * t.sqrt().max(1.0)
}

fn check_gamma_normalization() -> ValidationCheck {
    let mut worst: f64 = 0.0;
    for (p, q) in [(0.5, 0.5), (0.7, 0.3), (1.0, 0.0), (0.3, 0.7)] {
        let sp = SkewParams::new(p, q).unwrap();
        for t in [0.25, 1.0, 4.0] {
            for x in [0.1, 1.0, 3.0] {
                let w = kernel_window(x, t);
                let plus = integrate_to_tol(
                    |y| gamma_plus(t, x, y, &sp).unwrap(),
                    -w,
                    w,
                    1e-12,
                );
                let minus = integrate_to_tol(
                    |y| gamma_minus(t, -x, y, &sp).unwrap(),
                    -w,
                    w,
                    1e-12,
                );
                worst = worst.max((plus - 1.0).abs()).max((minus - 1.0).abs());
            }
        }
    }
    check("gamma-normalization", worst, 1e-8)
}

fn check_chapman_kolmogorov(sp: &SkewParams) -> ValidationCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let t = rng.gen_range(0.2..1.5);
        let s = rng.gen_range(0.2..1.5);
        let sign_x = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let sign_z = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let x: f64 = sign_x * rng.gen_range(0.2..2.0);
        let z: f64 = sign_z * rng.gen_range(0.2..2.0);
        let w = kernel_window(x.abs().max(z.abs()), t + s);
        // split at 0: gamma(t, x, .) has a kink there
        let composed = integrate_to_tol(
            |y| gamma(t, x, y, sp).unwrap() * gamma(s, y, z, sp).unwrap(),
            -w,
            -1e-12,
            1e-10,
        ) + integrate_to_tol(
            |y| gamma(t, x, y, sp).unwrap() * gamma(s, y, z, sp).unwrap(),
            1e-12,
            w,
            1e-10,
        );
        let direct = gamma(t + s, x, z, sp).unwrap();
        worst = worst.max((composed - direct).abs());
    }
    check("chapman-kolmogorov", worst, 1e-6)
}

fn check_right_mass_law() -> ValidationCheck {
    let mut worst: f64 = 0.0;
    for (p, q) in [(0.7, 0.3), (0.5, 0.5), (0.3, 0.7)] {
        let sp = SkewParams::new(p, q).unwrap();
        let x = 1e-6;
        let v = integrate_to_tol(|y| gamma_plus(1.0, x, y, &sp).unwrap(), 0.0, 14.0, 1e-10);
        worst = worst.max((v - p / (p + q)).abs());
    }
    check("skew-right-mass", worst, 1e-5)
}

fn check_eigen_residuals() -> ValidationCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let eps = rng.gen_range(0.01..1.0);
        let lambda = rng.gen_range(0.1..5.0);
        let x = rng.gen_range(0.05..3.0);
        let e = kernel_eigenfunctions(eps, lambda);
        let a = lambda * eps * eps + 1.0;
        let r1 = a * e.phi_minus(-x, 1) + eps * e.phi_minus_deriv(-x, 1) - e.phi_minus(-x, -1);
        let r2 = a * e.phi_minus(-x, -1) - eps * e.phi_minus_deriv(-x, -1) - e.phi_minus(-x, 1);
        let r3 = a * e.phi_plus(x, 1) + eps * e.phi_plus_deriv(x, 1) - e.phi_plus(x, -1);
        let r4 = a * e.phi_plus(x, -1) - eps * e.phi_plus_deriv(x, -1) - e.phi_plus(x, 1);
        worst = worst
            .max(r1.abs())
            .max(r2.abs())
            .max(r3.abs())
            .max(r4.abs());
    }
    check("eigen-residuals", worst, 1e-12)
}

fn check_w_product() -> ValidationCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let eps = rng.gen_range(1e-4..2.0);
        let lambda = rng.gen_range(1e-3..10.0);
        let e = kernel_eigenfunctions(eps, lambda);
        worst = worst.max((e.w_plus * e.w_minus - 1.0).abs());
    }
    check("w-product", worst, 1e-12)
}

fn check_det_limits(params: &InterfaceParams) -> ValidationCheck {
    let lambda = 1.0;
    let (e1, e2) = (1e-2, 1e-3);
    let richardson = |f: &dyn Fn(f64) -> f64| (f(e2) * e1 - f(e1) * e2) / (e1 - e2);
    let mut worst: f64 = 0.0;
    // no-kill family: det/eps -> -sqrt(2 lambda) (p + q)
    let nk = InterfaceParams::validate(params.p, 1.0 - params.p, params.q, 1.0 - params.q)
        .unwrap();
    let extrap = richardson(&|eps| det_m(eps, lambda, &nk) / eps);
    let expect = -(2.0 * lambda).sqrt() * (nk.p + nk.q);
    worst = worst.max(((extrap - expect) / expect).abs());
    // killing family: det -> -gamma
    let kill = InterfaceParams::validate(0.4, 0.3, 0.4, 0.3).unwrap();
    let extrap = richardson(&|eps| det_m(eps, lambda, &kill));
    worst = worst.max(((extrap + kill.gamma_kill()) / kill.gamma_kill()).abs());
    check("det-limits", worst, 1e-4)
}

fn check_cosine_functional_equation(sp: &SkewParams) -> ValidationCheck {
    let grid = Grid::new(4.0, 256).unwrap();
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
    let mut worst: f64 = 0.0;
    for (kt, ku) in [(40, 17), (25, 25), (10, 3), (60, 31)] {
        let (t, u) = (kt as f64 * dx, ku as f64 * dx);
        let lhs = dual_cosine_apply(&dual_cosine_apply(&f, u, sp).unwrap(), t, sp).unwrap();
        let a = dual_cosine_apply(&f, t + u, sp).unwrap();
        let b = dual_cosine_apply(&f, t - u, sp).unwrap();
        for j in 0..=grid.n_cells {
            worst = worst.max((2.0 * lhs.values[j] - a.values[j] - b.values[j]).abs());
        }
    }
    check("cosine-functional-equation", worst, 1e-10)
}

fn check_cosine_norm_bound(sp: &SkewParams) -> ValidationCheck {
    let grid = Grid::new(2.0, 64).unwrap();
    let m_bound = 2.0 * sp.p.max(sp.q) / (sp.p + sp.q);
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut worst_excess: f64 = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let f = GridFunction {
            grid,
            values: (0..=64).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            lim_neg: rng.gen_range(-1.0..1.0),
            lim_pos: rng.gen_range(-1.0..1.0),
        };
        let t = rng.gen_range(1..40) as f64 * grid.dx();
        let out = dual_cosine_apply(&f, t, sp).unwrap();
        worst_excess = worst_excess.max(out.sup_norm() / f.sup_norm() - m_bound);
    }
    check("cosine-norm-bound", worst_excess.max(0.0), 1e-9 * m_bound)
}

fn check_laplace_identity(sp: &SkewParams) -> ValidationCheck {
    // time-Laplace transform of the cosine family equals lambda times the
    // resolvent of the second-derivative generator in the dual domain
    let gfun = |x: f64| (-(x - 0.5) * (x - 0.5)).exp() + 0.1;
    let grid = Grid::new(16.0, 3200).unwrap();
    let g = GridFunction::from_fn(grid, gfun, 0.1, 0.1);
    let mut worst: f64 = 0.0;
    for lambda in [0.5, 1.0, 2.0] {
        let (f, _) = dual_resolvent(&g, lambda, sp).unwrap();
        for x in [-1.5, -0.5, 0.0, 0.5, 1.5] {
            let upper = 20.0 / lambda;
            let transform = integrate_to_tol(
                |t| (-lambda * t).exp() * dual_cosine_eval(&gfun, t, x, sp),
                0.0,
                upper,
                1e-10,
            );
            let j = ((x + grid.half_width) / grid.dx()).round() as usize;
            let expect = lambda * f.values[j];
            worst = worst.max(((transform - expect) / expect).abs());
        }
    }
    check("laplace-identity", worst, 1e-4)
}

fn check_dual_resolvent_constant(sp: &SkewParams) -> ValidationCheck {
    let grid = Grid::new(10.0, 1000).unwrap();
    let g = GridFunction::from_fn(grid, |_| 1.0, 1.0, 1.0);
    let mut worst: f64 = 0.0;
    for lambda in [0.5, 1.0, 2.0] {
        let (f, _) = dual_resolvent(&g, lambda, sp).unwrap();
        let expect = 1.0 / (lambda * lambda);
        for v in &f.values {
            worst = worst.max((v - expect).abs());
        }
    }
    check("dual-resolvent-constant", worst, 1e-10)
}

fn dual_resolvent_orders(sp: &SkewParams) -> (ValidationCheck, ValidationCheck) {
    let lambda = 1.0;
    let gfun = |x: f64| (-(x - 0.5) * (x - 0.5)).exp() + 0.1;
    let mut ode = Vec::new();
    let mut boundary = Vec::new();
    // L = 12 with these cell counts gives dx = 1e-2, 5e-3, 2.5e-3
    for n in [2400usize, 4800, 9600] {
        let grid = Grid::new(12.0, n).unwrap();
        let g = GridFunction::from_fn(grid, gfun, 0.1, 0.1);
        let (f, _) = dual_resolvent(&g, lambda, sp).unwrap();
        let dx = grid.dx();
        let m = n / 2;
        let mut worst: f64 = 0.0;
        for j in 2..n - 1 {
            if j == m || j == m - 1 || j == m + 1 {
                continue;
            }
            let fpp = (f.values[j - 1] - 2.0 * f.values[j] + f.values[j + 1]) / (dx * dx);
            worst = worst.max((lambda * lambda * f.values[j] - fpp - g.values[j]).abs());
        }
        ode.push(worst);
        let (dl, dr) = f.one_sided_derivs_at_zero();
        boundary.push((sp.p * dr - sp.q * dl).abs());
    }
    // refinement ratios: 0.25 means clean second order, 0.5 first order
    let ode_ratio = (ode[1] / ode[0]).max(ode[2] / ode[1]);
    let boundary_ratio = (boundary[1] / boundary[0]).max(boundary[2] / boundary[1]);
    (
        check("dual-resolvent-ode-order", ode_ratio, 0.35),
        check("dual-resolvent-boundary-law", boundary_ratio, 0.75),
    )
}

fn check_transport_ledger(params: &InterfaceParams) -> (ValidationCheck, ValidationCheck) {
    let grid = Grid::new(6.0, 512).unwrap();
    let d0 = TwoLineDensity::gaussian_on_line(grid, -1.0, 0.5, 1);
    let out = evolve_g_epsilon(&d0, 0.2, 0.5, params, &SolverConfig::default()).unwrap();
    let imbalance = (out.density.total_mass() + out.edge_outflow + out.killed_mass
        - d0.total_mass())
    .abs();
    (
        check("transport-mass-ledger", imbalance, 1e-10),
        check("transport-positivity", (-out.density.min_value()).max(0.0), 0.0),
    )
}

/// Runs the whole closed-form identity battery; (p, q) dependent checks
/// use the configured parameters.
pub fn run_kernel_validation(exp: &ValidatedExperiment) -> Result<ValidationReport> {
    let sp = SkewParams::new(exp.params.p, exp.params.q)?;
    let (ode, boundary) = dual_resolvent_orders(&sp);
    let (ledger, positivity) = check_transport_ledger(&exp.params);
    let checks = vec![
        check_gamma_normalization(),
        check_chapman_kolmogorov(&sp),
        check_right_mass_law(),
        check_eigen_residuals(),
        check_w_product(),
        check_det_limits(&exp.params),
        check_cosine_functional_equation(&sp),
        check_cosine_norm_bound(&sp),
        check_laplace_identity(&sp),
        check_dual_resolvent_constant(&sp),
        ode,
        boundary,
        ledger,
        positivity,
    ];
    let all_pass = checks.iter().all(|c| c.pass);
    Ok(ValidationReport { checks, all_pass })
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

/// Writes `convergence.csv` (fixed schema) and `summary.json`.
pub fn emit_convergence_report(report: &ConvergenceReport, out_dir: &Path) -> Result<()> {
    ensure_dir(out_dir)?;
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for r in &report.rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.epsilon,
            r.t,
            r.l1_error_pde,
            r.l1_error_mc,
            r.mass_solver,
            r.mass_limit,
            r.killed_fraction,
            r.edge_leakage,
            r.runtime_s
        ));
    }
    fs::write(out_dir.join("convergence.csv"), csv)?;
    let mut file = fs::File::create(out_dir.join("summary.json"))?;
    serde_json::to_writer_pretty(&mut file, report)?;
    file.write_all(b"\n")?;
    Ok(())
}

/// Writes `validation.csv` and `summary.json` for the identity battery.
pub fn emit_validation_report(report: &ValidationReport, out_dir: &Path) -> Result<()> {
    ensure_dir(out_dir)?;
    let mut csv = String::from("check,error,tolerance,pass\n");
    for c in &report.checks {
        csv.push_str(&format!("{},{},{},{}\n", c.name, c.error, c.tolerance, c.pass));
    }
    fs::write(out_dir.join("validation.csv"), csv)?;
    let mut file = fs::File::create(out_dir.join("summary.json"))?;
    serde_json::to_writer_pretty(&mut file, report)?;
    file.write_all(b"\n")?;
    Ok(())
}

/// Writes `kernel_table.csv` with the limiting transition densities
/// sampled on the configured (t, x, y) lattice.
pub fn emit_kernel_table(exp: &ValidatedExperiment, out_dir: &Path) -> Result<()> {
    ensure_dir(out_dir)?;
    let sp = SkewParams::new(exp.params.p, exp.params.q)?;
    let table = exp.config.table.clone().unwrap_or_default();
    let mut csv = String::from("t,x,y,gamma_value,side\n");
    for &t in &table.ts {
        for &x in &table.xs {
            if x == 0.0 {
                continue;
            }
            let side = if x > 0.0 { "plus" } else { "minus" };
            for &y in &table.ys {
                let v = gamma(t, x, y, &sp)?;
                csv.push_str(&format!("{t},{x},{y},{v},{side}\n"));
            }
        }
    }
    fs::write(out_dir.join("kernel_table.csv"), csv)?;
    Ok(())
}

/// Analytic surviving mass of the configured initial datum under the
/// killed limit (for the mass cross-check in kill mode).
pub fn analytic_surviving_mass(exp: &ValidatedExperiment) -> f64 {
    let d0 = TwoLineDensity::gaussian_on_line(
        exp.grid,
        exp.config.initial.center,
        exp.config.initial.sigma,
        exp.config.initial.line,
    );
    minimal_surviving_mass(&d0.to_line_density(), exp.config.t_macro)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_config() -> ExperimentConfig {
        ExperimentConfig {
            mode: Mode::NoKillLimit,
            params: RawParams {
                p: 0.7,
                p_prime: 0.3,
                q: 0.3,
                q_prime: 0.7,
            },
            epsilons: vec![0.4, 0.2],
            t_macro: 1.0,
            grid: GridConfig {
                half_width: 8.0,
                n_cells: 512,
            },
            initial: InitialConfig::default(),
            mc: None,
            table: None,
            output: None,
            report_runtime: false,
        }
    }

    #[test]
    fn config_roundtrips_through_json() {
        let cfg = base_config();
        let text = serde_json::to_string(&cfg).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        let again = serde_json::to_string(&back).unwrap();
        assert_eq!(text, again);
        back.validated().unwrap();
    }

    #[test]
    fn unknown_key_is_rejected_with_suggestion() {
        let mut v: serde_json::Value =
            serde_json::to_value(base_config()).unwrap();
        let obj = v.as_object_mut().unwrap();
        obj.remove("epsilons");
        obj.insert("epsilon".into(), serde_json::json!([0.4, 0.2]));
        let err = serde_json::from_value::<ExperimentConfig>(v).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("unknown field `epsilon`"), "{msg}");
        assert!(msg.contains("epsilons"), "{msg}");
    }

    #[test]
    fn epsilon_ladder_must_decrease() {
        let mut cfg = base_config();
        cfg.epsilons = vec![0.2, 0.4];
        assert!(cfg.validated().is_err());
        cfg.epsilons = vec![];
        assert!(cfg.validated().is_err());
        cfg.epsilons = vec![0.4, 0.2, 0.1];
        cfg.validated().unwrap();
    }

    #[test]
    fn no_kill_mode_rejects_killing_params() {
        let mut cfg = base_config();
        cfg.params.p_prime = 0.1; // p0 = 0.2
        let err = cfg.validated().unwrap_err();
        assert!(err.to_string().contains("p0"));
    }

    #[test]
    fn kill_mode_hypothesis_gate() {
        let mut cfg = base_config();
        cfg.mode = Mode::KillLimit;
        // gamma = 0 with p0 = q0 = 0
        assert!(cfg.validated().is_err());
        // one-sided killing with transmission from the other side: accepted
        cfg.params = RawParams {
            p: 0.5,
            p_prime: 0.5,
            q: 0.3,
            q_prime: 0.3,
        };
        cfg.validated().unwrap();
        // p0 = p = 0 with q0 > 0: no effective killing, rejected
        cfg.params = RawParams {
            p: 0.0,
            p_prime: 1.0,
            q: 0.3,
            q_prime: 0.3,
        };
        let err = cfg.validated().unwrap_err();
        assert!(err.to_string().contains("not a good approximation"));
    }

    #[test]
    fn small_no_kill_run_decays_toward_limit() {
        let cfg = base_config();
        let exp = cfg.validated().unwrap();
        let report = run_convergence_no_kill(&exp, 1).unwrap();
        assert_eq!(report.rows.len(), 2);
        assert!(report.monotone_decay);
        assert!(report.rows.iter().all(|r| r.killed_fraction == 0.0));
        assert!(report.rows.iter().all(|r| r.edge_leakage < 1e-6));
        // deterministic rerun
        let again = run_convergence_no_kill(&exp, 1).unwrap();
        assert_eq!(report.rows[0].l1_error_pde, again.rows[0].l1_error_pde);
    }

    #[test]
    fn small_kill_run_reports_masses() {
        let mut cfg = base_config();
        cfg.mode = Mode::KillLimit;
        cfg.params = RawParams {
            p: 0.4,
            p_prime: 0.3,
            q: 0.4,
            q_prime: 0.3,
        };
        let exp = cfg.validated().unwrap();
        let report = run_convergence_kill(&exp, 1).unwrap();
        assert!(report.monotone_decay);
        let analytic = analytic_surviving_mass(&exp);
        // surviving mass approaches the analytic limit value along the ladder
        let gap: Vec<f64> = report
            .rows
            .iter()
            .map(|r| (r.mass_solver - analytic).abs())
            .collect();
        assert!(gap[1] < gap[0], "mass gaps {gap:?}");
        assert!(gap[1] < 0.15, "mass gaps {gap:?}");
        let last = report.rows.last().unwrap();
        assert!(last.killed_fraction > 0.0);
        // the limit itself carries the analytic surviving mass
        assert!((last.mass_limit - analytic).abs() < 1e-4);
    }

    #[test]
    fn csv_header_is_the_contract() {
        assert_eq!(
            CSV_HEADER,
            "epsilon,t,l1_error_pde,l1_error_mc,mass_solver,mass_limit,killed_fraction,edge_leakage,runtime_s"
        );
    }

    #[test]
    fn emitted_files_are_byte_stable() {
        let cfg = base_config();
        let exp = cfg.validated().unwrap();
        let report = run_convergence_no_kill(&exp, 1).unwrap();
        let dir1 = tempfile::tempdir().unwrap();
        let dir2 = tempfile::tempdir().unwrap();
        emit_convergence_report(&report, dir1.path()).unwrap();
        let report2 = run_convergence_no_kill(&exp, 1).unwrap();
        emit_convergence_report(&report2, dir2.path()).unwrap();
        let a = fs::read(dir1.path().join("convergence.csv")).unwrap();
        let b = fs::read(dir2.path().join("convergence.csv")).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with(CSV_HEADER));
        // runtime column is 0 by default
        for line in text.lines().skip(1) {
            assert!(line.ends_with(",0"), "{line}");
        }
    }

    #[test]
    fn kernel_table_has_fixed_schema() {
        let mut cfg = base_config();
        cfg.table = Some(TableConfig {
            ts: vec![1.0],
            xs: vec![-1.0, 1.0],
            ys: vec![-0.5, 0.5],
        });
        let exp = cfg.validated().unwrap();
        let dir = tempfile::tempdir().unwrap();
        emit_kernel_table(&exp, dir.path()).unwrap();
        let text = fs::read_to_string(dir.path().join("kernel_table.csv")).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "t,x,y,gamma_value,side");
        assert_eq!(lines.count(), 4);
        assert!(text.contains(",minus\n"));
        assert!(text.contains(",plus\n"));
    }
}
