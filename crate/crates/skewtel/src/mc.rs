//! Event-driven Monte Carlo for the two-line telegraph particle with the
//! transmit/reflect/kill interface, plus deterministic ensemble histograms.
//!
//! Particles are simulated in microscopic coordinates (speed 1, flip rate
//! `flip_intensity`); positions are reported after the diffusive rescaling
//! `x_macro = eps * x_micro`, `t_micro = t_macro / eps^2`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::density::{Grid, LineDensity, TwoLineDensity};
use crate::error::{Error, Result};
use crate::params::{InterfaceParams, ScaledModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Line {
    Up,
    Down,
}

impl Line {
    pub fn speed(self) -> f64 {
        match self {
            Line::Up => 1.0,
            Line::Down => -1.0,
        }
    }

    pub fn flipped(self) -> Line {
        match self {
            Line::Up => Line::Down,
            Line::Down => Line::Up,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Line::Up => 1,
            Line::Down => -1,
        }
    }
}

/// Which side of the interface the particle arrives from; determined by
/// the line it travels on (the upper line can only reach 0 from the left).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApproachSide {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterfaceOutcome {
    Transmit,
    Reflect,
    Kill,
}

/// Microscopic particle state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleState {
    pub x: f64,
    pub line: Line,
    pub alive: bool,
}

/// Resolves one interface arrival with a single uniform draw `u`:
/// transmit below the transmit probability, reflect in the next band,
/// kill in the remainder.
pub fn interface_interaction(
    side: ApproachSide,
    u: f64,
    params: &InterfaceParams,
) -> InterfaceOutcome {
    let (transmit, reflect) = match side {
        ApproachSide::Left => (params.p, params.p_prime),
        ApproachSide::Right => (params.q, params.q_prime),
    };
    if u < transmit {
        InterfaceOutcome::Transmit
    } else if u < transmit + reflect {
        InterfaceOutcome::Reflect
    } else {
        InterfaceOutcome::Kill
    }
}

fn apply_interface(state: &mut ParticleState, outcome: InterfaceOutcome) {
    state.x = 0.0;
    match outcome {
        // keeps its line, so it departs into the other half-line
        InterfaceOutcome::Transmit => {}
        // flips its line, so it departs back into the half-line it came from
        InterfaceOutcome::Reflect => state.line = state.line.flipped(),
        InterfaceOutcome::Kill => state.alive = false,
    }
}

/// Distance to the interface when heading toward it, else infinity.
/// At x = 0 the particle always departs away from 0, so it never
/// re-triggers the interface without an intervening flip.
fn interface_distance(state: &ParticleState) -> f64 {
    match state.line {
        Line::Up if state.x < 0.0 => -state.x,
        Line::Down if state.x > 0.0 => state.x,
        _ => f64::INFINITY,
    }
}

/// Advances the particle through exactly one event (direction flip or
/// interface arrival) using the supplied draws: `e` is the exponential
/// waiting time to the next flip, `u` the interface uniform (used only if
/// the interface is reached first). Returns the elapsed microscopic time.
pub fn step_to_event_with(
    state: &mut ParticleState,
    e: f64,
    u: f64,
    params: &InterfaceParams,
) -> f64 {
    debug_assert!(state.alive);
    let h = interface_distance(state);
    if e < h {
        state.x += state.line.speed() * e;
        state.line = state.line.flipped();
        e
    } else {
        let side = match state.line {
            Line::Up => ApproachSide::Left,
            Line::Down => ApproachSide::Right,
        };
        apply_interface(state, interface_interaction(side, u, params));
        h
    }
}

/// Advances the particle through one event with fresh random draws.
pub fn step_to_event(
    state: &mut ParticleState,
    rng: &mut impl Rng,
    flip_intensity: f64,
    params: &InterfaceParams,
) -> f64 {
    let e = -(1.0 - rng.gen::<f64>()).ln() / flip_intensity;
    let u = rng.gen::<f64>();
    step_to_event_with(state, e, u, params)
}

/// Runs one particle from macroscopic position `x0` on `line` to the
/// macroscopic horizon, returning the final state in macroscopic
/// coordinates (`alive = false` if killed before the horizon).
pub fn simulate_particle(
    x0: f64,
    line: Line,
    model: &ScaledModel,
    params: &InterfaceParams,
    rng: &mut impl Rng,
) -> ParticleState {
    let eps = model.epsilon;
    let horizon = model.t_macro / (eps * eps);
    let mut state = ParticleState {
        x: x0 / eps,
        line,
        alive: true,
    };
    let mut elapsed = 0.0;
    while state.alive && elapsed < horizon {
        let e = -(1.0 - rng.gen::<f64>()).ln() / model.flip_intensity;
        let u = rng.gen::<f64>();
        let h = interface_distance(&state);
        let event = e.min(h);
        if elapsed + event >= horizon {
            state.x += state.line.speed() * (horizon - elapsed);
            elapsed = horizon;
        } else {
            elapsed += step_to_event_with(&mut state, e, u, params);
        }
    }
    state.x *= eps;
    state
}

/// Starting law of the ensemble, in macroscopic coordinates.
#[derive(Debug, Clone)]
pub enum InitialCondition {
    /// All particles start at `x` on the given line (+1 / -1).
    PointMass { x: f64, line: i8 },
    /// Particles are drawn from a (nonnegative) two-line density by
    /// inverse-CDF sampling over (cell, line) pairs.
    Density(TwoLineDensity),
}

impl InitialCondition {
    fn validate(&self) -> Result<()> {
        match self {
            InitialCondition::PointMass { x, .. } => {
                if *x == 0.0 {
                    Err(Error::PointMassAtInterface)
                } else {
                    Ok(())
                }
            }
            InitialCondition::Density(d) => {
                if d.total_mass() <= 0.0 || d.min_value() < 0.0 {
                    Err(Error::EmptyEnsemble)
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Cumulative weights over (cell, up) then (cell, down), for sampling.
    fn cdf(&self) -> Option<Vec<f64>> {
        match self {
            InitialCondition::PointMass { .. } => None,
            InitialCondition::Density(d) => {
                let mut acc = 0.0;
                let mut cdf: Vec<f64> = d
                    .up
                    .iter()
                    .chain(d.down.iter())
                    .map(|v| {
                        acc += v;
                        acc
                    })
                    .collect();
                let total = acc;
                for v in &mut cdf {
                    *v /= total;
                }
                Some(cdf)
            }
        }
    }

    fn sample(&self, cdf: &Option<Vec<f64>>, rng: &mut impl Rng) -> (f64, Line) {
        match self {
            InitialCondition::PointMass { x, line } => {
                (*x, if *line == 1 { Line::Up } else { Line::Down })
            }
            InitialCondition::Density(d) => {
                let cdf = cdf.as_ref().expect("density CDF");
                let u: f64 = rng.gen();
                let k = cdf.partition_point(|&c| c < u).min(cdf.len() - 1);
                let n = d.grid.n_cells;
                let (cell, line) = if k < n {
                    (k, Line::Up)
                } else {
                    (k - n, Line::Down)
                };
                // uniform within the cell
                let x = d.grid.cell_center(cell) + (rng.gen::<f64>() - 0.5) * d.grid.dx();
                (x, line)
            }
        }
    }
}

/// Per-(cell, line) histogram of the surviving particles plus the mass
/// ledger. Counts are exact integers so the result does not depend on how
/// work was split across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnsembleCounts {
    pub n_particles: u64,
    pub counts_up: Vec<u64>,
    pub counts_down: Vec<u64>,
    pub killed: u64,
    /// Survivors whose final position fell outside the grid, clamped into
    /// the edge cells (also included in the counts).
    pub clamped: u64,
}

impl EnsembleCounts {
    pub fn killed_fraction(&self) -> f64 {
        self.killed as f64 / self.n_particles as f64
    }

    pub fn surviving_count(&self) -> u64 {
        self.counts_up.iter().chain(self.counts_down.iter()).sum()
    }

    /// Normalized empirical two-line density: cell value = count / (N dx).
    pub fn to_two_line_density(&self, grid: Grid) -> TwoLineDensity {
        let scale = 1.0 / (self.n_particles as f64 * grid.dx());
        TwoLineDensity {
            grid,
            up: self.counts_up.iter().map(|&c| c as f64 * scale).collect(),
            down: self.counts_down.iter().map(|&c| c as f64 * scale).collect(),
        }
    }

    /// Normalized surviving-position density, lines merged.
    pub fn to_density(&self, grid: Grid) -> LineDensity {
        let scale = 1.0 / (self.n_particles as f64 * grid.dx());
        LineDensity {
            grid,
            values: self
                .counts_up
                .iter()
                .zip(&self.counts_down)
                .map(|(&a, &b)| (a + b) as f64 * scale)
                .collect(),
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// RNG for one particle, derived from the ensemble seed and the particle
/// index; streams are independent and reproducible in any order.
pub fn particle_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(index)))
}

/// Simulates `n_particles` independent particles in parallel and bins the
/// surviving final positions on `grid`. Deterministic in `seed` and
/// independent of the thread count.
pub fn simulate_ensemble(
    init: &InitialCondition,
    grid: Grid,
    model: &ScaledModel,
    params: &InterfaceParams,
    n_particles: u64,
    seed: u64,
) -> Result<EnsembleCounts> {
    if n_particles == 0 {
        return Err(Error::EmptyEnsemble);
    }
    init.validate()?;
    let cdf = init.cdf();
    let n = grid.n_cells;

    let (counts_up, counts_down, killed, clamped) = (0..n_particles)
        .into_par_iter()
        .fold(
            || (vec![0u64; n], vec![0u64; n], 0u64, 0u64),
            |(mut up, mut down, mut killed, mut clamped), idx| {
                let mut rng = particle_rng(seed, idx);
                let (x0, line) = init.sample(&cdf, &mut rng);
                let end = simulate_particle(x0, line, model, params, &mut rng);
                if end.alive {
                    if end.x.abs() > grid.half_width {
                        clamped += 1;
                    }
                    let cell = grid.cell_of(end.x);
                    match end.line {
                        Line::Up => up[cell] += 1,
                        Line::Down => down[cell] += 1,
                    }
                } else {
                    killed += 1;
                }
                (up, down, killed, clamped)
            },
        )
        .reduce(
            || (vec![0u64; n], vec![0u64; n], 0u64, 0u64),
            |(mut u1, mut d1, k1, o1), (u2, d2, k2, o2)| {
                for (a, b) in u1.iter_mut().zip(&u2) {
                    *a += b;
                }
                for (a, b) in d1.iter_mut().zip(&d2) {
                    *a += b;
                }
                (u1, d1, k1 + k2, o1 + o2)
            },
        );

    Ok(EnsembleCounts {
        n_particles,
        counts_up,
        counts_down,
        killed,
        clamped,
    })
}
