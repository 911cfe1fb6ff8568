//! Operator-level machinery: the cosine family of the skew generator, its
//! functional equation, the dual resolvent with its interface law, and
//! the exact resolvent of the pure transport generator.

use skewtel::cosine::{dual_cosine_apply, dual_resolvent, GridFunction};
use skewtel::density::{Grid, TwoLineDensity};
use skewtel::kernels::SkewParams;
use skewtel::params::InterfaceParams;
use skewtel::pde::resolvent_a;

fn main() {
    let sp = SkewParams::new(0.7, 0.3).expect("weights");

    // cosine functional equation 2 C(t) C(s) = C(t+s) + C(t-s), exact on
    // shift-commensurate grids
    let grid = Grid::new(4.0, 256).expect("grid");
    let f = GridFunction::from_fn(
        grid,
        |x| if x.abs() < 1.0 { (1.0 - x * x).powi(2) } else { 0.0 },
        0.0,
        0.0,
    );
    let dx = grid.dx();
    let (t, s) = (40.0 * dx, 17.0 * dx);
    let lhs = dual_cosine_apply(&dual_cosine_apply(&f, s, &sp).unwrap(), t, &sp).unwrap();
    let a = dual_cosine_apply(&f, t + s, &sp).unwrap();
    let b = dual_cosine_apply(&f, t - s, &sp).unwrap();
    let sup = (0..=grid.n_cells)
        .map(|j| (2.0 * lhs.values[j] - a.values[j] - b.values[j]).abs())
        .fold(0.0f64, f64::max);
    println!("cosine functional equation sup error: {sup:.2e}");

    // dual resolvent: lambda^2 f - f'' = g with p f'(0+) = q f'(0-)
    let rgrid = Grid::new(12.0, 2400).expect("grid");
    let g = GridFunction::from_fn(rgrid, |x| 1.0 / (1.0 + (x - 1.0) * (x - 1.0)), 0.0, 0.0);
    let (fr, coeffs) = dual_resolvent(&g, 0.8, &sp).unwrap();
    let (dl, dr) = fr.one_sided_derivs_at_zero();
    println!("dual resolvent interface law |p f'(0+) - q f'(0-)|: {:.2e}", (sp.p * dr - sp.q * dl).abs());
    println!("dual resolvent continuity residual: {:.2e}", coeffs.continuity_residual().abs());

    // resolvent of the transport generator: interface conditions hold by
    // construction
    let params = InterfaceParams::validate(0.7, 0.3, 0.3, 0.7).expect("params");
    let tgrid = Grid::new(6.0, 2048).expect("grid");
    let psi = TwoLineDensity::from_fn(tgrid, |x, i| {
        (-(x + 0.4) * (x + 0.4) * 2.0).exp() * if i == 1 { 0.8 } else { 1.2 }
    });
    let phi = resolvent_a(&psi, 1.0, &params).unwrap();
    let m = tgrid.interface_index();
    let extrap_r = |v: &[f64]| 1.5 * v[m] - 0.5 * v[m + 1];
    let extrap_l = |v: &[f64]| 1.5 * v[m - 1] - 0.5 * v[m - 2];
    let jump_up = extrap_r(&phi.up) - params.p * extrap_l(&phi.up) - params.q_prime * extrap_r(&phi.down);
    let jump_down = extrap_l(&phi.down) - params.p_prime * extrap_l(&phi.up) - params.q * extrap_r(&phi.down);
    println!("transport resolvent interface residuals: {:.2e}, {:.2e}", jump_up.abs(), jump_down.abs());
}
