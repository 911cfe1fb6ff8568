//! Cell-averaged densities on the two-line state space and on the real
//! line, with the projection P and the exact flip step.
//!
//! Grids are uniform on `[-L, L]` with an even number of cells, so x = 0
//! always falls on a cell boundary (the interface is a flux boundary,
//! never a cell interior).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform symmetric grid on `[-half_width, half_width]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub half_width: f64,
    pub n_cells: usize,
}

impl Grid {
    pub fn new(half_width: f64, n_cells: usize) -> Result<Self> {
        if !(half_width > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "half_width must be > 0, got {half_width}"
            )));
        }
        if n_cells == 0 || n_cells % 2 != 0 {
            return Err(Error::InvalidGrid(format!(
                "n_cells must be even and positive, got {n_cells}"
            )));
        }
        Ok(Grid {
            half_width,
            n_cells,
        })
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.n_cells as f64
    }

    /// Center of cell `i`.
    pub fn cell_center(&self, i: usize) -> f64 {
        -self.half_width + (i as f64 + 0.5) * self.dx()
    }

    /// Index of the first cell to the right of the interface.
    pub fn interface_index(&self) -> usize {
        self.n_cells / 2
    }

    /// Cell containing `x`, clamped to the grid.
    pub fn cell_of(&self, x: f64) -> usize {
        let i = ((x + self.half_width) / self.dx()).floor() as isize;
        i.clamp(0, self.n_cells as isize - 1) as usize
    }

    pub fn same_as(&self, other: &Grid) -> bool {
        self.n_cells == other.n_cells && self.half_width == other.half_width
    }

    fn check_same(&self, other: &Grid) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(
                self.n_cells,
                self.half_width,
                other.n_cells,
                other.half_width,
            ))
        }
    }
}

/// Cell-averaged density on the two-line space, one value per (cell, line).
///
/// `up` is the line i = +1 (right-moving), `down` is i = -1 (left-moving).
#[derive(Debug, Clone, PartialEq)]
pub struct TwoLineDensity {
    pub grid: Grid,
    pub up: Vec<f64>,
    pub down: Vec<f64>,
}

impl TwoLineDensity {
    pub fn zeros(grid: Grid) -> Self {
        TwoLineDensity {
            grid,
            up: vec![0.0; grid.n_cells],
            down: vec![0.0; grid.n_cells],
        }
    }

    /// Samples `f(x, line)` at cell centers (line = +1 / -1).
    pub fn from_fn(grid: Grid, f: impl Fn(f64, i8) -> f64) -> Self {
        let up = (0..grid.n_cells)
            .map(|i| f(grid.cell_center(i), 1))
            .collect();
        let down = (0..grid.n_cells)
            .map(|i| f(grid.cell_center(i), -1))
            .collect();
        TwoLineDensity { grid, up, down }
    }

    /// Gaussian profile placed on one line, normalized to total mass 1.
    pub fn gaussian_on_line(grid: Grid, center: f64, sigma: f64, line: i8) -> Self {
        let mut d = Self::from_fn(grid, |x, i| {
            if i == line {
                (-(x - center).powi(2) / (2.0 * sigma * sigma)).exp()
            } else {
                0.0
            }
        });
        let m = d.total_mass();
        if m > 0.0 {
            d.scale(1.0 / m);
        }
        d
    }

    pub fn scale(&mut self, c: f64) {
        for v in self.up.iter_mut().chain(self.down.iter_mut()) {
            *v *= c;
        }
    }

    /// `dx * sum |values|` over both lines.
    pub fn total_mass(&self) -> f64 {
        let s: f64 = self
            .up
            .iter()
            .chain(self.down.iter())
            .map(|v| v.abs())
            .sum();
        s * self.grid.dx()
    }

    /// L1 distance over all (cell, line) pairs.
    pub fn l1_distance(&self, other: &TwoLineDensity) -> Result<f64> {
        self.grid.check_same(&other.grid)?;
        let s: f64 = self
            .up
            .iter()
            .zip(&other.up)
            .chain(self.down.iter().zip(&other.down))
            .map(|(a, b)| (a - b).abs())
            .sum();
        Ok(s * self.grid.dx())
    }

    /// The projection P = (B + I)/2: averages the two lines.
    pub fn project(&self) -> TwoLineDensity {
        let avg: Vec<f64> = self
            .up
            .iter()
            .zip(&self.down)
            .map(|(u, v)| 0.5 * (u + v))
            .collect();
        TwoLineDensity {
            grid: self.grid,
            up: avg.clone(),
            down: avg,
        }
    }

    /// Exact flip step `exp(s (B - I))`.
    ///
    /// Per cell, `(u, v) -> (a u + b v, b u + a v)` with
    /// `a = (1 + e^{-2s})/2`, `b = (1 - e^{-2s})/2`; mass is preserved
    /// (`a + b = 1`) and `s -> inf` recovers the projection P.
    pub fn flip(&self, s: f64) -> Result<TwoLineDensity> {
        if s < 0.0 {
            return Err(Error::NegativeFlipDuration(s));
        }
        let e = (-2.0 * s).exp();
        let a = 0.5 * (1.0 + e);
        let b = 0.5 * (1.0 - e);
        let mut out = TwoLineDensity::zeros(self.grid);
        for i in 0..self.grid.n_cells {
            let (u, v) = (self.up[i], self.down[i]);
            out.up[i] = a * u + b * v;
            out.down[i] = b * u + a * v;
        }
        Ok(out)
    }

    pub fn min_value(&self) -> f64 {
        self.up
            .iter()
            .chain(self.down.iter())
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Line-averaged density mapped to the real line: `rho(x) = 2 * P d (x, +1)`.
    ///
    /// For `d` already line-symmetric this is the inverse of [`LineDensity::split`].
    pub fn to_line_density(&self) -> LineDensity {
        let p = self.project();
        LineDensity {
            grid: self.grid,
            values: p.up.iter().map(|u| 2.0 * u).collect(),
        }
    }
}

/// Cell-averaged density on a single real-line grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LineDensity {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl LineDensity {
    pub fn zeros(grid: Grid) -> Self {
        LineDensity {
            grid,
            values: vec![0.0; grid.n_cells],
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Self {
        LineDensity {
            grid,
            values: (0..grid.n_cells).map(|i| f(grid.cell_center(i))).collect(),
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum::<f64>() * self.grid.dx()
    }

    pub fn l1_distance(&self, other: &LineDensity) -> Result<f64> {
        self.grid.check_same(&other.grid)?;
        let s: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .sum();
        Ok(s * self.grid.dx())
    }

    /// Embeds a line density back into the two-line space with equal lines
    /// (each line carries half the density).
    pub fn split(&self) -> TwoLineDensity {
        let half: Vec<f64> = self.values.iter().map(|v| 0.5 * v).collect();
        TwoLineDensity {
            grid: self.grid,
            up: half.clone(),
            down: half,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid() -> Grid {
        Grid::new(2.0, 8).unwrap()
    }

    #[test]
    fn grid_places_interface_on_boundary() {
        let g = grid();
        assert_eq!(g.interface_index(), 4);
        // cell centers straddle 0 symmetrically, none is 0
        assert!((g.cell_center(3) + 0.25).abs() < 1e-15);
        assert!((g.cell_center(4) - 0.25).abs() < 1e-15);
        assert!(Grid::new(2.0, 7).is_err());
    }

    #[test]
    fn uniform_density_mass_is_4l() {
        let d = TwoLineDensity::from_fn(grid(), |_, _| 1.0);
        assert!((d.total_mass() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn project_halves_one_sided_mass() {
        let d = TwoLineDensity::from_fn(grid(), |x, i| if i == 1 { x.cos() } else { 0.0 });
        let p = d.project();
        for i in 0..8 {
            assert!((p.up[i] - 0.5 * d.up[i]).abs() < 1e-15);
            assert_eq!(p.up[i], p.down[i]);
        }
        assert!((p.total_mass() - d.total_mass()).abs() < 1e-14);
    }

    #[test]
    fn flip_zero_is_identity() {
        let d = TwoLineDensity::from_fn(grid(), |x, i| x.abs() + if i == 1 { 1.0 } else { 0.3 });
        assert_eq!(d.flip(0.0).unwrap(), d);
        assert!(d.flip(-1.0).is_err());
    }

    #[test]
    fn flip_long_time_is_projection() {
        let d = TwoLineDensity::from_fn(grid(), |x, i| (x * x) + if i == 1 { 2.0 } else { 0.5 });
        let f = d.flip(50.0).unwrap();
        let p = d.project();
        for i in 0..8 {
            assert!((f.up[i] - p.up[i]).abs() <= 1e-15 * p.up[i].abs());
            assert!((f.down[i] - p.down[i]).abs() <= 1e-15 * p.down[i].abs());
        }
    }

    #[test]
    fn flip_hyperbolic_values() {
        let g = Grid::new(1.0, 2).unwrap();
        let mut d = TwoLineDensity::zeros(g);
        d.up[0] = 1.0;
        let f = d.flip(0.7).unwrap();
        let s = 0.7f64;
        assert!((f.up[0] - (-s).exp() * s.cosh()).abs() < 1e-15);
        assert!((f.down[0] - (-s).exp() * s.sinh()).abs() < 1e-15);
        assert!((f.up[0] + f.down[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn l1_self_distance_zero_and_grid_mismatch() {
        let d = TwoLineDensity::from_fn(grid(), |x, _| x.exp());
        assert_eq!(d.l1_distance(&d).unwrap(), 0.0);
        let other = TwoLineDensity::zeros(Grid::new(2.0, 10).unwrap());
        assert!(d.l1_distance(&other).is_err());
    }

    proptest! {
        #[test]
        fn project_is_idempotent(vals in proptest::collection::vec(0.0f64..10.0, 16)) {
            let g = grid();
            let d = TwoLineDensity {
                grid: g,
                up: vals[..8].to_vec(),
                down: vals[8..].to_vec(),
            };
            let p1 = d.project();
            let p2 = p1.project();
            for i in 0..8 {
                prop_assert!((p1.up[i] - p2.up[i]).abs() < 1e-12);
            }
            prop_assert!((p1.total_mass() - d.total_mass()).abs() < 1e-10);
        }

        #[test]
        fn flip_semigroup_and_mass(
            vals in proptest::collection::vec(0.0f64..10.0, 16),
            s1 in 0.0f64..3.0,
            s2 in 0.0f64..3.0,
        ) {
            let g = grid();
            let d = TwoLineDensity {
                grid: g,
                up: vals[..8].to_vec(),
                down: vals[8..].to_vec(),
            };
            let a = d.flip(s1).unwrap().flip(s2).unwrap();
            let b = d.flip(s1 + s2).unwrap();
            for i in 0..8 {
                let scale = b.up[i].abs().max(1.0);
                prop_assert!((a.up[i] - b.up[i]).abs() < 1e-12 * scale);
                prop_assert!((a.down[i] - b.down[i]).abs() < 1e-12 * scale);
            }
            prop_assert!(a.min_value() >= 0.0);
            prop_assert!((a.total_mass() - d.total_mass()).abs() < 1e-10);
        }

        #[test]
        fn l1_triangle_inequality(vals in proptest::collection::vec(-5.0f64..5.0, 48)) {
            let g = grid();
            let mk = |s: &[f64]| TwoLineDensity {
                grid: g,
                up: s[..8].to_vec(),
                down: s[8..16].to_vec(),
            };
            let a = mk(&vals[0..16]);
            let b = mk(&vals[16..32]);
            let c = mk(&vals[32..48]);
            let ac = a.l1_distance(&c).unwrap();
            let ab = a.l1_distance(&b).unwrap();
            let bc = b.l1_distance(&c).unwrap();
            prop_assert!(ac <= ab + bc + 1e-12);
        }
    }
}
