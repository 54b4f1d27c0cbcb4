use std::f64::consts::PI;

use crate::approx_wave::ApproxWave;
use crate::error::{Error, Result};

use super::checkpoint;
use super::config::{PerturbationShape, SolverConfig};

/// Uniform cell-centered grid on `[−L_x, L_x] × [0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
}

impl Grid {
    pub fn new(nx: usize, ny: usize, lx: f64) -> Self {
        Self { nx, ny, lx }
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        2.0 * self.lx / self.nx as f64
    }

    #[inline]
    pub fn dy(&self) -> f64 {
        1.0 / self.ny as f64
    }

    /// Center of column `i`; also valid for ghost indices.
    #[inline]
    pub fn x(&self, i: isize) -> f64 {
        -self.lx + (i as f64 + 0.5) * self.dx()
    }

    #[inline]
    pub fn y(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.dy()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.nx as isize).map(|i| self.x(i)).collect()
    }

    pub fn cells(&self) -> usize {
        self.nx * self.ny
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.ny + j
    }

    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dy()
    }
}

/// Conserved fields `(ρ, ρu, ρv)` in row-major order with y fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub time: f64,
    pub grid: Grid,
    pub rho: Vec<f64>,
    pub mx: Vec<f64>,
    pub my: Vec<f64>,
}

impl FlowState {
    pub fn uniform(grid: Grid, rho: f64, u: f64, v: f64) -> Self {
        let n = grid.cells();
        Self { time: 0.0, grid, rho: vec![rho; n], mx: vec![rho * u; n], my: vec![rho * v; n] }
    }

    /// Initial data: approximate wave at `t = 0` plus the configured perturbation.
    pub fn initialize(config: &SolverConfig, wave: &ApproxWave) -> Result<Self> {
        config.validate()?;
        let grid = Grid::new(config.nx, config.ny, config.lx);
        let profile = wave.sample_profile(0.0, &grid.xs())?;
        let p = &config.perturbation;
        let custom = match &p.shape {
            PerturbationShape::CustomFile { path } => {
                let f = checkpoint::read(path)?;
                if f.grid.nx != grid.nx || f.grid.ny != grid.ny {
                    return Err(Error::Config(format!(
                        "custom perturbation {path} is {}x{}, solver grid is {}x{}",
                        f.grid.nx, f.grid.ny, grid.nx, grid.ny
                    )));
                }
                Some(f)
            }
            _ => None,
        };
        let mut state = Self::uniform(grid, 1.0, 0.0, 0.0);
        for i in 0..grid.nx {
            let x = grid.x(i as isize);
            let bg = &profile.samples[i];
            let envelope = p.amplitude * (-(x * x) / (p.sigma * p.sigma)).exp();
            for j in 0..grid.ny {
                let k = grid.idx(i, j);
                let (d_rho, d_u, v) = match (&p.shape, &custom) {
                    (PerturbationShape::GaussianSine, _) => {
                        let arg = 2.0 * PI * p.mode as f64 * grid.y(j);
                        (envelope * arg.cos(), envelope * arg.cos(), envelope * arg.sin())
                    }
                    (PerturbationShape::CustomFile { .. }, Some(f)) => {
                        (p.amplitude * f.rho[k], p.amplitude * f.mx[k], p.amplitude * f.my[k])
                    }
                    _ => (0.0, 0.0, 0.0),
                };
                let rho = bg.rho + d_rho;
                if !(rho > 0.0) {
                    return Err(Error::Config(format!(
                        "perturbation makes the initial density nonpositive ({rho:e}) at cell ({i}, {j})"
                    )));
                }
                state.rho[k] = rho;
                state.mx[k] = rho * (bg.u + d_u);
                state.my[k] = rho * v;
            }
        }
        Ok(state)
    }

    pub fn velocity(&self, k: usize) -> (f64, f64) {
        (self.mx[k] / self.rho[k], self.my[k] / self.rho[k])
    }

    pub fn total_mass(&self) -> f64 {
        self.rho.iter().sum::<f64>() * self.grid.cell_area()
    }

    pub fn min_density(&self) -> f64 {
        self.rho.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_v(&self) -> f64 {
        (0..self.grid.cells()).map(|k| (self.my[k] / self.rho[k]).abs()).fold(0.0, f64::max)
    }

    /// Checks positivity of ρ and finiteness of all fields.
    pub fn check(&self) -> Result<()> {
        for k in 0..self.grid.cells() {
            let ok = self.rho[k] > 0.0 && self.rho[k].is_finite() && self.mx[k].is_finite() && self.my[k].is_finite();
            if !ok {
                return Err(Error::Positivity {
                    i: k / self.grid.ny,
                    j: k % self.grid.ny,
                    time: self.time,
                    rho: self.rho[k],
                });
            }
        }
        Ok(())
    }

    /// Periodic shift by `cells` rows in y.
    pub fn shifted_y(&self, cells: usize) -> Self {
        let g = self.grid;
        let mut out = self.clone();
        for i in 0..g.nx {
            for j in 0..g.ny {
                let src = g.idx(i, j);
                let dst = g.idx(i, (j + cells) % g.ny);
                out.rho[dst] = self.rho[src];
                out.mx[dst] = self.mx[src];
                out.my[dst] = self.my[src];
            }
        }
        out
    }
}
