//! Semi-discrete right-hand side of the 2D isentropic Navier–Stokes system.
//!
//! Convective fluxes use the second-order central-upwind scheme on
//! piecewise-linear reconstructions of the conserved variables. Viscous terms
//! `μΔu + (μ+λ)∇div u` are centered second differences of the primitive
//! velocities. Two ghost layers pad every side: periodic copies in y and the
//! configured boundary treatment in x.

use rayon::prelude::*;

use crate::approx_wave::ApproxWave;
use crate::error::{Error, Result};

use super::config::{BcMode, Limiter, SolverConfig};
use super::state::Grid;

const GHOST: usize = 2;

/// Net outflow rates through `x = ±L` (right minus left face integrals) of the
/// convective fluxes, and the viscous boundary contributions to the momentum
/// totals.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BoundaryFlux {
    pub mass: f64,
    pub mom_x: f64,
    pub mom_y: f64,
    pub visc_x: f64,
    pub visc_y: f64,
}

/// Time derivative of the conserved fields.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivative {
    pub rho: Vec<f64>,
    pub mx: Vec<f64>,
    pub my: Vec<f64>,
}

impl Derivative {
    pub fn zeros(n: usize) -> Self {
        Self { rho: vec![0.0; n], mx: vec![0.0; n], my: vec![0.0; n] }
    }

    pub fn max_abs(&self) -> f64 {
        self.rho.iter().chain(&self.mx).chain(&self.my).fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

#[derive(Debug, Clone, Copy)]
struct Gas {
    gamma: f64,
    expo: f64,
    isothermal: bool,
}

impl Gas {
    /// Sound speed and pressure.
    #[inline(always)]
    fn cp(&self, rho: f64) -> (f64, f64) {
        if self.isothermal {
            (1.0, rho)
        } else {
            let c = rho.powf(self.expo);
            (c, rho * c * c / self.gamma)
        }
    }
}

#[inline(always)]
fn minmod(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if a.abs() < b.abs() {
        a
    } else {
        b
    }
}

#[inline(always)]
fn slope(limiter: Limiter, back: f64, fwd: f64) -> f64 {
    match limiter {
        Limiter::Minmod => minmod(back, fwd),
        Limiter::None => 0.5 * (back + fwd),
    }
}

/// Face states reconstructed from the four cells `a b | c d` around a face.
#[inline(always)]
fn reconstruct(limiter: Limiter, a: &[f64; 3], b: &[f64; 3], c: &[f64; 3], d: &[f64; 3]) -> ([f64; 3], [f64; 3]) {
    let mut left = [0.0; 3];
    let mut right = [0.0; 3];
    for k in 0..3 {
        left[k] = b[k] + 0.5 * slope(limiter, b[k] - a[k], c[k] - b[k]);
        right[k] = c[k] - 0.5 * slope(limiter, c[k] - b[k], d[k] - c[k]);
    }
    (left, right)
}

/// Central-upwind numerical flux in direction `n` (1 = x, 2 = y).
#[inline(always)]
fn central_upwind(gas: &Gas, n: usize, l: &[f64; 3], r: &[f64; 3]) -> [f64; 3] {
    let (cl, pl) = gas.cp(l[0]);
    let (cr, pr) = gas.cp(r[0]);
    let vl = l[n] / l[0];
    let vr = r[n] / r[0];
    let a_plus = (vl + cl).max(vr + cr).max(0.0);
    let a_minus = (vl - cl).min(vr - cr).min(0.0);
    let mut fl = [l[n], l[1] * vl, l[2] * vl];
    let mut fr = [r[n], r[1] * vr, r[2] * vr];
    fl[n] += pl;
    fr[n] += pr;
    let span = a_plus - a_minus;
    if span <= 0.0 {
        return [0.5 * (fl[0] + fr[0]), 0.5 * (fl[1] + fr[1]), 0.5 * (fl[2] + fr[2])];
    }
    let inv = 1.0 / span;
    let mut out = [0.0; 3];
    for k in 0..3 {
        out[k] = (a_plus * fl[k] - a_minus * fr[k] + a_plus * a_minus * (r[k] - l[k])) * inv;
    }
    out
}

/// Reusable buffers and parameters for repeated right-hand-side evaluations.
#[derive(Debug, Clone)]
pub struct Kernel {
    grid: Grid,
    gas: Gas,
    mu: f64,
    lam: f64,
    bc: BcMode,
    limiter: Limiter,
    wave: ApproxWave,
    /// Conserved fields on the padded grid, row stride `ny + 4`.
    padded: Vec<[f64; 3]>,
    /// Primitive velocities on the padded grid.
    vel: Vec<[f64; 2]>,
    /// x-face fluxes, `(nx + 1) × ny`.
    fx: Vec<[f64; 3]>,
    /// y-face fluxes, `nx × (ny + 1)`.
    fy: Vec<[f64; 3]>,
}

impl Kernel {
    pub fn new(config: &SolverConfig, wave: ApproxWave) -> Self {
        let grid = Grid::new(config.nx, config.ny, config.lx);
        let gamma = config.model.gamma();
        let padded_len = (grid.nx + 2 * GHOST) * (grid.ny + 2 * GHOST);
        Self {
            grid,
            gas: Gas { gamma, expo: 0.5 * (gamma - 1.0), isothermal: gamma == 1.0 },
            mu: config.mu,
            lam: config.lam,
            bc: config.bc_mode,
            limiter: config.limiter,
            wave,
            padded: vec![[0.0; 3]; padded_len],
            vel: vec![[0.0; 2]; padded_len],
            fx: vec![[0.0; 3]; (grid.nx + 1) * grid.ny],
            fy: vec![[0.0; 3]; grid.nx * (grid.ny + 1)],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn wave(&self) -> &ApproxWave {
        &self.wave
    }

    #[inline(always)]
    fn stride(&self) -> usize {
        self.grid.ny + 2 * GHOST
    }

    /// Padded index of cell `(i, j)`, ghosts at `−2, −1, n, n + 1`.
    #[inline(always)]
    fn p(&self, i: isize, j: isize) -> usize {
        (i + GHOST as isize) as usize * self.stride() + (j + GHOST as isize) as usize
    }

    fn fill_padded(&mut self, rho: &[f64], mx: &[f64], my: &[f64], t: f64) -> Result<()> {
        let Grid { nx, ny, .. } = self.grid;
        for i in 0..nx {
            for j in 0..ny {
                let k = i * ny + j;
                if !(rho[k] > 0.0) || !rho[k].is_finite() || !mx[k].is_finite() || !my[k].is_finite() {
                    return Err(Error::Positivity { i, j, time: t, rho: rho[k] });
                }
                let p = self.p(i as isize, j as isize);
                self.padded[p] = [rho[k], mx[k], my[k]];
            }
        }
        let ghost_cols = [-2isize, -1, nx as isize, nx as isize + 1];
        for &gi in &ghost_cols {
            match self.bc {
                BcMode::WaveDirichlet => {
                    let s = self.wave.evaluate(t, self.grid.x(gi))?;
                    for j in 0..ny as isize {
                        let p = self.p(gi, j);
                        self.padded[p] = [s.rho, s.rho * s.u, 0.0];
                    }
                }
                BcMode::Extrapolation => {
                    let src = if gi < 0 { 0 } else { nx as isize - 1 };
                    for j in 0..ny as isize {
                        let (p, q) = (self.p(gi, j), self.p(src, j));
                        self.padded[p] = self.padded[q];
                    }
                }
            }
        }
        let ny_i = ny as isize;
        for i in -2..nx as isize + 2 {
            for (g, src) in [(-2, ny_i - 2), (-1, ny_i - 1), (ny_i, 0), (ny_i + 1, 1)] {
                let (p, q) = (self.p(i, g), self.p(i, src));
                self.padded[p] = self.padded[q];
            }
        }
        for (v, c) in self.vel.iter_mut().zip(&self.padded) {
            *v = [c[1] / c[0], c[2] / c[0]];
        }
        Ok(())
    }

    /// Evaluates `dU/dt` at time `t` into `out` and returns the boundary flux
    /// budget. Fails with a positivity error if any cell has `ρ ≤ 0` or a
    /// non-finite field.
    pub fn rhs(&mut self, rho: &[f64], mx: &[f64], my: &[f64], t: f64, out: &mut Derivative) -> Result<BoundaryFlux> {
        self.fill_padded(rho, mx, my, t)?;
        let Grid { nx, ny, .. } = self.grid;
        let (dx, dy) = (self.grid.dx(), self.grid.dy());
        let stride = self.stride();
        let gas = self.gas;
        let limiter = self.limiter;
        let padded = &self.padded;
        let pi = |i: isize, j: usize| (i + GHOST as isize) as usize * stride + j + GHOST;

        // x-faces: face f separates cells f − 1 and f.
        self.fx.par_chunks_mut(ny).enumerate().for_each(|(f, row)| {
            let f = f as isize;
            for (j, out) in row.iter_mut().enumerate() {
                let (ul, ur) = reconstruct(
                    limiter,
                    &padded[pi(f - 2, j)],
                    &padded[pi(f - 1, j)],
                    &padded[pi(f, j)],
                    &padded[pi(f + 1, j)],
                );
                *out = central_upwind(&gas, 1, &ul, &ur);
            }
        });

        // y-faces: face g of row i separates cells (i, g − 1) and (i, g).
        self.fy.par_chunks_mut(ny + 1).enumerate().for_each(|(i, row)| {
            let base = pi(i as isize, 0);
            for (g, out) in row.iter_mut().enumerate() {
                let c = base + g;
                let (ul, ur) = reconstruct(limiter, &padded[c - 2], &padded[c - 1], &padded[c], &padded[c + 1]);
                *out = central_upwind(&gas, 2, &ul, &ur);
            }
        });

        let (fx, fy, vel) = (&self.fx, &self.fy, &self.vel);
        let (mu, lam) = (self.mu, self.lam);
        let (idx2, idy2, idxdy4) = (1.0 / (dx * dx), 1.0 / (dy * dy), 0.25 / (dx * dy));
        out.rho.par_chunks_mut(ny).zip(out.mx.par_chunks_mut(ny)).zip(out.my.par_chunks_mut(ny)).enumerate().for_each(
            |(i, ((d_rho, d_mx), d_my))| {
                let ii = i as isize;
                for j in 0..ny {
                    let west = &fx[i * ny + j];
                    let east = &fx[(i + 1) * ny + j];
                    let south = &fy[i * (ny + 1) + j];
                    let north = &fy[i * (ny + 1) + j + 1];
                    let c = pi(ii, j);
                    let (e, w, n, s) = (c + stride, c - stride, c + 1, c - 1);
                    let [u, v] = vel[c];
                    let u_xx = (vel[e][0] - 2.0 * u + vel[w][0]) * idx2;
                    let u_yy = (vel[n][0] - 2.0 * u + vel[s][0]) * idy2;
                    let v_xx = (vel[e][1] - 2.0 * v + vel[w][1]) * idx2;
                    let v_yy = (vel[n][1] - 2.0 * v + vel[s][1]) * idy2;
                    let cross = |k: usize| (vel[e + 1][k] - vel[e - 1][k] - vel[w + 1][k] + vel[w - 1][k]) * idxdy4;
                    let (u_xy, v_xy) = (cross(0), cross(1));
                    d_rho[j] = -(east[0] - west[0]) / dx - (north[0] - south[0]) / dy;
                    d_mx[j] = -(east[1] - west[1]) / dx - (north[1] - south[1]) / dy
                        + (2.0 * mu + lam) * u_xx
                        + mu * u_yy
                        + (mu + lam) * v_xy;
                    d_my[j] = -(east[2] - west[2]) / dx - (north[2] - south[2]) / dy
                        + mu * v_xx
                        + (2.0 * mu + lam) * v_yy
                        + (mu + lam) * u_xy;
                }
            },
        );

        let mut budget = BoundaryFlux::default();
        let last = nx as isize - 1;
        for j in 0..ny {
            let (east, west) = (&self.fx[nx * ny + j], &self.fx[j]);
            budget.mass += east[0] - west[0];
            budget.mom_x += east[1] - west[1];
            budget.mom_y += east[2] - west[2];
            let jump = |k: usize| {
                (self.vel[pi(last + 1, j)][k] - self.vel[pi(last, j)][k])
                    - (self.vel[pi(0, j)][k] - self.vel[pi(-1, j)][k])
            };
            budget.visc_x += (2.0 * mu + lam) * jump(0) / dx;
            budget.visc_y += mu * jump(1) / dx;
        }
        budget.mass *= dy;
        budget.mom_x *= dy;
        budget.mom_y *= dy;
        budget.visc_x *= dy;
        budget.visc_y *= dy;
        Ok(budget)
    }
}
