//! Smooth approximate 2-rarefaction `(ρ̄, ū)(t, x)`.
//!
//! The profile is defined by `λ₂(ρ̄, ū)(t, x) = w(1 + t, x)` and
//! `z₂(ρ̄, ū) = z₂(ρ₋, u₋)`, with `w` the smooth Burgers solution whose end
//! speeds are `w± = λ₂(ρ±, u±)`. Inverting the two relations gives, for
//! γ > 1 with `κ = (γ−1)/(γ+1)`,
//!
//! ```text
//! c = c₋ + κ(w − w₋),   ρ̄ = c^(2/(γ−1)),   ū = w − c
//! ```
//!
//! and for γ = 1, `ρ̄ = ρ₋·exp(w − w₋)`, `ū = w − 1`. All x-derivatives up to
//! third order follow by the chain rule from `(w_x, w_xx, w_xxx)`.

use std::io::Write;

use rayon::prelude::*;

use crate::burgers::{self, BurgersSample, BurgersWave, ROOT_TOL};
use crate::error::{domain, Result};
use crate::euler_waves::{rarefaction_fan, GasModel, RiemannData};
use crate::quadrature;

/// `(ρ̄, ū)` and their first three x-derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WaveSample {
    pub rho: f64,
    pub u: f64,
    pub rho_x: f64,
    pub u_x: f64,
    pub rho_xx: f64,
    pub u_xx: f64,
    pub rho_xxx: f64,
    pub u_xxx: f64,
}

/// Separate `L^p` norms of a derivative of `ρ̄` and of `ū`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairNorm {
    pub rho: f64,
    pub u: f64,
}

impl PairNorm {
    /// Norm of the pair, `(‖a‖ᵖ + ‖b‖ᵖ)^(1/p)` or the larger sup for `p = ∞`.
    pub fn combined(&self, p: f64) -> f64 {
        if p.is_infinite() {
            self.rho.max(self.u)
        } else {
            (self.rho.powf(p) + self.u.powf(p)).powf(1.0 / p)
        }
    }
}

/// The smooth approximate wave for one gas and one set of end states.
#[derive(Debug, Clone)]
pub struct ApproxWave {
    model: GasModel,
    data: RiemannData,
    /// `None` for a zero-strength wave (constant state).
    burgers: Option<BurgersWave>,
}

impl ApproxWave {
    pub fn new(model: GasModel, data: RiemannData) -> Result<Self> {
        data.require_admissible(&model)?;
        let burgers = if data.is_trivial() { None } else { Some(BurgersWave::new(data.w_minus, data.w_plus)?) };
        Ok(Self { model, data, burgers })
    }

    pub fn model(&self) -> &GasModel {
        &self.model
    }

    pub fn data(&self) -> &RiemannData {
        &self.data
    }

    pub fn burgers(&self) -> Option<&BurgersWave> {
        self.burgers.as_ref()
    }

    fn constant(&self) -> WaveSample {
        WaveSample { rho: self.data.rho_minus, u: self.data.u_minus, ..Default::default() }
    }

    /// Maps a Burgers sample (value and x-derivatives of `w`) to the wave.
    pub fn from_burgers(&self, s: &BurgersSample) -> WaveSample {
        if self.burgers.is_none() {
            return self.constant();
        }
        let (rho, u) = self.data.state_at_speed(s.w);
        let gamma = self.data.gamma;
        let du = 2.0 / (gamma + 1.0);
        if gamma == 1.0 {
            return WaveSample {
                rho,
                u,
                rho_x: rho * s.w_x,
                u_x: s.w_x,
                rho_xx: rho * (s.w_x * s.w_x + s.w_xx),
                u_xx: s.w_xx,
                rho_xxx: rho * (s.w_x.powi(3) + 3.0 * s.w_x * s.w_xx + s.w_xxx),
                u_xxx: s.w_xxx,
            };
        }
        // ρ̄ = c^n with c = w − ū and c' = κ·w'.
        let kappa = (gamma - 1.0) / (gamma + 1.0);
        let n = 2.0 / (gamma - 1.0);
        let c = s.w - u;
        let r1 = kappa * s.w_x / c;
        let r2 = kappa * s.w_xx / c;
        let r3 = kappa * s.w_xxx / c;
        WaveSample {
            rho,
            u,
            rho_x: rho * n * r1,
            u_x: du * s.w_x,
            rho_xx: rho * (n * (n - 1.0) * r1 * r1 + n * r2),
            u_xx: du * s.w_xx,
            rho_xxx: rho * (n * (n - 1.0) * (n - 2.0) * r1.powi(3) + 3.0 * n * (n - 1.0) * r1 * r2 + n * r3),
            u_xxx: du * s.w_xxx,
        }
    }

    /// `(ρ̄, ū)(t, x)` and derivatives; the Burgers profile is taken at time `1 + t`.
    pub fn evaluate(&self, t: f64, x: f64) -> Result<WaveSample> {
        if !(t >= 0.0) {
            return domain(format!("approximate wave needs t >= 0, got {t}"));
        }
        match &self.burgers {
            None => Ok(self.constant()),
            Some(b) => Ok(self.from_burgers(&b.evaluate(1.0 + t, x, ROOT_TOL)?)),
        }
    }

    pub fn sample_profile(&self, t: f64, grid_x: &[f64]) -> Result<WaveProfile> {
        if grid_x.windows(2).any(|w| !(w[1] > w[0])) {
            return domain("profile grid must be strictly increasing");
        }
        let samples: Vec<WaveSample> = grid_x.par_iter().map(|&x| self.evaluate(t, x)).collect::<Result<_>>()?;
        Ok(WaveProfile { time: t, grid_x: grid_x.to_vec(), samples })
    }

    /// Max-norm residuals of the 1D Euler system on `grid_x`, with time
    /// derivatives by centered differences of width `2·dt_probe` and exact
    /// space derivatives.
    pub fn euler_residual(&self, t: f64, grid_x: &[f64], dt_probe: f64) -> Result<(f64, f64)> {
        if !(dt_probe > 0.0 && dt_probe < t) {
            return domain(format!("residual probe needs 0 < dt_probe < t, got dt_probe = {dt_probe}, t = {t}"));
        }
        let model = self.model;
        let per_point = |&x: &f64| -> Result<(f64, f64)> {
            let now = self.evaluate(t, x)?;
            let ahead = self.evaluate(t + dt_probe, x)?;
            let behind = self.evaluate(t - dt_probe, x)?;
            let rho_t = (ahead.rho - behind.rho) / (2.0 * dt_probe);
            let m_t = (ahead.rho * ahead.u - behind.rho * behind.u) / (2.0 * dt_probe);
            let mass_x = now.rho_x * now.u + now.rho * now.u_x;
            let mom_x =
                now.rho_x * now.u * now.u + 2.0 * now.rho * now.u * now.u_x + model.dpressure(now.rho) * now.rho_x;
            Ok(((rho_t + mass_x).abs(), (m_t + mom_x).abs()))
        };
        let pairs: Vec<(f64, f64)> = grid_x.par_iter().map(per_point).collect::<Result<_>>()?;
        Ok(pairs.iter().fold((0.0f64, 0.0f64), |acc, p| (acc.0.max(p.0), acc.1.max(p.1))))
    }

    /// `L^p` norms of `∂ₓ^order ρ̄` and `∂ₓ^order ū` at time `t`.
    pub fn derivative_norms(&self, t: f64, order: u8, p: f64) -> Result<PairNorm> {
        if !(t >= 0.0) {
            return domain(format!("norm needs t >= 0, got {t}"));
        }
        let pick: fn(&WaveSample) -> (f64, f64) = match order {
            1 => |s| (s.rho_x, s.u_x),
            2 => |s| (s.rho_xx, s.u_xx),
            3 => |s| (s.rho_xxx, s.u_xxx),
            _ => return domain(format!("derivative order must be 1, 2 or 3, got {order}")),
        };
        if !(p >= 1.0) {
            return domain(format!("L^p exponent must satisfy p >= 1, got {p}"));
        }
        let Some(b) = &self.burgers else {
            return Ok(PairNorm { rho: 0.0, u: 0.0 });
        };
        let tau = 1.0 + t;
        let component = |which: usize| {
            burgers::foot_lp_norm(p, |x0| {
                let (_, s) = b.along_characteristic(tau, x0);
                let v = pick(&self.from_burgers(&s));
                let g = if which == 0 { v.0 } else { v.1 };
                (g.abs(), 1.0 + tau * b.initial(x0).w_x)
            })
        };
        Ok(PairNorm { rho: component(0)?, u: component(1)? })
    }

    /// `sup_x (|ρ̄ − ρʳ| + |ū − uʳ|)(t, x)` against the exact fan at `x/t`.
    pub fn sup_distance_to_fan(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return domain(format!("fan distance needs t > 0, got {t}"));
        }
        let Some(b) = &self.burgers else {
            return Ok(0.0);
        };
        let tau = 1.0 + t;
        let (_, v) = quadrature::refined_max(
            |x0| {
                let w0 = b.initial(x0).w;
                let x = x0 + tau * w0;
                let (rho, u) = self.data.state_at_speed(w0);
                let (rho_r, u_r) = rarefaction_fan(&self.model, &self.data, x / t).unwrap_or((rho, u));
                (rho - rho_r).abs() + (u - u_r).abs()
            },
            -burgers::FOOT_WINDOW,
            burgers::FOOT_WINDOW,
            8001,
            1e-12,
        );
        Ok(v)
    }
}

/// `(ρ̄, ū)` and derivatives sampled on a 1D grid at a fixed time.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveProfile {
    pub time: f64,
    pub grid_x: Vec<f64>,
    pub samples: Vec<WaveSample>,
}

pub const PROFILE_CSV_HEADER: &str = "x,rho_bar,u_bar,rho_bar_x,u_bar_x,rho_bar_xx,u_bar_xx,rho_bar_xxx,u_bar_xxx";

impl WaveProfile {
    pub fn len(&self) -> usize {
        self.grid_x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid_x.is_empty()
    }

    pub fn u_x(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.u_x).collect()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{PROFILE_CSV_HEADER}")?;
        for (x, s) in self.grid_x.iter().zip(&self.samples) {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                x, s.rho, s.u, s.rho_x, s.u_x, s.rho_xx, s.u_xx, s.rho_xxx, s.u_xxx
            )?;
        }
        Ok(())
    }
}
