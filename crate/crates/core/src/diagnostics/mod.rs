//! Perturbation fields around the approximate wave and the functionals
//! monitored during a run: Sobolev norms, the `ū_x`-weighted norm, the
//! potential energy, dissipation integrals and the sup-distance to the fan.

mod fit;
mod norms;

use std::io::Write;

use crate::approx_wave::ApproxWave;
use crate::error::{domain, Result};
use crate::euler_waves::{rarefaction_fan, GasModel, RiemannData};
use crate::solver::{FlowState, Grid};

pub use fit::{decay_rate_fit, DecayFit};
pub use norms::{
    derivatives_by_order, diff_x, diff_y, l2, l2_sq, sobolev_norms, sobolev_sq, sup_abs, sup_bound, SobolevNorms,
};

/// `φ = ρ − ρ̄`, `φᵤ = u − ū`, `ψ = v` on the solver grid, plus the wave's
/// `ū_x` per column.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationFields {
    pub grid: Grid,
    pub phi: Vec<f64>,
    pub varphi: Vec<f64>,
    pub psi: Vec<f64>,
    pub rho_bar: Vec<f64>,
    pub u_bar_x: Vec<f64>,
}

pub fn perturbation_fields(state: &FlowState, wave: &ApproxWave) -> Result<PerturbationFields> {
    let g = state.grid;
    let profile = wave.sample_profile(state.time, &g.xs())?;
    let n = g.cells();
    let (mut phi, mut varphi, mut psi) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    for i in 0..g.nx {
        let bg = &profile.samples[i];
        for j in 0..g.ny {
            let k = g.idx(i, j);
            let (u, v) = state.velocity(k);
            phi[k] = state.rho[k] - bg.rho;
            varphi[k] = u - bg.u;
            psi[k] = v;
        }
    }
    Ok(PerturbationFields {
        grid: g,
        phi,
        varphi,
        psi,
        rho_bar: profile.samples.iter().map(|s| s.rho).collect(),
        u_bar_x: profile.samples.iter().map(|s| s.u_x).collect(),
    })
}

/// `Φ(ρ, ρ̄) = ∫_{ρ̄}^{ρ} (p(s) − p(ρ̄))/s² ds`, nonnegative by convexity of `p`.
pub fn potential_density(model: &GasModel, rho: f64, rho_bar: f64) -> Result<f64> {
    if !(rho > 0.0 && rho_bar > 0.0) {
        return domain(format!("potential energy needs positive densities, got ({rho}, {rho_bar})"));
    }
    let gamma = model.gamma();
    if gamma == 1.0 {
        // ln(ρ/ρ̄) + ρ̄/ρ − 1 = −ln(1 − r) − r with r = φ/ρ
        let r = (rho - rho_bar) / rho;
        let v = if r.abs() < 1e-3 {
            r * r * (0.5 + r * (1.0 / 3.0 + r * (0.25 + r * (0.2 + r / 6.0))))
        } else {
            -(-r).ln_1p() - r
        };
        return Ok(v.max(0.0));
    }
    // (p(ρ) − p(ρ̄) − p′(ρ̄)φ)/((γ−1)ρ) = ρ̄^γ/γ·g(s)/((γ−1)ρ),
    // g(s) = (1+s)^γ − 1 − γs, s = φ/ρ̄
    let s = (rho - rho_bar) / rho_bar;
    let g = if s.abs() < 1e-3 {
        let mut term = gamma;
        let mut sum = 0.0;
        let mut pow = s;
        for k in 1..8 {
            term *= (gamma - k as f64) / (k as f64 + 1.0);
            pow *= s;
            sum += term * pow;
        }
        sum
    } else {
        (gamma * s.ln_1p()).exp_m1() - gamma * s
    };
    Ok((rho_bar.powf(gamma) / gamma * g / ((gamma - 1.0) * rho)).max(0.0))
}

/// `∫∫ ρ·Φ(ρ, ρ̄) dx dy` with `ρ̄` given per column.
pub fn potential_energy(state: &FlowState, model: &GasModel, rho_bar: &[f64]) -> Result<f64> {
    let g = state.grid;
    if rho_bar.len() != g.nx {
        return domain(format!("background has {} columns, grid has {}", rho_bar.len(), g.nx));
    }
    let mut sum = 0.0;
    for (i, &bar) in rho_bar.iter().enumerate() {
        for j in 0..g.ny {
            let rho = state.rho[g.idx(i, j)];
            sum += rho * potential_density(model, rho, bar)?;
        }
    }
    Ok(sum * g.cell_area())
}

/// `‖ū_x^½ (φ, φᵤ)‖² = ∫∫ ū_x (φ² + φᵤ²) dx dy`.
pub fn weighted_norm(phi: &[f64], varphi: &[f64], u_bar_x: &[f64], grid: &Grid) -> Result<f64> {
    if u_bar_x.len() != grid.nx || phi.len() != grid.cells() || varphi.len() != grid.cells() {
        return domain("weighted norm: fields and profile do not match the grid");
    }
    let ny = grid.ny;
    let mut sum = 0.0;
    for (i, &w) in u_bar_x.iter().enumerate() {
        let row: f64 = (0..ny).map(|j| phi[i * ny + j].powi(2) + varphi[i * ny + j].powi(2)).sum();
        sum += w * row;
    }
    Ok(sum * grid.cell_area())
}

/// `max (|ρ − ρʳ| + |u − uʳ| + |v|)` over cells, with the exact fan at `x/t`.
pub fn sup_error_vs_fan(state: &FlowState, model: &GasModel, data: &RiemannData) -> Result<f64> {
    if !(state.time > 0.0) {
        return domain(format!("fan is undefined at t = {}", state.time));
    }
    let g = state.grid;
    let mut worst = 0.0f64;
    for i in 0..g.nx {
        let (rho_r, u_r) = rarefaction_fan(model, data, g.x(i as isize) / state.time)?;
        for j in 0..g.ny {
            let k = g.idx(i, j);
            let (u, v) = state.velocity(k);
            worst = worst.max((state.rho[k] - rho_r).abs() + (u - u_r).abs() + v.abs());
        }
    }
    Ok(worst)
}

pub const CSV_HEADER: &str = "t,l2_pert,h1_pert,h2_pert,wgt,grad_diss,d3,pot,sup_fan,sup_pert,cum_wgt,cum_grad";

/// One time sample of every monitored quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    /// `‖(φ, Ψ)‖`
    pub l2_pert: f64,
    pub h1_pert: f64,
    pub h2_pert: f64,
    /// `‖ū_x^½ (φ, φᵤ)‖²`
    pub wgt: f64,
    /// `‖(∇φ, ∇Ψ)‖₁²`
    pub grad_diss: f64,
    /// `‖∇³Ψ‖²`
    pub d3: f64,
    /// `∫∫ ρΦ(ρ, ρ̄)`
    pub pot: f64,
    /// Sup-distance to the exact fan; NaN at `t = 0` where the fan is undefined.
    pub sup_fan: f64,
    /// `max(|φ|, |φᵤ|, |ψ|)` over cells.
    pub sup_pert: f64,
    pub cum_wgt: f64,
    pub cum_grad: f64,
}

impl DiagnosticsRecord {
    /// Evaluates all functionals; running integrals continue from `prev` by
    /// the trapezoid rule.
    pub fn compute(state: &FlowState, wave: &ApproxWave, prev: Option<&DiagnosticsRecord>) -> Result<Self> {
        let fields = perturbation_fields(state, wave)?;
        Self::from_fields(state, wave, &fields, prev)
    }

    pub fn from_fields(
        state: &FlowState,
        wave: &ApproxWave,
        f: &PerturbationFields,
        prev: Option<&DiagnosticsRecord>,
    ) -> Result<Self> {
        let g = &f.grid;
        let all = [&f.phi[..], &f.varphi[..], &f.psi[..]];
        let mut sq = [0.0f64; 3];
        let (mut grad_diss, mut d3) = (0.0, 0.0);
        for (which, field) in all.iter().enumerate() {
            let s = sobolev_sq(field, g)?;
            for k in 0..3 {
                sq[k] += s[k];
            }
            // ‖∇f‖₁² = ‖∇f‖² + ‖∇²f‖²
            grad_diss += s[2] - s[0];
            if which > 0 {
                let d = derivatives_by_order(field, g, 3);
                d3 += d[2].iter().map(|h| l2_sq(h, g)).sum::<f64>();
            }
        }
        let wgt = weighted_norm(&f.phi, &f.varphi, &f.u_bar_x, g)?;
        let pot = potential_energy(state, wave.model(), &f.rho_bar)?;
        let sup_fan = if state.time > 0.0 { sup_error_vs_fan(state, wave.model(), wave.data())? } else { f64::NAN };
        let sup_pert = sup_abs(&f.phi).max(sup_abs(&f.varphi)).max(sup_abs(&f.psi));
        let (cum_wgt, cum_grad) = match prev {
            Some(p) => {
                let dt = state.time - p.t;
                (p.cum_wgt + 0.5 * dt * (p.wgt + wgt), p.cum_grad + 0.5 * dt * (p.grad_diss + grad_diss))
            }
            None => (0.0, 0.0),
        };
        Ok(Self {
            t: state.time,
            l2_pert: sq[0].sqrt(),
            h1_pert: sq[1].sqrt(),
            h2_pert: sq[2].sqrt(),
            wgt,
            grad_diss,
            d3,
            pot,
            sup_fan,
            sup_pert,
            cum_wgt,
            cum_grad,
        })
    }

    pub fn values(&self) -> [f64; 12] {
        [
            self.t,
            self.l2_pert,
            self.h1_pert,
            self.h2_pert,
            self.wgt,
            self.grad_diss,
            self.d3,
            self.pot,
            self.sup_fan,
            self.sup_pert,
            self.cum_wgt,
            self.cum_grad,
        ]
    }

    pub fn from_values(v: &[f64]) -> Result<Self> {
        if v.len() != 12 {
            return domain(format!("diagnostics row needs 12 values, got {}", v.len()));
        }
        Ok(Self {
            t: v[0],
            l2_pert: v[1],
            h1_pert: v[2],
            h2_pert: v[3],
            wgt: v[4],
            grad_diss: v[5],
            d3: v[6],
            pot: v[7],
            sup_fan: v[8],
            sup_pert: v[9],
            cum_wgt: v[10],
            cum_grad: v[11],
        })
    }

    /// One CSV row, 17 significant digits per value.
    pub fn csv_row(&self) -> String {
        self.values().iter().map(|v| format!("{v:.16e}")).collect::<Vec<_>>().join(",")
    }
}

pub fn write_csv<W: Write>(records: &[DiagnosticsRecord], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}

/// Index of a CSV column by name.
pub fn column_index(name: &str) -> Option<usize> {
    CSV_HEADER.split(',').position(|c| c == name)
}

/// Parses a diagnostics CSV produced by [`write_csv`].
pub fn read_csv(text: &str) -> Result<Vec<DiagnosticsRecord>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == CSV_HEADER => {}
        other => return domain(format!("unexpected diagnostics header {other:?}")),
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(n, line)| {
            let vals: std::result::Result<Vec<f64>, _> = line.split(',').map(|s| s.trim().parse::<f64>()).collect();
            match vals {
                Ok(v) => DiagnosticsRecord::from_values(&v),
                Err(e) => domain(format!("diagnostics line {}: {e}", n + 2)),
            }
        })
        .collect()
}
