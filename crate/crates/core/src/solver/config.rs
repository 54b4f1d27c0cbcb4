use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::euler_waves::{GasModel, RiemannData};

/// Treatment of the two ghost layers at `x = ±L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BcMode {
    /// Ghost cells carry the approximate wave `(ρ̄, ū, 0)(t, x_ghost)`.
    WaveDirichlet,
    /// Zero-gradient copy of the first interior cell.
    Extrapolation,
}

/// Slope limiter of the piecewise-linear reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Limiter {
    Minmod,
    /// Unlimited centered slopes.
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum PerturbationShape {
    /// `a·e^{−x²/σ²}·(cos 2πky, cos 2πky, sin 2πky)` added to `(ρ̄, ū, 0)`.
    GaussianSine,
    Zero,
    /// Perturbation fields `(φ₀, φᵤ₀, ψ₀)` read from a checkpoint-format
    /// file on the same grid, scaled by the amplitude.
    CustomFile {
        path: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    pub amplitude: f64,
    pub shape: PerturbationShape,
    pub sigma: f64,
    pub mode: u32,
}

impl PerturbationSpec {
    pub fn zero() -> Self {
        Self { amplitude: 0.0, shape: PerturbationShape::Zero, sigma: 1.0, mode: 0 }
    }

    pub fn gaussian_sine(amplitude: f64, sigma: f64, mode: u32) -> Self {
        Self { amplitude, shape: PerturbationShape::GaussianSine, sigma, mode }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub model: GasModel,
    pub wave: RiemannData,
    /// Shear viscosity μ.
    pub mu: f64,
    /// Bulk viscosity λ.
    pub lam: f64,
    pub lx: f64,
    pub nx: usize,
    pub ny: usize,
    pub cfl: f64,
    pub t_end: f64,
    pub bc_mode: BcMode,
    pub limiter: Limiter,
    pub perturbation: PerturbationSpec,
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.mu > 0.0) || !(self.mu + self.lam >= 0.0) || !self.lam.is_finite() || !self.mu.is_finite() {
            return bad(format!(
                "physical viscosity constraint violated: need mu > 0 and mu + lambda >= 0, got mu = {}, lambda = {}",
                self.mu, self.lam
            ));
        }
        if self.nx < 4 || self.ny < 4 {
            return bad(format!("grid needs Nx, Ny >= 4, got {} x {}", self.nx, self.ny));
        }
        if !(self.lx > 0.0 && self.lx.is_finite()) {
            return bad(format!("half-width L_x must be positive, got {}", self.lx));
        }
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return bad(format!("Courant number must lie in (0, 1), got {}", self.cfl));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return bad(format!("t_end must be finite and >= 0, got {}", self.t_end));
        }
        if self.model.gamma() != self.wave.gamma {
            return bad("gas model and wave data use different gamma".into());
        }
        if !self.wave.is_admissible() {
            return bad("end states are not connected by a 2-rarefaction wave".into());
        }
        let p = &self.perturbation;
        if !p.amplitude.is_finite() || !(p.sigma > 0.0) {
            return bad(format!(
                "perturbation needs finite amplitude and sigma > 0, got a = {}, sigma = {}",
                p.amplitude, p.sigma
            ));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.lx / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        1.0 / self.ny as f64
    }

    /// `2μ + λ`, the coefficient of `u_xx` in the x-momentum viscous term.
    pub fn longitudinal_viscosity(&self) -> f64 {
        2.0 * self.mu + self.lam
    }
}

/// Half-width that keeps the wave fan and the perturbation support at least
/// 20% of `L_x` away from the boundaries up to `t_end`.
pub fn auto_half_width(wave: &RiemannData, t_end: f64, sigma: f64) -> f64 {
    let reach = wave.w_minus.abs().max(wave.w_plus.abs()) * (1.0 + t_end) + 10.0 * sigma;
    reach + 0.25 * reach
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn base() -> SolverConfig {
        let model = GasModel::new(1.4).unwrap();
        let wave = RiemannData::connected(&model, 1.0, 0.0, 1.2).unwrap();
        SolverConfig {
            model,
            wave,
            mu: 0.1,
            lam: 0.0,
            lx: 10.0,
            nx: 16,
            ny: 8,
            cfl: 0.5,
            t_end: 1.0,
            bc_mode: BcMode::WaveDirichlet,
            limiter: Limiter::Minmod,
            perturbation: PerturbationSpec::zero(),
        }
    }

    #[test]
    fn viscosity_constraint() {
        let mut c = base();
        c.mu = -1.0;
        let err = c.validate().unwrap_err().to_string();
        assert!(err.contains("mu + lambda >= 0"), "{err}");
        let mut c = base();
        c.lam = -0.2;
        assert!(c.validate().is_err());
        c.lam = -0.1;
        assert!(c.validate().is_ok());
    }

    #[test]
    fn grid_and_cfl_limits() {
        let mut c = base();
        c.nx = 3;
        assert!(c.validate().is_err());
        let mut c = base();
        c.cfl = 1.0;
        assert!(c.validate().is_err());
        let mut c = base();
        c.lx = 0.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn auto_width_leaves_margin() {
        let c = base();
        let l = auto_half_width(&c.wave, 200.0, 1.0);
        let reach = c.wave.w_plus * 201.0 + 10.0;
        assert!(reach <= 0.8 * l + 1e-12);
    }
}
