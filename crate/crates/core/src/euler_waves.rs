//! Wave algebra of the 1D isentropic Euler system with a γ-law gas.
//!
//! The 2-Riemann invariant uses the antiderivative
//! `A(ρ) = 2/(γ−1)·ρ^((γ−1)/2)` for γ > 1 and `A(ρ) = ln ρ` for γ = 1, so
//! `z₁ = u + A(ρ)` and `z₂ = u − A(ρ)`. Only differences of invariants carry
//! meaning; wherever a difference is needed it is formed directly (see
//! [`GasModel::invariant_gap`]) so that γ close to 1 does not cancel.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Relative tolerance for matching the 2-Riemann invariant of two states.
pub const INVARIANT_TOL: f64 = 1e-12;

/// Characteristic family of the 2×2 system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    First,
    Second,
}

impl Family {
    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(Family::First),
            2 => Ok(Family::Second),
            _ => domain(format!("characteristic family must be 1 or 2, got {i}")),
        }
    }
}

/// Isentropic γ-law gas, `p(ρ) = ρ^γ/γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasModel {
    gamma: f64,
}

impl GasModel {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 1.0) {
            return Err(Error::Config(format!("adiabatic exponent must satisfy gamma >= 1, got {gamma}")));
        }
        Ok(Self { gamma })
    }

    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Exponent `(γ−1)/2` of the sound speed.
    #[inline]
    pub(crate) fn half_gm1(&self) -> f64 {
        0.5 * (self.gamma - 1.0)
    }

    pub fn pressure(&self, rho: f64) -> Result<f64> {
        if !(rho >= 0.0) {
            return domain(format!("pressure needs rho >= 0, got {rho}"));
        }
        Ok(self.pressure_unchecked(rho))
    }

    #[inline]
    pub fn pressure_unchecked(&self, rho: f64) -> f64 {
        rho.powf(self.gamma) / self.gamma
    }

    /// `p′(ρ) = ρ^(γ−1)`.
    #[inline]
    pub fn dpressure(&self, rho: f64) -> f64 {
        rho.powf(self.gamma - 1.0)
    }

    /// `c(ρ) = √p′(ρ) = ρ^((γ−1)/2)`.
    #[inline]
    pub fn sound_speed(&self, rho: f64) -> f64 {
        if self.gamma == 1.0 {
            1.0
        } else {
            rho.powf(self.half_gm1())
        }
    }

    /// Characteristic speed `λ₁ = u − c` or `λ₂ = u + c`.
    pub fn lambda(&self, family: Family, rho: f64, u: f64) -> Result<f64> {
        check_density(rho)?;
        let c = self.sound_speed(rho);
        Ok(match family {
            Family::First => u - c,
            Family::Second => u + c,
        })
    }

    /// Antiderivative of `√p′(s)/s`.
    fn invariant_potential(&self, rho: f64) -> f64 {
        if self.gamma == 1.0 {
            rho.ln()
        } else {
            rho.powf(self.half_gm1()) / self.half_gm1()
        }
    }

    pub fn riemann_invariant(&self, family: Family, rho: f64, u: f64) -> Result<f64> {
        check_density(rho)?;
        let a = self.invariant_potential(rho);
        Ok(match family {
            Family::First => u + a,
            Family::Second => u - a,
        })
    }

    /// `∫_{ρa}^{ρb} √p′(s)/s ds`, evaluated without cancellation for γ near 1.
    pub fn invariant_gap(&self, rho_a: f64, rho_b: f64) -> Result<f64> {
        check_density(rho_a)?;
        check_density(rho_b)?;
        let log_ratio = (rho_b / rho_a).ln();
        if self.gamma == 1.0 {
            return Ok(log_ratio);
        }
        let k = self.half_gm1();
        Ok(rho_a.powf(k) * (k * log_ratio).exp_m1() / k)
    }

    /// The unique `u₊` on the 2-wave curve through `(ρ₋, u₋)`.
    pub fn connect_end_states(&self, rho_minus: f64, u_minus: f64, rho_plus: f64) -> Result<f64> {
        Ok(u_minus + self.invariant_gap(rho_minus, rho_plus)?)
    }
}

fn check_density(rho: f64) -> Result<()> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        domain(format!("density must be positive and finite, got {rho}"))
    }
}

/// End states of a Riemann problem together with the derived 2-wave data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiemannData {
    pub gamma: f64,
    pub rho_minus: f64,
    pub u_minus: f64,
    pub rho_plus: f64,
    pub u_plus: f64,
    /// `|ρ₊ − ρ₋| + |u₊ − u₋|`
    pub alpha: f64,
    /// `λ₂(ρ₋, u₋)`
    pub w_minus: f64,
    /// `λ₂(ρ₊, u₊)`
    pub w_plus: f64,
    /// The states lie on one 2-rarefaction curve and λ₂ expands across it.
    pub valid: bool,
}

impl RiemannData {
    pub fn new(model: &GasModel, rho_minus: f64, u_minus: f64, rho_plus: f64, u_plus: f64) -> Result<Self> {
        let z_minus = model.riemann_invariant(Family::Second, rho_minus, u_minus)?;
        let w_minus = model.lambda(Family::Second, rho_minus, u_minus)?;
        let w_plus = model.lambda(Family::Second, rho_plus, u_plus)?;
        let z_jump = (u_plus - u_minus) - model.invariant_gap(rho_minus, rho_plus)?;
        let valid = z_jump.abs() <= INVARIANT_TOL * (1.0 + z_minus.abs()) && w_plus > w_minus;
        Ok(Self {
            gamma: model.gamma(),
            rho_minus,
            u_minus,
            rho_plus,
            u_plus,
            alpha: (rho_plus - rho_minus).abs() + (u_plus - u_minus).abs(),
            w_minus,
            w_plus,
            valid,
        })
    }

    /// Builds a 2-rarefaction from the left state and the right density.
    pub fn connected(model: &GasModel, rho_minus: f64, u_minus: f64, rho_plus: f64) -> Result<Self> {
        let u_plus = model.connect_end_states(rho_minus, u_minus, rho_plus)?;
        Self::new(model, rho_minus, u_minus, rho_plus, u_plus)
    }

    /// Both end states coincide.
    pub fn is_trivial(&self) -> bool {
        self.alpha == 0.0
    }

    /// Data accepted by the fan and the smooth wave: a valid 2-rarefaction
    /// or a zero-strength wave (constant state).
    pub fn is_admissible(&self) -> bool {
        self.valid || self.is_trivial()
    }

    pub(crate) fn require_admissible(&self, model: &GasModel) -> Result<()> {
        if model.gamma() != self.gamma {
            return Err(Error::Contract(format!(
                "gas model gamma {} differs from the gamma {} the Riemann data was built with",
                model.gamma(),
                self.gamma
            )));
        }
        if !self.is_admissible() {
            return Err(Error::Contract("end states are not connected by a 2-rarefaction wave".into()));
        }
        Ok(())
    }

    /// Left sound speed `c(ρ₋)`.
    pub(crate) fn c_minus(&self) -> f64 {
        self.w_minus - self.u_minus
    }

    /// The 2-wave state with `λ₂ = speed`, without clamping to the end states.
    ///
    /// Anchored at the left state: `c = c₋ + (γ−1)/(γ+1)·(speed − w₋)`,
    /// `ρ = ρ₋·(c/c₋)^(2/(γ−1))`, `u = speed − c`. For γ = 1, `c ≡ 1` and
    /// `ρ = ρ₋·exp(speed − w₋)`.
    pub(crate) fn state_at_speed(&self, speed: f64) -> (f64, f64) {
        let s = speed - self.w_minus;
        if self.gamma == 1.0 {
            return (self.rho_minus * s.exp(), speed - 1.0);
        }
        let kappa = (self.gamma - 1.0) / (self.gamma + 1.0);
        let c_minus = self.c_minus();
        let c = c_minus + kappa * s;
        let rho = self.rho_minus * ((2.0 / (self.gamma - 1.0)) * (kappa * s / c_minus).ln_1p()).exp();
        (rho, speed - c)
    }
}

/// Self-similar 2-rarefaction fan `(ρʳ, uʳ)(ξ)`, `ξ = x/t`.
pub fn rarefaction_fan(model: &GasModel, data: &RiemannData, xi: f64) -> Result<(f64, f64)> {
    data.require_admissible(model)?;
    if data.is_trivial() || xi <= data.w_minus {
        Ok((data.rho_minus, data.u_minus))
    } else if xi >= data.w_plus {
        Ok((data.rho_plus, data.u_plus))
    } else {
        Ok(data.state_at_speed(xi))
    }
}
