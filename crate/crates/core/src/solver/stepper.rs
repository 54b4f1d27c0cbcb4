use crate::approx_wave::ApproxWave;
use crate::error::{Error, Result};
use crate::euler_waves::GasModel;

use super::config::SolverConfig;
use super::kernel::{BoundaryFlux, Derivative, Kernel};
use super::state::FlowState;

/// Largest stable step: the smaller of the directional convective limits and
/// the explicit viscous limit `0.25·ρ_min·min(Δx, Δy)²/(2μ + λ)`, times the
/// Courant number.
pub fn stable_dt(state: &FlowState, config: &SolverConfig) -> f64 {
    stable_dt_with(state, &config.model, config.cfl, config.longitudinal_viscosity())
}

pub(crate) fn stable_dt_with(state: &FlowState, model: &GasModel, cfl: f64, visc: f64) -> f64 {
    let g = state.grid;
    let (mut ax, mut ay, mut rho_min) = (0.0f64, 0.0f64, f64::INFINITY);
    for k in 0..g.cells() {
        let rho = state.rho[k];
        let c = model.sound_speed(rho);
        ax = ax.max((state.mx[k] / rho).abs() + c);
        ay = ay.max((state.my[k] / rho).abs() + c);
        rho_min = rho_min.min(rho);
    }
    let (dx, dy) = (g.dx(), g.dy());
    let h = dx.min(dy);
    let viscous = 0.25 * rho_min * h * h / visc;
    cfl * (dx / ax).min(dy / ay).min(viscous)
}

/// Conservation bookkeeping of one step.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StepAudit {
    pub dt: f64,
    /// `|ΔM − ΔM_flux| / M`.
    pub mass_residual: f64,
    /// Changes of the momentum totals not explained by the convective and
    /// viscous boundary terms, relative to the total mass.
    pub mom_x_residual: f64,
    pub mom_y_residual: f64,
    /// Time-integrated viscous boundary contribution to the y-momentum total.
    pub viscous_y_transfer: f64,
}

/// SSP-RK2 (Heun) integrator owning the right-hand-side workspace.
#[derive(Debug, Clone)]
pub struct Stepper {
    config: SolverConfig,
    kernel: Kernel,
    k0: Derivative,
    k1: Derivative,
    stage: FlowState,
}

impl Stepper {
    pub fn new(config: &SolverConfig) -> Result<Self> {
        config.validate()?;
        let wave = ApproxWave::new(config.model, config.wave)?;
        Self::with_wave(config, wave)
    }

    pub fn with_wave(config: &SolverConfig, wave: ApproxWave) -> Result<Self> {
        config.validate()?;
        let kernel = Kernel::new(config, wave);
        let grid = *kernel.grid();
        let n = grid.cells();
        Ok(Self {
            config: config.clone(),
            kernel,
            k0: Derivative::zeros(n),
            k1: Derivative::zeros(n),
            stage: FlowState::uniform(grid, 1.0, 0.0, 0.0),
        })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn wave(&self) -> &ApproxWave {
        self.kernel.wave()
    }

    pub fn initial_state(&self) -> Result<FlowState> {
        FlowState::initialize(&self.config, self.kernel.wave())
    }

    /// Single right-hand-side evaluation at the state's own time.
    pub fn rhs(&mut self, state: &FlowState) -> Result<(Derivative, BoundaryFlux)> {
        self.check_grid(state)?;
        let mut d = Derivative::zeros(state.grid.cells());
        let b = self.kernel.rhs(&state.rho, &state.mx, &state.my, state.time, &mut d)?;
        Ok((d, b))
    }

    pub fn stable_dt(&self, state: &FlowState) -> f64 {
        stable_dt(state, &self.config)
    }

    /// One Heun step of size [`stable_dt`].
    pub fn step(&mut self, state: &mut FlowState) -> Result<StepAudit> {
        let dt = self.stable_dt(state);
        self.step_with(state, dt)
    }

    /// One Heun step of the given size; `state` is left untouched on error.
    pub fn step_with(&mut self, state: &mut FlowState, dt: f64) -> Result<StepAudit> {
        self.check_grid(state)?;
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Internal(format!("invalid time step {dt}")));
        }
        let t = state.time;
        let b0 = self.kernel.rhs(&state.rho, &state.mx, &state.my, t, &mut self.k0)?;

        let stage = &mut self.stage;
        stage.time = t + dt;
        for k in 0..state.rho.len() {
            stage.rho[k] = state.rho[k] + dt * self.k0.rho[k];
            stage.mx[k] = state.mx[k] + dt * self.k0.mx[k];
            stage.my[k] = state.my[k] + dt * self.k0.my[k];
        }
        let b1 = self.kernel.rhs(&stage.rho, &stage.mx, &stage.my, t + dt, &mut self.k1)?;

        let area = state.grid.cell_area();
        let mass = state.rho.iter().sum::<f64>() * area;
        let (mut d_mass, mut d_mx, mut d_my) = (0.0, 0.0, 0.0);
        for k in 0..state.rho.len() {
            let rho = 0.5 * state.rho[k] + 0.5 * (stage.rho[k] + dt * self.k1.rho[k]);
            let mx = 0.5 * state.mx[k] + 0.5 * (stage.mx[k] + dt * self.k1.mx[k]);
            let my = 0.5 * state.my[k] + 0.5 * (stage.my[k] + dt * self.k1.my[k]);
            d_mass += rho - state.rho[k];
            d_mx += mx - state.mx[k];
            d_my += my - state.my[k];
            state.rho[k] = rho;
            state.mx[k] = mx;
            state.my[k] = my;
        }
        state.time = t + dt;

        let half = 0.5 * dt;
        let expect_mass = -half * (b0.mass + b1.mass);
        let expect_mx = -half * (b0.mom_x + b1.mom_x) + half * (b0.visc_x + b1.visc_x);
        let expect_my = -half * (b0.mom_y + b1.mom_y) + half * (b0.visc_y + b1.visc_y);
        Ok(StepAudit {
            dt,
            mass_residual: (d_mass * area - expect_mass).abs() / mass,
            mom_x_residual: (d_mx * area - expect_mx).abs() / mass,
            mom_y_residual: (d_my * area - expect_my).abs() / mass,
            viscous_y_transfer: half * (b0.visc_y + b1.visc_y),
        })
    }

    fn check_grid(&self, state: &FlowState) -> Result<()> {
        if state.grid != *self.kernel.grid() {
            return Err(Error::Contract(format!(
                "state grid {:?} does not match solver grid {:?}",
                state.grid,
                self.kernel.grid()
            )));
        }
        Ok(())
    }
}
