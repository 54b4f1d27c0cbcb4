//! Finite-volume solver for the 2D isentropic Navier–Stokes system on the
//! strip `[−L_x, L_x] × [0, 1)`, periodic in y.

pub mod checkpoint;
mod config;
mod kernel;
mod run;
mod state;
mod stepper;

pub use config::{auto_half_width, BcMode, Limiter, PerturbationShape, PerturbationSpec, SolverConfig};
pub use kernel::{BoundaryFlux, Derivative};
pub use run::{checkpoint_name, run, RunOptions, RunOutcome, RunSummary};
pub use state::{FlowState, Grid};
pub use stepper::{stable_dt, StepAudit, Stepper};

/// Worker threads used by the data-parallel kernels (`RAYON_NUM_THREADS`).
pub fn worker_threads() -> usize {
    rayon::current_num_threads()
}
