use std::path::PathBuf;

use crate::diagnostics::DiagnosticsRecord;
use crate::error::{Error, Result};

use super::checkpoint;
use super::state::FlowState;
use super::stepper::Stepper;

/// What to emit while integrating.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Diagnostic times; entries beyond `t_end` are ignored.
    pub schedule: Vec<f64>,
    /// Checkpoint spacing in time; `None` disables periodic checkpoints.
    pub checkpoint_every: Option<f64>,
    /// Directory for checkpoints; a final checkpoint at `t_end` is always
    /// written when set.
    pub checkpoint_dir: Option<PathBuf>,
    /// Start from this state instead of the configured initial data.
    pub restart: Option<FlowState>,
    /// Diagnostics already emitted before `restart`, to continue the running
    /// integrals.
    pub prior_records: Vec<DiagnosticsRecord>,
}

/// Step statistics of a run.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunSummary {
    pub steps: u64,
    pub max_mass_residual: f64,
    pub max_mom_x_residual: f64,
    pub max_mom_y_residual: f64,
    pub viscous_y_transfer: f64,
    /// `max |v|` over every cell and step.
    pub max_abs_v: f64,
    pub min_density: f64,
}

/// Result of [`run`]. On a positivity failure `error` is set and everything
/// produced up to the failure is kept.
#[derive(Debug)]
pub struct RunOutcome {
    pub records: Vec<DiagnosticsRecord>,
    pub state: FlowState,
    pub summary: RunSummary,
    pub checkpoints: Vec<(f64, PathBuf)>,
    pub error: Option<Error>,
}

impl RunOutcome {
    pub fn succeeded(&self) -> bool {
        self.error.is_none()
    }
}

/// File name of the checkpoint taken at time `t`.
pub fn checkpoint_name(t: f64) -> String {
    format!("checkpoint_t{t:012.4}.r2d1")
}

/// Integrates to `t_end`, landing exactly on every scheduled diagnostic and
/// checkpoint time. Configuration and I/O errors are returned directly;
/// positivity failures end the run early inside the outcome.
pub fn run(stepper: &mut Stepper, options: &RunOptions) -> Result<RunOutcome> {
    let t_end = stepper.config().t_end;
    let mut state = match &options.restart {
        Some(s) => {
            s.check()?;
            s.clone()
        }
        None => stepper.initial_state()?,
    };
    let t0 = state.time;
    if t0 > t_end {
        return Err(Error::Config(format!("restart time {t0} lies beyond t_end = {t_end}")));
    }

    let mut diag_times: Vec<f64> = options.schedule.iter().copied().filter(|&t| t >= t0 && t <= t_end).collect();
    diag_times.sort_by(f64::total_cmp);
    diag_times.dedup();
    let mut ckpt_times = Vec::new();
    if options.checkpoint_dir.is_some() {
        if let Some(every) = options.checkpoint_every {
            if !(every > 0.0) {
                return Err(Error::Config(format!("checkpoint interval must be positive, got {every}")));
            }
            let mut k = (t0 / every).floor() as u64 + 1;
            while (k as f64) * every < t_end {
                ckpt_times.push(k as f64 * every);
                k += 1;
            }
        }
        ckpt_times.push(t_end);
    }
    if let Some(dir) = &options.checkpoint_dir {
        std::fs::create_dir_all(dir)?;
    }
    let mut targets: Vec<f64> = diag_times.iter().chain(&ckpt_times).copied().filter(|&t| t > t0).collect();
    targets.push(t_end);
    targets.sort_by(f64::total_cmp);
    targets.dedup();

    let mut records = options.prior_records.clone();
    let mut checkpoints = Vec::new();
    let mut summary =
        RunSummary { min_density: state.min_density(), max_abs_v: state.max_abs_v(), ..Default::default() };
    let already = |records: &[DiagnosticsRecord], t: f64| records.iter().any(|r| r.t == t);

    if diag_times.first() == Some(&t0) && !already(&records, t0) {
        let r = DiagnosticsRecord::compute(&state, stepper.wave(), records.last())?;
        records.push(r);
    }

    let mut error = None;
    'targets: for &target in targets.iter().filter(|&&t| t > t0) {
        while state.time < target {
            let dt = stepper.stable_dt(&state);
            let remaining = target - state.time;
            // avoid a sliver step right before the target
            let dt = if dt >= remaining {
                remaining
            } else if dt > 0.5 * remaining {
                0.5 * remaining
            } else {
                dt
            };
            match stepper.step_with(&mut state, dt) {
                Ok(audit) => {
                    summary.steps += 1;
                    summary.max_mass_residual = summary.max_mass_residual.max(audit.mass_residual);
                    summary.max_mom_x_residual = summary.max_mom_x_residual.max(audit.mom_x_residual);
                    summary.max_mom_y_residual = summary.max_mom_y_residual.max(audit.mom_y_residual);
                    summary.viscous_y_transfer += audit.viscous_y_transfer;
                }
                Err(e @ Error::Positivity { .. }) => {
                    error = Some(e);
                    break 'targets;
                }
                Err(e) => return Err(e),
            }
            if dt == remaining {
                state.time = target;
            }
            if let Err(e) = state.check() {
                error = Some(e);
                break 'targets;
            }
            summary.max_abs_v = summary.max_abs_v.max(state.max_abs_v());
            summary.min_density = summary.min_density.min(state.min_density());
        }
        if diag_times.binary_search_by(|t| t.total_cmp(&target)).is_ok() && !already(&records, target) {
            let r = DiagnosticsRecord::compute(&state, stepper.wave(), records.last())?;
            records.push(r);
        }
        if let Some(dir) = &options.checkpoint_dir {
            if ckpt_times.binary_search_by(|t| t.total_cmp(&target)).is_ok() {
                let path = dir.join(checkpoint_name(target));
                checkpoint::write(&path, &state)?;
                checkpoints.push((target, path));
            }
        }
    }

    Ok(RunOutcome { records, state, summary, checkpoints, error })
}
