//! The measurements behind each preset, each returning pass/fail checks with
//! the measured numbers.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rarefaction::burgers::ROOT_TOL;
use rarefaction::diagnostics::{decay_rate_fit, DiagnosticsRecord};
use rarefaction::solver::{
    run, BcMode, FlowState, Grid, PerturbationSpec, RunOptions, RunSummary, SolverConfig, Stepper,
};
use rarefaction::{ApproxWave, BurgersWave, RiemannData};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Experiment, Study};

/// One verified property.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: String,
    pub expected: String,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        passed: bool,
        measured: impl Into<String>,
        expected: impl Into<String>,
    ) -> Self {
        Self { name: name.into(), passed, measured: measured.into(), expected: expected.into() }
    }

    fn within(name: impl Into<String>, value: f64, target: f64, tol: f64) -> Self {
        Self::new(name, (value - target).abs() <= tol, format!("{value:.4}"), format!("{target} +/- {tol}"))
    }

    fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self::new(name, value <= bound, format!("{value:.3e}"), format!("<= {bound:.3e}"))
    }
}

/// A CSV table written next to the report.
#[derive(Debug, Clone)]
pub struct Table {
    pub file: String,
    pub contents: String,
}

#[derive(Debug, Default)]
pub struct StudyOutput {
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
    /// Diagnostics series for `diagnostics.csv`, if the study has one.
    pub records: Vec<DiagnosticsRecord>,
    pub checkpoints: Vec<PathBuf>,
    /// Run-level failure (positivity), with partial outputs kept.
    pub error: Option<String>,
    pub summary: Value,
}

impl StudyOutput {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(|c| c.passed)
    }
}

/// Runs the study selected by the experiment; checkpoints go under `out_dir`.
pub fn run_study(exp: &Experiment, out_dir: Option<&Path>) -> Result<StudyOutput> {
    match exp.run.study {
        Study::Lemma21 => burgers_decay(exp),
        Study::Lemma22 => wave_decay(exp),
        Study::Residual => residual(exp),
        Study::Convergence => convergence(exp),
        Study::Planarity => planarity(exp),
        Study::Stability => stability(exp, out_dir),
    }
}

fn log_times(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let n = ((hi / lo).log10() * per_decade as f64).round() as usize;
    (0..=n).map(|k| lo * (hi / lo).powf(k as f64 / n as f64)).collect()
}

fn fan_times() -> Vec<f64> {
    (0..=10).map(|k| 2f64.powi(k)).collect()
}

fn fit_check(name: &str, series: &[(f64, f64)], window: [f64; 2], target: f64, tol: f64) -> Result<Check> {
    let fit = decay_rate_fit(series, (window[0], window[1]))?;
    let mut c = Check::within(name, fit.slope, target, tol);
    c.measured = format!("{:.4} (r2 = {:.6})", fit.slope, fit.r2);
    Ok(c)
}

/// Nonincreasing series check with a final bound.
fn approach_checks(name: &str, series: &[(f64, f64)], bound: f64) -> Vec<Check> {
    let worst_rise = series.windows(2).map(|w| w[1].1 - w[0].1).fold(f64::NEG_INFINITY, f64::max);
    let last = series.last().map(|p| p.1).unwrap_or(f64::NAN);
    vec![
        Check::new(
            format!("{name} sup-distance to fan nonincreasing over t = 1..1024"),
            worst_rise <= 0.0,
            format!("largest step change {worst_rise:.3e}"),
            "<= 0",
        ),
        Check::at_most(format!("{name} sup-distance to fan at t = 1024"), last, bound),
    ]
}

/// Decay exponents of `‖∂ₓᵏ w‖_{L^p}` and the approach of `w` to the fan.
pub fn burgers_decay(exp: &Experiment) -> Result<StudyOutput> {
    let d = exp.riemann_data()?;
    let b = BurgersWave::new(d.w_minus, d.w_plus)?;
    let [lo, hi] = exp.run.fit_window;
    let times = log_times(lo, hi, 8);
    let mut csv = String::from("t,wx_l1,wx_l2,wx_l4,wx_linf,wxx_linf,wxxx_linf\n");
    let mut cols: Vec<Vec<(f64, f64)>> = vec![Vec::new(); 6];
    for &t in &times {
        let vals = [
            b.lp_norm_of_derivative(t, 1, 1.0)?,
            b.lp_norm_of_derivative(t, 1, 2.0)?,
            b.lp_norm_of_derivative(t, 1, 4.0)?,
            b.lp_norm_of_derivative(t, 1, f64::INFINITY)?,
            b.lp_norm_of_derivative(t, 2, f64::INFINITY)?,
            b.lp_norm_of_derivative(t, 3, f64::INFINITY)?,
        ];
        write!(csv, "{t:.16e}")?;
        for (k, v) in vals.iter().enumerate() {
            write!(csv, ",{v:.16e}")?;
            cols[k].push((t, *v));
        }
        csv.push('\n');
    }
    let w = exp.run.fit_window;
    let tv_err = cols[0].iter().map(|&(_, v)| (v - b.gap()).abs() / b.gap()).fold(0.0, f64::max);
    let mut checks = vec![
        Check::at_most("w_x L^1 norm equals the speed gap (relative error)", tv_err, 1e-8),
        fit_check("w_x L^2 decay slope", &cols[1], w, -0.5, 0.10)?,
        fit_check("w_x L^4 decay slope", &cols[2], w, -0.75, 0.10)?,
        fit_check("w_x L^inf decay slope", &cols[3], w, -1.0, 0.10)?,
        fit_check("w_xx L^inf decay slope", &cols[4], w, -1.0, 0.15)?,
        fit_check("w_xxx L^inf decay slope", &cols[5], w, -1.0, 0.15)?,
    ];

    let mut fan_csv = String::from("t,sup_distance\n");
    let mut fan = Vec::new();
    for t in fan_times() {
        let v = b.sup_distance_to_fan(t)?;
        writeln!(fan_csv, "{t:.16e},{v:.16e}")?;
        fan.push((t, v));
    }
    checks.extend(approach_checks("Burgers profile", &fan, 0.05 * b.gap()));
    Ok(StudyOutput {
        checks,
        tables: vec![
            Table { file: "norms.csv".into(), contents: csv },
            Table { file: "fan_distance.csv".into(), contents: fan_csv },
        ],
        summary: json!({ "w_minus": d.w_minus, "w_plus": d.w_plus, "fit_times": times.len() }),
        ..Default::default()
    })
}

/// Maximum relative deviations from the identities for `ū_x` and `ρ̄_x`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct IdentityErrors {
    pub u: f64,
    pub rho: f64,
    /// Samples far in the tails where `w_x` is subnormal and carries no
    /// relative precision; these are excluded.
    pub subnormal: u64,
}

/// Deviations from `ū_x = 2w_x/(γ+1)` and `ρ̄_x = ρ̄^((3−γ)/2)·ū_x` over
/// random `(t, x)`.
pub fn wave_identities(wave: &ApproxWave, samples: u64, seed: u64) -> Result<IdentityErrors> {
    let mut out = IdentityErrors::default();
    let Some(b) = wave.burgers() else {
        return Ok(out);
    };
    let gamma = wave.model().gamma();
    let reach = b.w_minus().abs().max(b.w_plus().abs());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let t = 10f64.powf(rng.gen_range(-3.0..4.0)) - 1e-3;
        let x = rng.gen_range(-1.5..1.5) * (reach * (1.0 + t) + 10.0);
        let s = wave.evaluate(t, x)?;
        let wx = b.evaluate(1.0 + t, x, ROOT_TOL)?.w_x;
        if wx < f64::MIN_POSITIVE || s.u_x < f64::MIN_POSITIVE {
            out.subnormal += 1;
            continue;
        }
        out.u = out.u.max((s.u_x - 2.0 / (gamma + 1.0) * wx).abs() / wx);
        out.rho = out.rho.max((s.rho_x - s.rho.powf(0.5 * (3.0 - gamma)) * s.u_x).abs() / s.u_x);
    }
    Ok(out)
}

/// Identities, decay exponents and fan approach of `(ρ̄, ū)`.
pub fn wave_decay(exp: &Experiment) -> Result<StudyOutput> {
    let model = exp.model();
    let data = exp.riemann_data()?;
    let wave = ApproxWave::new(model, data)?;
    let ids = wave_identities(&wave, exp.run.samples, exp.run.seed)?;
    let n = exp.run.samples - ids.subnormal;
    let mut checks = vec![
        Check::at_most(format!("u_x = 2 w_x/(gamma+1) on {n} samples (relative)"), ids.u, 1e-10),
        Check::at_most(format!("rho_x = rho^((3-gamma)/2) u_x on {n} samples (relative)"), ids.rho, 1e-10),
    ];

    let [lo, hi] = exp.run.fit_window;
    let times = log_times(lo, hi, 8);
    let mut csv = String::from("t,u_l1,pair_l2,pair_l4,pair_linf,pair_xx_linf,pair_xxx_linf\n");
    let mut cols: Vec<Vec<(f64, f64)>> = vec![Vec::new(); 6];
    let inf = f64::INFINITY;
    for &t in &times {
        let vals = [
            wave.derivative_norms(t, 1, 1.0)?.u,
            wave.derivative_norms(t, 1, 2.0)?.combined(2.0),
            wave.derivative_norms(t, 1, 4.0)?.combined(4.0),
            wave.derivative_norms(t, 1, inf)?.combined(inf),
            wave.derivative_norms(t, 2, inf)?.combined(inf),
            wave.derivative_norms(t, 3, inf)?.combined(inf),
        ];
        write!(csv, "{t:.16e}")?;
        for (k, v) in vals.iter().enumerate() {
            write!(csv, ",{v:.16e}")?;
            cols[k].push((t, *v));
        }
        csv.push('\n');
    }
    let jump = data.u_plus - data.u_minus;
    let tv_err = cols[0].iter().map(|&(_, v)| (v - jump).abs() / jump).fold(0.0, f64::max);
    let w = exp.run.fit_window;
    checks.push(Check::at_most("u_x L^1 norm equals u+ - u- (relative error)", tv_err, 1e-8));
    checks.push(fit_check("(rho_x, u_x) L^2 decay slope", &cols[1], w, -0.5, 0.10)?);
    checks.push(fit_check("(rho_x, u_x) L^4 decay slope", &cols[2], w, -0.75, 0.10)?);
    checks.push(fit_check("(rho_x, u_x) L^inf decay slope", &cols[3], w, -1.0, 0.10)?);
    checks.push(fit_check("(rho_xx, u_xx) L^inf decay slope", &cols[4], w, -1.0, 0.15)?);
    checks.push(fit_check("(rho_xxx, u_xxx) L^inf decay slope", &cols[5], w, -1.0, 0.15)?);

    let mut fan_csv = String::from("t,sup_distance\n");
    let mut fan = Vec::new();
    for t in fan_times() {
        let v = wave.sup_distance_to_fan(t)?;
        writeln!(fan_csv, "{t:.16e},{v:.16e}")?;
        fan.push((t, v));
    }
    checks.extend(approach_checks("approximate wave", &fan, 0.05 * data.alpha));

    let xs = Grid::new(exp.grid.nx, 1, exp.grid.lx).xs();
    let mut profile = Vec::new();
    wave.sample_profile(exp.run.t_end, &xs)?.write_csv(&mut profile)?;
    Ok(StudyOutput {
        checks,
        tables: vec![
            Table { file: "norms.csv".into(), contents: csv },
            Table { file: "fan_distance.csv".into(), contents: fan_csv },
            Table { file: "profile.csv".into(), contents: String::from_utf8(profile)? },
        ],
        summary: json!({ "alpha": data.alpha, "identities": ids }),
        ..Default::default()
    })
}

/// Convergence of the Euler residual of `(ρ̄, ū)` as the probe step halves.
pub fn residual(exp: &Experiment) -> Result<StudyOutput> {
    let data = exp.riemann_data()?;
    let wave = ApproxWave::new(exp.model(), data)?;
    let n = exp.grid.nx.max(2);
    let lx = exp.grid.lx;
    let xs: Vec<f64> = (0..n).map(|k| -lx + 2.0 * lx * k as f64 / (n - 1) as f64).collect();
    let t = exp.run.t_end;
    let levels: Vec<f64> = (0..4).map(|k| exp.run.dt_probe / 2f64.powi(k)).collect();
    let mut csv = String::from("dt_probe,r_mass,r_momentum\n");
    let mut res = Vec::new();
    for &dt in &levels {
        let (rm, rp) = wave.euler_residual(t, &xs, dt)?;
        writeln!(csv, "{dt:.16e},{rm:.16e},{rp:.16e}")?;
        res.push((rm, rp));
    }
    let mut checks = Vec::new();
    for (k, w) in res.windows(2).enumerate() {
        checks.push(Check::within(
            format!("mass residual order, level {} -> {}", k, k + 1),
            (w[0].0 / w[1].0).log2(),
            2.0,
            0.2,
        ));
        checks.push(Check::within(
            format!("momentum residual order, level {} -> {}", k, k + 1),
            (w[0].1 / w[1].1).log2(),
            2.0,
            0.2,
        ));
    }
    let (rm, rp) = *res.last().expect("four levels");
    checks.push(Check::at_most("final residual (max of both)", rm.max(rp), 1e-6 * data.alpha));
    Ok(StudyOutput {
        checks,
        tables: vec![Table { file: "residual.csv".into(), contents: csv }],
        summary: json!({ "t": t, "levels": levels, "alpha": data.alpha }),
        ..Default::default()
    })
}

fn max_change(a: &FlowState, b: &FlowState) -> f64 {
    [(&a.rho, &b.rho), (&a.mx, &b.mx), (&a.my, &b.my)]
        .iter()
        .flat_map(|(x, y)| x.iter().zip(y.iter()).map(|(p, q)| (p - q).abs()))
        .fold(0.0, f64::max)
}

/// Largest per-step change of a constant state over `steps` steps, for the
/// wave-tied and extrapolated boundaries.
pub fn fixed_point_error(base: &SolverConfig, steps: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    let d = base.wave;
    let mut c = base.clone();
    c.wave = RiemannData::new(&base.model, d.rho_minus, d.u_minus, d.rho_minus, d.u_minus)?;
    c.perturbation = PerturbationSpec::zero();
    for (bc, v) in [(BcMode::WaveDirichlet, 0.0), (BcMode::Extrapolation, -0.3)] {
        c.bc_mode = bc;
        let mut st = Stepper::new(&c)?;
        let mut s = FlowState::uniform(Grid::new(c.nx, c.ny, c.lx), d.rho_minus, d.u_minus, v);
        for _ in 0..steps {
            let before = s.clone();
            st.step(&mut s)?;
            worst = worst.max(max_change(&before, &s));
        }
    }
    Ok(worst)
}

fn restrict(fine: &[f64], nx: usize, ny: usize) -> Vec<f64> {
    let (cx, cy) = (nx / 2, ny / 2);
    let mut out = vec![0.0; cx * cy];
    for i in 0..cx {
        for j in 0..cy {
            let f = |a: usize, b: usize| fine[(2 * i + a) * ny + 2 * j + b];
            out[i * cy + j] = 0.25 * (f(0, 0) + f(0, 1) + f(1, 0) + f(1, 1));
        }
    }
    out
}

/// `L¹` distance between a coarse state and the 2×2 average of a fine one.
fn coarse_fine_l1(coarse: &FlowState, fine: &FlowState) -> f64 {
    let (nx, ny) = (fine.grid.nx, fine.grid.ny);
    let area = coarse.grid.cell_area();
    [(&coarse.rho, &fine.rho), (&coarse.mx, &fine.mx), (&coarse.my, &fine.my)]
        .iter()
        .map(|(c, f)| c.iter().zip(restrict(f, nx, ny)).map(|(a, b)| (a - b).abs()).sum::<f64>() * area)
        .sum()
}

/// Fixed point, mass audit and self-convergence on three nested grids.
pub fn convergence(exp: &Experiment) -> Result<StudyOutput> {
    let base = exp.solver_config()?;
    let fixed = fixed_point_error(&base, 10)?;
    let mut states = Vec::new();
    let mut audit = 0.0f64;
    let mut csv = String::from("nx,ny,steps,l1_difference_to_next\n");
    let mut steps = Vec::new();
    for k in 0..3 {
        let mut c = base.clone();
        c.nx = base.nx << k;
        c.ny = base.ny << k;
        let mut st = Stepper::new(&c)?;
        let out = run(&mut st, &RunOptions::default())?;
        if let Some(e) = out.error {
            return Err(e).context(format!("convergence run on {} x {}", c.nx, c.ny));
        }
        audit = audit.max(out.summary.max_mass_residual);
        steps.push(out.summary.steps);
        states.push(out.state);
    }
    let e1 = coarse_fine_l1(&states[0], &states[1]);
    let e2 = coarse_fine_l1(&states[1], &states[2]);
    for (k, s) in states.iter().enumerate() {
        let diff = match k {
            0 => format!("{e1:.16e}"),
            1 => format!("{e2:.16e}"),
            _ => String::new(),
        };
        writeln!(csv, "{},{},{},{}", s.grid.nx, s.grid.ny, steps[k], diff)?;
    }
    let order = (e1 / e2).log2();
    let checks = vec![
        Check::at_most("constant state change per step", fixed, 1e-14),
        Check::at_most("mass audit residual per step (relative)", audit, 1e-12),
        Check::new("self-convergence order in L^1", order >= 1.5, format!("{order:.3} ({e1:.3e}, {e2:.3e})"), ">= 1.5"),
    ];
    Ok(StudyOutput {
        checks,
        tables: vec![Table { file: "convergence.csv".into(), contents: csv }],
        summary: json!({ "order": order, "l1_differences": [e1, e2], "fixed_point_error": fixed, "max_mass_residual": audit }),
        ..Default::default()
    })
}

/// Runs exactly `run.steps` steps and tracks `max |v|`.
pub fn planarity(exp: &Experiment) -> Result<StudyOutput> {
    let c = exp.solver_config()?;
    let mut st = Stepper::new(&c)?;
    let mut s = st.initial_state()?;
    let mut summary = RunSummary { min_density: s.min_density(), max_abs_v: s.max_abs_v(), ..Default::default() };
    let mut records = vec![DiagnosticsRecord::compute(&s, st.wave(), None)?];
    let mut error = None;
    for _ in 0..exp.run.steps {
        match st.step(&mut s) {
            Ok(a) => {
                summary.steps += 1;
                summary.max_mass_residual = summary.max_mass_residual.max(a.mass_residual);
                summary.max_abs_v = summary.max_abs_v.max(s.max_abs_v());
                summary.min_density = summary.min_density.min(s.min_density());
            }
            Err(e) => {
                error = Some(e.to_string());
                break;
            }
        }
    }
    records.push(DiagnosticsRecord::compute(&s, st.wave(), records.last())?);
    let checks = vec![
        Check::new(
            "steps completed",
            summary.steps == exp.run.steps,
            summary.steps.to_string(),
            exp.run.steps.to_string(),
        ),
        Check::at_most("max |v| over the run", summary.max_abs_v, 1e-10),
        Check::at_most("mass audit residual per step (relative)", summary.max_mass_residual, 1e-12),
    ];
    Ok(StudyOutput {
        checks,
        records,
        error,
        summary: json!({ "steps": summary.steps, "final_time": s.time, "max_abs_v": summary.max_abs_v, "max_mass_residual": summary.max_mass_residual }),
        ..Default::default()
    })
}

/// Diagnostic times: a uniform schedule plus the four check times.
pub fn stability_schedule(t_end: f64, every: f64) -> Vec<f64> {
    let n = (t_end / every).floor() as u64;
    let mut s: Vec<f64> = (0..=n).map(|k| k as f64 * every).collect();
    s.extend(check_times(t_end));
    s.push(t_end);
    s.sort_by(f64::total_cmp);
    s.dedup();
    s
}

fn check_times(t_end: f64) -> [f64; 4] {
    [t_end / 8.0, t_end / 4.0, t_end / 2.0, t_end]
}

/// Long-time run with the sup-error, boundedness and dissipation-tail checks.
pub fn stability(exp: &Experiment, out_dir: Option<&Path>) -> Result<StudyOutput> {
    let c = exp.solver_config()?;
    let mut st = Stepper::new(&c)?;
    let t_end = exp.run.t_end;
    let options = RunOptions {
        schedule: stability_schedule(t_end, exp.run.diag_every),
        checkpoint_every: Some(exp.run.checkpoint_every),
        checkpoint_dir: out_dir.map(|d| d.join("checkpoints")),
        ..Default::default()
    };
    let out = run(&mut st, &options)?;
    let records = out.records;
    let mut checks = vec![Check::new(
        "run reaches t_end without positivity failure",
        out.error.is_none(),
        match &out.error {
            Some(e) => e.to_string(),
            None => format!("t = {}", out.state.time),
        },
        format!("t = {t_end}"),
    )];
    if out.error.is_none() {
        checks.extend(stability_checks(&records, t_end));
    }
    checks.push(Check::at_most("mass audit residual per step (relative)", out.summary.max_mass_residual, 1e-12));
    let s = &out.summary;
    Ok(StudyOutput {
        checks,
        records,
        checkpoints: out.checkpoints.into_iter().map(|(_, p)| p).collect(),
        error: out.error.map(|e| e.to_string()),
        summary: json!({
            "steps": s.steps,
            "final_time": out.state.time,
            "max_mass_residual": s.max_mass_residual,
            "max_momentum_x_residual": s.max_mom_x_residual,
            "max_momentum_y_residual": s.max_mom_y_residual,
            "viscous_y_momentum_transfer": s.viscous_y_transfer,
            "max_abs_v": s.max_abs_v,
            "min_density": s.min_density,
        }),
        ..Default::default()
    })
}

/// Checks on a completed stability series.
pub fn stability_checks(records: &[DiagnosticsRecord], t_end: f64) -> Vec<Check> {
    let at = |t: f64| records.iter().find(|r| r.t == t);
    let mut checks = Vec::new();

    let sup: Vec<Option<f64>> = check_times(t_end).iter().map(|&t| at(t).map(|r| r.sup_fan)).collect();
    let measured =
        sup.iter().map(|v| v.map_or("missing".into(), |v| format!("{v:.4e}"))).collect::<Vec<_>>().join(", ");
    let vals: Vec<f64> = sup.iter().flatten().copied().collect();
    let all_zero = vals.len() == 4 && vals.iter().all(|&v| v == 0.0);
    let decreasing = vals.len() == 4 && vals.windows(2).all(|w| w[1] < w[0]);
    checks.push(Check::new(
        format!("sup-error to fan strictly decreasing at t = {:?}", check_times(t_end)),
        decreasing || all_zero,
        measured,
        "strictly decreasing",
    ));

    let h0 = records.first().map_or(0.0, |r| r.h2_pert);
    let h_max = records.iter().map(|r| r.h2_pert).fold(0.0, f64::max);
    checks.push(Check::new(
        "H^2 perturbation norm stays within twice its initial value",
        h_max <= 2.0 * h0,
        format!("max {h_max:.4e}, initial {h0:.4e}"),
        "max <= 2 x initial",
    ));

    let tail_start = 0.75 * t_end;
    let before = records.iter().rev().find(|r| r.t <= tail_start);
    let end = records.last();
    for (name, get) in [
        ("cum_wgt", (|r: &DiagnosticsRecord| r.cum_wgt) as fn(&DiagnosticsRecord) -> f64),
        ("cum_grad", |r| r.cum_grad),
    ] {
        let (a, b) = (before.map_or(0.0, get), end.map_or(0.0, get));
        let inc = b - a;
        checks.push(Check::new(
            format!("{name} increment over [{tail_start}, {t_end}] within 10% of its total"),
            inc <= 0.1 * b,
            format!("{inc:.4e} of {b:.4e}"),
            "<= 10%",
        ));
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(t: f64, sup_fan: f64, h2: f64, cum: f64) -> DiagnosticsRecord {
        DiagnosticsRecord {
            t,
            l2_pert: 0.0,
            h1_pert: 0.0,
            h2_pert: h2,
            wgt: 0.0,
            grad_diss: 0.0,
            d3: 0.0,
            pot: 0.0,
            sup_fan,
            sup_pert: 0.0,
            cum_wgt: cum,
            cum_grad: cum,
        }
    }

    #[test]
    fn schedule_contains_check_times() {
        let s = stability_schedule(200.0, 0.3);
        for t in [25.0, 50.0, 100.0, 200.0, 0.0] {
            assert!(s.contains(&t));
        }
        assert!(s.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn stability_checks_on_synthetic_series() {
        let good: Vec<_> =
            (0..=8).map(|k| k as f64 * 25.0).map(|t| record(t, 1.0 / (1.0 + t), 1.0, 1.0 - 1.0 / (1.0 + t))).collect();
        assert!(stability_checks(&good, 200.0).iter().all(|c| c.passed));
        let mut bad = good.clone();
        bad[4].sup_fan = 1.0;
        bad[2].h2_pert = 3.0;
        let checks = stability_checks(&bad, 200.0);
        assert!(!checks[0].passed && !checks[1].passed);
        let zero: Vec<_> = (0..=8).map(|k| record(k as f64 * 25.0, 0.0, 0.0, 0.0)).collect();
        assert!(stability_checks(&zero, 200.0).iter().all(|c| c.passed));
    }

    #[test]
    fn log_times_cover_window() {
        let t = log_times(100.0, 1e4, 8);
        assert_eq!(t.len(), 17);
        assert!((t[0] - 100.0).abs() < 1e-12 && (t[16] - 1e4).abs() < 1e-8);
    }
}
