use std::f64::consts::PI;

use rarefaction::diagnostics::{perturbation_fields, sobolev_norms, DiagnosticsRecord};
use rarefaction::solver::{
    checkpoint, run, stable_dt, BcMode, FlowState, Grid, Limiter, PerturbationSpec, RunOptions, SolverConfig, Stepper,
};
use rarefaction::{ApproxWave, GasModel, RiemannData};

fn config(gamma: f64, rho_plus: f64, a: f64) -> SolverConfig {
    let model = GasModel::new(gamma).unwrap();
    SolverConfig {
        model,
        wave: RiemannData::connected(&model, 1.0, 0.0, rho_plus).unwrap(),
        mu: 0.1,
        lam: 0.0,
        lx: 8.0,
        nx: 64,
        ny: 8,
        cfl: 0.5,
        t_end: 1.0,
        bc_mode: BcMode::WaveDirichlet,
        limiter: Limiter::Minmod,
        perturbation: PerturbationSpec::gaussian_sine(a, 1.0, 1),
    }
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn constant_states_are_fixed_points() {
    // wave-dirichlet: ghosts carry the (trivial) wave state
    let c = config(1.4, 1.0, 0.0);
    let mut st = Stepper::new(&c).unwrap();
    let mut s = st.initial_state().unwrap();
    let s0 = s.clone();
    for _ in 0..5 {
        st.step(&mut s).unwrap();
        assert!(
            max_diff(&s.rho, &s0.rho) <= 1e-14 && max_diff(&s.mx, &s0.mx) <= 1e-14 && max_diff(&s.my, &s0.my) <= 1e-14
        );
    }
    // extrapolation with a moving oblique state
    let mut c = config(2.0, 1.0, 0.0);
    c.bc_mode = BcMode::Extrapolation;
    let mut st = Stepper::new(&c).unwrap();
    let mut s = FlowState::uniform(Grid::new(c.nx, c.ny, c.lx), 1.3, 0.4, -0.2);
    let s0 = s.clone();
    let (d, _) = st.rhs(&s).unwrap();
    assert!(d.max_abs() <= 1e-14);
    st.step(&mut s).unwrap();
    assert!(max_diff(&s.rho, &s0.rho) <= 1e-14 && max_diff(&s.mx, &s0.mx) <= 1e-14 && max_diff(&s.my, &s0.my) <= 1e-14);
}

#[test]
fn planar_wave_stays_planar() {
    let mut c = config(1.4, 1.5, 0.0);
    c.nx = 128;
    let mut st = Stepper::new(&c).unwrap();
    let mut s = st.initial_state().unwrap();
    let mut vmax = 0.0f64;
    for _ in 0..1000 {
        st.step(&mut s).unwrap();
        vmax = vmax.max(s.max_abs_v());
    }
    assert!(vmax <= 1e-10, "max |v| = {vmax}");
    // rows stay identical
    let g = s.grid;
    for i in 0..g.nx {
        for j in 1..g.ny {
            assert_eq!(s.rho[g.idx(i, j)], s.rho[g.idx(i, 0)]);
        }
    }
}

#[test]
fn y_shift_commutes_with_steps() {
    let c = config(1.4, 1.3, 0.05);
    let mut st = Stepper::new(&c).unwrap();
    let mut a = st.initial_state().unwrap();
    let mut b = a.shifted_y(3);
    for _ in 0..20 {
        st.step(&mut a).unwrap();
        st.step(&mut b).unwrap();
    }
    let a = a.shifted_y(3);
    assert_eq!(a.rho, b.rho);
    assert_eq!(a.mx, b.mx);
    assert_eq!(a.my, b.my);
}

#[test]
fn mass_audit_holds_every_step() {
    for bc in [BcMode::WaveDirichlet, BcMode::Extrapolation] {
        let mut c = config(1.4, 1.5, 0.05);
        c.bc_mode = bc;
        c.lx = 4.0;
        let mut st = Stepper::new(&c).unwrap();
        let mut s = st.initial_state().unwrap();
        for _ in 0..300 {
            let audit = st.step(&mut s).unwrap();
            assert!(audit.mass_residual <= 1e-12, "{bc:?}: {}", audit.mass_residual);
            assert!(audit.mom_y_residual <= 1e-10, "{bc:?}: {}", audit.mom_y_residual);
        }
    }
}

#[test]
fn stable_dt_formula() {
    let mut c = config(2.0, 1.0, 0.0);
    c.mu = 1e-6;
    c.lx = 1.0;
    c.ny = 16;
    let s = FlowState::uniform(Grid::new(c.nx, c.ny, c.lx), 1.0, 0.0, 0.0);
    let dt = stable_dt(&s, &c);
    assert!((dt - c.cfl * (2.0 / 64.0)).abs() <= 1e-15);

    // viscous regime
    let mut c = config(2.0, 1.0, 0.0);
    c.mu = 10.0;
    c.lx = 1.0;
    c.ny = 4;
    let grid = |nx| Grid::new(nx, c.ny, c.lx);
    let s = FlowState::uniform(grid(64), 1.0, 0.0, 0.0);
    let dt1 = stable_dt(&s, &c);
    let h = 2.0 / 64.0;
    assert!((dt1 - c.cfl * 0.25 * h * h / 20.0).abs() <= 1e-15 * dt1);
    let mut c2 = c.clone();
    c2.mu = 20.0;
    assert!((stable_dt(&s, &c2) - 0.5 * dt1).abs() <= 1e-15 * dt1);
    let mut c3 = c.clone();
    c3.nx = 128;
    let s3 = FlowState::uniform(grid(128), 1.0, 0.0, 0.0);
    assert!((stable_dt(&s3, &c3) - 0.25 * dt1).abs() <= 1e-15 * dt1);
}

struct Manufactured {
    a: f64,
    b: f64,
    c: f64,
    e: f64,
}

impl Manufactured {
    /// Exact right-hand side of the γ = 2 system for
    /// `ρ = 1 + a sin x + b cos 2πy`, `u = c cos x`, `v = e sin 2πy`.
    fn rhs(&self, mu: f64, lam: f64, x: f64, y: f64) -> ([f64; 3], [f64; 3]) {
        let k = 2.0 * PI;
        let rho = 1.0 + self.a * x.sin() + self.b * (k * y).cos();
        let (u, v) = (self.c * x.cos(), self.e * (k * y).sin());
        let (rx, ry) = (self.a * x.cos(), -k * self.b * (k * y).sin());
        let (ux, uxx) = (-self.c * x.sin(), -self.c * x.cos());
        let (vy, vyy) = (k * self.e * (k * y).cos(), -k * k * self.e * (k * y).sin());
        let mass = -(rx * u + rho * ux) - (ry * v + rho * vy);
        let flux_xx = rx * u * u + 2.0 * rho * u * ux + rho * rx;
        let flux_xy = ry * u * v + rho * u * vy;
        let mom_x = -flux_xx - flux_xy + (2.0 * mu + lam) * uxx;
        let flux_yx = rx * u * v + rho * ux * v;
        let flux_yy = ry * v * v + 2.0 * rho * v * vy + rho * ry;
        let mom_y = -flux_yx - flux_yy + (2.0 * mu + lam) * vyy;
        ([rho, rho * u, rho * v], [mass, mom_x, mom_y])
    }
}

#[test]
fn manufactured_rhs_is_second_order() {
    let m = Manufactured { a: 0.2, b: 0.1, c: 0.3, e: 0.15 };
    let (mu, lam) = (0.1, 0.05);
    let mut errs = Vec::new();
    for nx in [64usize, 128, 256] {
        let mut c = config(2.0, 1.0, 0.0);
        c.lx = 3.0;
        c.nx = nx;
        c.ny = nx / 2;
        c.mu = mu;
        c.lam = lam;
        c.limiter = Limiter::None;
        c.bc_mode = BcMode::Extrapolation;
        let g = Grid::new(c.nx, c.ny, c.lx);
        let mut s = FlowState::uniform(g, 1.0, 0.0, 0.0);
        let mut exact = vec![[0.0; 3]; g.cells()];
        for i in 0..g.nx {
            for j in 0..g.ny {
                let k = g.idx(i, j);
                let (u, r) = m.rhs(mu, lam, g.x(i as isize), g.y(j));
                s.rho[k] = u[0];
                s.mx[k] = u[1];
                s.my[k] = u[2];
                exact[k] = r;
            }
        }
        let mut st = Stepper::new(&c).unwrap();
        let (d, _) = st.rhs(&s).unwrap();
        let mut err = 0.0f64;
        for i in 0..g.nx {
            if g.x(i as isize).abs() > 1.5 {
                continue;
            }
            for j in 0..g.ny {
                let k = g.idx(i, j);
                err = err
                    .max((d.rho[k] - exact[k][0]).abs())
                    .max((d.mx[k] - exact[k][1]).abs())
                    .max((d.my[k] - exact[k][2]).abs());
            }
        }
        errs.push(err);
    }
    for w in errs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order >= 1.8, "order {order}, errors {errs:?}");
    }
}

fn restrict(fine: &[f64], nx: usize, ny: usize) -> Vec<f64> {
    // 2×2 average onto the grid with half the cells per direction
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

#[test]
fn self_convergence_on_smooth_data() {
    let solve = |nx: usize| {
        let mut c = config(1.4, 1.2, 0.05);
        c.lx = 4.0;
        c.nx = nx;
        c.ny = nx / 8;
        c.t_end = 0.25;
        c.bc_mode = BcMode::Extrapolation;
        let mut st = Stepper::new(&c).unwrap();
        let out = run(&mut st, &RunOptions::default()).unwrap();
        assert!(out.succeeded());
        out.state
    };
    let states: Vec<FlowState> = [64, 128, 256].iter().map(|&n| solve(n)).collect();
    let l1 = |coarse: &FlowState, fine: &FlowState| {
        let g = fine.grid;
        let area = coarse.grid.cell_area();
        [(&coarse.rho, &fine.rho), (&coarse.mx, &fine.mx), (&coarse.my, &fine.my)]
            .iter()
            .map(|(c, f)| c.iter().zip(restrict(f, g.nx, g.ny)).map(|(a, b)| (a - b).abs()).sum::<f64>() * area)
            .sum::<f64>()
    };
    let e1 = l1(&states[0], &states[1]);
    let e2 = l1(&states[1], &states[2]);
    let order = (e1 / e2).log2();
    assert!(order >= 1.5, "observed order {order} ({e1:e}, {e2:e})");
}

#[test]
fn more_viscosity_smooths_faster() {
    let h1_at = |mu: f64| {
        let mut c = config(1.4, 1.2, 0.02);
        c.mu = mu;
        c.nx = 128;
        c.ny = 16;
        c.t_end = 2.0;
        let mut st = Stepper::new(&c).unwrap();
        let out = run(&mut st, &RunOptions::default()).unwrap();
        let f = perturbation_fields(&out.state, st.wave()).unwrap();
        sobolev_norms(&[&f.phi, &f.varphi, &f.psi], &f.grid).unwrap().h1
    };
    // below the overdamped acoustic regime of the k = 1 mode
    let (lo, hi) = (h1_at(0.01), h1_at(0.1));
    assert!(hi < lo, "{hi} !< {lo}");
}

#[test]
fn zero_horizon_emits_initial_diagnostics_only() {
    let mut c = config(1.4, 1.2, 0.02);
    c.t_end = 0.0;
    let mut st = Stepper::new(&c).unwrap();
    let out = run(&mut st, &RunOptions { schedule: vec![0.0, 1.0], ..Default::default() }).unwrap();
    assert_eq!(out.records.len(), 1);
    assert_eq!(out.records[0].t, 0.0);
    assert_eq!(out.summary.steps, 0);
}

#[test]
fn schedule_times_are_hit_exactly() {
    let mut c = config(1.4, 1.2, 0.02);
    c.t_end = 0.5;
    let mut st = Stepper::new(&c).unwrap();
    let schedule = vec![0.0, 0.1, 0.3, 0.5];
    let out = run(&mut st, &RunOptions { schedule: schedule.clone(), ..Default::default() }).unwrap();
    let times: Vec<f64> = out.records.iter().map(|r| r.t).collect();
    assert_eq!(times, schedule);
    for w in out.records.windows(2) {
        assert!(w[1].cum_wgt >= w[0].cum_wgt && w[1].cum_grad >= w[0].cum_grad);
    }
    assert!(out.summary.max_mass_residual <= 1e-12);
}

#[test]
fn restart_continues_bit_identically() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = config(1.4, 1.2, 0.02);
    c.t_end = 0.6;
    let schedule: Vec<f64> = (0..=6).map(|k| k as f64 / 10.0).collect();
    let mut st = Stepper::new(&c).unwrap();
    let full = run(
        &mut st,
        &RunOptions {
            schedule: schedule.clone(),
            checkpoint_every: Some(0.3),
            checkpoint_dir: Some(dir.path().to_path_buf()),
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(full.checkpoints.len(), 2);
    let (t_mid, path) = full.checkpoints[0].clone();
    assert_eq!(t_mid, 0.3);
    let mid = checkpoint::read(&path).unwrap();
    assert_eq!(mid.time, 0.3);

    let dir2 = tempfile::tempdir().unwrap();
    let prior: Vec<DiagnosticsRecord> = full.records.iter().filter(|r| r.t <= t_mid).copied().collect();
    let mut st = Stepper::new(&c).unwrap();
    let resumed = run(
        &mut st,
        &RunOptions {
            schedule,
            checkpoint_every: Some(0.3),
            checkpoint_dir: Some(dir2.path().to_path_buf()),
            restart: Some(mid),
            prior_records: prior,
        },
    )
    .unwrap();
    let rows = |r: &[DiagnosticsRecord]| r.iter().map(DiagnosticsRecord::csv_row).collect::<Vec<_>>();
    assert_eq!(full.records.len(), 7);
    assert_eq!(rows(&resumed.records), rows(&full.records));
    assert_eq!(resumed.state, full.state);
    let a = std::fs::read(&full.checkpoints[1].1).unwrap();
    let b = std::fs::read(&resumed.checkpoints[0].1).unwrap();
    assert_eq!(a, b);
}

#[test]
fn initial_data_matches_wave_and_stays_positive() {
    let c = config(1.4, 1.5, 0.01);
    let wave = ApproxWave::new(c.model, c.wave).unwrap();
    let s = FlowState::initialize(&c, &wave).unwrap();
    let g = s.grid;
    let mut min_rho = f64::INFINITY;
    for i in 0..g.nx {
        let x = g.x(i as isize);
        let bg = wave.evaluate(0.0, x).unwrap();
        for j in 0..g.ny {
            let k = g.idx(i, j);
            let env = 0.01 * (-x * x).exp();
            let arg = 2.0 * PI * g.y(j);
            let rho = bg.rho + env * arg.cos();
            assert!((s.rho[k] - rho).abs() < 1e-15);
            assert!((s.mx[k] - rho * (bg.u + env * arg.cos())).abs() < 1e-15);
            assert!((s.my[k] - rho * env * arg.sin()).abs() < 1e-15);
            min_rho = min_rho.min(rho);
        }
    }
    assert!(min_rho > 0.0 && s.min_density() == min_rho);

    let mut c = config(1.4, 1.5, -2.0);
    c.nx = 65;
    assert!(matches!(Stepper::new(&c).unwrap().initial_state(), Err(rarefaction::Error::Config(_))));
}

#[test]
fn rejects_bad_viscosity_and_grid_mismatch() {
    let mut c = config(1.4, 1.5, 0.0);
    c.mu = -1.0;
    let msg = Stepper::new(&c).unwrap_err().to_string();
    assert!(msg.contains("viscosity"), "{msg}");
    let c = config(1.4, 1.5, 0.0);
    let mut st = Stepper::new(&c).unwrap();
    let mut s = FlowState::uniform(Grid::new(8, 8, 1.0), 1.0, 0.0, 0.0);
    assert!(matches!(st.step(&mut s), Err(rarefaction::Error::Contract(_))));
}
