//! The eight acceptance criteria, each returning a one-line measured summary
//! or the reason it failed. Criterion 6 runs the full default stability
//! experiment.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rarefaction::diagnostics::{decay_rate_fit, potential_density, sup_abs, sup_bound};
use rarefaction::quadrature::integrate;
use rarefaction::solver::Grid;
use rarefaction::{rarefaction_fan, ApproxWave, Family, GasModel, RiemannData};
use rarelab::config::{resolve, ConfigFile};
use rarelab::study::{self, Check};
use rarelab::{Experiment, Preset};

pub type Outcome = Result<String, String>;
pub type Criterion = (&'static str, fn() -> Outcome);

fn preset(p: Preset) -> Experiment {
    resolve(&ConfigFile { preset: Some(p), ..Default::default() }).expect("preset resolves")
}

fn all_pass(checks: &[Check]) -> Outcome {
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{}: {} (expected {})", c.name, c.measured, c.expected))
        .collect();
    if failed.is_empty() {
        Ok(format!("{} checks", checks.len()))
    } else {
        Err(failed.join("; "))
    }
}

fn within_budget(start: Instant, budget: Duration, detail: String) -> Outcome {
    let took = start.elapsed();
    if took <= budget {
        Ok(format!("{detail}, {:.1} s", took.as_secs_f64()))
    } else {
        Err(format!("{detail}, but took {:.1} s > {} s", took.as_secs_f64(), budget.as_secs()))
    }
}

pub fn criterion_1() -> Outcome {
    let start = Instant::now();
    let out = study::burgers_decay(&preset(Preset::Lemma21)).map_err(|e| e.to_string())?;
    let slopes: Vec<Check> = out.checks.into_iter().filter(|c| c.name.contains("slope")).collect();
    if slopes.len() != 5 {
        return Err(format!("expected 5 slope checks, found {}", slopes.len()));
    }
    let detail = all_pass(&slopes)?;
    let measured: Vec<String> = slopes.iter().map(|c| c.measured.split(' ').next().unwrap_or("").to_string()).collect();
    within_budget(start, Duration::from_secs(60), format!("{detail}, slopes {}", measured.join(" ")))
}

pub fn criterion_2() -> Outcome {
    let burgers = study::burgers_decay(&preset(Preset::Lemma21)).map_err(|e| e.to_string())?;
    let wave = study::wave_decay(&preset(Preset::Lemma22)).map_err(|e| e.to_string())?;
    let fan: Vec<Check> = burgers.checks.into_iter().chain(wave.checks).filter(|c| c.name.contains("to fan")).collect();
    if fan.len() != 4 {
        return Err(format!("expected 4 fan checks, found {}", fan.len()));
    }
    all_pass(&fan).map(|d| format!("{d}, final distances {} and {}", fan[1].measured, fan[3].measured))
}

pub fn criterion_3() -> Outcome {
    let mut worst = (0.0f64, 0.0f64);
    for gamma in [1.4, 2.0, 3.0] {
        let m = GasModel::new(gamma).map_err(|e| e.to_string())?;
        let data = RiemannData::connected(&m, 1.0, 0.0, 2.0).map_err(|e| e.to_string())?;
        let wave = ApproxWave::new(m, data).map_err(|e| e.to_string())?;
        let e = study::wave_identities(&wave, 100_000, 7 + gamma as u64).map_err(|e| e.to_string())?;
        if e.u > 1e-10 || e.rho > 1e-10 {
            return Err(format!("gamma {gamma}: u error {:.3e}, rho error {:.3e}", e.u, e.rho));
        }
        worst = (worst.0.max(e.u), worst.1.max(e.rho));
    }
    Ok(format!("max relative errors {:.3e} (u_x), {:.3e} (rho_x)", worst.0, worst.1))
}

pub fn criterion_4() -> Outcome {
    let out = study::residual(&preset(Preset::Residual)).map_err(|e| e.to_string())?;
    all_pass(&out.checks).map(|d| format!("{d}, final residual {}", out.checks.last().map_or("?", |c| &c.measured)))
}

pub fn criterion_5() -> Outcome {
    let start = Instant::now();
    let conv = study::convergence(&preset(Preset::Convergence)).map_err(|e| e.to_string())?;
    let plan = study::planarity(&preset(Preset::Planarity)).map_err(|e| e.to_string())?;
    if let Some(e) = plan.error {
        return Err(e);
    }
    let checks: Vec<Check> = conv.checks.into_iter().chain(plan.checks).collect();
    let detail = all_pass(&checks)?;
    let order = checks.iter().find(|c| c.name.contains("order")).map_or(String::new(), |c| c.measured.clone());
    within_budget(start, Duration::from_secs(300), format!("{detail}, order {order}"))
}

pub fn criterion_6() -> Outcome {
    let start = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = study::stability(&preset(Preset::Stability), Some(dir.path())).map_err(|e| e.to_string())?;
    if let Some(e) = out.error {
        return Err(e);
    }
    let detail = all_pass(&out.checks)?;
    within_budget(start, Duration::from_secs(1800), detail)
}

fn smooth_field(rng: &mut ChaCha8Rng, g: &Grid) -> Vec<f64> {
    let terms: Vec<(f64, f64, f64, f64, usize)> = (0..6)
        .map(|_| {
            (
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.5..1.5),
                rng.gen_range(0.5..1.5),
                rng.gen_range(0.0..2.0 * PI),
                rng.gen_range(1..=3),
            )
        })
        .collect();
    let mut f = vec![0.0; g.cells()];
    for i in 0..g.nx {
        let x = g.x(i as isize);
        for j in 0..g.ny {
            f[g.idx(i, j)] = terms
                .iter()
                .map(|&(a, x0, w, ph, m)| {
                    a * (-((x - x0) / w).powi(2)).exp() * (2.0 * PI * m as f64 * g.y(j) + ph).sin()
                })
                .sum();
        }
    }
    f
}

pub fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(70);
    let (m1, m2) = (GasModel::new(1.0).unwrap(), GasModel::new(2.0).unwrap());
    let mut pot_err = 0.0f64;
    for _ in 0..10_000 {
        let (rho, bar): (f64, f64) = (rng.gen_range(0.1..4.0), rng.gen_range(0.1..4.0));
        let e2 = (rho - bar).powi(2) / (2.0 * rho);
        let e1 = (rho / bar).ln() + bar / rho - 1.0;
        pot_err = pot_err.max((potential_density(&m2, rho, bar).unwrap() - e2).abs() / (1.0 + e2));
        pot_err = pot_err.max((potential_density(&m1, rho, bar).unwrap() - e1).abs() / (1.0 + e1));
    }
    if pot_err > 1e-12 {
        return Err(format!("potential closed forms off by {pot_err:.3e}"));
    }
    let mut fit_err = 0.0f64;
    for slope in [-1.0, -0.5, -0.75] {
        let series: Vec<(f64, f64)> =
            (0..40).map(|k| 10f64.powf(k as f64 / 10.0)).map(|t| (t, 2.5 * t.powf(slope))).collect();
        let fit = decay_rate_fit(&series, (1.0, 1e4)).map_err(|e| e.to_string())?;
        fit_err = fit_err.max((fit.slope - slope).abs());
    }
    if fit_err > 0.01 {
        return Err(format!("planted slope recovered to {fit_err:.3e}"));
    }
    let g = Grid::new(160, 64, 5.0);
    let mut ratio = 0.0f64;
    for _ in 0..100 {
        let f = smooth_field(&mut rng, &g);
        ratio = ratio.max(sup_abs(&f) / sup_bound(&f, &g).map_err(|e| e.to_string())?);
    }
    if ratio > 1.05 {
        return Err(format!("sup / bound reached {ratio:.4}"));
    }
    Ok(format!("potential error {pot_err:.2e}, slope error {fit_err:.2e}, max sup/bound {ratio:.3}"))
}

pub fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(80);
    let (mut fan_err, mut conn_err) = (0.0f64, 0.0f64);
    for _ in 0..2000 {
        let gamma = rng.gen_range(1.0..3.0);
        let m = GasModel::new(gamma).unwrap();
        let (rm, um) = (rng.gen_range(0.2..3.0), rng.gen_range(-2.0..2.0));
        let rp = rm * rng.gen_range(1.01..5.0);
        let data = RiemannData::connected(&m, rm, um, rp).map_err(|e| e.to_string())?;
        let rho = rng.gen_range(rm..rp);
        let u = m.connect_end_states(rm, um, rho).map_err(|e| e.to_string())?;
        let (r2, u2) =
            rarefaction_fan(&m, &data, m.lambda(Family::Second, rho, u).unwrap()).map_err(|e| e.to_string())?;
        fan_err = fan_err.max((r2 - rho).abs() / rho).max((u2 - u).abs() / (1.0 + u.abs()));

        let r_any = rng.gen_range(0.1..10.0);
        let oracle = um + integrate(|s| s.powf(0.5 * (gamma - 3.0)), rm, r_any, 16, 1e-14, 1e-14);
        let got = m.connect_end_states(rm, um, r_any).map_err(|e| e.to_string())?;
        conn_err = conn_err.max((got - oracle).abs() / (1.0 + oracle.abs()));
    }
    if fan_err > 1e-10 || conn_err > 1e-10 {
        return Err(format!("fan round trip {fan_err:.3e}, connection vs quadrature {conn_err:.3e}"));
    }
    Ok(format!("fan round trip {fan_err:.2e}, connection vs quadrature {conn_err:.2e}"))
}

pub const CRITERIA: [Criterion; 8] = [
    ("Burgers decay exponents", criterion_1),
    ("profiles approach the fan", criterion_2),
    ("approximate-wave derivative identities", criterion_3),
    ("Euler residual convergence", criterion_4),
    ("solver verification", criterion_5),
    ("long-time stability run", criterion_6),
    ("diagnostics unit suite", criterion_7),
    ("cross-module oracle equivalence", criterion_8),
];

/// Runs one criterion, turning a panic into a failure.
pub fn evaluate(f: fn() -> Outcome) -> Outcome {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()))
}
