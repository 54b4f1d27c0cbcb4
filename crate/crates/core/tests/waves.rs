use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rarefaction::{rarefaction_fan, ApproxWave, BurgersWave, Family, GasModel, RiemannData};

/// `∫_a^b s^((γ−3)/2) ds` by composite Simpson in `τ = ln s`, where the
/// integrand `e^{τ(γ−1)/2}` is entire.
fn invariant_integral(gamma: f64, a: f64, b: f64) -> f64 {
    let (ta, tb) = (a.ln(), b.ln());
    let n = 4000;
    let h = (tb - ta) / n as f64;
    let f = |t: f64| (0.5 * (gamma - 1.0) * t).exp();
    let mut acc = f(ta) + f(tb);
    for k in 1..n {
        acc += f(ta + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

fn bisect_foot(b: &BurgersWave, t: f64, x: f64) -> f64 {
    let (mut lo, mut hi) = (x - t * b.w_plus(), x - t * b.w_minus());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let w0 = b.midpoint() + b.half_gap() * mid.tanh();
        if mid + t * w0 < x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn connection_matches_quadrature_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let gamma = 1.0 + 2.0 * rng.gen::<f64>().max(1e-3);
        let m = GasModel::new(gamma).unwrap();
        let (rm, rp) = (rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0));
        let um = rng.gen_range(-3.0..3.0);
        let up = m.connect_end_states(rm, um, rp).unwrap();
        let oracle = um + invariant_integral(gamma, rm, rp);
        assert!((up - oracle).abs() <= 1e-10 * (1.0 + oracle.abs()), "gamma {gamma}: {up} vs {oracle}");
    }
}

#[test]
fn fan_round_trips_states_on_the_wave_curve() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for gamma in [1.0, 1.4, 2.0, 3.0] {
        let m = GasModel::new(gamma).unwrap();
        for _ in 0..200 {
            let rm = rng.gen_range(0.2..2.0);
            let rp = rm * rng.gen_range(1.01..5.0);
            let um = rng.gen_range(-1.0..1.0);
            let data = RiemannData::connected(&m, rm, um, rp).unwrap();
            let rho = rng.gen_range(rm..rp);
            let u = m.connect_end_states(rm, um, rho).unwrap();
            let xi = m.lambda(Family::Second, rho, u).unwrap();
            let (r2, u2) = rarefaction_fan(&m, &data, xi).unwrap();
            assert!((r2 - rho).abs() <= 1e-10 * rho && (u2 - u).abs() <= 1e-10 * (1.0 + u.abs()));
        }
    }
}

proptest! {
    #[test]
    fn fan_keeps_invariant_and_speed(
        gamma in 1.0f64..3.0,
        rm in 0.1f64..5.0,
        ratio in 1.05f64..6.0,
        um in -2.0f64..2.0,
        s in 0.0f64..=1.0,
    ) {
        let m = GasModel::new(gamma).unwrap();
        let data = RiemannData::connected(&m, rm, um, rm * ratio).unwrap();
        prop_assert!(data.valid);
        let xi = data.w_minus + s * (data.w_plus - data.w_minus);
        let (rho, u) = rarefaction_fan(&m, &data, xi).unwrap();
        let z = m.riemann_invariant(Family::Second, rho, u).unwrap();
        let z0 = m.riemann_invariant(Family::Second, rm, um).unwrap();
        prop_assert!((z - z0).abs() <= 1e-10 * (1.0 + z0.abs()));
        prop_assert!((m.lambda(Family::Second, rho, u).unwrap() - xi).abs() <= 1e-10 * (1.0 + xi.abs()));
        let gap = m.lambda(Family::Second, rho, u).unwrap() - m.lambda(Family::First, rho, u).unwrap();
        prop_assert!((gap - 2.0 * m.sound_speed(rho)).abs() <= 1e-12 * gap);
    }

    #[test]
    fn fan_is_monotone(gamma in 1.0f64..3.0, a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let m = GasModel::new(gamma).unwrap();
        let data = RiemannData::connected(&m, 1.0, 0.0, 2.5).unwrap();
        let (lo, hi) = (a.min(b), a.max(b));
        let at = |s: f64| rarefaction_fan(&m, &data, data.w_minus - 1.0 + s * (data.w_plus - data.w_minus + 2.0)).unwrap();
        let (p, q) = (at(lo), at(hi));
        prop_assert!(p.0 <= q.0 && p.1 <= q.1);
    }

    #[test]
    fn invariant_differences_antisymmetric(gamma in 1.0f64..3.0, r1 in 0.1f64..10.0, r2 in 0.1f64..10.0, u in -5.0f64..5.0) {
        let m = GasModel::new(gamma).unwrap();
        let z = |r| m.riemann_invariant(Family::Second, r, u).unwrap();
        prop_assert_eq!(z(r2) - z(r1), -(z(r1) - z(r2)));
    }

    #[test]
    fn burgers_stays_inside_and_increasing(t in 0.0f64..500.0, x in -600.0f64..600.0, wm in -3.0f64..1.0, gap in 0.1f64..4.0) {
        let b = BurgersWave::new(wm, wm + gap).unwrap();
        let s = b.evaluate(t, x, 1e-14).unwrap();
        let ulp = 4.0 * f64::EPSILON * (wm.abs() + gap);
        prop_assert!(s.w >= wm - ulp && s.w <= wm + gap + ulp);
        prop_assert!(s.w_x >= 0.0);
        if (s.w - wm).abs() > 1e-12 && (wm + gap - s.w).abs() > 1e-12 {
            prop_assert!(s.w_x > 0.0);
        }
    }
}

#[test]
fn foot_point_agrees_with_bisection() {
    let b = BurgersWave::new(0.0, 1.0).unwrap();
    let x0 = bisect_foot(&b, 1.0, 1.0);
    let s = b.evaluate(1.0, 1.0, 1e-15).unwrap();
    let w = 0.5 + 0.5 * x0.tanh();
    assert!((s.w - w).abs() < 1e-12);
    let b = BurgersWave::new(-1.0, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..500 {
        let t = rng.gen_range(0.0..1e4);
        let x = rng.gen_range(-1.2..1.2) * (1.0 + t);
        let x0 = bisect_foot(&b, t, x);
        let s = b.evaluate(t, x, 1e-15).unwrap();
        assert!((s.w - x0.tanh()).abs() < 1e-12, "t {t} x {x}");
    }
}

#[test]
fn burgers_derivatives_match_differences_at_second_order() {
    let b = BurgersWave::new(-0.5, 1.5).unwrap();
    for &(t, x) in &[(0.3, 0.2), (2.0, 1.0), (10.0, -3.0), (1.0, 2.5)] {
        let w = |x: f64| b.evaluate(t, x, 1e-15).unwrap();
        let s = w(x);
        let errs: Vec<[f64; 3]> = [2e-2, 1e-2]
            .iter()
            .map(|&h| {
                let (m2, m1, p1, p2) = (w(x - 2.0 * h).w, w(x - h).w, w(x + h).w, w(x + 2.0 * h).w);
                let d1 = (p1 - m1) / (2.0 * h);
                let d2 = (p1 - 2.0 * s.w + m1) / (h * h);
                let d3 = (p2 - 2.0 * p1 + 2.0 * m1 - m2) / (2.0 * h * h * h);
                [(d1 - s.w_x).abs(), (d2 - s.w_xx).abs(), (d3 - s.w_xxx).abs()]
            })
            .collect();
        for (k, (coarse, fine)) in errs[0].iter().zip(errs[1]).enumerate() {
            let ratio = coarse / fine;
            assert!(fine < 1e-6 || (ratio > 3.5 && ratio < 4.5), "t {t} x {x} order {} ratio {ratio}", k + 1);
        }
    }
}

#[test]
fn burgers_pde_residual_is_second_order_in_time() {
    let b = BurgersWave::new(-1.0, 2.0).unwrap();
    let (t, x) = (1.5, 0.7);
    let res = |dt: f64| {
        let s = b.evaluate(t, x, 1e-15).unwrap();
        let wt = (b.evaluate(t + dt, x, 1e-15).unwrap().w - b.evaluate(t - dt, x, 1e-15).unwrap().w) / (2.0 * dt);
        (wt + s.w * s.w_x).abs()
    };
    let (r1, r2) = (res(1e-2), res(5e-3));
    assert!((r1 / r2 - 4.0).abs() < 0.3, "{r1} {r2}");
}

#[test]
fn burgers_fan_distance_decreases() {
    let b = BurgersWave::new(-1.0, 1.0).unwrap();
    let mut prev = f64::INFINITY;
    for k in 0..=10 {
        let d = b.sup_distance_to_fan(2f64.powi(k)).unwrap();
        assert!(d <= prev);
        prev = d;
    }
    assert!(prev <= 0.05 * b.gap());
}

#[test]
fn burgers_l2_norm_matches_midpoint_rule() {
    let b = BurgersWave::new(-1.0, 1.0).unwrap();
    let t = 100.0;
    let v = b.lp_norm_of_derivative(t, 1, 2.0).unwrap();
    let (lo, hi) = (-(1.0 + t) - 60.0, (1.0 + t) + 60.0);
    let n = 400_000;
    let h = (hi - lo) / n as f64;
    let xs: Vec<f64> = (0..n).map(|k| lo + (k as f64 + 0.5) * h).collect();
    let sum: f64 = b.evaluate_many(t, &xs, 1e-15).unwrap().iter().map(|s| s.w_x * s.w_x).sum();
    let oracle = (sum * h).sqrt();
    assert!((v - oracle).abs() <= 1e-8 * oracle, "{v} vs {oracle}");
}

fn waves() -> Vec<ApproxWave> {
    [(1.0, 1.0, 0.0, 2.0), (1.4, 1.0, 0.0, 1.2), (2.0, 1.0, 0.0, 4.0), (3.0, 0.5, -1.0, 2.0)]
        .iter()
        .map(|&(g, rm, um, rp)| {
            let m = GasModel::new(g).unwrap();
            ApproxWave::new(m, RiemannData::connected(&m, rm, um, rp).unwrap()).unwrap()
        })
        .collect()
}

#[test]
fn approximate_wave_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for wave in waves() {
        let (m, d) = (*wave.model(), *wave.data());
        let z0 = m.riemann_invariant(Family::Second, d.rho_minus, d.u_minus).unwrap();
        let b = wave.burgers().unwrap();
        for _ in 0..2000 {
            let t = rng.gen_range(0.0..200.0);
            let x = rng.gen_range(-1.5..1.5) * (d.w_plus.abs().max(d.w_minus.abs()) * (1.0 + t) + 5.0);
            let s = wave.evaluate(t, x).unwrap();
            let z = m.riemann_invariant(Family::Second, s.rho, s.u).unwrap();
            assert!((z - z0).abs() <= 1e-10 * (1.0 + z0.abs()));
            let w = b.evaluate(1.0 + t, x, 1e-15).unwrap().w;
            assert!((m.lambda(Family::Second, s.rho, s.u).unwrap() - w).abs() <= 1e-10 * (1.0 + w.abs()));
            assert!(s.rho >= d.rho_minus * (1.0 - 1e-14) && s.rho <= d.rho_plus * (1.0 + 1e-14));
            assert!(s.u_x >= 0.0);
        }
    }
}

#[test]
fn approximate_wave_derivatives_match_differences() {
    for wave in waves() {
        for &(t, x) in &[(0.0, 0.3), (3.0, 1.0), (20.0, -4.0)] {
            let f = |x: f64| wave.evaluate(t, x).unwrap();
            let s = f(x);
            let fd = |h: f64| {
                let (m2, m1, p1, p2) = (f(x - 2.0 * h), f(x - h), f(x + h), f(x + 2.0 * h));
                [
                    ((p1.rho - m1.rho) / (2.0 * h) - s.rho_x).abs(),
                    ((p1.u - m1.u) / (2.0 * h) - s.u_x).abs(),
                    ((p1.rho - 2.0 * s.rho + m1.rho) / (h * h) - s.rho_xx).abs(),
                    ((p1.u - 2.0 * s.u + m1.u) / (h * h) - s.u_xx).abs(),
                    ((p2.rho - 2.0 * p1.rho + 2.0 * m1.rho - m2.rho) / (2.0 * h * h * h) - s.rho_xxx).abs(),
                    ((p2.u - 2.0 * p1.u + 2.0 * m1.u - m2.u) / (2.0 * h * h * h) - s.u_xxx).abs(),
                ]
            };
            let (a, b) = (fd(2e-2), fd(1e-2));
            for k in 0..6 {
                let ratio = a[k] / b[k];
                assert!(b[k] < 1e-7 || (ratio > 3.5 && ratio < 4.5), "t {t} x {x} k {k}: {ratio}");
            }
        }
    }
}

#[test]
fn residual_of_euler_system_converges() {
    let m = GasModel::new(2.0).unwrap();
    let wave = ApproxWave::new(m, RiemannData::new(&m, 1.0, 0.0, 4.0, 2.0).unwrap()).unwrap();
    let grid: Vec<f64> = (0..801).map(|k| -20.0 + 0.05 * k as f64).collect();
    let levels = [2e-3, 1e-3, 5e-4, 2.5e-4];
    let res: Vec<(f64, f64)> = levels.iter().map(|&dt| wave.euler_residual(1.0, &grid, dt).unwrap()).collect();
    for w in res.windows(2) {
        for (a, b) in [(w[0].0, w[1].0), (w[0].1, w[1].1)] {
            let order = (a / b).log2();
            assert!((order - 2.0).abs() <= 0.2, "order {order}");
        }
    }
    let (rm, rp) = wave.euler_residual(1.0, &grid, 1e-4).unwrap();
    assert!(rm.max(rp) <= 1e-6 * wave.data().alpha);
}
