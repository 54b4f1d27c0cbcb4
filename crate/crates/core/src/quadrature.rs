//! Adaptive Gauss–Kronrod (7/15) quadrature on finite intervals.

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (k, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        // Gauss nodes are the odd-indexed Kronrod nodes.
        if k % 2 == 1 {
            gauss += WG[k / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrates `f` over `[a, b]`, starting from `panels` equal sub-intervals and
/// bisecting any interval whose error estimate exceeds its share of
/// `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize, abs_tol: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let mut stack: Vec<(f64, f64, f64, f64)> = (0..panels)
        .map(|k| {
            let lo = a + k as f64 * h;
            let hi = if k + 1 == panels { b } else { lo + h };
            let (v, e) = gk15(&f, lo, hi);
            (lo, hi, v, e)
        })
        .collect();
    let mut total: f64 = stack.iter().map(|s| s.2).sum();
    let width = (b - a).abs();
    let mut done = 0.0;
    let mut budget = 200_000usize;
    while let Some((lo, hi, v, e)) = stack.pop() {
        let tol = abs_tol.max(rel_tol * total.abs());
        let share = tol * (hi - lo).abs() / width;
        if e <= share || budget == 0 || (hi - lo).abs() < 1e-14 * width {
            done += v;
            continue;
        }
        budget -= 1;
        let mid = 0.5 * (lo + hi);
        let left = gk15(&f, lo, mid);
        let right = gk15(&f, mid, hi);
        total += left.0 + right.0 - v;
        stack.push((lo, mid, left.0, left.1));
        stack.push((mid, hi, right.0, right.1));
    }
    done
}

/// Maximum of `f` on `[a, b]`: a uniform scan followed by repeated zooming
/// around the best sample until the maximum changes by less than
/// `rel_tol` relative.
pub fn refined_max<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, samples: usize, rel_tol: f64) -> (f64, f64) {
    let n = samples.max(3);
    let scan = |lo: f64, hi: f64, n: usize| -> (f64, f64) {
        let h = (hi - lo) / (n - 1) as f64;
        let mut best = (lo, f64::NEG_INFINITY);
        for k in 0..n {
            let x = lo + k as f64 * h;
            let v = f(x);
            if v > best.1 {
                best = (x, v);
            }
        }
        best
    };
    let (mut x, mut best) = scan(a, b, n);
    let mut h = (b - a) / (n - 1) as f64;
    for _ in 0..60 {
        let lo = (x - h).max(a);
        let hi = (x + h).min(b);
        let m = 21;
        let (x2, v2) = scan(lo, hi, m);
        let change = v2 - best;
        if v2 > best {
            best = v2;
            x = x2;
        }
        h = (hi - lo) / (m - 1) as f64;
        if change.abs() <= rel_tol * best.abs().max(f64::MIN_POSITIVE) && h < 1e-6 * (b - a).abs() {
            break;
        }
    }
    (x, best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = integrate(|x| x.powi(7) - 3.0 * x * x, -1.0, 2.0, 1, 1e-14, 1e-14);
        let exact = (256.0 - 1.0) / 8.0 - (8.0 + 1.0);
        assert!((v - exact).abs() < 1e-12);
    }

    #[test]
    fn peaked_integrand() {
        let v = integrate(|x| 1.0 / (1.0 + 1e4 * x * x), -1.0, 1.0, 4, 1e-13, 1e-13);
        let exact = 2.0 * (100.0f64).atan() / 100.0;
        assert!((v - exact).abs() < 1e-12, "{v} vs {exact}");
    }

    #[test]
    fn max_of_kinked_function() {
        let (x, v) = refined_max(|x| 1.0 - (x - 0.123456789).abs(), -3.0, 3.0, 101, 1e-14);
        assert!((x - 0.123456789).abs() < 1e-9);
        assert!((v - 1.0).abs() < 1e-9);
    }
}
