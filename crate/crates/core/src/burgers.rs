//! Inviscid Burgers rarefaction: the centered fan and the smooth solution
//! issued from `w₀(x) = m + d·tanh x`, evaluated by characteristics.
//!
//! Along the characteristic from foot point `x₀` the solution is constant,
//! `w(t, x₀ + t·w₀(x₀)) = w₀(x₀)`. With `D = 1 + t·w₀′(x₀)` implicit
//! differentiation gives
//!
//! ```text
//! w_x   = w₀′ / D
//! w_xx  = w₀″ / D³
//! w_xxx = w₀‴ / D⁴ − 3t·(w₀″)² / D⁵
//! ```
//!
//! Norms and sup-distances are computed in foot-point coordinates, where the
//! integrands are smooth and `dx = D·dx₀`.

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::quadrature;

/// Default relative tolerance of the foot-point solve.
pub const ROOT_TOL: f64 = 1e-15;

/// Half-width of the foot-point window used by norms; `sech²(40) ≈ 7e−35`.
pub const FOOT_WINDOW: f64 = 40.0;

/// Value and x-derivatives of the smooth Burgers solution at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurgersSample {
    pub w: f64,
    pub w_x: f64,
    pub w_xx: f64,
    pub w_xxx: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurgersWave {
    w_minus: f64,
    w_plus: f64,
}

/// `(tanh x, sech² x)` without cancellation for large `|x|`.
#[inline]
fn tanh_sech2(x: f64) -> (f64, f64) {
    let e = (-2.0 * x.abs()).exp();
    let th = (1.0 - e) / (1.0 + e);
    let s2 = 4.0 * e / ((1.0 + e) * (1.0 + e));
    (th.copysign(x), s2)
}

impl BurgersWave {
    pub fn new(w_minus: f64, w_plus: f64) -> Result<Self> {
        if !(w_minus.is_finite() && w_plus.is_finite() && w_minus < w_plus) {
            return domain(format!("Burgers wave needs w- < w+, got ({w_minus}, {w_plus})"));
        }
        Ok(Self { w_minus, w_plus })
    }

    pub fn w_minus(&self) -> f64 {
        self.w_minus
    }

    pub fn w_plus(&self) -> f64 {
        self.w_plus
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.w_plus + self.w_minus)
    }

    pub fn half_gap(&self) -> f64 {
        0.5 * (self.w_plus - self.w_minus)
    }

    pub fn gap(&self) -> f64 {
        self.w_plus - self.w_minus
    }

    /// `w₀` and its first three derivatives.
    pub fn initial(&self, x: f64) -> BurgersSample {
        let d = self.half_gap();
        let (th, s2) = tanh_sech2(x);
        BurgersSample {
            w: self.midpoint() + d * th,
            w_x: d * s2,
            w_xx: -2.0 * d * s2 * th,
            w_xxx: 2.0 * d * s2 * (2.0 * th * th - s2),
        }
    }

    /// Centered rarefaction fan `wʳ(x/t)`.
    pub fn fan(&self, t: f64, x: f64) -> Result<f64> {
        if !(t > 0.0) {
            return domain(format!("fan needs t > 0, got {t}"));
        }
        Ok(self.fan_xi(x / t))
    }

    #[inline]
    pub(crate) fn fan_xi(&self, xi: f64) -> f64 {
        xi.clamp(self.w_minus, self.w_plus)
    }

    /// Position reached at time `t` by the characteristic from `x0`, and the
    /// solution sample carried there.
    pub fn along_characteristic(&self, t: f64, x0: f64) -> (f64, BurgersSample) {
        let init = self.initial(x0);
        (x0 + t * init.w, Self::transport(t, &init))
    }

    fn transport(t: f64, init: &BurgersSample) -> BurgersSample {
        let jac = 1.0 + t * init.w_x;
        let j2 = jac * jac;
        let j3 = j2 * jac;
        let j4 = j2 * j2;
        BurgersSample {
            w: init.w,
            w_x: init.w_x / jac,
            w_xx: init.w_xx / j3,
            w_xxx: init.w_xxx / j4 - 3.0 * t * init.w_xx * init.w_xx / (j4 * jac),
        }
    }

    /// Solves `x₀ + t·w₀(x₀) = x` by Newton's method safeguarded with
    /// bisection on `[x − t·w₊, x − t·w₋]`.
    pub fn foot_point(&self, t: f64, x: f64, tol: f64) -> Result<f64> {
        if !(tol > 0.0) {
            return domain(format!("root tolerance must be positive, got {tol}"));
        }
        if !(t >= 0.0) || !t.is_finite() || !x.is_finite() {
            return domain(format!("foot point needs finite x and t >= 0, got t = {t}, x = {x}"));
        }
        if t == 0.0 {
            return Ok(x);
        }
        let mut lo = x - t * self.w_plus;
        let mut hi = x - t * self.w_minus;
        let (m, d) = (self.midpoint(), self.half_gap());
        // Inside the fan w ≈ x/t, which pins tanh x₀.
        let mut x0 = if t > 1.0 {
            let s = ((x / t - m) / d).clamp(-1.0 + 1e-12, 1.0 - 1e-12);
            (s.atanh()).clamp(lo, hi)
        } else {
            (x - t * m).clamp(lo, hi)
        };
        for _ in 0..400 {
            let init = self.initial(x0);
            let f = x0 + t * init.w - x;
            if f == 0.0 {
                return Ok(x0);
            }
            if f < 0.0 {
                lo = x0;
            } else {
                hi = x0;
            }
            let newton = x0 - f / (1.0 + t * init.w_x);
            let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            let scale = 1.0 + next.abs();
            if (next - x0).abs() <= tol * scale || hi - lo <= tol * scale {
                return Ok(next);
            }
            x0 = next;
        }
        Err(Error::Internal(format!("foot point solve did not converge at t = {t}, x = {x}")))
    }

    /// Smooth solution and its x-derivatives at `(t, x)`.
    pub fn evaluate(&self, t: f64, x: f64, tol: f64) -> Result<BurgersSample> {
        let x0 = self.foot_point(t, x, tol)?;
        Ok(Self::transport(t, &self.initial(x0)))
    }

    pub fn evaluate_many(&self, t: f64, xs: &[f64], tol: f64) -> Result<Vec<BurgersSample>> {
        xs.par_iter().map(|&x| self.evaluate(t, x, tol)).collect()
    }

    /// `‖∂ₓ^order w(t, ·)‖_{L^p}` for `order ∈ {1, 2, 3}`, `p ∈ [1, ∞]`.
    pub fn lp_norm_of_derivative(&self, t: f64, order: u8, p: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return domain(format!("norm needs t >= 0, got {t}"));
        }
        let pick = derivative_picker(order)?;
        foot_lp_norm(p, |x0| {
            let init = self.initial(x0);
            let s = Self::transport(t, &init);
            (pick(&s).abs(), 1.0 + t * init.w_x)
        })
    }

    /// `sup_x |w(t, x) − wʳ(x/t)|`.
    pub fn sup_distance_to_fan(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return domain(format!("fan distance needs t > 0, got {t}"));
        }
        let (_, v) = quadrature::refined_max(
            |x0| {
                let (x, s) = self.along_characteristic(t, x0);
                (s.w - self.fan_xi(x / t)).abs()
            },
            -FOOT_WINDOW,
            FOOT_WINDOW,
            8001,
            1e-12,
        );
        Ok(v)
    }
}

pub(crate) fn derivative_picker(order: u8) -> Result<fn(&BurgersSample) -> f64> {
    Ok(match order {
        1 => |s| s.w_x,
        2 => |s| s.w_xx,
        3 => |s| s.w_xxx,
        _ => return domain(format!("derivative order must be 1, 2 or 3, got {order}")),
    })
}

/// `L^p` norm over x of a quantity given in foot-point coordinates as
/// `x₀ ↦ (|g|, dx/dx₀)`.
pub(crate) fn foot_lp_norm<F>(p: f64, g: F) -> Result<f64>
where
    F: Fn(f64) -> (f64, f64),
{
    if !(p >= 1.0) {
        return domain(format!("L^p exponent must satisfy p >= 1, got {p}"));
    }
    if p.is_infinite() {
        let (_, v) = quadrature::refined_max(|x0| g(x0).0, -FOOT_WINDOW, FOOT_WINDOW, 8001, 1e-10);
        return Ok(v);
    }
    let integral = quadrature::integrate(
        |x0| {
            let (v, jac) = g(x0);
            v.powf(p) * jac
        },
        -FOOT_WINDOW,
        FOOT_WINDOW,
        80,
        0.0,
        1e-12,
    );
    Ok(integral.powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> BurgersWave {
        BurgersWave::new(-1.0, 1.0).unwrap()
    }

    #[test]
    fn fan_examples() {
        assert_eq!(unit().fan(2.0, 1.0).unwrap(), 0.5);
        assert_eq!(unit().fan(1.0, -3.0).unwrap(), -1.0);
        assert_eq!(BurgersWave::new(0.0, 2.0).unwrap().fan(1.0, 5.0).unwrap(), 2.0);
        assert!(unit().fan(0.0, 1.0).is_err());
    }

    #[test]
    fn degenerate_wave_rejected() {
        assert!(BurgersWave::new(1.0, 1.0).is_err());
        assert!(BurgersWave::new(2.0, 1.0).is_err());
    }

    #[test]
    fn origin_is_fixed_for_symmetric_wave() {
        for t in [0.0, 0.5, 3.0, 1e3, 1e4] {
            let s = unit().evaluate(t, 0.0, ROOT_TOL).unwrap();
            assert!(s.w.abs() < 1e-14, "t = {t}: {}", s.w);
        }
    }

    #[test]
    fn time_zero_is_initial_data() {
        let wave = BurgersWave::new(0.3, 1.7).unwrap();
        for x in [-5.0, -0.2, 0.0, 1.1, 9.0] {
            let s = wave.evaluate(0.0, x, ROOT_TOL).unwrap();
            let i = wave.initial(x);
            assert_eq!(s.w, i.w);
            assert_eq!(s.w_x, i.w_x);
        }
    }

    #[test]
    fn tolerance_must_be_positive() {
        assert!(matches!(unit().evaluate(1.0, 0.0, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn foot_point_matches_bisection_oracle() {
        let wave = BurgersWave::new(0.0, 1.0).unwrap();
        // independent bisection of x0 + w0(x0) = 1 on [0, 1]
        let g = |x0: f64| x0 + 0.5 + 0.5 * x0.tanh() - 1.0;
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        while hi - lo > 1e-14 {
            let mid = 0.5 * (lo + hi);
            if g(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let oracle = 0.5 + 0.5 * (0.5 * (lo + hi)).tanh();
        let s = wave.evaluate(1.0, 1.0, ROOT_TOL).unwrap();
        assert!((s.w - oracle).abs() < 1e-12);
    }

    #[test]
    fn far_field_saturates() {
        let s = unit().evaluate(1e4, 5e5, ROOT_TOL).unwrap();
        assert!((s.w - 1.0).abs() < 1e-15);
        let s = unit().evaluate(1e4, -5e5, ROOT_TOL).unwrap();
        assert!((s.w + 1.0).abs() < 1e-15);
    }

    #[test]
    fn total_variation_and_initial_peak() {
        let wave = BurgersWave::new(-0.4, 2.1).unwrap();
        for t in [0.0, 1.0, 50.0] {
            let tv = wave.lp_norm_of_derivative(t, 1, 1.0).unwrap();
            assert!((tv - wave.gap()).abs() < 1e-11, "t = {t}: {tv}");
        }
        let peak = wave.lp_norm_of_derivative(0.0, 1, f64::INFINITY).unwrap();
        assert!((peak - wave.half_gap()).abs() < 1e-12);
        assert!(wave.lp_norm_of_derivative(1.0, 1, 0.5).is_err());
        assert!(wave.lp_norm_of_derivative(1.0, 4, 2.0).is_err());
    }
}
