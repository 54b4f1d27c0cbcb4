//! Discrete Sobolev norms on the strip grid.
//!
//! Derivatives are second-order centered in the interior, periodic in y, and
//! second-order one-sided at the x edges. Higher derivatives are repeated
//! first differences, so third derivatives are `O(Δ²)` only for fields with
//! bounded fourth derivatives.

use crate::error::{domain, Result};
use crate::solver::Grid;

fn require_stencil(grid: &Grid, len: usize) -> Result<()> {
    if grid.nx < 3 || grid.ny < 3 {
        return domain(format!("norms need at least 3 cells per direction, got {} x {}", grid.nx, grid.ny));
    }
    if len != grid.cells() {
        return domain(format!("field has {len} values, grid has {}", grid.cells()));
    }
    Ok(())
}

/// `∂f/∂x`.
pub fn diff_x(f: &[f64], grid: &Grid) -> Vec<f64> {
    let (nx, ny) = (grid.nx, grid.ny);
    let h2 = 2.0 * grid.dx();
    let mut out = vec![0.0; f.len()];
    for j in 0..ny {
        let at = |i: usize| f[i * ny + j];
        out[j] = (-3.0 * at(0) + 4.0 * at(1) - at(2)) / h2;
        for i in 1..nx - 1 {
            out[i * ny + j] = (at(i + 1) - at(i - 1)) / h2;
        }
        let l = nx - 1;
        out[l * ny + j] = (3.0 * at(l) - 4.0 * at(l - 1) + at(l - 2)) / h2;
    }
    out
}

/// `∂f/∂y` with periodic wrap.
pub fn diff_y(f: &[f64], grid: &Grid) -> Vec<f64> {
    let ny = grid.ny;
    let h2 = 2.0 * grid.dy();
    let mut out = vec![0.0; f.len()];
    for (row, dst) in f.chunks_exact(ny).zip(out.chunks_exact_mut(ny)) {
        for j in 0..ny {
            dst[j] = (row[(j + 1) % ny] - row[(j + ny - 1) % ny]) / h2;
        }
    }
    out
}

/// `∫∫ f² dx dy` by the midpoint rule.
pub fn l2_sq(f: &[f64], grid: &Grid) -> f64 {
    f.iter().map(|v| v * v).sum::<f64>() * grid.cell_area()
}

pub fn l2(f: &[f64], grid: &Grid) -> f64 {
    l2_sq(f, grid).sqrt()
}

/// All partial derivatives of `f` of orders 1..=max_order, grouped by order,
/// each multi-index once (e.g. order 2: xx, xy, yy).
pub fn derivatives_by_order(f: &[f64], grid: &Grid, max_order: usize) -> Vec<Vec<Vec<f64>>> {
    let mut orders: Vec<Vec<Vec<f64>>> = Vec::with_capacity(max_order);
    // order k holds ∂x^(k−m) ∂y^m for m = 0..=k
    let mut current = vec![f.to_vec()];
    for _ in 0..max_order {
        let mut next = Vec::with_capacity(current.len() + 1);
        for (m, g) in current.iter().enumerate() {
            next.push(diff_x(g, grid));
            if m + 1 == current.len() {
                next.push(diff_y(g, grid));
            }
        }
        orders.push(next.clone());
        current = next;
    }
    orders
}

/// Squared `L²`, `H¹`, `H²` norms of one field.
pub fn sobolev_sq(f: &[f64], grid: &Grid) -> Result<[f64; 3]> {
    require_stencil(grid, f.len())?;
    let d = derivatives_by_order(f, grid, 2);
    let l2 = l2_sq(f, grid);
    let g1: f64 = d[0].iter().map(|g| l2_sq(g, grid)).sum();
    let g2: f64 = d[1].iter().map(|g| l2_sq(g, grid)).sum();
    Ok([l2, l2 + g1, l2 + g1 + g2])
}

/// `(‖·‖, ‖·‖₁, ‖·‖₂)` of a vector of fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SobolevNorms {
    pub l2: f64,
    pub h1: f64,
    pub h2: f64,
}

pub fn sobolev_norms(fields: &[&[f64]], grid: &Grid) -> Result<SobolevNorms> {
    let mut acc = [0.0; 3];
    for f in fields {
        let s = sobolev_sq(f, grid)?;
        for k in 0..3 {
            acc[k] += s[k];
        }
    }
    Ok(SobolevNorms { l2: acc[0].sqrt(), h1: acc[1].sqrt(), h2: acc[2].sqrt() })
}

/// Right side of the anisotropic sup bound
/// `sup|f| ≤ √2(‖f‖^½‖f_y‖^½ + ‖f_x‖^½‖f_xy‖^½)`, valid for fields with
/// zero mean in y.
pub fn sup_bound(f: &[f64], grid: &Grid) -> Result<f64> {
    require_stencil(grid, f.len())?;
    let fx = diff_x(f, grid);
    let fy = diff_y(f, grid);
    let fxy = diff_y(&fx, grid);
    let r = |a: &[f64], b: &[f64]| (l2(a, grid) * l2(b, grid)).sqrt();
    Ok(std::f64::consts::SQRT_2 * (r(f, &fy) + r(&fx, &fxy)))
}

pub fn sup_abs(f: &[f64]) -> f64 {
    f.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}
