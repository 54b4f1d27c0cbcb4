//! Planar 2-rarefaction waves of the isentropic Euler system and a numerical
//! laboratory for their stability under the 2D compressible Navier–Stokes
//! equations on a strip `[−L, L] × 𝕋`.

// `!(x > 0.0)` guards deliberately reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx_wave;
pub mod burgers;
pub mod diagnostics;
pub mod error;
pub mod euler_waves;
pub mod quadrature;
pub mod solver;

pub use approx_wave::{ApproxWave, WaveProfile, WaveSample};
pub use burgers::{BurgersSample, BurgersWave};
pub use error::{Error, Result};
pub use euler_waves::{rarefaction_fan, Family, GasModel, RiemannData};
