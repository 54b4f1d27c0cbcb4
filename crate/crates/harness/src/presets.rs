use std::fmt;
use std::str::FromStr;

use anyhow::anyhow;
use rarefaction::solver::{BcMode, Limiter};
use serde::{Deserialize, Serialize};

use crate::config::*;

/// Named experiment defaults.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    Lemma21,
    Lemma22,
    Residual,
    Convergence,
    Planarity,
    Stability,
}

impl Preset {
    pub const ALL: [Preset; 6] =
        [Preset::Lemma21, Preset::Lemma22, Preset::Residual, Preset::Convergence, Preset::Planarity, Preset::Stability];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Lemma21 => "lemma21",
            Preset::Lemma22 => "lemma22",
            Preset::Residual => "residual",
            Preset::Convergence => "convergence",
            Preset::Planarity => "planarity",
            Preset::Stability => "stability",
        }
    }

    pub fn summary(&self) -> &'static str {
        match self {
            Preset::Lemma21 => "decay exponents of the smooth Burgers profile and its approach to the fan",
            Preset::Lemma22 => "pointwise identities, decay exponents and fan approach of the approximate wave",
            Preset::Residual => "time-discretization convergence of the Euler residual of the approximate wave",
            Preset::Convergence => "solver fixed point, mass audit and self-convergence order",
            Preset::Planarity => "y-independent data stays planar over many steps",
            Preset::Stability => "long-time Navier-Stokes run around a weak wave with a 2D perturbation",
        }
    }

    /// Every key except `wave.u_plus` and `grid.lx`, which are derived.
    pub fn defaults(&self) -> ConfigFile {
        let mut f = ConfigFile {
            preset: Some(*self),
            gas: GasSection { gamma: Some(1.4) },
            viscosity: ViscositySection { mu: Some(0.1), lambda: Some(0.0) },
            wave: WaveSection { rho_minus: Some(1.0), u_minus: Some(0.0), rho_plus: Some(1.2), u_plus: None },
            grid: GridSection { nx: Some(512), ny: Some(32), lx: None },
            perturbation: PerturbationSection {
                shape: Some(ShapeName::GaussianSine),
                amplitude: Some(0.02),
                sigma: Some(1.0),
                mode: Some(1),
                path: None,
            },
            run: RunSection {
                study: Some(Study::Stability),
                t_end: Some(200.0),
                cfl: Some(0.9),
                bc_mode: Some(BcMode::WaveDirichlet),
                limiter: Some(Limiter::Minmod),
                diag_every: Some(0.25),
                checkpoint_every: Some(50.0),
                steps: Some(1000),
                fit_window: Some([100.0, 10_000.0]),
                samples: Some(100_000),
                dt_probe: Some(2e-3),
                seed: Some(20_240_601),
            },
        };
        match self {
            Preset::Stability => {}
            Preset::Lemma21 => {
                // γ = 3 puts the end speeds at w± = ±1
                f.gas.gamma = Some(3.0);
                f.wave = WaveSection { rho_minus: Some(1.0), u_minus: Some(-2.0), rho_plus: Some(2.0), u_plus: None };
                f.run.study = Some(Study::Lemma21);
                f.run.t_end = Some(1024.0);
            }
            Preset::Lemma22 => {
                f.wave.rho_plus = Some(2.0);
                f.run.study = Some(Study::Lemma22);
                f.run.t_end = Some(1024.0);
            }
            Preset::Residual => {
                f.gas.gamma = Some(2.0);
                f.wave.rho_plus = Some(4.0);
                f.grid = GridSection { nx: Some(801), ny: Some(4), lx: Some(20.0) };
                f.run.study = Some(Study::Residual);
                f.run.t_end = Some(1.0);
            }
            Preset::Convergence => {
                f.grid = GridSection { nx: Some(64), ny: Some(8), lx: Some(4.0) };
                f.perturbation.amplitude = Some(0.05);
                f.run.study = Some(Study::Convergence);
                f.run.t_end = Some(0.25);
                f.run.cfl = Some(0.5);
                f.run.bc_mode = Some(BcMode::Extrapolation);
                f.run.checkpoint_every = Some(0.25);
                f.run.diag_every = Some(0.05);
            }
            Preset::Planarity => {
                f.wave.rho_plus = Some(1.5);
                f.grid = GridSection { nx: Some(256), ny: Some(16), lx: None };
                f.perturbation.shape = Some(ShapeName::Zero);
                f.perturbation.amplitude = Some(0.0);
                f.run.study = Some(Study::Planarity);
                f.run.t_end = Some(10.0);
                f.run.diag_every = Some(1.0);
                f.run.checkpoint_every = Some(10.0);
            }
        }
        f
    }
}

impl FromStr for Preset {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        Preset::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Preset::ALL.iter().map(Preset::name).collect();
            anyhow!("unknown preset `{s}` (expected one of {})", names.join(", "))
        })
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
