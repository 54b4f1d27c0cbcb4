//! Experiment configuration: a TOML document with `[gas]`, `[viscosity]`,
//! `[wave]`, `[grid]`, `[perturbation]` and `[run]` sections layered over a
//! preset, resolved into a fully concrete [`Experiment`].

use std::fmt;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use rarefaction::solver::{auto_half_width, BcMode, Limiter, PerturbationShape, PerturbationSpec, SolverConfig};
use rarefaction::{GasModel, RiemannData};
use serde::{Deserialize, Serialize};

use crate::presets::Preset;

/// Which study a configuration drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Study {
    Lemma21,
    Lemma22,
    Residual,
    Convergence,
    Planarity,
    Stability,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeName {
    GaussianSine,
    Zero,
    CustomFile,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasSection {
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViscositySection {
    pub mu: Option<f64>,
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveSection {
    pub rho_minus: Option<f64>,
    pub u_minus: Option<f64>,
    pub rho_plus: Option<f64>,
    /// Derived from the connection condition when absent.
    pub u_plus: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    /// Half-width; chosen from the wave reach when absent.
    pub lx: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationSection {
    pub shape: Option<ShapeName>,
    pub amplitude: Option<f64>,
    pub sigma: Option<f64>,
    pub mode: Option<u32>,
    pub path: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub study: Option<Study>,
    pub t_end: Option<f64>,
    pub cfl: Option<f64>,
    pub bc_mode: Option<BcMode>,
    pub limiter: Option<Limiter>,
    /// Spacing of the diagnostics schedule.
    pub diag_every: Option<f64>,
    pub checkpoint_every: Option<f64>,
    /// Step count of the planarity study.
    pub steps: Option<u64>,
    /// Time window of the decay-rate fits.
    pub fit_window: Option<[f64; 2]>,
    /// Random sample count of the pointwise identity checks.
    pub samples: Option<u64>,
    /// Largest probe step of the residual study; halved three times.
    pub dt_probe: Option<f64>,
    pub seed: Option<u64>,
}

/// Configuration as written by a user: every key optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    /// Preset supplying the defaults; `stability` when absent.
    pub preset: Option<Preset>,
    #[serde(default)]
    pub gas: GasSection,
    #[serde(default)]
    pub viscosity: ViscositySection,
    #[serde(default)]
    pub wave: WaveSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub perturbation: PerturbationSection,
    #[serde(default)]
    pub run: RunSection,
}

macro_rules! overlay {
    ($base:expr, $top:expr; $($sec:ident { $($f:ident),* })*) => {
        $( $( if $top.$sec.$f.is_some() { $base.$sec.$f = $top.$sec.$f.clone(); } )* )*
    };
}

impl ConfigFile {
    /// Keys set in `top` replace those of `self`.
    pub fn overlay(mut self, top: &ConfigFile) -> ConfigFile {
        overlay!(self, top;
            gas { gamma }
            viscosity { mu, lambda }
            wave { rho_minus, u_minus, rho_plus, u_plus }
            grid { nx, ny, lx }
            perturbation { shape, amplitude, sigma, mode, path }
            run { study, t_end, cfl, bc_mode, limiter, diag_every, checkpoint_every, steps, fit_window, samples, dt_probe, seed }
        );
        if top.preset.is_some() {
            self.preset = top.preset;
        }
        self
    }
}

/// Every effective parameter of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Experiment {
    pub preset: Preset,
    pub gas: Gas,
    pub viscosity: Viscosity,
    pub wave: Wave,
    pub grid: GridParams,
    pub perturbation: Perturbation,
    pub run: Run,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Gas {
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Viscosity {
    pub mu: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Wave {
    pub rho_minus: f64,
    pub u_minus: f64,
    pub rho_plus: f64,
    pub u_plus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridParams {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Perturbation {
    pub shape: ShapeName,
    pub amplitude: f64,
    pub sigma: f64,
    pub mode: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Run {
    pub study: Study,
    pub t_end: f64,
    pub cfl: f64,
    pub bc_mode: BcMode,
    pub limiter: Limiter,
    pub diag_every: f64,
    pub checkpoint_every: f64,
    pub steps: u64,
    pub fit_window: [f64; 2],
    pub samples: u64,
    pub dt_probe: f64,
    pub seed: u64,
}

fn need<T: Clone>(v: &Option<T>, key: &str) -> Result<T> {
    v.clone().ok_or_else(|| anyhow!("missing value for `{key}`"))
}

/// Parses configuration text, reporting syntax errors with their line.
pub fn parse_file(text: &str) -> Result<ConfigFile> {
    toml::from_str::<ConfigFile>(text).map_err(|e| {
        let line = e.span().map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1);
        match line {
            Some(l) => anyhow!("config line {l}: {}", e.message()),
            None => anyhow!("config: {}", e.message()),
        }
    })
}

/// Parses and resolves configuration text against its preset.
pub fn parse_config(text: &str) -> Result<Experiment> {
    resolve(&parse_file(text)?)
}

/// Fills every unset key from the preset and validates the result.
pub fn resolve(file: &ConfigFile) -> Result<Experiment> {
    let preset = file.preset.unwrap_or(Preset::Stability);
    let f = preset.defaults().overlay(file);
    let gamma = need(&f.gas.gamma, "gas.gamma")?;
    let model = GasModel::new(gamma).map_err(|e| anyhow!("gas.gamma: {e}"))?;
    let (rho_minus, u_minus, rho_plus) = (
        need(&f.wave.rho_minus, "wave.rho_minus")?,
        need(&f.wave.u_minus, "wave.u_minus")?,
        need(&f.wave.rho_plus, "wave.rho_plus")?,
    );
    let u_plus = match f.wave.u_plus {
        Some(u) => u,
        None => model.connect_end_states(rho_minus, u_minus, rho_plus).map_err(|e| anyhow!("wave: {e}"))?,
    };
    let run = Run {
        study: need(&f.run.study, "run.study")?,
        t_end: need(&f.run.t_end, "run.t_end")?,
        cfl: need(&f.run.cfl, "run.cfl")?,
        bc_mode: need(&f.run.bc_mode, "run.bc_mode")?,
        limiter: need(&f.run.limiter, "run.limiter")?,
        diag_every: need(&f.run.diag_every, "run.diag_every")?,
        checkpoint_every: need(&f.run.checkpoint_every, "run.checkpoint_every")?,
        steps: need(&f.run.steps, "run.steps")?,
        fit_window: need(&f.run.fit_window, "run.fit_window")?,
        samples: need(&f.run.samples, "run.samples")?,
        dt_probe: need(&f.run.dt_probe, "run.dt_probe")?,
        seed: need(&f.run.seed, "run.seed")?,
    };
    let perturbation = Perturbation {
        shape: need(&f.perturbation.shape, "perturbation.shape")?,
        amplitude: need(&f.perturbation.amplitude, "perturbation.amplitude")?,
        sigma: need(&f.perturbation.sigma, "perturbation.sigma")?,
        mode: need(&f.perturbation.mode, "perturbation.mode")?,
        path: f.perturbation.path.clone(),
    };
    let data = RiemannData::new(&model, rho_minus, u_minus, rho_plus, u_plus).map_err(|e| anyhow!("wave: {e}"))?;
    let lx = match f.grid.lx {
        Some(lx) => lx,
        None => auto_half_width(&data, run.t_end, perturbation.sigma),
    };
    let exp = Experiment {
        preset,
        gas: Gas { gamma },
        viscosity: Viscosity {
            mu: need(&f.viscosity.mu, "viscosity.mu")?,
            lambda: need(&f.viscosity.lambda, "viscosity.lambda")?,
        },
        wave: Wave { rho_minus, u_minus, rho_plus, u_plus },
        grid: GridParams { nx: need(&f.grid.nx, "grid.nx")?, ny: need(&f.grid.ny, "grid.ny")?, lx },
        perturbation,
        run,
    };
    exp.validate()?;
    Ok(exp)
}

impl Experiment {
    pub fn model(&self) -> GasModel {
        GasModel::new(self.gas.gamma).expect("gamma validated")
    }

    pub fn riemann_data(&self) -> Result<RiemannData> {
        let w = &self.wave;
        Ok(RiemannData::new(&self.model(), w.rho_minus, w.u_minus, w.rho_plus, w.u_plus)?)
    }

    pub fn perturbation_spec(&self) -> Result<PerturbationSpec> {
        let p = &self.perturbation;
        let shape = match p.shape {
            ShapeName::GaussianSine => PerturbationShape::GaussianSine,
            ShapeName::Zero => PerturbationShape::Zero,
            ShapeName::CustomFile => PerturbationShape::CustomFile {
                path: p.path.clone().context("perturbation.path is required for shape = \"custom-file\"")?,
            },
        };
        Ok(PerturbationSpec { amplitude: p.amplitude, shape, sigma: p.sigma, mode: p.mode })
    }

    pub fn solver_config(&self) -> Result<SolverConfig> {
        let c = SolverConfig {
            model: self.model(),
            wave: self.riemann_data()?,
            mu: self.viscosity.mu,
            lam: self.viscosity.lambda,
            lx: self.grid.lx,
            nx: self.grid.nx,
            ny: self.grid.ny,
            cfl: self.run.cfl,
            t_end: self.run.t_end,
            bc_mode: self.run.bc_mode,
            limiter: self.run.limiter,
            perturbation: self.perturbation_spec()?,
        };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        let data = self.riemann_data()?;
        if !data.is_admissible() {
            bail!(
                "wave: end states ({}, {}) -> ({}, {}) are not connected by a 2-rarefaction wave",
                self.wave.rho_minus,
                self.wave.u_minus,
                self.wave.rho_plus,
                self.wave.u_plus
            );
        }
        self.solver_config()?;
        let r = &self.run;
        if !(r.diag_every > 0.0) || !(r.checkpoint_every > 0.0) {
            bail!("run.diag_every and run.checkpoint_every must be positive");
        }
        if !(r.fit_window[0] > 0.0 && r.fit_window[1] > r.fit_window[0]) {
            bail!("run.fit_window must satisfy 0 < lo < hi, got {:?}", r.fit_window);
        }
        if !(r.dt_probe > 0.0) {
            bail!("run.dt_probe must be positive, got {}", r.dt_probe);
        }
        Ok(())
    }

    /// The experiment as a configuration file with every key set.
    pub fn to_file(&self) -> ConfigFile {
        ConfigFile {
            preset: Some(self.preset),
            gas: GasSection { gamma: Some(self.gas.gamma) },
            viscosity: ViscositySection { mu: Some(self.viscosity.mu), lambda: Some(self.viscosity.lambda) },
            wave: WaveSection {
                rho_minus: Some(self.wave.rho_minus),
                u_minus: Some(self.wave.u_minus),
                rho_plus: Some(self.wave.rho_plus),
                u_plus: Some(self.wave.u_plus),
            },
            grid: GridSection { nx: Some(self.grid.nx), ny: Some(self.grid.ny), lx: Some(self.grid.lx) },
            perturbation: PerturbationSection {
                shape: Some(self.perturbation.shape),
                amplitude: Some(self.perturbation.amplitude),
                sigma: Some(self.perturbation.sigma),
                mode: Some(self.perturbation.mode),
                path: self.perturbation.path.clone(),
            },
            run: RunSection {
                study: Some(self.run.study),
                t_end: Some(self.run.t_end),
                cfl: Some(self.run.cfl),
                bc_mode: Some(self.run.bc_mode),
                limiter: Some(self.run.limiter),
                diag_every: Some(self.run.diag_every),
                checkpoint_every: Some(self.run.checkpoint_every),
                steps: Some(self.run.steps),
                fit_window: Some(self.run.fit_window),
                samples: Some(self.run.samples),
                dt_probe: Some(self.run.dt_probe),
                seed: Some(self.run.seed),
            },
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&self.to_file()).expect("plain data serializes")
    }
}

impl FromStr for Study {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|_| anyhow!("unknown study `{s}`"))
    }
}

impl fmt::Display for Study {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = serde_json::to_value(self).map_err(|_| fmt::Error)?;
        f.write_str(v.as_str().unwrap_or("?"))
    }
}
