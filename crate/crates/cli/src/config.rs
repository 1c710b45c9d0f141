//! Experiment configuration: a nested-section key-value text file (TOML).
//! Unknown keys are rejected; every numeric field is validated against the
//! owning type's constraints at load time, with errors naming the field.

use std::path::Path;

use serde::{Deserialize, Serialize};

use longwave_core::data::InitialData;
use longwave_core::evolve::stability_ceiling;
use longwave_core::limit::SweepConfig;
use longwave_core::spectral::SpatialGrid;

use crate::AppError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: Option<u64>,
    pub grid: Option<GridSection>,
    pub model: Option<ModelSection>,
    pub initial: Option<InitialSection>,
    pub stepper: Option<StepperSection>,
    pub run: Option<RunSection>,
    pub sweep: Option<SweepSection>,
    pub growth: Option<GrowthSection>,
    pub strichartz: Option<StrichartzSection>,
    pub output: Option<OutputSection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub n: usize,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub kind: String,
    pub eps: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    pub kind: String,
    pub amplitude: Option<f64>,
    pub width: Option<f64>,
    pub center: Option<f64>,
    pub speed: Option<f64>,
    pub s: Option<f64>,
    pub k_min: Option<usize>,
    pub k_max: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepperSection {
    pub dt: f64,
    #[serde(default = "default_true")]
    pub dealias: bool,
    #[serde(default = "default_one")]
    pub record_every: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub t_final: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub eps: Vec<f64>,
    pub s: f64,
    pub t_final: f64,
    /// Synthetic-fit mode: bypass the solvers and feed these per-eps sup
    /// errors straight to the rate fitter.
    pub synthetic_errors: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowthSection {
    pub eps: Vec<f64>,
    pub t_final: f64,
    #[serde(default = "default_ref_time")]
    pub reference_time: f64,
    #[serde(default = "default_threshold")]
    pub threshold_factor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrichartzSection {
    pub eps: Vec<f64>,
    pub q: f64,
    pub r: f64,
    pub ensemble: usize,
    #[serde(default = "default_window")]
    pub window: f64,
    #[serde(default = "default_time_samples")]
    pub time_samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: String,
}

fn default_true() -> bool {
    true
}
fn default_one() -> usize {
    1
}
fn default_ref_time() -> f64 {
    1.0
}
fn default_threshold() -> f64 {
    10.0
}
fn default_window() -> f64 {
    2.0
}
fn default_time_samples() -> usize {
    401
}

fn config_err(msg: impl Into<String>) -> AppError {
    AppError::Config(msg.into())
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<(Self, Vec<u8>), AppError> {
        let bytes = std::fs::read(path)
            .map_err(|e| config_err(format!("cannot read config {}: {e}", path.display())))?;
        let text = std::str::from_utf8(&bytes)
            .map_err(|_| config_err("config file is not valid UTF-8"))?;
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| config_err(format!("config parse error: {e}")))?;
        Ok((cfg, bytes))
    }

    pub fn grid(&self) -> Result<SpatialGrid<f64>, AppError> {
        let g = self.grid.ok_or_else(|| config_err("missing [grid] section"))?;
        SpatialGrid::new(g.n, g.length).map_err(|e| config_err(format!("grid: {e}")))
    }

    pub fn initial(&self) -> Result<InitialData<f64>, AppError> {
        let sec = self
            .initial
            .as_ref()
            .ok_or_else(|| config_err("missing [initial] section"))?;
        let amplitude = sec.amplitude.unwrap_or(1.0);
        let width = sec.width.unwrap_or(1.0);
        let center = sec.center.unwrap_or(0.0);
        match sec.kind.as_str() {
            "sech" => Ok(InitialData::Sech {
                amplitude,
                width,
                center,
            }),
            "sech2" => Ok(InitialData::SechSquared {
                amplitude,
                width,
                center,
            }),
            "soliton" => Ok(InitialData::Soliton {
                speed: sec
                    .speed
                    .ok_or_else(|| config_err("initial.speed required for soliton data"))?,
                center,
            }),
            "random" => Ok(InitialData::RandomSobolev {
                s: sec
                    .s
                    .ok_or_else(|| config_err("initial.s required for random data"))?,
                k_min: sec.k_min.unwrap_or(1),
                k_max: sec
                    .k_max
                    .ok_or_else(|| config_err("initial.k_max required for random data"))?,
                amplitude,
            }),
            other => Err(config_err(format!("initial.kind = {other:?} is unknown"))),
        }
    }

    pub fn stepper(&self) -> Result<StepperSection, AppError> {
        let s = self
            .stepper
            .ok_or_else(|| config_err("missing [stepper] section"))?;
        if !(s.dt > 0.0) || !s.dt.is_finite() {
            return Err(config_err("stepper.dt must be positive and finite"));
        }
        if s.record_every == 0 {
            return Err(config_err("stepper.record_every must be at least 1"));
        }
        Ok(s)
    }

    /// Realizes the initial data and enforces the published stability
    /// ceiling on `stepper.dt`.
    pub fn checked_initial_field(
        &self,
        grid: &SpatialGrid<f64>,
        dt: f64,
        seed: u64,
    ) -> Result<longwave_core::Field64, AppError> {
        let field = self
            .initial()?
            .realize(grid, seed)
            .map_err(|e| config_err(format!("initial: {e}")))?;
        let ceiling = stability_ceiling(&field);
        if dt > ceiling {
            return Err(config_err(format!(
                "stepper.dt = {dt} exceeds the stability ceiling {ceiling:.6e} for this data"
            )));
        }
        Ok(field)
    }

    pub fn model(&self) -> Result<longwave_core::Model64, AppError> {
        let m = self
            .model
            .as_ref()
            .ok_or_else(|| config_err("missing [model] section"))?;
        match m.kind.as_str() {
            "kdv" => Ok(longwave_core::Model64::kdv()),
            "bbm-eps" => {
                let eps = m
                    .eps
                    .ok_or_else(|| config_err("model.eps required for kind = \"bbm-eps\""))?;
                longwave_core::Model64::bbm(eps).map_err(|e| config_err(format!("model.eps: {e}")))
            }
            other => Err(config_err(format!("model.kind = {other:?} is unknown"))),
        }
    }

    pub fn sweep_config(&self, seed: u64) -> Result<SweepConfig<f64>, AppError> {
        let grid = self.grid.ok_or_else(|| config_err("missing [grid] section"))?;
        let stepper = self.stepper()?;
        let sec = self
            .sweep
            .as_ref()
            .ok_or_else(|| config_err("missing [sweep] section"))?;
        let cfg = SweepConfig {
            eps_list: sec.eps.clone(),
            s: sec.s,
            t_final: sec.t_final,
            initial: self.initial()?,
            grid_n: grid.n,
            grid_length: grid.length,
            dt: stepper.dt,
            seed,
            record_every: stepper.record_every,
            perturbation: None,
        };
        cfg.validate()
            .map_err(|e| config_err(format!("sweep: {e}")))?;
        Ok(cfg)
    }
}
