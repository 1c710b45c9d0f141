use serde::Serialize;

use longwave_core::evolve::{EvolutionState, StepperConfig};
use longwave_core::invariants::{drift_report, DriftReport};
use longwave_core::Error as CoreError;

use crate::output::{invariants_csv, trace_csv, RunDir};
use crate::{AppError, Ctx, Outcome};

#[derive(Serialize)]
struct Sidecar {
    model: ModelInfo,
    grid: GridInfo,
    stepper: StepperInfo,
    t_final: f64,
    seed: u64,
    snapshots: usize,
    invariants: DriftInfo,
    warnings: Vec<String>,
}

#[derive(Serialize)]
struct ModelInfo {
    kind: &'static str,
    eps: Option<f64>,
}

#[derive(Serialize)]
struct GridInfo {
    n: usize,
    length: f64,
}

#[derive(Serialize)]
struct StepperInfo {
    dt: f64,
    dealias: bool,
    record_every: usize,
}

#[derive(Serialize)]
struct DriftInfo {
    e0: f64,
    e1: f64,
    e2: f64,
}

impl From<DriftReport<f64>> for DriftInfo {
    fn from(d: DriftReport<f64>) -> Self {
        Self {
            e0: d.e0,
            e1: d.e1,
            e2: d.e2,
        }
    }
}

pub fn run(ctx: &Ctx) -> Result<Outcome, AppError> {
    let (cfg, config_bytes) = ctx.load_config()?;
    let seed = ctx.seed_with(cfg.seed);
    let grid = cfg.grid()?;
    let model = cfg.model()?;
    let stepper = cfg.stepper()?;
    let t_final = cfg
        .run
        .ok_or_else(|| AppError::Config("missing [run] section".into()))?
        .t_final;
    let field = cfg.checked_initial_field(&grid, stepper.dt, seed)?;

    let mut dir = RunDir::create(&ctx.out_dir(
        cfg.output.as_ref().map(|o| o.dir.as_str()),
        "runs/simulate",
    ))?;

    let mut step_cfg = StepperConfig::new(stepper.dt).with_record_every(stepper.record_every);
    step_cfg.dealias = stepper.dealias;

    let state = EvolutionState::new(model, field);
    match state.evolve_to(t_final, &step_cfg) {
        Ok(run) => {
            dir.write_bytes("trace.csv", &trace_csv(&run.trace))?;
            dir.write_bytes("invariants.csv", &invariants_csv(&run.invariants))?;
            let sidecar = Sidecar {
                model: ModelInfo {
                    kind: match model {
                        longwave_core::Model64::BbmEps { .. } => "bbm-eps",
                        longwave_core::Model64::Kdv => "kdv",
                    },
                    eps: model.eps(),
                },
                grid: GridInfo {
                    n: grid.n(),
                    length: grid.length(),
                },
                stepper: StepperInfo {
                    dt: stepper.dt,
                    dealias: stepper.dealias,
                    record_every: stepper.record_every,
                },
                t_final,
                seed,
                snapshots: run.trace.len(),
                invariants: drift_report(&run.invariants).into(),
                warnings: run.warnings.clone(),
            };
            dir.write_json("run.json", &sidecar)?;
            dir.finish(&config_bytes, seed, "complete", &run.warnings)?;
            Ok(Outcome::Pass)
        }
        Err(CoreError::BlowUp { time }) => {
            let warning = format!("solver blow-up at t = {time}");
            dir.finish(&config_bytes, seed, "blow-up", std::slice::from_ref(&warning))?;
            eprintln!("longwave: {warning}");
            Ok(Outcome::Fail)
        }
        Err(e) => Err(e.into()),
    }
}
