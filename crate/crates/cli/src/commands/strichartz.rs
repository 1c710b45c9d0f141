use std::io::Write;

use serde::Serialize;

use longwave_core::data::InitialData;
use longwave_core::limit::{strichartz_ratios, StrichartzConfig};

use crate::output::RunDir;
use crate::{AppError, Ctx, Outcome};

/// Uniformity margin: halving eps may not grow the worst truncated-window
/// ratio by more than this factor.
pub const UNIFORMITY_FACTOR: f64 = 1.25;

#[derive(Serialize)]
struct EpsStats {
    eps: f64,
    max_ratio: f64,
    mean_ratio: f64,
}

#[derive(Serialize)]
struct UniformityCheck {
    eps_coarse: f64,
    eps_fine: f64,
    max_ratio_quotient: f64,
    factor: f64,
    pass: bool,
}

#[derive(Serialize)]
struct StrichartzSummary {
    q: f64,
    r: f64,
    ensemble: usize,
    window: f64,
    time_samples: usize,
    per_eps: Vec<EpsStats>,
    uniformity: Vec<UniformityCheck>,
    verdict: &'static str,
}

pub fn run(ctx: &Ctx) -> Result<Outcome, AppError> {
    let (cfg, config_bytes) = ctx.load_config()?;
    let seed = ctx.seed_with(cfg.seed);
    let grid = cfg.grid()?;
    let sec = cfg
        .strichartz
        .clone()
        .ok_or_else(|| AppError::Config("missing [strichartz] section".into()))?;
    if sec.eps.is_empty() {
        return Err(AppError::Config("strichartz.eps is empty".into()));
    }
    let data = match cfg.initial() {
        Ok(d @ InitialData::RandomSobolev { .. }) => d,
        Ok(_) => {
            return Err(AppError::Config(
                "strichartz needs initial.kind = \"random\"".into(),
            ))
        }
        Err(e) => return Err(e),
    };

    let mut dir = RunDir::create(&ctx.out_dir(
        cfg.output.as_ref().map(|o| o.dir.as_str()),
        "runs/strichartz",
    ))?;

    let mut csv = Vec::new();
    writeln!(csv, "eps,member,ratio").unwrap();
    let mut per_eps = Vec::new();
    for &eps in &sec.eps {
        let ratios = strichartz_ratios(
            &grid,
            &StrichartzConfig {
                eps,
                q: sec.q,
                r: sec.r,
                ensemble: sec.ensemble,
                seed,
                window: sec.window,
                time_samples: sec.time_samples,
                data: data.clone(),
            },
        )
        .map_err(|e| AppError::Config(format!("strichartz: {e}")))?;
        for (m, r) in ratios.iter().enumerate() {
            writeln!(csv, "{eps},{m},{r}").unwrap();
        }
        let max = ratios.iter().copied().fold(0.0f64, f64::max);
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        per_eps.push(EpsStats {
            eps,
            max_ratio: max,
            mean_ratio: mean,
        });
    }
    dir.write_bytes("ratios.csv", &csv)?;

    let mut uniformity = Vec::new();
    for pair in per_eps.windows(2) {
        let quotient = pair[1].max_ratio / pair[0].max_ratio;
        uniformity.push(UniformityCheck {
            eps_coarse: pair[0].eps,
            eps_fine: pair[1].eps,
            max_ratio_quotient: quotient,
            factor: UNIFORMITY_FACTOR,
            pass: quotient <= UNIFORMITY_FACTOR,
        });
    }
    let pass = uniformity.iter().all(|u| u.pass);
    let verdict = if pass { "pass" } else { "fail" };
    let summary = StrichartzSummary {
        q: sec.q,
        r: sec.r,
        ensemble: sec.ensemble,
        window: sec.window,
        time_samples: sec.time_samples,
        per_eps,
        uniformity,
        verdict,
    };
    dir.write_json("strichartz.json", &summary)?;
    dir.finish(&config_bytes, seed, verdict, &[])?;

    Ok(if pass { Outcome::Pass } else { Outcome::Fail })
}
