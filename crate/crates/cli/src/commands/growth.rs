use serde::Serialize;

use longwave_core::limit::{fit_growth, horizon_above, level_at, run_pair, SweepConfig};

use crate::output::{error_trace_csv, RunDir};
use crate::{AppError, Ctx, Outcome};

#[derive(Serialize)]
struct GrowthEntry {
    eps: f64,
    k_hat: Option<f64>,
    c_hat: Option<f64>,
    /// First time the error exceeds the shared threshold; absent when the
    /// run stays valid through the whole window.
    validity_horizon: Option<f64>,
}

#[derive(Serialize)]
struct GrowthSummary {
    t_final: f64,
    reference_time: f64,
    threshold_factor: f64,
    /// Error level of the coarsest (largest eps) member at the reference
    /// time; the validity bar is `threshold_factor` times this, shared by
    /// every member so the horizons are comparable.
    reference_level: Option<f64>,
    threshold: Option<f64>,
    entries: Vec<GrowthEntry>,
    /// Whether the validity horizon lengthens as eps shrinks (a member that
    /// never crosses counts as valid through the window).
    horizons_increase: Option<bool>,
    verdict: &'static str,
}

pub fn run(ctx: &Ctx) -> Result<Outcome, AppError> {
    let (cfg, config_bytes) = ctx.load_config()?;
    let seed = ctx.seed_with(cfg.seed);
    let grid = cfg.grid()?;
    let stepper = cfg.stepper()?;
    let growth = cfg
        .growth
        .clone()
        .ok_or_else(|| AppError::Config("missing [growth] section".into()))?;
    if growth.eps.is_empty() {
        return Err(AppError::Config("growth.eps is empty".into()));
    }
    let sweep_cfg = SweepConfig {
        eps_list: growth.eps.clone(),
        s: 1.0,
        t_final: growth.t_final,
        initial: cfg.initial()?,
        grid_n: grid.n(),
        grid_length: grid.length(),
        dt: stepper.dt,
        seed,
        record_every: stepper.record_every,
        perturbation: None,
    };
    sweep_cfg
        .validate()
        .map_err(|e| AppError::Config(format!("growth: {e}")))?;

    let mut dir = RunDir::create(&ctx.out_dir(
        cfg.output.as_ref().map(|o| o.dir.as_str()),
        "runs/growth",
    ))?;

    let mut traces = Vec::new();
    let mut warnings = Vec::new();
    let mut aborted = false;
    for &eps in &growth.eps {
        match run_pair(eps, &sweep_cfg) {
            Ok(trace) => {
                dir.write_bytes(&format!("eps_{eps}/error_trace.csv"), &error_trace_csv(&trace))?;
                warnings.extend(trace.warnings.iter().cloned());
                traces.push((eps, trace));
            }
            Err(e) => {
                aborted = true;
                warnings.push(format!("eps = {eps}: {e}"));
            }
        }
    }

    // Shared validity bar anchored at the coarsest member's error level at
    // the reference time; per-member horizons are then comparable and the
    // theory predicts they lengthen as eps shrinks.
    let reference_level = traces
        .first()
        .and_then(|(_, t)| level_at(t, growth.reference_time))
        .filter(|l| *l > 0.0);
    let threshold = reference_level.map(|l| l * growth.threshold_factor);

    let mut entries = Vec::new();
    for (eps, trace) in &traces {
        let fit = fit_growth(trace).ok();
        let horizon = threshold.and_then(|thr| horizon_above(trace, thr));
        entries.push(GrowthEntry {
            eps: *eps,
            k_hat: fit.as_ref().map(|f| f.k_hat),
            c_hat: fit.as_ref().map(|f| f.c_hat),
            validity_horizon: horizon,
        });
    }

    // Strictly longer validity along the (decreasing) eps list; a member
    // that never crosses counts as the full window. Two uncrossed members
    // in a row cannot be ordered by this experiment.
    let horizons: Vec<Option<f64>> = entries.iter().map(|e| e.validity_horizon).collect();
    let horizons_increase = if horizons.len() >= 2 && threshold.is_some() {
        if horizons.windows(2).any(|w| w[0].is_none() && w[1].is_none()) {
            None
        } else {
            Some(horizons.windows(2).all(|w| match (w[0], w[1]) {
                (Some(a), Some(b)) => b > a,
                (Some(_), None) => true,
                (None, _) => false,
            }))
        }
    } else {
        None
    };

    let verdict = if aborted {
        "incomplete"
    } else if entries.len() < 2 {
        "pass"
    } else {
        match horizons_increase {
            Some(true) => "pass",
            Some(false) => "fail",
            None => "incomplete",
        }
    };

    let summary = GrowthSummary {
        t_final: growth.t_final,
        reference_time: growth.reference_time,
        threshold_factor: growth.threshold_factor,
        reference_level,
        threshold,
        entries,
        horizons_increase,
        verdict,
    };
    dir.write_json("growth.json", &summary)?;
    dir.finish(&config_bytes, seed, verdict, &warnings)?;

    Ok(match verdict {
        "pass" => Outcome::Pass,
        "fail" => Outcome::Fail,
        _ => Outcome::Incomplete,
    })
}
