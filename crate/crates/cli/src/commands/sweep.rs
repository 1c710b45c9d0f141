use std::io::Write;

use serde::Serialize;

use longwave_core::fit::linear_fit;
use longwave_core::limit::{rate_threshold, run_sweep, RateFit, SweepConfig, SweepPoint, SweepResult};

use crate::output::{error_trace_csv, RunDir};
use crate::{AppError, Ctx, Outcome};

fn synthetic_sweep(
    cfg: &SweepConfig<f64>,
    errors: &[f64],
) -> Result<SweepResult<f64>, AppError> {
    if errors.len() != cfg.eps_list.len() {
        return Err(AppError::Config(
            "sweep.synthetic_errors must match sweep.eps in length".into(),
        ));
    }
    if errors.iter().any(|e| !(*e > 0.0)) {
        return Err(AppError::Config(
            "sweep.synthetic_errors must be positive".into(),
        ));
    }
    let entries: Vec<SweepPoint<f64>> = cfg
        .eps_list
        .iter()
        .zip(errors)
        .map(|(&eps, &sup_error)| SweepPoint {
            eps,
            sup_error,
            t_of_sup: cfg.t_final,
        })
        .collect();
    let xs: Vec<f64> = entries.iter().map(|p| p.eps.ln()).collect();
    let ys: Vec<f64> = entries.iter().map(|p| p.sup_error.ln()).collect();
    let lf = linear_fit(&xs, &ys)?;
    let monotone = entries.windows(2).all(|w| w[1].sup_error <= w[0].sup_error);
    Ok(SweepResult {
        fit: Some(RateFit {
            slope: lf.slope,
            intercept: lf.intercept,
            r_squared: lf.r_squared,
            pairs: entries.iter().map(|p| (p.eps, p.sup_error)).collect(),
        }),
        entries,
        traces: Vec::new(),
        failures: Vec::new(),
        monotone,
        warnings: Vec::new(),
    })
}

#[derive(Serialize)]
struct FitSummary {
    slope: Option<f64>,
    intercept: Option<f64>,
    r_squared: Option<f64>,
    s: f64,
    threshold: f64,
    monotone: bool,
    complete: bool,
    verdict: &'static str,
    failures: Vec<FailureInfo>,
}

#[derive(Serialize)]
struct FailureInfo {
    eps: f64,
    reason: String,
}

pub fn run(ctx: &Ctx) -> Result<Outcome, AppError> {
    let (cfg, config_bytes) = ctx.load_config()?;
    let seed = ctx.seed_with(cfg.seed);
    let sweep_cfg = cfg.sweep_config(seed)?;
    if sweep_cfg.eps_list.len() < 3 {
        return Err(AppError::Config("sweep.eps needs at least 3 values".into()));
    }

    let mut dir = RunDir::create(&ctx.out_dir(
        cfg.output.as_ref().map(|o| o.dir.as_str()),
        "runs/sweep",
    ))?;

    // Synthetic mode: injected per-eps errors go straight to the fitter,
    // bypassing the solvers. Exercises the fit and verdict plumbing.
    let result = match cfg.sweep.as_ref().and_then(|s| s.synthetic_errors.clone()) {
        Some(errors) => synthetic_sweep(&sweep_cfg, &errors)?,
        None => run_sweep(&sweep_cfg)?,
    };
    for (eps, trace) in &result.traces {
        dir.write_bytes(&format!("eps_{eps}/error_trace.csv"), &error_trace_csv(trace))?;
    }

    let mut csv = Vec::new();
    writeln!(csv, "eps,sup_error,t_of_sup").unwrap();
    for p in &result.entries {
        writeln!(csv, "{},{},{}", p.eps, p.sup_error, p.t_of_sup).unwrap();
    }
    dir.write_bytes("sweep.csv", &csv)?;

    let pass = result.rate_pass(sweep_cfg.s);
    let verdict = if !result.complete() {
        "incomplete"
    } else {
        match pass {
            Some(true) => "pass",
            Some(false) => "fail",
            None => "incomplete",
        }
    };
    let summary = FitSummary {
        slope: result.fit.as_ref().map(|f| f.slope),
        intercept: result.fit.as_ref().map(|f| f.intercept),
        r_squared: result.fit.as_ref().map(|f| f.r_squared),
        s: sweep_cfg.s,
        threshold: rate_threshold(sweep_cfg.s),
        monotone: result.monotone,
        complete: result.complete(),
        verdict,
        failures: result
            .failures
            .iter()
            .map(|(eps, reason)| FailureInfo {
                eps: *eps,
                reason: reason.clone(),
            })
            .collect(),
    };
    dir.write_json("fit.json", &summary)?;
    dir.finish(&config_bytes, seed, verdict, &result.warnings)?;

    Ok(match verdict {
        "pass" => Outcome::Pass,
        "fail" => Outcome::Fail,
        _ => Outcome::Incomplete,
    })
}
