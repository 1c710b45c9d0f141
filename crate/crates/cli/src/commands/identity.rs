use serde::Serialize;

use longwave_core::symbols::{identity_check, GAP_TOL, ROOT_TOL, Z_PRIME_TOL};

use crate::output::RunDir;
use crate::{AppError, Ctx, Outcome};

#[derive(Serialize)]
struct IdentitySummary {
    seed: u64,
    samples: usize,
    max_z_prime_rel: f64,
    max_gap_rel: f64,
    max_d2_at_root: f64,
    max_d3_at_root: f64,
    z_prime_tol: f64,
    gap_tol: f64,
    root_tol: f64,
    pass: bool,
}

pub fn run(ctx: &Ctx, samples: usize) -> Result<Outcome, AppError> {
    if samples == 0 {
        return Err(AppError::Usage("--samples must be at least 1".into()));
    }
    // Config is optional here; it only contributes a seed and output dir.
    let (cfg_seed, out_dir, config_bytes) = match &ctx.config_path {
        Some(_) => {
            let (cfg, bytes) = ctx.load_config()?;
            (cfg.seed, cfg.output.map(|o| o.dir), bytes)
        }
        None => (None, None, Vec::new()),
    };
    let seed = ctx.seed_with(cfg_seed);

    let report = identity_check(seed, samples)?;
    let line = |name: &str, value: f64, tol: f64| {
        let verdict = if value <= tol { "PASS" } else { "FAIL" };
        println!("{name}: max residual {value:.3e} (tol {tol:.0e}) {verdict}");
    };
    line("z-prime factored vs split", report.max_z_prime_rel, Z_PRIME_TOL);
    line("resonance gap closed form", report.max_gap_rel, GAP_TOL);
    line("second-derivative zeros", report.max_d2_at_root, ROOT_TOL);
    line("third-derivative zeros", report.max_d3_at_root, ROOT_TOL);
    let pass = report.pass();
    println!(
        "identity-check: {} ({} samples, seed {seed})",
        if pass { "PASS" } else { "FAIL" },
        report.samples
    );

    if ctx.out.is_some() || out_dir.is_some() {
        let mut dir = RunDir::create(&ctx.out_dir(out_dir.as_deref(), "runs/identity"))?;
        dir.write_json(
            "identity.json",
            &IdentitySummary {
                seed,
                samples: report.samples,
                max_z_prime_rel: report.max_z_prime_rel,
                max_gap_rel: report.max_gap_rel,
                max_d2_at_root: report.max_d2_at_root,
                max_d3_at_root: report.max_d3_at_root,
                z_prime_tol: Z_PRIME_TOL,
                gap_tol: GAP_TOL,
                root_tol: ROOT_TOL,
                pass,
            },
        )?;
        let status = if pass { "pass" } else { "fail" };
        dir.finish(&config_bytes, seed, status, &[])?;
    }

    Ok(if pass { Outcome::Pass } else { Outcome::Fail })
}
