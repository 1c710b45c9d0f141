use std::fs;
use std::path::Path;

use crate::output::two_column;
use crate::{AppError, Ctx, Outcome};

fn parse_csv(path: &Path, columns: usize) -> Result<Vec<Vec<f64>>, AppError> {
    let text = fs::read_to_string(path)
        .map_err(|e| AppError::Io(format!("cannot read {}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 || line.is_empty() {
            continue; // header
        }
        let vals: Result<Vec<f64>, _> = line.split(',').map(str::parse::<f64>).collect();
        let vals =
            vals.map_err(|e| AppError::Io(format!("{}:{}: {e}", path.display(), i + 1)))?;
        if vals.len() < columns {
            return Err(AppError::Io(format!(
                "{}:{}: expected {columns} columns",
                path.display(),
                i + 1
            )));
        }
        rows.push(vals);
    }
    Ok(rows)
}

#[derive(serde::Deserialize)]
struct FitJson {
    slope: Option<f64>,
    intercept: Option<f64>,
}

#[derive(serde::Deserialize)]
struct GrowthJson {
    entries: Vec<GrowthEntryJson>,
}

#[derive(serde::Deserialize)]
struct GrowthEntryJson {
    eps: f64,
    k_hat: Option<f64>,
    c_hat: Option<f64>,
}

/// Emits two-column whitespace-delimited plot files from whatever finished
/// artifacts the run directory contains: sweep (log-log error vs eps with
/// fitted line), growth traces (error vs t with exponential envelope), and
/// invariant drift vs t.
pub fn run(ctx: &Ctx, run_dir: &Path) -> Result<Outcome, AppError> {
    if !run_dir.is_dir() {
        return Err(AppError::Usage(format!(
            "run directory {} does not exist",
            run_dir.display()
        )));
    }
    let out_root = ctx.out.clone().unwrap_or_else(|| run_dir.to_path_buf());
    fs::create_dir_all(&out_root)
        .map_err(|e| AppError::Io(format!("cannot create {}: {e}", out_root.display())))?;
    let mut wrote = Vec::new();
    let write = |rel: &str, bytes: Vec<u8>, wrote: &mut Vec<String>| -> Result<(), AppError> {
        let path = out_root.join(rel);
        fs::write(&path, bytes)
            .map_err(|e| AppError::Io(format!("cannot write {}: {e}", path.display())))?;
        wrote.push(rel.to_string());
        Ok(())
    };

    let sweep_csv = run_dir.join("sweep.csv");
    if sweep_csv.is_file() {
        let rows = parse_csv(&sweep_csv, 2)?;
        let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r[0], r[1])).collect();
        write("plot_rate.dat", two_column(&pts), &mut wrote)?;
        let fit_path = run_dir.join("fit.json");
        if fit_path.is_file() {
            let text = fs::read_to_string(&fit_path)
                .map_err(|e| AppError::Io(format!("cannot read {}: {e}", fit_path.display())))?;
            let fit: FitJson = serde_json::from_str(&text)
                .map_err(|e| AppError::Io(format!("{}: {e}", fit_path.display())))?;
            if let (Some(slope), Some(intercept)) = (fit.slope, fit.intercept) {
                let line: Vec<(f64, f64)> = pts
                    .iter()
                    .map(|(eps, _)| (*eps, (intercept + slope * eps.ln()).exp()))
                    .collect();
                write("plot_rate_fit.dat", two_column(&line), &mut wrote)?;
            }
        }
    }

    let growth_json = run_dir.join("growth.json");
    if growth_json.is_file() {
        let text = fs::read_to_string(&growth_json)
            .map_err(|e| AppError::Io(format!("cannot read {}: {e}", growth_json.display())))?;
        let growth: GrowthJson = serde_json::from_str(&text)
            .map_err(|e| AppError::Io(format!("{}: {e}", growth_json.display())))?;
        for entry in &growth.entries {
            let eps = entry.eps;
            let trace_path = run_dir.join(format!("eps_{eps}/error_trace.csv"));
            if !trace_path.is_file() {
                continue;
            }
            let rows = parse_csv(&trace_path, 2)?;
            let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r[0], r[1])).collect();
            write(&format!("plot_growth_{eps}.dat"), two_column(&pts), &mut wrote)?;
            if let (Some(k), Some(c)) = (entry.k_hat, entry.c_hat) {
                let env: Vec<(f64, f64)> =
                    pts.iter().map(|(t, _)| (*t, c * (k * t).exp())).collect();
                write(
                    &format!("plot_growth_envelope_{eps}.dat"),
                    two_column(&env),
                    &mut wrote,
                )?;
            }
        }
    }

    let invariants_csv = run_dir.join("invariants.csv");
    if invariants_csv.is_file() {
        let rows = parse_csv(&invariants_csv, 4)?;
        if !rows.is_empty() {
            let first = &rows[0];
            for (idx, name) in [(1usize, "e0"), (2, "e1"), (3, "e2")] {
                let base: f64 = first[idx];
                let denom = base.abs().max(1e-14);
                let pts: Vec<(f64, f64)> = rows
                    .iter()
                    .map(|r| (r[0], (r[idx] - base).abs() / denom))
                    .collect();
                write(&format!("plot_drift_{name}.dat"), two_column(&pts), &mut wrote)?;
            }
        }
    }

    if wrote.is_empty() {
        return Err(AppError::Usage(format!(
            "{} contains none of the expected inputs (sweep.csv, growth.json, invariants.csv)",
            run_dir.display()
        )));
    }
    for rel in &wrote {
        println!("wrote {}", out_root.join(rel).display());
    }
    Ok(Outcome::Pass)
}
