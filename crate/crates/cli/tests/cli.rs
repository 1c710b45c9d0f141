//! End-to-end checks of the `longwave` binary: byte-level determinism of CSV
//! artifacts, the exit-status contract, and config validation messages.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_longwave"))
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "longwave-cli-{tag}-{}-{}",
        std::process::id(),
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .unwrap()
            .as_nanos()
    ));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process exited with a code")
}

const SIM_CONFIG: &str = r#"
seed = 3

[grid]
n = 256
length = 80.0

[model]
kind = "kdv"

[initial]
kind = "soliton"
speed = 1.0
center = 0.0

[stepper]
dt = 0.002
record_every = 25

[run]
t_final = 0.1
"#;

#[test]
fn simulate_is_byte_deterministic() {
    let work = temp_dir("determinism");
    let cfg = write_config(&work, "sim.toml", SIM_CONFIG);
    let out_a = work.join("a");
    let out_b = work.join("b");
    for out in [&out_a, &out_b] {
        let res = bin()
            .args(["simulate", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(out)
            .output()
            .unwrap();
        assert_eq!(exit_code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    }
    for name in ["trace.csv", "invariants.csv", "run.json"] {
        let a = fs::read(out_a.join(name)).unwrap();
        let b = fs::read(out_b.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical runs");
    }
    fs::remove_dir_all(&work).unwrap();
}

#[test]
fn seed_flag_overrides_config_seed() {
    let work = temp_dir("seed-override");
    let cfg = write_config(
        &work,
        "cfg.toml",
        r#"
seed = 3

[grid]
n = 128
length = 60.0

[model]
kind = "kdv"

[initial]
kind = "random"
s = 1.0
k_min = 1
k_max = 20
amplitude = 0.1

[stepper]
dt = 0.002

[run]
t_final = 0.01
"#,
    );
    let run = |seed: Option<&str>, out: &Path| {
        let mut c = bin();
        c.args(["simulate", "--config"]).arg(&cfg).arg("--out").arg(out);
        if let Some(s) = seed {
            c.args(["--seed", s]);
        }
        let res = c.output().unwrap();
        assert_eq!(exit_code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
        fs::read(out.join("trace.csv")).unwrap()
    };
    let baseline = run(None, &work.join("a"));
    let same_seed = run(Some("3"), &work.join("b"));
    let other_seed = run(Some("4"), &work.join("c"));
    assert_eq!(baseline, same_seed);
    assert_ne!(baseline, other_seed);
    fs::remove_dir_all(&work).unwrap();
}

#[test]
fn dt_above_stability_ceiling_is_a_config_error_naming_dt() {
    let work = temp_dir("dt-ceiling");
    let cfg = write_config(
        &work,
        "bad.toml",
        &SIM_CONFIG.replace("dt = 0.002", "dt = 0.02"),
    );
    let res = bin()
        .args(["simulate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(work.join("out"))
        .output()
        .unwrap();
    assert_eq!(exit_code(&res), 2);
    let msg = String::from_utf8_lossy(&res.stderr);
    assert!(msg.contains("stepper.dt"), "stderr: {msg}");
    assert!(msg.contains("ceiling"), "stderr: {msg}");
    fs::remove_dir_all(&work).unwrap();
}

#[test]
fn unknown_config_key_is_a_usage_error() {
    let work = temp_dir("unknown-key");
    let cfg = write_config(&work, "bad.toml", &format!("{SIM_CONFIG}\nmystery = 1\n"));
    let res = bin()
        .args(["simulate", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(exit_code(&res), 2);
    assert!(String::from_utf8_lossy(&res.stderr).contains("mystery"));
    fs::remove_dir_all(&work).unwrap();
}

#[test]
fn missing_config_is_a_usage_error() {
    let res = bin().arg("simulate").output().unwrap();
    assert_eq!(exit_code(&res), 2);
}

#[test]
fn identity_check_passes_and_reruns_identically() {
    let a = bin()
        .args(["identity-check", "--samples", "2000", "--seed", "5"])
        .output()
        .unwrap();
    assert_eq!(exit_code(&a), 0);
    let b = bin()
        .args(["identity-check", "--samples", "2000", "--seed", "5"])
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8_lossy(&a.stdout);
    assert!(text.contains("identity-check: PASS"));

    let usage = bin()
        .args(["identity-check", "--samples", "0"])
        .output()
        .unwrap();
    assert_eq!(exit_code(&usage), 2);
}

#[test]
fn synthetic_sweep_echoes_injected_power_law() {
    let work = temp_dir("synthetic");
    // Exact doubles of 0.03 * eps^0.4; shortest round-trip formatting
    // carries them through the config losslessly.
    let eps = [0.2f64, 0.1, 0.05, 0.025];
    let errors: Vec<String> = eps.iter().map(|e| format!("{}", 0.03 * e.powf(0.4))).collect();
    let cfg = write_config(
        &work,
        "sweep.toml",
        &format!(
            r#"
[grid]
n = 128
length = 40.0

[initial]
kind = "sech2"
amplitude = 1.0
width = 2.0

[stepper]
dt = 0.002

[sweep]
eps = [0.2, 0.1, 0.05, 0.025]
s = 1.0
t_final = 0.5
synthetic_errors = [{}]
"#,
            errors.join(", ")
        ),
    );
    let out = work.join("out");
    let res = bin()
        .args(["sweep", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(exit_code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    let fit: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("fit.json")).unwrap()).unwrap();
    let slope = fit["slope"].as_f64().unwrap();
    assert!((slope - 0.4).abs() < 1e-10, "slope {slope}");
    assert!((fit["r_squared"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert_eq!(fit["verdict"], "pass");

    // A slope below the acceptance floor is a clean "fail" exit.
    let cfg_fail = write_config(
        &work,
        "sweep_fail.toml",
        r#"
[grid]
n = 128
length = 40.0

[initial]
kind = "sech2"
amplitude = 1.0
width = 2.0

[stepper]
dt = 0.002

[sweep]
eps = [0.2, 0.1, 0.05, 0.025]
s = 1.0
t_final = 0.5
synthetic_errors = [0.01, 0.0095, 0.009, 0.0085]
"#,
    );
    let res = bin()
        .args(["sweep", "--config"])
        .arg(&cfg_fail)
        .arg("--out")
        .arg(work.join("out_fail"))
        .output()
        .unwrap();
    assert_eq!(exit_code(&res), 1);
    fs::remove_dir_all(&work).unwrap();
}

#[test]
fn unstable_sweep_member_gives_incomplete_status() {
    let work = temp_dir("incomplete");
    let cfg = write_config(
        &work,
        "sweep.toml",
        r#"
[grid]
n = 128
length = 40.0

[initial]
kind = "sech2"
amplitude = 1.0
width = 2.0

[stepper]
dt = 0.5

[sweep]
eps = [0.2, 0.1, 0.05]
s = 1.0
t_final = 200.0
"#,
    );
    let res = bin()
        .args(["sweep", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(work.join("out"))
        .output()
        .unwrap();
    assert_eq!(exit_code(&res), 3, "{}", String::from_utf8_lossy(&res.stderr));
    fs::remove_dir_all(&work).unwrap();
}

#[test]
fn plotdata_requires_known_inputs() {
    let work = temp_dir("plotdata-empty");
    let res = bin().arg("plotdata").arg(&work).output().unwrap();
    assert_eq!(exit_code(&res), 2);
    let msg = String::from_utf8_lossy(&res.stderr);
    assert!(msg.contains("sweep.csv"), "stderr: {msg}");
    fs::remove_dir_all(&work).unwrap();
}

#[test]
fn plotdata_emits_drift_files_from_a_run() {
    let work = temp_dir("plotdata-run");
    let cfg = write_config(&work, "sim.toml", SIM_CONFIG);
    let out = work.join("run");
    let res = bin()
        .args(["simulate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(exit_code(&res), 0);
    let res = bin().arg("plotdata").arg(&out).output().unwrap();
    assert_eq!(exit_code(&res), 0);
    for name in ["plot_drift_e0.dat", "plot_drift_e1.dat", "plot_drift_e2.dat"] {
        let text = fs::read_to_string(out.join(name)).unwrap();
        let rows: Vec<&str> = text.lines().collect();
        assert!(!rows.is_empty());
        // Conservative run: drift stays inside a tight band.
        for row in rows {
            let cols: Vec<f64> = row
                .split_whitespace()
                .map(|v| v.parse().unwrap())
                .collect();
            assert_eq!(cols.len(), 2);
            assert!(cols[1] <= 1e-8, "drift {} too large in {name}", cols[1]);
        }
    }
    fs::remove_dir_all(&work).unwrap();
}

#[test]
fn sweep_output_is_independent_of_job_count() {
    let work = temp_dir("jobs");
    let cfg = write_config(
        &work,
        "sweep.toml",
        r#"
seed = 6

[grid]
n = 128
length = 40.0

[initial]
kind = "sech2"
amplitude = 1.0
width = 2.0

[stepper]
dt = 0.002
record_every = 20

[sweep]
eps = [0.2, 0.1, 0.05]
s = 1.0
t_final = 0.2
"#,
    );
    let run = |jobs: &str, out: &Path| {
        let res = bin()
            .args(["sweep", "--jobs", jobs, "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(out)
            .output()
            .unwrap();
        assert_eq!(exit_code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
        fs::read(out.join("sweep.csv")).unwrap()
    };
    let serial = run("1", &work.join("serial"));
    let parallel = run("4", &work.join("parallel"));
    assert_eq!(serial, parallel, "sweep.csv depends on scheduling");
    fs::remove_dir_all(&work).unwrap();
}
