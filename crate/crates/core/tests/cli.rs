//! End-to-end checks of the command-line interface: output formats, file
//! artifacts, reproducibility, and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_irs-effcap"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn irs-effcap")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tmp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("irs-effcap-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn probe_prints_the_exponential_tail() {
    let out = run(&["probe", "--mu", "0.1", "--q-max", "100"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let value: f64 = text
        .trim()
        .strip_prefix("probability = ")
        .unwrap()
        .parse()
        .unwrap();
    assert!((value - (-10f64).exp()).abs() < 1e-12);

    let out = run(&["probe", "--mu", "1", "--delta", "2", "--d-max", "5"]);
    let text = stdout(&out);
    let value: f64 = text
        .trim()
        .strip_prefix("probability = ")
        .unwrap()
        .parse()
        .unwrap();
    assert!((value - (-10f64).exp()).abs() < 1e-12);
}

#[test]
fn probe_requires_a_complete_threshold() {
    let out = run(&["probe", "--mu", "0.1", "--delta", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn metrics_closed_form_matches_the_library() {
    let out = run(&[
        "metrics",
        "--preset",
        "paper",
        "--regime",
        "low-power",
        "--method",
        "closed-form",
    ]);
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    assert!(text.contains("regime = low_power_large_n"));
    assert!(text.contains("method = closed_form"));

    let cfg = irs_effcap::experiments::ScenarioConfig::paper();
    let expected = irs_effcap::ee::low_power_metrics_closed(
        &cfg.link_gains().unwrap(),
        &cfg.fading,
        cfg.n_elements,
        cfg.phase_mode,
        cfg.qos.mu_t_b(),
    )
    .unwrap();
    let eb: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("eb_n0_min = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((eb / expected.eb_n0_min - 1.0).abs() < 1e-8);
    let s0: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("s0 = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((s0 / expected.s0 - 1.0).abs() < 1e-8);
}

#[test]
fn sweep_writes_reproducible_csv_with_sidecar() {
    let out_a = tmp_path("sweep-a.csv");
    let out_b = tmp_path("sweep-b.csv");
    for out in [&out_a, &out_b] {
        let result = run(&[
            "sweep",
            "--preset",
            "unit",
            "--samples",
            "2000",
            "--n-elements",
            "16",
            "--kind",
            "baseline",
            "--mu-list",
            "0,0.1",
            "--per-decade",
            "4",
            "--decades",
            "3",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(result.status.success(), "{result:?}");
    }
    let a = std::fs::read_to_string(&out_a).unwrap();
    let b = std::fs::read_to_string(&out_b).unwrap();
    assert_eq!(a, b, "same config and seed must give identical bytes");
    assert!(a.starts_with("sweep_var,eb_n0,eb_n0_db,c_e,s0,mu,n_elements,mode,saturated\n"));
    assert!(a.lines().skip(1).any(|l| l.contains(",baseline,")));

    let meta = std::fs::read_to_string(format!("{}.meta", out_a.display())).unwrap();
    assert!(meta.contains("kind = irs_vs_baseline"));
    assert!(meta.contains("seed = "));
    assert!(meta.contains("samples = 2000"));
    assert!(meta.contains("n_elements = 16"));

    for p in [&out_a, &out_b] {
        let _ = std::fs::remove_file(p);
        let _ = std::fs::remove_file(format!("{}.meta", p.display()));
    }
}

#[test]
fn element_sweep_emits_slope_column() {
    let out = tmp_path("elements.csv");
    let result = run(&[
        "sweep",
        "--preset",
        "paper",
        "--kind",
        "elements",
        "--n-list",
        "10,100",
        "--bits-list",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{result:?}");
    let text = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 4); // two N values x (continuous, b=2)
    for row in &rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert!(fields[3].is_empty(), "c_e column empty for metrics rows");
        assert!(!fields[4].is_empty(), "s0 column filled");
    }
    let _ = std::fs::remove_file(&out);
    let _ = std::fs::remove_file(format!("{}.meta", out.display()));
}

#[test]
fn config_file_drives_the_scenario() {
    let cfg_path = tmp_path("scenario.cfg");
    std::fs::write(
        &cfg_path,
        "n_elements = 12\nmu = 0.01\nsamples = 500\nseed = 3\nphase_mode = discrete\nphase_bits = 2\n",
    )
    .unwrap();
    let out = run(&[
        "metrics",
        "--config",
        cfg_path.to_str().unwrap(),
        "--regime",
        "low-power",
    ]);
    assert!(out.status.success(), "{out:?}");
    assert!(stdout(&out).contains("regime = low_power_discrete"));
    let _ = std::fs::remove_file(&cfg_path);
}

#[test]
fn bad_inputs_exit_with_code_two() {
    let out = run(&["metrics", "--preset", "no-such-preset"]);
    assert_eq!(out.status.code(), Some(2));

    let cfg_path = tmp_path("broken.cfg");
    std::fs::write(&cfg_path, "m_h = 0.1\n").unwrap();
    let out = run(&["metrics", "--config", cfg_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let _ = std::fs::remove_file(&cfg_path);
}

#[test]
fn validate_passes_on_the_reference_scenario() {
    let out = run(&["validate", "--preset", "paper-hp", "--samples", "30000"]);
    let text = stdout(&out);
    assert!(
        out.status.success(),
        "validate failed:\n{text}\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(text.contains("PASS phase-alignment-optimality"));
    assert!(text.contains("PASS composite-moments-continuous"));
    assert!(text.contains("PASS composite-moments-discrete-b2"));
    assert!(text.contains("PASS origin-derivative-first"));
    assert!(text.contains("PASS origin-derivative-second"));
    assert!(text.contains("PASS gamma-laplace-quadrature"));
    assert!(text.contains("PASS inequality-suite"));
    assert!(text.contains("7/7 checks passed"));
}
