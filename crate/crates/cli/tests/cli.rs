// Copyright 2026 Soliq Contributors
// SPDX-License-Identifier: Apache-2.0

//! End-to-end tests of the `soliq` binary: exit-code contract,
//! deterministic artifacts, and the content of the emitted reports.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn soliq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_soliq"))
        .args(args)
        .output()
        .expect("failed to spawn soliq")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process terminated by signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn evolve_config(kind: &str, alpha: f64, separation: f64, t_end: f64, samples: usize) -> String {
    format!(
        r#"
        [condensate]
        mode = "natural"
        bound_parameter = 0.75

        [pair]
        separation = {separation}

        [initial]
        kind = "{kind}"
        alpha = {alpha}

        [run]
        t_end = {t_end}
        samples = {samples}
        "#
    )
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(exit_code(&soliq(&["--help"])), 0);
    assert_eq!(exit_code(&soliq(&["--version"])), 0);
    assert_eq!(exit_code(&soliq(&["evolve", "--help"])), 0);
}

#[test]
fn bad_arguments_exit_one() {
    // Unknown subcommand and missing --config are configuration errors.
    assert_eq!(exit_code(&soliq(&["frobnicate"])), 1);
    let out = soliq(&["evolve"]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr(&out).contains("--config"));
}

#[test]
fn invalid_config_exits_one_with_field_message() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad.toml",
        r#"
        [condensate]
        mode = "natural"
        coupling_chi = 0.5
        bound_parameter = 0.75
        "#,
    );
    let out = soliq(&["rates", "--config", cfg.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
    let err = stderr(&out);
    assert!(err.contains("configuration error"), "stderr: {err}");
    assert!(err.contains("coupling_chi"), "stderr: {err}");

    let missing = dir.path().join("missing.toml");
    let out = soliq(&["rates", "--config", missing.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn rates_sweep_row_count_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "rates.toml",
        r#"
        [condensate]
        mode = "natural"
        bound_parameter = 0.75

        [pair.grid]
        start = 0.5
        stop = 10.0
        points = 200
        "#,
    );
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for out_dir in [&out_a, &out_b] {
        let out = soliq(&[
            "rates",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
        assert!(stdout(&out).contains("gamma ="));
    }
    let bytes_a = std::fs::read(out_a.join("rates.csv")).unwrap();
    let bytes_b = std::fs::read(out_b.join("rates.csv")).unwrap();
    assert_eq!(bytes_a, bytes_b, "repeated runs must be byte-identical");

    let text = String::from_utf8(bytes_a).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 201, "header + one row per grid point");
    assert_eq!(lines[0], "d_over_xi,gamma,Gamma_over_gamma,eta_over_gamma");
}

#[test]
fn evolve_emits_tagged_trajectories_and_events() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "near.toml",
        &evolve_config("entangled", 0.25, 1.2, 12.0, 301),
    );
    let out = soliq(&[
        "evolve",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));

    let text = std::fs::read_to_string(dir.path().join("evolve_trajectory.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("source,t,gamma_t,re_ee,im_ee"));
    assert!(lines[0].ends_with("pop_e,pop_s,pop_a,pop_g"));
    let closed = lines.iter().filter(|l| l.starts_with("closed_form,")).count();
    let integrated = lines.iter().filter(|l| l.starts_with("integrator,")).count();
    assert_eq!(closed, 301);
    assert_eq!(integrated, 301);

    let conc = std::fs::read_to_string(dir.path().join("evolve_concurrence.csv")).unwrap();
    assert!(conc.starts_with("t,C,C1_raw,C2_raw\n"));
    assert_eq!(conc.lines().count(), 302);

    let events: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("evolve_events.json")).unwrap())
            .unwrap();
    assert_eq!(events["schema"], 1);
    let deaths = events["deaths_gamma_t"].as_array().unwrap();
    let revivals = events["revivals_gamma_t"].as_array().unwrap();
    assert_eq!(deaths.len(), 1, "one sudden death: {events}");
    assert_eq!(revivals.len(), 1, "one revival: {events}");
    assert!((deaths[0].as_f64().unwrap() - 6.7156).abs() < 5e-3);
    assert!((revivals[0].as_f64().unwrap() - 7.9223).abs() < 5e-3);
}

#[test]
fn independent_decay_dies_at_ln2_over_gamma() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = evolve_config("entangled", 0.8, 1.2, 6.0, 241);
    text.push_str("\n[rates]\nforce_independent = true\n");
    let cfg = write_config(dir.path(), "indep.toml", &text);
    let out = soliq(&[
        "evolve",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let events: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("evolve_events.json")).unwrap())
            .unwrap();
    let deaths = events["deaths_gamma_t"].as_array().unwrap();
    assert_eq!(deaths.len(), 1);
    let ln2 = std::f64::consts::LN_2;
    assert!((deaths[0].as_f64().unwrap() - ln2).abs() < 0.01 * ln2);
    assert!(events["revivals"].as_array().unwrap().is_empty());
}

#[test]
fn oracle_divergence_exits_two_after_writing_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = evolve_config("entangled", 0.25, 1.2, 5.0, 51);
    // A deliberately coarse integrator step cannot reach an impossible
    // tolerance; the command must still write artifacts, then exit 2.
    text.push_str("\ngamma_dt = 1e-2\noracle_tol = 1e-18\n");
    let cfg = write_config(dir.path(), "diverge.toml", &text);
    let out = soliq(&[
        "evolve",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 2, "stderr: {}", stderr(&out));
    let err = stderr(&out);
    assert!(err.contains("numeric error"), "stderr: {err}");
    assert!(err.contains("max |drho|"), "stderr: {err}");
    assert!(err.contains("at t ="), "stderr: {err}");
    assert!(dir.path().join("evolve_trajectory.csv").exists());
    assert!(dir.path().join("evolve_events.json").exists());
}

#[test]
fn json_format_emits_schema_versioned_tables() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "rates.toml",
        r#"
        [condensate]
        mode = "natural"
        bound_parameter = 0.75

        [pair.grid]
        start = 1.0
        stop = 10.0
        points = 19
        "#,
    );
    let out = soliq(&[
        "rates",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let table: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("rates.json")).unwrap())
            .unwrap();
    assert_eq!(table["schema"], 1);
    assert_eq!(table["kind"], "rates");
    assert_eq!(table["rows"].as_array().unwrap().len(), 19);
    assert_eq!(
        table["columns"],
        serde_json::json!(["d_over_xi", "gamma", "Gamma_over_gamma", "eta_over_gamma"])
    );
}

#[test]
fn estimate_reports_si_numbers_and_exact_dark_period() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "estimate.toml",
        r#"
        [condensate]
        mode = "si"
        mass = 1.4099934427186933e-25
        density = 5e8
        chemical_potential_hz = 2000.0
        bound_parameter = 0.75
        "#,
    );
    let out = soliq(&[
        "estimate",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("estimate_report.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report["schema"], 1);
    assert!((report["gap_hz"].as_f64().unwrap() - 500.0).abs() < 1e-9);
    let gamma_hz = report["gamma_hz"].as_f64().unwrap();
    assert!((gamma_hz - 29.0).abs() < 0.3 * 29.0, "gamma_hz = {gamma_hz}");
    let near = &report["near"];
    let death = near["death_ms"].as_f64().unwrap();
    let revival = near["revival_ms"].as_f64().unwrap();
    let dark = near["dark_period_ms"].as_f64().unwrap();
    assert!((death - 19.0).abs() < 0.3 * 19.0, "death_ms = {death}");
    assert!((revival - 35.0).abs() < 0.3 * 35.0, "revival_ms = {revival}");
    assert_eq!(dark, revival - death, "dark period is the exact difference");
    let far_death = report["far"]["death_ms"].as_f64().unwrap();
    assert!((far_death - 2.0).abs() < 0.5 * 2.0, "far death_ms = {far_death}");
}

#[test]
fn estimate_rejects_natural_mode() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "nat.toml",
        r#"
        [condensate]
        mode = "natural"
        bound_parameter = 0.75
        "#,
    );
    let out = soliq(&["estimate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr(&out).contains("si"));
}

#[test]
fn selftest_passes() {
    let out = soliq(&["selftest"]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("all 5 checks passed"), "stdout: {text}");
    assert_eq!(text.matches(": ok").count(), 5, "stdout: {text}");
}

/// The mixed-state scenario quoted with α just above 1/2 does not
/// reproduce a death near 0.75/γ at d ≈ 4ξ: with α = 0.55 the collective
/// channel protects the entanglement and the concurrence never reaches
/// zero at all — death-plus-revival near (0.93, 1.57)/γ first appears at
/// much larger excited weights (α ≈ 0.9). This test documents the
/// measured behavior end-to-end.
#[test]
fn mixed_alpha_055_never_dies_at_this_separation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "mixed.toml",
        &evolve_config("mixed", 0.55, 3.9, 6.0, 601),
    );
    let out = soliq(&[
        "evolve",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let events: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("evolve_events.json")).unwrap())
            .unwrap();
    let initial = events["initial_concurrence"].as_f64().unwrap();
    assert!((initial - 0.335).abs() < 5e-3, "initial C = {initial}");
    assert!(
        events["deaths"].as_array().unwrap().is_empty(),
        "no sudden death up to gamma*t = 6: {events}"
    );
    assert!(events["revivals"].as_array().unwrap().is_empty());
}
