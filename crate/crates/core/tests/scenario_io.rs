//! Scenario file round-trips, deterministic artifacts, and the command
//! line surface exercised end to end through the compiled binary.

use std::fs;
use std::path::Path;
use std::process::Command;

use minklab::scenario::{parse_scenario, run_to_dir};

const TINY_1D: &str = r#"{
    "name": "tiny",
    "dimension": 1,
    "window": {"lo": [-2.0], "hi": [3.0]},
    "open_region": {"op": "box", "lo": [-2.0], "hi": [3.0]},
    "shape": {"op": "intervals", "parts": [[0.0, 1.0]], "points": [2.0]},
    "bodies": [{"name": "sym", "body": {"kind": "interval", "lo": -1.0, "hi": 1.0}}]
}"#;

const SMALL_2D: &str = r#"{
    "name": "smalldisc",
    "dimension": 2,
    "window": {"lo": [-2.0, -2.0], "hi": [2.0, 2.0]},
    "open_region": {"op": "box", "lo": [-1.5, -1.5], "hi": [1.5, 1.5]},
    "shape": {"op": "ball", "center": [0.0, 0.0], "radius": 1.0},
    "bodies": [{"name": "round", "body": {"kind": "ball", "radius": 1.0}}],
    "grid": {"n": 64, "refinement": 256, "eps_floor_cells": 4.0},
    "ladder": {"eps_max_cells": 16.0, "points": 3}
}"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_minklab"))
}

#[test]
fn reruns_write_byte_identical_artifacts() {
    let scenario = parse_scenario(TINY_1D).unwrap();
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    let r1 = run_to_dir(&scenario, Some(d1.path())).unwrap();
    let r2 = run_to_dir(&scenario, Some(d2.path())).unwrap();
    assert_eq!(r1.paths.len(), 3);
    for (p1, p2) in r1.paths.iter().zip(&r2.paths) {
        assert_eq!(p1.file_name(), p2.file_name());
        let b1 = fs::read(p1).unwrap();
        let b2 = fs::read(p2).unwrap();
        assert_eq!(b1, b2, "artifact {} drifted between reruns", p1.display());
        assert!(!b1.is_empty());
    }
    assert_eq!(r1.summary_csv, r2.summary_csv);
    assert_eq!(r1.report_json, r2.report_json);
}

#[test]
fn run_command_writes_artifacts_and_prints_the_summary() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("tiny.json");
    fs::write(&file, TINY_1D).unwrap();
    let out = dir.path().join("artifacts");
    let res = bin().arg("run").arg(&file).arg("--out").arg(&out).output().unwrap();
    assert!(res.status.success(), "stderr: {}", String::from_utf8_lossy(&res.stderr));
    let stdout = String::from_utf8(res.stdout).unwrap();
    assert!(stdout.contains("scenario,functional,target,body,estimate"), "stdout: {stdout}");
    assert!(stdout.contains("tiny"));
    for name in ["tiny_ladder.csv", "tiny_summary.csv", "tiny_report.json"] {
        let p = out.join(name);
        assert!(p.exists(), "missing artifact {}", p.display());
    }
    // The summary on stdout matches the file on disk.
    let on_disk = fs::read_to_string(out.join("tiny_summary.csv")).unwrap();
    assert!(stdout.contains(on_disk.trim_end()), "stdout and file disagree");
}

#[test]
fn run_command_accepts_ladder_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("tiny.json");
    fs::write(&file, TINY_1D).unwrap();
    let out = dir.path().join("artifacts");
    let res = bin()
        .arg("run")
        .arg(&file)
        .args(["--eps-points", "6"])
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(res.status.success());
    let ladder = fs::read_to_string(out.join("tiny_ladder.csv")).unwrap();
    // Header plus 6 ε rows per curve; the default would give 4.
    let tiny_curves: Vec<&str> =
        ladder.lines().filter(|l| l.contains("tiny")).collect();
    assert!(!tiny_curves.is_empty());
    assert_eq!(tiny_curves.len() % 6, 0, "ladder rows: {}", tiny_curves.len());
}

#[test]
fn run_command_rejects_broken_input() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("broken.json");
    fs::write(&file, "{\"name\": \"broken\"").unwrap();
    let res = bin().arg("run").arg(&file).output().unwrap();
    assert!(!res.status.success());
    let stderr = String::from_utf8(res.stderr).unwrap();
    assert!(stderr.contains("error"), "stderr: {stderr}");

    let res = bin().args(["run", "--file", "/nonexistent/nope.json"]).output().unwrap();
    assert!(!res.status.success());
}

#[test]
fn verify_command_filter_runs_only_matching_checks() {
    let res = bin().args(["verify", "--filter", "convex"]).output().unwrap();
    let stdout = String::from_utf8(res.stdout).unwrap();
    assert!(res.status.success(), "stdout: {stdout}");
    assert!(stdout.contains("convex"), "stdout: {stdout}");
    // The filter must not leak unrelated rows: every result row is a
    // convex check. Rows start with the verdict; the footer line does not.
    let mut rows = 0;
    for line in stdout.lines() {
        if line.starts_with("PASS ") || line.starts_with("FAIL ") {
            assert!(line.contains("convex"), "unexpected row: {line}");
            rows += 1;
        }
    }
    assert!(rows >= 1, "no check rows in: {stdout}");
    assert!(stdout.contains("ALL PASS"));
}

#[test]
fn field_dump_covers_every_cell_once() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("small.json");
    fs::write(&file, SMALL_2D).unwrap();
    let out = dir.path().join("field.csv");
    let res = bin()
        .arg("field")
        .arg(&file)
        .args(["--csv", "--body", "round"])
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(res.status.success(), "stderr: {}", String::from_utf8_lossy(&res.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("ix,iy,iz,value"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 64 * 64, "one row per grid cell");
    // Cells on the unit circle are at distance ~0; corners are ~√2 − 1 away.
    let mut center_val = f64::NAN;
    let mut corner_val = f64::NAN;
    for row in &rows {
        let f: Vec<&str> = row.split(',').collect();
        let (ix, iy): (usize, usize) = (f[0].parse().unwrap(), f[1].parse().unwrap());
        assert_eq!(f[2], "0");
        let v: f64 = f[3].parse().unwrap();
        assert!(v >= 0.0);
        if (ix, iy) == (32, 32) {
            center_val = v;
        }
        if (ix, iy) == (0, 0) {
            corner_val = v;
        }
    }
    // The disc has positive mass, so its cells are seeds: distance 0 at
    // the center, positive outside.
    assert_eq!(center_val, 0.0);
    assert!(corner_val > 0.5, "corner distance {corner_val}");
}

#[test]
fn bodies_command_reports_the_gauge_data() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("small.json");
    fs::write(&file, SMALL_2D).unwrap();
    let res = bin().arg("bodies").arg(&file).output().unwrap();
    assert!(res.status.success());
    let stdout = String::from_utf8(res.stdout).unwrap();
    assert!(stdout.contains("round"), "stdout: {stdout}");
    assert!(stdout.contains("diameter"), "stdout: {stdout}");
}

#[test]
fn committed_deck_files_parse_and_resolve() {
    let deck = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let mut seen = 0;
    for entry in fs::read_dir(&deck).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let text = fs::read_to_string(&path).unwrap();
        let file = parse_scenario(&text).unwrap_or_else(|e| {
            panic!("{} does not parse: {e}", path.display())
        });
        assert!(!file.name.is_empty());
        seen += 1;
    }
    assert!(seen >= 3, "expected the committed deck, found {seen} files");
}
