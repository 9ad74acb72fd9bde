//! End-to-end tests of the `crs-noma-lab` binary and its CSV artifacts.

use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crs-noma-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("crs-noma-lab-test-{}-{name}", std::process::id()));
    p
}

fn read_rows(path: &PathBuf) -> (String, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).expect("output file exists");
    let mut lines = text.lines();
    let comment = lines.next().expect("comment line").to_string();
    assert!(comment.starts_with("# crs-noma-lab v"));
    let header = lines.next().expect("header line").to_string();
    let rows = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    (header, rows)
}

#[test]
fn fig3_reproduces_power_split_anchor() {
    let out = tmp("fig3.csv");
    let res = run(&["figure", "fig3", "--out", out.to_str().unwrap()]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let (header, rows) = read_rows(&out);
    assert_eq!(header, "a2,delta1,delta2,ccdf_sd,ccdf_sr,product,outage");
    assert_eq!(rows.len(), 24);
    let best = rows
        .iter()
        .min_by(|a, b| {
            let pa: f64 = a[6].parse().unwrap();
            let pb: f64 = b[6].parse().unwrap();
            pa.partial_cmp(&pb).unwrap()
        })
        .unwrap();
    assert_eq!(best[0].parse::<f64>().unwrap(), 0.09);
    std::fs::remove_file(out).ok();
}

#[test]
fn optimize_a2_emits_the_anchor_row() {
    let out = tmp("opt.csv");
    let res = run(&[
        "optimize-a2",
        "--m",
        "2",
        "--n",
        "2",
        "--rho-start-db",
        "2",
        "--rho-stop-db",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success());
    let (header, rows) = read_rows(&out);
    assert_eq!(header, "rho_db,a2_star,outage_at_star,grid_points");
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][1].parse::<f64>().unwrap(), 0.09);
    std::fs::remove_file(out).ok();
}

#[test]
fn validate_small_grid_exits_zero() {
    let out = tmp("validate.csv");
    let res = run(&[
        "validate",
        "--m",
        "1",
        "--n",
        "1",
        "--trials",
        "20000",
        "--rho-step-db",
        "6",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(
        res.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&res.stderr)
    );
    let (_, rows) = read_rows(&out);
    assert_eq!(rows.len(), 6); // 0..30 dB step 6
    for row in &rows {
        assert!(!row[15].is_empty(), "outage_analytic column filled");
        assert!(!row[13].is_empty(), "rate_mc column filled");
    }
    std::fs::remove_file(out).ok();
}

#[test]
fn single_point_sweep_yields_single_row() {
    let out = tmp("single.csv");
    let res = run(&[
        "rate-sweep",
        "--rho-start-db",
        "10",
        "--rho-stop-db",
        "10",
        "--trials",
        "1000",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success());
    let (header, rows) = read_rows(&out);
    assert_eq!(header.split(',').count(), 19);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].len(), 19);
    std::fs::remove_file(out).ok();
}

#[test]
fn csv_floats_round_trip() {
    let out = tmp("roundtrip.csv");
    let res = run(&[
        "rate-sweep",
        "--m",
        "2",
        "--n",
        "2",
        "--combiner",
        "mrc",
        "--rho-stop-db",
        "6",
        "--trials",
        "5000",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success());
    let (_, rows) = read_rows(&out);
    for row in &rows {
        for cell in row {
            if cell.is_empty() || cell.chars().all(|c| c.is_ascii_alphabetic()) {
                continue;
            }
            let v: f64 = cell.parse().expect("numeric cell parses");
            assert_eq!(&v.to_string(), cell, "float cell must round-trip");
        }
    }
    std::fs::remove_file(out).ok();
}

#[test]
fn figure_presets_are_deterministic() {
    let out1 = tmp("fig8-a.csv");
    let out2 = tmp("fig8-b.csv");
    for out in [&out1, &out2] {
        let res = run(&["figure", "fig8", "--seed", "7", "--out", out.to_str().unwrap()]);
        assert!(res.status.success());
    }
    assert_eq!(
        std::fs::read(&out1).unwrap(),
        std::fs::read(&out2).unwrap(),
        "same preset + seed must emit identical bytes"
    );
    std::fs::remove_file(out1).ok();
    std::fs::remove_file(out2).ok();
}

#[test]
fn oma_rows_have_empty_analytic_cells() {
    let out = tmp("oma.csv");
    let res = run(&[
        "rate-sweep",
        "--scheme",
        "oma",
        "--rho-stop-db",
        "4",
        "--trials",
        "2000",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success());
    let (_, rows) = read_rows(&out);
    for row in &rows {
        assert_eq!(row[1], "oma");
        assert!(row[9].is_empty() && row[11].is_empty(), "no analytic columns for OMA");
        assert!(!row[13].is_empty(), "MC column filled");
    }
    std::fs::remove_file(out).ok();
}

#[test]
fn usage_errors_name_the_constraint() {
    let res = run(&["rate-sweep", "--a2", "0.6", "--trials", "10"]);
    assert_eq!(res.status.code(), Some(2));
    let err = String::from_utf8_lossy(&res.stderr);
    assert!(err.contains("a2"), "stderr: {err}");

    let res = run(&["rate-sweep", "--rho-step-db", "0", "--trials", "10"]);
    assert_eq!(res.status.code(), Some(2));
    let err = String::from_utf8_lossy(&res.stderr);
    assert!(err.contains("rho-step-db"), "stderr: {err}");

    let res = run(&["outage-sweep", "--scheme", "oma", "--trials", "10"]);
    assert_eq!(res.status.code(), Some(2));

    let res = run(&["figure", "fig99"]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("preset"));
}

#[test]
fn unusual_link_ordering_warns_but_runs() {
    let out = tmp("warn.csv");
    let res = run(&[
        "outage-sweep",
        "--omega-sd",
        "20",
        "--trials",
        "0",
        "--rho-stop-db",
        "5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success());
    assert!(String::from_utf8_lossy(&res.stderr).contains("warning"));
    std::fs::remove_file(out).ok();
}
