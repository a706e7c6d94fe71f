//! End-to-end tests of the `plasmaskin` binary: flags, exit codes and file
//! outputs.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_plasmaskin"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&output.stdout);
    serde_json::from_str(text.trim()).unwrap_or_else(|e| panic!("bad JSON {text:?}: {e}"))
}

fn temp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("plasmaskin-cli-{}-{name}", std::process::id()));
    p
}

#[test]
fn impedance_raw_route_normal_limit() {
    let out = run(&[
        "impedance",
        "--alpha",
        "1e-6",
        "--omega-tau",
        "1e-3",
        "--q",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let record = stdout_json(&out);
    let re = record["re_Z0"].as_f64().unwrap();
    let im = record["im_Z0"].as_f64().unwrap();
    let target = std::f64::consts::FRAC_1_SQRT_2;
    assert!((re - target).abs() < 0.01, "re_Z0 = {re}");
    assert!((im + target).abs() < 0.01, "im_Z0 = {im}");
    assert!(record["gamma"].is_null());
    assert_eq!(record["converged"].as_bool(), Some(true));
}

#[test]
fn impedance_scenario_route_reports_mapping() {
    let out = run(&[
        "impedance",
        "--gamma",
        "1",
        "--epsilon",
        "1e-3",
        "--vc",
        "1e-3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let record = stdout_json(&out);
    assert!((record["alpha"].as_f64().unwrap() - 1000.0).abs() < 1e-9);
    assert!((record["Omega"].as_f64().unwrap() - 1000.0).abs() < 1e-9);
    assert!((record["Q"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn impedance_rejects_mixed_and_missing_routes() {
    let both = run(&[
        "impedance",
        "--gamma",
        "1",
        "--epsilon",
        "1e-3",
        "--vc",
        "1e-3",
        "--alpha",
        "1",
        "--omega-tau",
        "1",
        "--q",
        "0",
    ]);
    assert_eq!(both.status.code(), Some(1));

    let neither = run(&["impedance"]);
    assert_eq!(neither.status.code(), Some(1));

    let partial = run(&["impedance", "--gamma", "1", "--epsilon", "1e-3"]);
    assert_eq!(partial.status.code(), Some(1));
    let message = String::from_utf8_lossy(&partial.stderr);
    assert!(
        message.contains("--vc"),
        "message should name the flag: {message}"
    );
}

#[test]
fn unknown_flags_are_rejected() {
    let out = run(&[
        "impedance",
        "--alpha",
        "1",
        "--omega-tau",
        "0",
        "--q",
        "0",
        "--bogus",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--bogus"));
}

#[test]
fn no_displacement_flag_zeroes_q() {
    let out = run(&[
        "impedance",
        "--gamma",
        "1",
        "--epsilon",
        "1e-3",
        "--vc",
        "1e-3",
        "--no-displacement",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let record = stdout_json(&out);
    assert_eq!(record["Q"].as_f64(), Some(0.0));
}

#[test]
fn unreachable_tolerance_exits_with_code_two() {
    let out = bin()
        .args(["impedance", "--alpha", "1", "--omega-tau", "1", "--q", "0"])
        .args(["--rel-tol", "1e-15"])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
    let record = stdout_json(&out);
    assert_eq!(record["converged"].as_bool(), Some(false));
}

#[test]
fn sweep_writes_csv_and_svg_and_prints_peak() {
    let csv = temp_path("sweep.csv");
    let svg = temp_path("sweep.svg");
    let out = run(&[
        "sweep",
        "--gamma-range",
        "0.9:1.1",
        "--points",
        "5",
        "--epsilon",
        "1e-2",
        "--vc",
        "1e-3",
        "--out",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
        "--quantity",
        "abs",
        "--log-y",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with(
        "gamma,epsilon,v_c,alpha,Omega,Q,re_Z0,im_Z0,abs_Z0,arg_Z0,converged,n_evals\n"
    ));
    assert_eq!(text.lines().count(), 6);

    let summary = stdout_json(&out);
    assert!((summary["gamma_star"].as_f64().unwrap() - 1.0).abs() < 0.02);

    assert!(std::fs::read_to_string(&svg).unwrap().contains("<polyline"));
    std::fs::remove_file(&csv).ok();
    std::fs::remove_file(&svg).ok();
}

#[test]
fn sweep_rejects_unknown_output_extension() {
    let out = run(&["sweep", "--points", "2", "--out", "/tmp/records.parquet"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn minimal_two_point_sweep() {
    let csv = temp_path("two.csv");
    let out = run(&[
        "sweep",
        "--points",
        "2",
        "--epsilon",
        "1e-2",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 3);
    std::fs::remove_file(&csv).ok();
}

#[test]
fn field_wall_value_matches_impedance() {
    // e(0) = -Lambda and Lambda = i Z0 / sqrt(alpha).
    let csv = temp_path("field.csv");
    let field = run(&[
        "field",
        "--gamma",
        "1",
        "--epsilon",
        "1e-3",
        "--vc",
        "1e-3",
        "--x-grid",
        "0,1,1000",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(
        field.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&field.stderr)
    );

    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("x,re_e,im_e\n"));
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|line| line.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    let wall = &rows[0];

    // Far row must have decayed away relative to the wall value.
    let wall_mag = (wall[1] * wall[1] + wall[2] * wall[2]).sqrt();
    let far_mag = (rows[2][1] * rows[2][1] + rows[2][2] * rows[2][2]).sqrt();
    assert!(
        far_mag < 1e-6 * wall_mag,
        "far field {far_mag:e} vs wall {wall_mag:e}"
    );

    let imp = run(&[
        "impedance",
        "--gamma",
        "1",
        "--epsilon",
        "1e-3",
        "--vc",
        "1e-3",
    ]);
    let record = stdout_json(&imp);
    let alpha = record["alpha"].as_f64().unwrap();
    let (re_z0, im_z0) = (
        record["re_Z0"].as_f64().unwrap(),
        record["im_Z0"].as_f64().unwrap(),
    );
    // Lambda = i Z0/sqrt(alpha); e(0) = -Lambda.
    let scale = alpha.sqrt();
    let expect_re = im_z0 / scale;
    let expect_im = -re_z0 / scale;
    assert!(
        ((wall[1] - expect_re).powi(2) + (wall[2] - expect_im).powi(2)).sqrt()
            < 1e-5 * (expect_re * expect_re + expect_im * expect_im).sqrt(),
        "e(0) = {wall:?}, expected ({expect_re}, {expect_im})"
    );
    std::fs::remove_file(&csv).ok();
}

#[test]
fn distribution_rows_are_symmetric_at_the_wall() {
    let csv = temp_path("dist.csv");
    let out = run(&[
        "distribution",
        "--gamma",
        "1",
        "--epsilon",
        "1e-3",
        "--vc",
        "1e-3",
        "--x",
        "0",
        "--mu-list",
        "0.5,-0.5,1,-1",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("x,mu,re_h,im_h\n"));
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|line| line.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 4);
    for pair in rows.chunks(2) {
        assert_eq!(pair[0][0], 0.0);
        assert!((pair[0][2] - pair[1][2]).abs() < 1e-8 * pair[0][2].abs());
        assert!((pair[0][3] - pair[1][3]).abs() < 1e-8 * pair[0][3].abs());
    }
    std::fs::remove_file(&csv).ok();
}

#[test]
fn plot_command_round_trips_sweep_csv() {
    let csv = temp_path("plot-in.csv");
    let svg = temp_path("plot-out.svg");
    let sweep = run(&[
        "sweep",
        "--gamma-range",
        "0.9:1.1",
        "--points",
        "4",
        "--epsilon",
        "1e-2",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(sweep.status.code(), Some(0));
    let plot = run(&[
        "plot",
        "--input",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
        "--quantity",
        "arg",
    ]);
    assert_eq!(
        plot.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&plot.stderr)
    );
    assert!(std::fs::read_to_string(&svg).unwrap().contains("arg Z0"));
    std::fs::remove_file(&csv).ok();
    std::fs::remove_file(&svg).ok();
}

#[test]
fn default_sweep_peak_summary_sits_at_resonance() {
    let csv = temp_path("resonance.csv");
    let out = run(&[
        "sweep",
        "--epsilon",
        "1e-3",
        "--vc",
        "1e-3",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let summary = stdout_json(&out);
    let gamma_star = summary["gamma_star"].as_f64().unwrap();
    assert!((gamma_star - 1.0).abs() < 0.01, "gamma_star = {gamma_star}");
    std::fs::remove_file(&csv).ok();
}

#[test]
fn thread_cap_does_not_change_sweep_output() {
    let a = temp_path("threads-1.csv");
    let b = temp_path("threads-4.csv");
    for (path, threads) in [(&a, "1"), (&b, "4")] {
        let out = bin()
            .env("PLASMASKIN_THREADS", threads)
            .args([
                "sweep",
                "--gamma-range",
                "0.95:1.05",
                "--points",
                "7",
                "--epsilon",
                "1e-2",
                "--out",
                path.to_str().unwrap(),
            ])
            .output()
            .expect("binary runs");
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(
        std::fs::read_to_string(&a).unwrap(),
        std::fs::read_to_string(&b).unwrap()
    );
    std::fs::remove_file(&a).ok();
    std::fs::remove_file(&b).ok();
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for sub in [
        "impedance",
        "sweep",
        "field",
        "distribution",
        "validate",
        "plot",
    ] {
        assert!(text.contains(sub), "help must list {sub}");
    }
}
