//! End-to-end tests of the `dislocation-phase` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dislocation-phase"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

/// Header and rows of a CSV written by the binary.
fn read_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<f64>], name: &str) -> Vec<f64> {
    let idx = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[idx]).collect()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn metric_flat_row() {
    let out = run(&["metric", "--b0", "0", "--rho", "2"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let (h, rows) = read_csv(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(&h[..6], ["rho", "g_rr", "g_pp", "g_pz", "g_zz", "det"]);
    assert_eq!(column(&h, &rows, "g_pp"), [4.0]);
    assert_eq!(column(&h, &rows, "det"), [4.0]);
}

#[test]
fn metric_from_beta() {
    let out = run(&["metric", "--beta", "0.5", "--rho", "2", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let row = &json_stdout(&out)["rows"][0];
    assert_eq!(row["g_pp"], 4.25);
    assert_eq!(row["g_pz"], 0.5);
    assert!((row["det"].as_f64().unwrap() - 4.0).abs() < 1e-15);
}

#[test]
fn metric_rejects_negative_radius() {
    let out = run(&["metric", "--rho", "-1"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("rho must be positive"), "{}", stderr(&out));
}

#[test]
fn metric_grid_range() {
    let out = run(&[
        "metric",
        "--rho-min",
        "1",
        "--rho-max",
        "3",
        "--n-rho",
        "5",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let rows = json_stdout(&out)["rows"].as_array().unwrap().clone();
    let rho: Vec<f64> = rows.iter().map(|r| r["rho"].as_f64().unwrap()).collect();
    assert_eq!(rho, [1.0, 1.5, 2.0, 2.5, 3.0]);
}

#[test]
fn phase_full_loop_is_k_b0() {
    let out = run(&["phase", "--k", "1.5", "--b0", "2", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let row = &json_stdout(&out)["rows"][0];
    assert!((row["gamma_closed"].as_f64().unwrap() - 3.0).abs() < 1e-12);
    assert!((row["gamma_quadrature"].as_f64().unwrap() - 3.0).abs() < 1e-12);
    let (re, im) = (row["factor_re"].as_f64().unwrap(), row["factor_im"].as_f64().unwrap());
    assert!((re - 3f64.cos()).abs() < 1e-12 && (im - 3f64.sin()).abs() < 1e-12);
}

#[test]
fn mode_check_flat_case_converges() {
    let out = run(&[
        "mode-check",
        "--b0",
        "0",
        "--l",
        "0",
        "--kappa",
        "1",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let ratio = json_stdout(&out)["summary"]["ratio"].as_f64().unwrap();
    assert!((0.2..=0.3).contains(&ratio), "ratio {ratio}");
}

#[test]
fn mode_check_plane_wave_is_exact() {
    let out = run(&[
        "mode-check",
        "--b0",
        "0",
        "--l",
        "0",
        "--k",
        "1",
        "--kappa",
        "0",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(json_stdout(&out)["summary"]["residual"].as_f64().unwrap() < 1e-12);
}

#[test]
fn mode_check_wrong_energy_fails() {
    let out = run(&[
        "mode-check",
        "--b0",
        "0",
        "--kappa",
        "1",
        "--energy-offset",
        "0.1",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 1);
    assert!(json_stdout(&out)["summary"]["ratio"].as_f64().unwrap() > 0.9);
}

#[test]
fn mode_check_reports_refinement() {
    // twisted mode: second-order convergent, above the default threshold
    let out = run(&[
        "mode-check",
        "--beta",
        "0.3",
        "--l",
        "2",
        "--k",
        "1.5",
        "--kappa",
        "2",
        "--format",
        "json",
    ]);
    let doc = json_stdout(&out);
    let ratio = doc["summary"]["ratio"].as_f64().unwrap();
    assert!((0.2..=0.3).contains(&ratio), "ratio {ratio}");
    assert_eq!(doc["rows"][1]["n_rho"], 401);
    assert_eq!(doc["rows"][1]["n_phi"], 128);
    let loose = run(&[
        "mode-check",
        "--beta",
        "0.3",
        "--l",
        "2",
        "--k",
        "1.5",
        "--kappa",
        "2",
        "--threshold",
        "1e-2",
    ]);
    assert_eq!(code(&loose), 0);
}

#[test]
fn noise_mc_matches_prediction() {
    let out = run(&[
        "noise-mc", "--k", "1", "--T", "1", "--D", "0.5", "--dt", "0.001", "--n-traj", "10000", "--seed", "42",
        "--format", "json",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let s = &json_stdout(&out)["summary"];
    assert_eq!(s["prediction"], 1.0);
    assert!((s["m2"].as_f64().unwrap() - 1.0).abs() < 0.05);
}

#[test]
fn noise_mc_without_noise_is_zero() {
    let out = run(&["noise-mc", "--D", "0", "--n-traj", "50", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let s = &json_stdout(&out)["summary"];
    assert_eq!(s["mean"], 0.0);
    assert_eq!(s["m2"], 0.0);
}

#[test]
fn noise_mc_rejects_single_trajectory() {
    let out = run(&["noise-mc", "--n-traj", "1"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("n_traj must be at least 2"));
}

#[test]
fn noise_mc_exact_flag() {
    // the unexpanded shift carries a positive second-order mean from the
    // noise components perpendicular to b0, so the zero-mean check fails
    let out = run(&[
        "noise-mc", "--D", "1e-6", "--n-traj", "200", "--exact", "--format", "json",
    ]);
    assert_eq!(code(&out), 1, "{}", stderr(&out));
    let doc = json_stdout(&out);
    assert_eq!(doc["config"]["exact"], true);
    assert!(doc["summary"]["z_mean"].as_f64().unwrap() > 3.0);
    let linear = run(&["noise-mc", "--D", "1e-6", "--n-traj", "200"]);
    assert_eq!(code(&linear), 0);
}

#[test]
fn sweep_k_slope() {
    let out = run(&[
        "sweep",
        "--axis",
        "k",
        "--values",
        "0.5,1,2,4,8",
        "--n-traj",
        "10000",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let s = &json_stdout(&out)["summary"];
    assert_eq!(s["expected_slope"], 2.0);
    assert!((s["slope"].as_f64().unwrap() - 2.0).abs() < 0.05);
}

#[test]
fn sweep_t_slope() {
    let out = run(&[
        "sweep",
        "--axis",
        "T",
        "--values",
        "1,2,4,8,16",
        "--n-traj",
        "10000",
        "--dt",
        "0.01",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!((json_stdout(&out)["summary"]["slope"].as_f64().unwrap() + 1.0).abs() < 0.05);
}

#[test]
fn sweep_rejects_bad_specs() {
    assert_eq!(code(&run(&["sweep", "--axis", "x"])), 2);
    assert_eq!(code(&run(&["sweep", "--axis", "k", "--values", "1,2,4"])), 2);
    let narrow = run(&["sweep", "--axis", "D", "--values", "0.25,0.5,1,2"]);
    assert_eq!(code(&narrow), 2);
    assert!(stderr(&narrow).contains("decade"));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "run.json",
        r#"{"defect": {"b0": 0}, "grid": {"rho_min": 2, "rho_max": 4, "n_rho": 3}}"#,
    );
    let out = run(&["metric", "--config", &cfg, "--format", "json"]);
    assert_eq!(code(&out), 0);
    let doc = json_stdout(&out);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 3);
    assert_eq!(doc["rows"][0]["g_pz"], 0.0);
    let out = run(&[
        "metric",
        "--config",
        &cfg,
        "--b0",
        "6.283185307179586",
        "--rho",
        "1",
        "--format",
        "json",
    ]);
    assert!((json_stdout(&out)["rows"][0]["g_pz"].as_f64().unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn config_echoes_effective_values() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "run.json",
        r#"{"noise": {"D": 0.25, "dims": 1}, "sweep": {"n_traj": 20}, "seed": 9}"#,
    );
    let out = run(&[
        "noise-mc",
        "--config",
        &cfg,
        "--T",
        "2",
        "--format",
        "json",
        "--deterministic",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let c = &json_stdout(&out)["config"];
    assert_eq!(c["noise"]["D"], 0.25);
    assert_eq!(c["noise"]["T"], 2.0);
    assert_eq!(c["noise"]["dims"], 1);
    assert_eq!(c["n_traj"], 20);
    assert_eq!(c["seed"], 9);
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = TempDir::new().unwrap();
    for text in [r#"{"defekt": {"b0": 1}}"#, r#"{"noise": {"sigma": 1}}"#, "{not json"] {
        let cfg = write(&dir, "bad.json", text);
        let out = run(&["metric", "--config", &cfg, "--rho", "1"]);
        assert_eq!(code(&out), 2, "{text}");
        assert!(stderr(&out).contains("invalid config"));
    }
    assert_eq!(code(&run(&["metric", "--config", "/nonexistent/run.json"])), 2);
}

#[test]
fn deterministic_output_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "run.json",
        r#"{"noise": {"dt": 0.01}, "sweep": {"n_traj": 500}, "seed": 5}"#,
    );
    for format in ["csv", "json"] {
        let a = dir.path().join(format!("a.{format}"));
        let b = dir.path().join(format!("b.{format}"));
        for (path, threads) in [(&a, "1"), (&b, "3")] {
            let out = run(&[
                "noise-mc",
                "--config",
                &cfg,
                "--format",
                format,
                "--deterministic",
                "--threads",
                threads,
                "--output",
                path.to_str().unwrap(),
            ]);
            assert_eq!(code(&out), 0, "{}", stderr(&out));
        }
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    }
    let sa = fs::read(dir.path().join("a.summary.json")).unwrap();
    let sb = fs::read(dir.path().join("b.summary.json")).unwrap();
    assert_eq!(sa, sb);
}

#[test]
fn timestamp_only_without_deterministic() {
    let out = run(&["metric", "--rho", "1", "--format", "json"]);
    assert!(json_stdout(&out).get("generated_unix").is_some());
    let out = run(&["metric", "--rho", "1", "--format", "json", "--deterministic"]);
    assert!(json_stdout(&out).get("generated_unix").is_none());
}

fn load_summary(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn csv_round_trip_reproduces_summary() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("sweep.csv");
    let out = run(&[
        "sweep",
        "--axis",
        "D",
        "--values",
        "0.1,0.2,0.5,1,2",
        "--n-traj",
        "400",
        "--dt",
        "0.01",
        "--deterministic",
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert!(code(&out) == 0 || code(&out) == 1, "{}", stderr(&out));
    let text = fs::read_to_string(&csv).unwrap();
    assert!(!text.contains('\r'));
    let (h, rows) = read_csv(&text);
    assert_eq!(&h[..4], ["value", "m2", "se_m2", "prediction"]);

    // least-squares slope of ln m2 on ln value, recomputed here
    let xs: Vec<f64> = column(&h, &rows, "value").iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = column(&h, &rows, "m2").iter().map(|v| v.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;

    let summary = load_summary(&dir.path().join("sweep.summary.json"));
    let reported = summary["summary"]["slope"].as_f64().unwrap();
    assert!((slope - reported).abs() < 1e-12, "{slope} vs {reported}");
    for (v, p) in column(&h, &rows, "value").iter().zip(column(&h, &rows, "prediction")) {
        assert!((p - 2.0 * v).abs() < 1e-15, "prediction 2Dk²/T with k = T = 1");
    }
}

#[test]
fn noise_csv_round_trip() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("mc.csv");
    let out = run(&[
        "noise-mc",
        "--n-traj",
        "300",
        "--dt",
        "0.01",
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let (h, rows) = read_csv(&fs::read_to_string(&csv).unwrap());
    let summary = load_summary(&dir.path().join("mc.summary.json"));
    for key in ["mean", "m2", "prediction", "z_mean", "z_m2"] {
        let from_csv = column(&h, &rows, key)[0];
        let from_json = summary["summary"][key].as_f64().unwrap();
        assert!(
            (from_csv - from_json).abs() <= 1e-12 * from_json.abs().max(1.0),
            "{key}"
        );
    }
}

#[test]
fn exit_codes_stay_in_range() {
    let cases: &[&[&str]] = &[
        &[],
        &["--help"],
        &["--version"],
        &["frobnicate"],
        &["metric", "--rho", "nan"],
        &["metric", "--b0", "1", "--beta", "1"],
        &["phase", "--b0", "-1"],
        &["mode-check", "--n-rho", "2"],
        &["noise-mc", "--dt", "0.3", "--n-traj", "10"],
        &["noise-mc", "--threads", "0"],
        &["sweep", "--values", "a,b"],
    ];
    for args in cases {
        let c = code(&run(args));
        assert!((0..=2).contains(&c), "{args:?} gave {c}");
    }
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["noise-mc", "--dt", "0.3", "--n-traj", "10"])), 2);
    assert_eq!(code(&run(&["noise-mc", "--threads", "0"])), 2);
}
