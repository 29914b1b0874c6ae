//! Driving the command-line front end from code with a JSON config file.
//! Flags override file values, which override built-in defaults.
//!
//! Run with `cargo run --example cli_config`.

use std::fs;

use dislocation_phase::cli;

fn main() -> std::io::Result<()> {
    let dir = std::env::temp_dir().join("dislocation-phase-example");
    fs::create_dir_all(&dir)?;
    let config = dir.join("run.json");
    fs::write(
        &config,
        r#"{
  "defect": {"b0": 1.0},
  "noise": {"D": 0.5, "dt": 0.01, "T": 1.0, "dims": 3},
  "mode": {"k": 1.0},
  "sweep": {"n_traj": 2000},
  "seed": 7,
  "format": "json"
}"#,
    )?;
    let output = dir.join("noise.json");
    let code = cli::run([
        "dislocation-phase",
        "noise-mc",
        "--config",
        config.to_str().unwrap(),
        "--k",
        "2",
        "--deterministic",
        "--output",
        output.to_str().unwrap(),
    ]);
    println!("exit code {code}");
    print!("{}", fs::read_to_string(&output)?);
    Ok(())
}
