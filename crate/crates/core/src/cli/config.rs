//! JSON run configuration.
//!
//! Every block and key is optional; unknown keys anywhere are rejected.
//! Values resolve as command-line flag, then config file, then the built-in
//! default.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DefectBlock {
    pub b0: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsBlock {
    pub hbar: Option<f64>,
    pub mass: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseBlock {
    #[serde(rename = "D")]
    pub diffusion: Option<f64>,
    pub dt: Option<f64>,
    #[serde(rename = "T")]
    pub horizon: Option<f64>,
    pub dims: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeBlock {
    pub l: Option<i32>,
    pub k: Option<f64>,
    pub kappa: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBlock {
    pub rho_min: Option<f64>,
    pub rho_max: Option<f64>,
    pub n_rho: Option<usize>,
    pub n_phi: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub axis: Option<String>,
    pub values: Option<Vec<f64>>,
    pub n_traj: Option<usize>,
}

/// Contents of a `--config` file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub defect: DefectBlock,
    #[serde(default)]
    pub constants: ConstantsBlock,
    #[serde(default)]
    pub noise: NoiseBlock,
    #[serde(default)]
    pub mode: ModeBlock,
    #[serde(default)]
    pub grid: GridBlock,
    #[serde(default)]
    pub sweep: SweepBlock,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

pub mod defaults {
    pub const B0: f64 = 1.0;
    pub const HBAR: f64 = 1.0;
    pub const MASS: f64 = 1.0;
    pub const DIFFUSION: f64 = 0.5;
    pub const DT: f64 = 1e-3;
    pub const HORIZON: f64 = 1.0;
    pub const DIMS: usize = 3;
    pub const L: i32 = 0;
    pub const K: f64 = 1.0;
    pub const KAPPA: f64 = 1.0;
    pub const RHO_MIN: f64 = 0.5;
    pub const RHO_MAX: f64 = 10.0;
    pub const N_RHO: usize = 201;
    pub const N_PHI: usize = 64;
    pub const SWEEP_AXIS: &str = "T";
    pub const SWEEP_VALUES: [f64; 5] = [1.0, 2.0, 4.0, 8.0, 16.0];
    pub const N_TRAJ: usize = 10_000;
    pub const SEED: u64 = 42;
}

/// First of flag, file value, default.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}
