//! Scaling sweeps of `⟨Δγ²⟩` over one parameter with a log-log slope fit.
//!
//! Each sweep point runs an independent ensemble whose master seed is the
//! base seed scrambled with the point index.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::noise::{ensemble_moments, predicted_second_moment, substream_seed, EnsembleStats, NoiseConfig};
use crate::stats::{fit_line, LineFit};

/// Domain tag mixed into per-point seeds so they never coincide with
/// trajectory substream seeds of the base config.
const SWEEP_SEED_TAG: u64 = 0x5EED_5EED_0000_0000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// Axial wavenumber `k`.
    K,
    /// Period `T`.
    T,
    /// Noise strength `D`.
    D,
}

impl SweepAxis {
    /// Slope of `log ⟨Δγ²⟩` against `log value` implied by `2Dk²/T`.
    pub fn expected_slope(&self) -> f64 {
        match self {
            SweepAxis::K => 2.0,
            SweepAxis::T => -1.0,
            SweepAxis::D => 1.0,
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepAxis::K => "k",
            SweepAxis::T => "T",
            SweepAxis::D => "D",
        })
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "k" => Ok(SweepAxis::K),
            "T" => Ok(SweepAxis::T),
            "D" => Ok(SweepAxis::D),
            other => Err(Error::config(format!(
                "sweep axis must be one of k, T, D, got {other:?}"
            ))),
        }
    }
}

/// Parameters held fixed while one axis varies.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepBase {
    pub k: f64,
    pub b0: Vec<f64>,
    pub config: NoiseConfig,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub stats: EnsembleStats,
    /// `2Dk²/T` at this point.
    pub prediction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub points: Vec<SweepPoint>,
    pub fit: LineFit,
}

impl SweepResult {
    pub fn slope(&self) -> f64 {
        self.fit.slope
    }

    pub fn expected_slope(&self) -> f64 {
        self.axis.expected_slope()
    }

    pub fn slope_within(&self, tol: f64) -> bool {
        (self.slope() - self.expected_slope()).abs() < tol
    }
}

/// Least-squares slope of `ln m2` against `ln value`.
pub fn fit_loglog_slope(points: &[(f64, f64)]) -> Result<LineFit> {
    if points.iter().any(|&(v, m)| !(v > 0.0 && m > 0.0)) {
        return Err(Error::domain("log-log fit needs strictly positive values and moments"));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(v, m)| (v.ln(), m.ln())).collect();
    fit_line(&logs).ok_or_else(|| Error::domain("log-log fit needs at least two distinct values"))
}

fn validate_values(values: &[f64]) -> Result<()> {
    if values.len() < 4 {
        return Err(Error::config(format!(
            "a sweep needs at least 4 values, got {}",
            values.len()
        )));
    }
    if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::config("sweep values must be positive and finite"));
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(0.0, f64::max);
    if hi < 10.0 * lo {
        return Err(Error::config(format!(
            "sweep values must span at least one decade, got [{lo}, {hi}]"
        )));
    }
    Ok(())
}

/// Runs one ensemble per value of `axis` and fits the log-log slope.
pub fn scaling_sweep(axis: SweepAxis, values: &[f64], base: &SweepBase, n_traj: usize) -> Result<SweepResult> {
    validate_values(values)?;
    let mut points = Vec::with_capacity(values.len());
    for (idx, &value) in values.iter().enumerate() {
        let seed = substream_seed(base.config.master_seed(), SWEEP_SEED_TAG ^ idx as u64);
        let mut k = base.k;
        let config = match axis {
            SweepAxis::K => {
                k = value;
                base.config
            }
            SweepAxis::T => base.config.with_horizon(value)?,
            SweepAxis::D => base.config.with_diffusion(value)?,
        }
        .with_seed(seed);
        let stats = ensemble_moments(k, &base.b0, &config, n_traj, false)?;
        points.push(SweepPoint {
            value,
            stats,
            prediction: predicted_second_moment(k, &config),
        });
    }
    let pairs: Vec<(f64, f64)> = points.iter().map(|p| (p.value, p.stats.m2_dgamma)).collect();
    Ok(SweepResult {
        axis,
        points,
        fit: fit_loglog_slope(&pairs)?,
    })
}
