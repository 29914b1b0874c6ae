//! Dirac phase `γ = ∫ kβ dφ` accumulated along an angular sweep.
//!
//! Phases are reported unwrapped (never reduced mod 2π) so that they add
//! along concatenated paths.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::ScrewDefect;
use crate::stats::CompensatedSum;

/// Tolerance on `φ(T) − φ(0) = 2π` for a path flagged cyclic.
const CYCLIC_TOL: f64 = 1e-12;

/// Angle as a function of time, sampled on a uniform time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularPath {
    phi0: f64,
    period: f64,
    times: Vec<f64>,
    angles: Vec<f64>,
    cyclic: bool,
}

impl AngularPath {
    /// One full turn in time `period` at constant angular speed, `n ≥ 2`
    /// samples with `dφ = (2π / T) dt`.
    pub fn cyclic(phi0: f64, period: f64, n: usize) -> Result<Self> {
        Self::uniform(phi0, phi0 + TAU, period, n)
    }

    /// Uniform sweep from `phi0` to `phi1` over `[0, period]`.
    pub fn uniform(phi0: f64, phi1: f64, period: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!(
                "an angular path needs at least 2 samples, got {n}"
            )));
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::domain(format!("period must be positive, got {period}")));
        }
        if !phi0.is_finite() || !phi1.is_finite() {
            return Err(Error::domain("path endpoints must be finite"));
        }
        let last = (n - 1) as f64;
        let mut times: Vec<f64> = (0..n).map(|j| period * j as f64 / last).collect();
        let mut angles: Vec<f64> = (0..n).map(|j| phi0 + (phi1 - phi0) * j as f64 / last).collect();
        times[n - 1] = period;
        angles[n - 1] = phi1;
        let cyclic = ((phi1 - phi0) - TAU).abs() <= CYCLIC_TOL;
        Ok(AngularPath {
            phi0,
            period,
            times,
            angles,
            cyclic,
        })
    }

    /// Arbitrary samples `(t_j, φ_j)`. Times must start at 0 and increase
    /// strictly; the last time is the period.
    pub fn from_samples(samples: &[(f64, f64)]) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::domain("an angular path needs at least 2 samples"));
        }
        if samples[0].0 != 0.0 {
            return Err(Error::domain("angular path must start at t = 0"));
        }
        if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::domain("angular path times must increase strictly"));
        }
        if samples.iter().any(|(t, p)| !t.is_finite() || !p.is_finite()) {
            return Err(Error::domain("angular path samples must be finite"));
        }
        let phi0 = samples[0].1;
        let period = samples[samples.len() - 1].0;
        let sweep = samples[samples.len() - 1].1 - phi0;
        Ok(AngularPath {
            phi0,
            period,
            times: samples.iter().map(|s| s.0).collect(),
            angles: samples.iter().map(|s| s.1).collect(),
            cyclic: (sweep - TAU).abs() <= CYCLIC_TOL,
        })
    }

    pub fn phi0(&self) -> f64 {
        self.phi0
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseMethod {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseResult {
    /// Accumulated phase in radians, unwrapped.
    pub gamma: f64,
    pub method: PhaseMethod,
}

/// How the integrand is weighted on each interval `[t_j, t_{j+1}]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QuadratureRule {
    /// Average of the two endpoint values.
    #[default]
    Trapezoid,
    /// Value at the left endpoint only; the last sample is not used. This is
    /// the rule that matches an Itô sum over white-noise samples.
    LeftPoint,
}

/// `γ = kβ (φ1 − φ0)` for a time-independent defect.
pub fn dirac_phase_closed(k: f64, defect: &ScrewDefect, phi0: f64, phi1: f64) -> PhaseResult {
    PhaseResult {
        gamma: k * defect.beta() * (phi1 - phi0),
        method: PhaseMethod::ClosedForm,
    }
}

/// Trapezoidal `∫ k β(t) (dφ/dt) dt` along `path`; `beta_of_t[j]` is `β` at
/// the path's `t_j`.
pub fn dirac_phase_quadrature(k: f64, beta_of_t: &[f64], path: &AngularPath) -> Result<PhaseResult> {
    dirac_phase_quadrature_with(k, beta_of_t, path, QuadratureRule::Trapezoid)
}

/// [`dirac_phase_quadrature`] with an explicit rule.
pub fn dirac_phase_quadrature_with(
    k: f64,
    beta_of_t: &[f64],
    path: &AngularPath,
    rule: QuadratureRule,
) -> Result<PhaseResult> {
    if beta_of_t.len() != path.len() {
        return Err(Error::shape(
            format!("{} beta samples", path.len()),
            format!("{} beta samples", beta_of_t.len()),
        ));
    }
    let angles = path.angles();
    let mut acc = CompensatedSum::new();
    for j in 0..angles.len() - 1 {
        let dphi = angles[j + 1] - angles[j];
        let beta = match rule {
            QuadratureRule::Trapezoid => 0.5 * (beta_of_t[j] + beta_of_t[j + 1]),
            QuadratureRule::LeftPoint => beta_of_t[j],
        };
        acc.add(beta * dphi);
    }
    Ok(PhaseResult {
        gamma: k * acc.value(),
        method: PhaseMethod::Quadrature,
    })
}

/// `e^{iγ}`.
pub fn phase_factor(result: &PhaseResult) -> Complex64 {
    Complex64::from_polar(1.0, result.gamma)
}
