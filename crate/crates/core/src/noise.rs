//! White noise on the Burgers vector and the phase shift it induces.
//!
//! The Burgers vector fluctuates as `b(t) = b0 + N(t)` with
//! `⟨N_i(t)⟩ = 0` and `⟨N_i(t) N_j(t')⟩ = 2D δ(t − t') δ_ij`. On a time grid of
//! step `dt` the noise is a sequence of independent Gaussian vectors with
//! per-component variance `2D/dt`. One period `T` of the cyclic orbit then
//! shifts the Dirac phase by
//!
//! ```text
//! Δγ = (k/T) Σ_j (|b0 + N_j| − |b0|) dt         (exact)
//! Δγ ≈ (k/T) Σ_j (b̂0 · N_j) dt                  (first order in N)
//! ```
//!
//! Both sums use the left-point rule, which makes the discrete variance of
//! the linear form exactly `2Dk²/T` for any `dt`.
//!
//! Every trajectory draws from its own generator, seeded by scrambling the
//! master seed with the trajectory index. Ensembles collect per-trajectory
//! values in index order before reducing, so statistics are bit-identical for
//! any thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::ScrewDefect;
use crate::phase::{dirac_phase_quadrature_with, AngularPath, QuadratureRule};
use crate::stats::{self, CompensatedSum};

/// Number of jackknife batches for the standard error of `⟨Δγ²⟩`.
pub const JACKKNIFE_BATCHES: usize = 100;

const UNIT_TOL: f64 = 1e-12;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the substream for `index` under `master`.
pub fn substream_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index))
}

fn substream(master: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(substream_seed(master, index))
}

/// Discretized white-noise process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseConfig {
    diffusion: f64,
    dt: f64,
    horizon: f64,
    n_steps: usize,
    dims: usize,
    master_seed: u64,
}

impl NoiseConfig {
    /// `diffusion` is `D`, `horizon` is the period `T`, which must be an
    /// integer multiple of `dt`.
    pub fn new(diffusion: f64, dt: f64, horizon: f64, dims: usize, master_seed: u64) -> Result<Self> {
        if !(diffusion.is_finite() && diffusion >= 0.0) {
            return Err(Error::config(format!("D must be non-negative, got {diffusion}")));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::config(format!("dt must be positive, got {dt}")));
        }
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::config(format!("T must be positive, got {horizon}")));
        }
        if dims == 0 {
            return Err(Error::config("dims must be at least 1"));
        }
        let n_steps = (horizon / dt).round();
        if n_steps < 1.0 || (n_steps * dt - horizon).abs() > 1e-12 * horizon.max(1.0) {
            return Err(Error::config(format!(
                "T must be an integer multiple of dt, got T = {horizon}, dt = {dt}"
            )));
        }
        Ok(NoiseConfig {
            diffusion,
            dt,
            horizon,
            n_steps: n_steps as usize,
            dims,
            master_seed,
        })
    }

    pub fn diffusion(&self) -> f64 {
        self.diffusion
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    /// Standard deviation `√(2D/dt)` of each noise component per step.
    pub fn step_std(&self) -> f64 {
        (2.0 * self.diffusion / self.dt).sqrt()
    }

    pub fn with_diffusion(&self, diffusion: f64) -> Result<Self> {
        Self::new(diffusion, self.dt, self.horizon, self.dims, self.master_seed)
    }

    pub fn with_horizon(&self, horizon: f64) -> Result<Self> {
        Self::new(self.diffusion, self.dt, horizon, self.dims, self.master_seed)
    }

    pub fn with_dt(&self, dt: f64) -> Result<Self> {
        Self::new(self.diffusion, dt, self.horizon, self.dims, self.master_seed)
    }

    pub fn with_seed(&self, master_seed: u64) -> Self {
        NoiseConfig { master_seed, ..*self }
    }
}

/// `2Dk²/T`, the second moment of `Δγ` implied by the Itô isometry.
pub fn predicted_second_moment(k: f64, config: &NoiseConfig) -> f64 {
    2.0 * config.diffusion * k * k / config.horizon
}

/// Fills `row` with the next noise vector from `rng`.
#[inline]
fn draw_row(rng: &mut ChaCha8Rng, std: f64, row: &mut [f64]) {
    for x in row.iter_mut() {
        let z: f64 = rng.sample(StandardNormal);
        *x = std * z;
    }
}

/// One realization of the noise, `n_steps × dims`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisePath {
    n_steps: usize,
    dims: usize,
    samples: Vec<f64>,
}

impl NoisePath {
    /// A path from explicit samples, one row of `dims` values per step.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dims = rows.first().map(Vec::len).unwrap_or(0);
        if dims == 0 || rows.iter().any(|r| r.len() != dims) {
            return Err(Error::shape("non-empty rows of equal length", "ragged or empty rows"));
        }
        Ok(NoisePath {
            n_steps: rows.len(),
            dims,
            samples: rows.concat(),
        })
    }

    pub fn zeros(n_steps: usize, dims: usize) -> Self {
        NoisePath {
            n_steps,
            dims,
            samples: vec![0.0; n_steps * dims],
        }
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn row(&self, j: usize) -> &[f64] {
        &self.samples[j * self.dims..(j + 1) * self.dims]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.samples.chunks_exact(self.dims)
    }

    /// Every entry multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> NoisePath {
        NoisePath {
            samples: self.samples.iter().map(|x| x * factor).collect(),
            ..self.clone()
        }
    }

    fn check(&self, config: &NoiseConfig) -> Result<()> {
        if self.n_steps != config.n_steps || self.dims != config.dims {
            return Err(Error::shape(
                format!("{}×{} noise path", config.n_steps, config.dims),
                format!("{}×{}", self.n_steps, self.dims),
            ));
        }
        Ok(())
    }
}

/// The noise path of trajectory `trajectory_index`. Depends only on the
/// config and the index.
pub fn sample_noise_path(config: &NoiseConfig, trajectory_index: u64) -> NoisePath {
    let mut path = NoisePath::zeros(config.n_steps, config.dims);
    if config.diffusion == 0.0 {
        return path;
    }
    let std = config.step_std();
    let mut rng = substream(config.master_seed, trajectory_index);
    for row in path.samples.chunks_exact_mut(config.dims) {
        draw_row(&mut rng, std, row);
    }
    path
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `|b0 + n| − |b0|`, written to avoid cancellation when `n` is small.
#[inline]
fn magnitude_shift(b0: &[f64], b0_norm: f64, n: &[f64]) -> f64 {
    let mut shifted = 0.0;
    let mut numerator = 0.0;
    for (b, x) in b0.iter().zip(n) {
        shifted += (b + x) * (b + x);
        numerator += 2.0 * b * x + x * x;
    }
    let denom = shifted.sqrt() + b0_norm;
    if numerator == 0.0 {
        0.0
    } else {
        numerator / denom
    }
}

fn check_direction(dir: &[f64], dims: usize) -> Result<()> {
    if dir.len() != dims {
        return Err(Error::shape(format!("{dims}-component direction"), dir.len()));
    }
    let n = norm(dir);
    if (n - 1.0).abs() > UNIT_TOL {
        return Err(Error::domain(format!(
            "Burgers direction must be a unit vector, |b̂| = {n}"
        )));
    }
    Ok(())
}

fn check_burgers(b0: &[f64], dims: usize) -> Result<f64> {
    if b0.len() != dims {
        return Err(Error::shape(format!("{dims}-component Burgers vector"), b0.len()));
    }
    let n = norm(b0);
    if !(n.is_finite() && n > 0.0) {
        return Err(Error::domain("Burgers vector b0 must be non-zero"));
    }
    Ok(n)
}

/// Per-step accumulation shared by the path-based and streaming routes.
#[derive(Debug, Clone, Copy)]
enum Integrand<'a> {
    Linear { dir: &'a [f64] },
    Exact { b0: &'a [f64], b0_norm: f64 },
}

impl Integrand<'_> {
    #[inline]
    fn at(&self, row: &[f64]) -> f64 {
        match *self {
            Integrand::Linear { dir } => dot(dir, row),
            Integrand::Exact { b0, b0_norm } => magnitude_shift(b0, b0_norm, row),
        }
    }

    fn finish(acc: &CompensatedSum, k: f64, config: &NoiseConfig) -> f64 {
        k / config.horizon * (acc.value() * config.dt)
    }
}

/// First-order phase shift `(k/T) Σ_j (b̂0 · N_j) dt`.
pub fn delta_gamma_linear(k: f64, b0_dir: &[f64], path: &NoisePath, config: &NoiseConfig) -> Result<f64> {
    path.check(config)?;
    check_direction(b0_dir, config.dims)?;
    let f = Integrand::Linear { dir: b0_dir };
    let acc: CompensatedSum = path.rows().map(|r| f.at(r)).collect();
    Ok(Integrand::finish(&acc, k, config))
}

/// Unexpanded phase shift `(k/T) Σ_j (|b0 + N_j| − |b0|) dt`.
pub fn delta_gamma_exact(k: f64, b0: &[f64], path: &NoisePath, config: &NoiseConfig) -> Result<f64> {
    path.check(config)?;
    let b0_norm = check_burgers(b0, config.dims)?;
    let f = Integrand::Exact { b0, b0_norm };
    let acc: CompensatedSum = path.rows().map(|r| f.at(r)).collect();
    Ok(Integrand::finish(&acc, k, config))
}

/// Burgers vector of `defect` along the dislocation line, taken as the last
/// noise axis (the `z` axis when `dims = 3`).
pub fn axial_burgers(defect: &ScrewDefect, dims: usize) -> Vec<f64> {
    let mut b = vec![0.0; dims];
    if let Some(last) = b.last_mut() {
        *last = defect.b0();
    }
    b
}

/// Phase shift computed the long way: the full noisy phase
/// `Σ_j k β(t_j) Δφ_j` with `β(t) = |b0 + N(t)| / 2π`, minus the noiseless
/// phase along the same discretized orbit. The Burgers vector points along
/// the dislocation line (see [`axial_burgers`]).
///
/// `angular` must be cyclic with `n_steps + 1` samples over the period `T`.
pub fn noisy_phase_trajectory(
    k: f64,
    defect: &ScrewDefect,
    path: &NoisePath,
    config: &NoiseConfig,
    angular: &AngularPath,
) -> Result<f64> {
    path.check(config)?;
    if angular.len() != config.n_steps + 1 {
        return Err(Error::shape(
            format!("{} angular samples", config.n_steps + 1),
            format!("{} angular samples", angular.len()),
        ));
    }
    if !angular.is_cyclic() {
        return Err(Error::domain("the orbit must be cyclic"));
    }
    if (angular.period() - config.horizon).abs() > 1e-12 * config.horizon {
        return Err(Error::domain(format!(
            "orbit period {} differs from the noise horizon {}",
            angular.period(),
            config.horizon
        )));
    }
    let b0 = axial_burgers(defect, config.dims);
    let beta0 = defect.beta();
    let to_beta = std::f64::consts::TAU.recip();
    let mut beta: Vec<f64> = path.rows().map(|r| norm(&add(&b0, r)) * to_beta).collect();
    // left-point rule never reads the endpoint sample
    beta.push(beta0);
    let noiseless = vec![beta0; angular.len()];
    let noisy = dirac_phase_quadrature_with(k, &beta, angular, QuadratureRule::LeftPoint)?;
    let clean = dirac_phase_quadrature_with(k, &noiseless, angular, QuadratureRule::LeftPoint)?;
    Ok(noisy.gamma - clean.gamma)
}

fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Δγ of one trajectory without materializing its noise path. Draws the same
/// numbers in the same order as [`sample_noise_path`].
fn stream_delta_gamma(k: f64, f: Integrand<'_>, config: &NoiseConfig, index: u64) -> f64 {
    if config.diffusion == 0.0 {
        return 0.0;
    }
    let std = config.step_std();
    let mut rng = substream(config.master_seed, index);
    let mut row = vec![0.0; config.dims];
    let mut acc = CompensatedSum::new();
    for _ in 0..config.n_steps {
        draw_row(&mut rng, std, &mut row);
        acc.add(f.at(&row));
    }
    Integrand::finish(&acc, k, config)
}

/// Δγ for trajectories `0..n_traj`, in index order. Runs on the current
/// rayon pool.
pub fn ensemble_delta_gammas(
    k: f64,
    b0: &[f64],
    config: &NoiseConfig,
    n_traj: usize,
    use_exact: bool,
) -> Result<Vec<f64>> {
    let b0_norm = check_burgers(b0, config.dims)?;
    let dir: Vec<f64> = b0.iter().map(|x| x / b0_norm).collect();
    let f = if use_exact {
        Integrand::Exact { b0, b0_norm }
    } else {
        Integrand::Linear { dir: &dir }
    };
    Ok((0..n_traj as u64)
        .into_par_iter()
        .map(|i| stream_delta_gamma(k, f, config, i))
        .collect())
}

/// Sample statistics of `Δγ` over an ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleStats {
    pub n_traj: usize,
    pub mean_dgamma: f64,
    /// `⟨Δγ²⟩`, the second moment about zero.
    pub m2_dgamma: f64,
    /// Unbiased sample variance.
    pub var_dgamma: f64,
    pub se_mean: f64,
    /// Jackknife standard error of `m2_dgamma`.
    pub se_m2: f64,
}

impl EnsembleStats {
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        let n = samples.len();
        if n < 2 {
            return Err(Error::config(format!("n_traj must be at least 2, got {n}")));
        }
        let squares: Vec<f64> = samples.iter().map(|x| x * x).collect();
        let var = stats::variance(samples).max(0.0);
        Ok(EnsembleStats {
            n_traj: n,
            mean_dgamma: stats::mean(samples),
            m2_dgamma: stats::mean(&squares),
            var_dgamma: var,
            se_mean: (var / n as f64).sqrt(),
            se_m2: stats::jackknife_se_of_mean(&squares, JACKKNIFE_BATCHES),
        })
    }

    /// `mean / se_mean`; 0 when both vanish.
    pub fn z_mean(&self) -> f64 {
        z_score(self.mean_dgamma, self.se_mean)
    }

    /// `(m2 − prediction) / se_m2`; 0 when both vanish.
    pub fn z_m2(&self, prediction: f64) -> f64 {
        z_score(self.m2_dgamma - prediction, self.se_m2)
    }
}

fn z_score(diff: f64, se: f64) -> f64 {
    if diff == 0.0 {
        0.0
    } else {
        diff / se
    }
}

/// Runs `n_traj` trajectories and reduces their `Δγ`.
pub fn ensemble_moments(
    k: f64,
    b0: &[f64],
    config: &NoiseConfig,
    n_traj: usize,
    use_exact: bool,
) -> Result<EnsembleStats> {
    if n_traj < 2 {
        return Err(Error::config(format!("n_traj must be at least 2, got {n_traj}")));
    }
    EnsembleStats::from_samples(&ensemble_delta_gammas(k, b0, config, n_traj, use_exact)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg(d: f64, dt: f64, t: f64, dims: usize) -> NoiseConfig {
        NoiseConfig::new(d, dt, t, dims, 42).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(NoiseConfig::new(-1.0, 0.1, 1.0, 3, 0).is_err());
        assert!(NoiseConfig::new(0.5, 0.0, 1.0, 3, 0).is_err());
        assert!(NoiseConfig::new(0.5, 0.1, -1.0, 3, 0).is_err());
        assert!(NoiseConfig::new(0.5, 0.1, 1.0, 0, 0).is_err());
        assert!(NoiseConfig::new(0.5, 0.3, 1.0, 1, 0).is_err());
        for (dt, t) in [(1e-3, 1.0), (1e-3, 4.0), (1e-3, 16.0), (0.01, 1.0), (5e-4, 2.0)] {
            let c = cfg(0.5, dt, t, 3);
            assert!((c.n_steps() as f64 * c.dt() - t).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_diffusion_gives_zero_path() {
        let p = sample_noise_path(&cfg(0.0, 0.01, 1.0, 3), 7);
        assert!(p.samples().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn path_is_deterministic_per_index() {
        let c = cfg(0.5, 0.01, 1.0, 3);
        assert_eq!(sample_noise_path(&c, 3), sample_noise_path(&c, 3));
        assert_ne!(sample_noise_path(&c, 3), sample_noise_path(&c, 4));
        assert_ne!(sample_noise_path(&c, 3), sample_noise_path(&c.with_seed(43), 3));
    }

    #[test]
    fn path_variance_matches_two_d_over_dt() {
        let c = NoiseConfig::new(0.5, 0.01, 1000.0, 1, 11).unwrap();
        assert_eq!(c.n_steps(), 100_000);
        let p = sample_noise_path(&c, 0);
        let var = stats::variance(p.samples());
        assert!((var - 100.0).abs() < 2.0, "var = {var}");
        // lag-1 autocovariance ~ 0 relative to lag 0 (se ≈ 1/√n)
        let s = p.samples();
        let m = stats::mean(s);
        let lag1: f64 = s.windows(2).map(|w| (w[0] - m) * (w[1] - m)).sum::<f64>() / (s.len() - 1) as f64;
        assert!(
            (lag1 / var).abs() < 4.0 / (s.len() as f64).sqrt(),
            "lag1/var = {}",
            lag1 / var
        );
    }

    #[test]
    fn linear_hand_examples() {
        let c = cfg(0.5, 1.0, 1.0, 1);
        let one = NoisePath::from_rows(&[vec![5.0]]).unwrap();
        assert_eq!(delta_gamma_linear(2.0, &[1.0], &one, &c).unwrap(), 10.0);
        assert_eq!(delta_gamma_linear(0.0, &[1.0], &one, &c).unwrap(), 0.0);
        let c3 = cfg(0.5, 0.1, 1.0, 3);
        let zero = NoisePath::zeros(10, 3);
        assert_eq!(delta_gamma_linear(1.0, &[0.0, 0.6, 0.8], &zero, &c3).unwrap(), 0.0);
        assert!(delta_gamma_linear(1.0, &[0.0, 0.6, 0.7], &zero, &c3).is_err());
        assert!(delta_gamma_linear(1.0, &[1.0], &zero, &c3).is_err());
    }

    #[test]
    fn exact_hand_examples() {
        let c = cfg(0.5, 1.0, 1.0, 1);
        let p = NoisePath::from_rows(&[vec![0.1]]).unwrap();
        let exact = delta_gamma_exact(1.0, &[10.0], &p, &c).unwrap();
        assert!((exact - 0.1).abs() < 1e-15);
        assert!((delta_gamma_linear(1.0, &[1.0], &p, &c).unwrap() - 0.1).abs() < 1e-15);
        assert!(delta_gamma_exact(1.0, &[0.0], &p, &c).is_err());
        let c3 = cfg(0.5, 0.1, 1.0, 3);
        assert_eq!(
            delta_gamma_exact(1.0, &[0.0, 0.0, 2.0], &NoisePath::zeros(10, 3), &c3).unwrap(),
            0.0
        );
    }

    #[test]
    fn perpendicular_noise_is_second_order() {
        // N ⊥ b0 with |N| = ε: exact gives (√(b0² + ε²) − b0) per step, linear 0
        let c = cfg(0.5, 0.25, 1.0, 3);
        let b0 = 2.0;
        for eps in [1e-2, 1e-3] {
            let p = NoisePath::from_rows(&vec![vec![eps, 0.0, 0.0]; 4]).unwrap();
            let exact = delta_gamma_exact(1.0, &[0.0, 0.0, b0], &p, &c).unwrap();
            let lin = delta_gamma_linear(1.0, &[0.0, 0.0, 1.0], &p, &c).unwrap();
            assert_eq!(lin, 0.0);
            let taylor = eps * eps / (2.0 * b0);
            assert!((exact - taylor).abs() < 1e-3 * taylor, "{exact} vs {taylor}");
        }
    }

    #[test]
    fn streaming_matches_materialized_paths() {
        let c = cfg(0.5, 0.01, 1.0, 3);
        let b0 = [0.3, -0.4, 1.2];
        let bn = norm(&b0);
        let dir: Vec<f64> = b0.iter().map(|x| x / bn).collect();
        let lin = ensemble_delta_gammas(1.3, &b0, &c, 5, false).unwrap();
        let ex = ensemble_delta_gammas(1.3, &b0, &c, 5, true).unwrap();
        for i in 0..5 {
            let p = sample_noise_path(&c, i as u64);
            assert_eq!(lin[i], delta_gamma_linear(1.3, &dir, &p, &c).unwrap());
            assert_eq!(ex[i], delta_gamma_exact(1.3, &b0, &p, &c).unwrap());
        }
    }

    #[test]
    fn noisy_phase_route_matches_exact_shift() {
        let c = cfg(0.5, 0.01, 2.0, 3);
        let defect = ScrewDefect::new(1.7).unwrap();
        let orbit = AngularPath::cyclic(0.3, 2.0, c.n_steps() + 1).unwrap();
        let b0 = axial_burgers(&defect, 3);
        for i in 0..4 {
            let p = sample_noise_path(&c, i);
            let via_phase = noisy_phase_trajectory(0.8, &defect, &p, &c, &orbit).unwrap();
            let direct = delta_gamma_exact(0.8, &b0, &p, &c).unwrap();
            assert!((via_phase - direct).abs() < 1e-10, "{via_phase} vs {direct}");
        }
        let quiet = sample_noise_path(&c.with_diffusion(0.0).unwrap(), 0);
        assert_eq!(noisy_phase_trajectory(0.8, &defect, &quiet, &c, &orbit).unwrap(), 0.0);
        let p = sample_noise_path(&c, 9);
        assert_eq!(noisy_phase_trajectory(0.0, &defect, &p, &c, &orbit).unwrap(), 0.0);
    }

    #[test]
    fn noisy_phase_rejects_bad_orbits() {
        let c = cfg(0.5, 0.1, 1.0, 3);
        let d = ScrewDefect::new(1.0).unwrap();
        let p = sample_noise_path(&c, 0);
        let short = AngularPath::cyclic(0.0, 1.0, 5).unwrap();
        assert!(noisy_phase_trajectory(1.0, &d, &p, &c, &short).is_err());
        let open = AngularPath::uniform(0.0, 3.0, 1.0, 11).unwrap();
        assert!(noisy_phase_trajectory(1.0, &d, &p, &c, &open).is_err());
        let slow = AngularPath::cyclic(0.0, 2.0, 11).unwrap();
        assert!(noisy_phase_trajectory(1.0, &d, &p, &c, &slow).is_err());
    }

    #[test]
    fn zero_diffusion_ensemble_is_exactly_zero() {
        let c = cfg(0.0, 0.01, 1.0, 3);
        for exact in [false, true] {
            let s = ensemble_moments(1.0, &[0.0, 0.0, 1.0], &c, 50, exact).unwrap();
            assert_eq!((s.mean_dgamma, s.m2_dgamma, s.se_m2), (0.0, 0.0, 0.0));
            assert_eq!(s.z_mean(), 0.0);
            assert_eq!(s.z_m2(0.0), 0.0);
        }
    }

    #[test]
    fn ensemble_needs_two_trajectories() {
        let c = cfg(0.5, 0.01, 1.0, 3);
        let err = ensemble_moments(1.0, &[0.0, 0.0, 1.0], &c, 1, false).unwrap_err();
        assert_eq!(err.to_string(), "n_traj must be at least 2, got 1");
    }

    #[test]
    fn ensemble_second_moment_examples() {
        for (k, t) in [(1.0, 1.0), (2.0, 4.0)] {
            let c = cfg(0.5, 1e-3, t, 3);
            let s = ensemble_moments(k, &[0.0, 0.0, 1.0], &c, 10_000, false).unwrap();
            let pred = predicted_second_moment(k, &c);
            assert!((pred - 1.0).abs() < 1e-15);
            assert!(
                s.z_m2(pred).abs() < 3.0,
                "k={k} T={t}: m2={} se={}",
                s.m2_dgamma,
                s.se_m2
            );
            assert!(s.z_mean().abs() < 3.0);
        }
    }

    #[test]
    fn one_dimensional_noise_has_the_same_statistics() {
        let c1 = cfg(0.5, 1e-3, 1.0, 1);
        let s = ensemble_moments(1.5, &[2.0], &c1, 4_000, false).unwrap();
        assert!(s.z_m2(predicted_second_moment(1.5, &c1)).abs() < 3.0);
    }

    #[test]
    fn linear_shift_is_gaussian() {
        let c = cfg(0.5, 1e-2, 1.0, 3);
        let xs = ensemble_delta_gammas(1.0, &[0.0, 0.0, 1.0], &c, 10_000, false).unwrap();
        let kurt = stats::kurtosis(&xs);
        assert!((kurt - 3.0).abs() < 0.15, "kurtosis {kurt}");
    }

    #[test]
    fn dt_refinement_leaves_second_moment_unchanged() {
        let coarse = cfg(0.5, 2e-3, 1.0, 3);
        let fine = coarse.with_dt(1e-3).unwrap().with_seed(4242);
        let a = ensemble_moments(1.0, &[0.0, 0.0, 1.0], &coarse, 10_000, false).unwrap();
        let b = ensemble_moments(1.0, &[0.0, 0.0, 1.0], &fine, 10_000, false).unwrap();
        let combined = (a.se_m2.powi(2) + b.se_m2.powi(2)).sqrt();
        assert!((a.m2_dgamma - b.m2_dgamma).abs() < 3.0 * combined);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn linear_shift_is_linear_in_k(k in -4.0..4.0f64, idx in 0u64..1000) {
            let c = cfg(0.3, 0.05, 1.0, 3);
            let p = sample_noise_path(&c, idx);
            let d = [0.0, 0.0, 1.0];
            let a = delta_gamma_linear(k, &d, &p, &c).unwrap();
            let b = delta_gamma_linear(2.0 * k, &d, &p, &c).unwrap();
            prop_assert!((b - 2.0 * a).abs() <= 1e-12 * a.abs().max(1.0));
        }

        #[test]
        fn substreams_do_not_collide(master in any::<u64>(), i in any::<u64>(), j in any::<u64>()) {
            prop_assume!(i != j);
            prop_assert_ne!(substream_seed(master, i), substream_seed(master, j));
        }
    }
}
