//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a numerical or statistical check failed,
//! 2 usage or validation error.

pub mod config;
pub mod output;

use std::f64::consts::TAU;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::geometry::{metric_det, metric_inverse, metric_tensor, CylGrid, CylPoint, ScrewDefect};
use crate::modes::{residual_convergence, Mode, PhysicalConstants};
use crate::noise::{axial_burgers, ensemble_moments, predicted_second_moment, NoiseConfig};
use crate::phase::{dirac_phase_closed, dirac_phase_quadrature, phase_factor, AngularPath};
use crate::sweep::{scaling_sweep, SweepAxis, SweepBase};
use config::{defaults, pick, FileConfig, OutputFormat};
use output::{emit, Report, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest tolerated `|z|` for ensemble moments.
pub const Z_LIMIT: f64 = 3.0;
/// Largest tolerated deviation of a fitted sweep slope from its expectation.
pub const SLOPE_TOLERANCE: f64 = 0.05;
/// Acceptable `fine / coarse` residual ratio under grid doubling.
pub const CONVERGENCE_RATIO: (f64, f64) = (0.2, 0.3);
/// Residuals below this are treated as exact and skip the ratio test.
pub const EXACT_RESIDUAL: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(
    name = "dislocation-phase",
    version,
    about = "Dirac phase around a screw dislocation"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// JSON config file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for Monte Carlo ensembles; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Omit the timestamp so identical inputs give identical bytes.
    #[arg(long, global = true)]
    pub deterministic: bool,
}

#[derive(Debug, Args, Default)]
pub struct DefectArgs {
    /// Burgers vector magnitude.
    #[arg(long)]
    pub b0: Option<f64>,
    /// Alternatively β = b0 / 2π.
    #[arg(long, conflicts_with = "b0")]
    pub beta: Option<f64>,
}

#[derive(Debug, Args, Default)]
pub struct NoiseArgs {
    #[arg(long = "D")]
    pub diffusion: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long = "T")]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub dims: Option<usize>,
    #[arg(long)]
    pub n_traj: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Metric, inverse metric and determinant at one or more radii.
    #[command(allow_negative_numbers = true)]
    Metric {
        #[command(flatten)]
        defect: DefectArgs,
        /// Radius; repeat for several rows. Without it the grid radii are used.
        #[arg(long)]
        rho: Vec<f64>,
        #[arg(long)]
        rho_min: Option<f64>,
        #[arg(long)]
        rho_max: Option<f64>,
        #[arg(long)]
        n_rho: Option<usize>,
    },
    /// Dirac phase between two angles, closed form and quadrature.
    #[command(allow_negative_numbers = true)]
    Phase {
        #[command(flatten)]
        defect: DefectArgs,
        #[arg(long)]
        k: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        phi0: f64,
        /// End angle; one full loop when absent.
        #[arg(long)]
        phi1: Option<f64>,
        #[arg(long, default_value_t = 1001)]
        n_samples: usize,
    },
    /// PDE residual of a separated mode and its convergence under refinement.
    #[command(allow_negative_numbers = true)]
    ModeCheck {
        #[command(flatten)]
        defect: DefectArgs,
        #[arg(long)]
        l: Option<i32>,
        #[arg(long)]
        k: Option<f64>,
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long)]
        hbar: Option<f64>,
        #[arg(long)]
        mass: Option<f64>,
        #[arg(long)]
        rho_min: Option<f64>,
        #[arg(long)]
        rho_max: Option<f64>,
        #[arg(long)]
        n_rho: Option<usize>,
        #[arg(long)]
        n_phi: Option<usize>,
        /// Largest acceptable residual on the given grid.
        #[arg(long, default_value_t = 5e-4)]
        threshold: f64,
        /// Relative offset applied to the trial energy (negative control).
        #[arg(long, default_value_t = 0.0)]
        energy_offset: f64,
    },
    /// Ensemble moments of the noise-induced phase shift.
    #[command(allow_negative_numbers = true)]
    NoiseMc {
        #[command(flatten)]
        defect: DefectArgs,
        #[arg(long)]
        k: Option<f64>,
        #[command(flatten)]
        noise: NoiseArgs,
        /// Use |b0 + N| − |b0| instead of its first-order expansion.
        #[arg(long)]
        exact: bool,
    },
    /// Log-log scaling sweep of ⟨Δγ²⟩ over k, T or D.
    #[command(allow_negative_numbers = true)]
    Sweep {
        #[command(flatten)]
        defect: DefectArgs,
        #[arg(long)]
        axis: Option<String>,
        /// Comma-separated sweep values.
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
        #[arg(long)]
        k: Option<f64>,
        #[command(flatten)]
        noise: NoiseArgs,
    },
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(cli: Cli) -> Result<i32> {
    let file = match &cli.common.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let format = pick(cli.common.format, file.format, OutputFormat::Csv);
    let output = cli.common.output.clone().or_else(|| file.output.clone());
    let seed = pick(cli.common.seed, file.seed, defaults::SEED);

    let run = || -> Result<(Report, bool)> {
        match &cli.command {
            Command::Metric {
                defect,
                rho,
                rho_min,
                rho_max,
                n_rho,
            } => cmd_metric(&file, defect, rho, *rho_min, *rho_max, *n_rho),
            Command::Phase {
                defect,
                k,
                phi0,
                phi1,
                n_samples,
            } => cmd_phase(&file, defect, *k, *phi0, *phi1, *n_samples),
            Command::ModeCheck {
                defect,
                l,
                k,
                kappa,
                hbar,
                mass,
                rho_min,
                rho_max,
                n_rho,
                n_phi,
                threshold,
                energy_offset,
            } => {
                let consts = PhysicalConstants::new(
                    pick(*hbar, file.constants.hbar, defaults::HBAR),
                    pick(*mass, file.constants.mass, defaults::MASS),
                )?;
                let grid = CylGrid::new(
                    pick(*rho_min, file.grid.rho_min, defaults::RHO_MIN),
                    pick(*rho_max, file.grid.rho_max, defaults::RHO_MAX),
                    pick(*n_rho, file.grid.n_rho, defaults::N_RHO),
                    pick(*n_phi, file.grid.n_phi, defaults::N_PHI),
                )?;
                let d = resolve_defect(&file, defect)?;
                let mode = Mode::new(
                    pick(*l, file.mode.l, defaults::L),
                    pick(*k, file.mode.k, defaults::K),
                    pick(*kappa, file.mode.kappa, defaults::KAPPA),
                    &d,
                    &consts,
                )?;
                cmd_mode_check(&d, &consts, &mode, &grid, *threshold, *energy_offset)
            }
            Command::NoiseMc {
                defect,
                k,
                noise,
                exact,
            } => {
                let d = resolve_defect(&file, defect)?;
                let k = pick(*k, file.mode.k, defaults::K);
                let config = resolve_noise(&file, noise, seed)?;
                let n_traj = pick(noise.n_traj, file.sweep.n_traj, defaults::N_TRAJ);
                cmd_noise_mc(&d, k, &config, n_traj, *exact)
            }
            Command::Sweep {
                defect,
                axis,
                values,
                k,
                noise,
            } => {
                let d = resolve_defect(&file, defect)?;
                let axis: SweepAxis = axis
                    .clone()
                    .or_else(|| file.sweep.axis.clone())
                    .unwrap_or_else(|| defaults::SWEEP_AXIS.to_string())
                    .parse()?;
                let values = values
                    .clone()
                    .or_else(|| file.sweep.values.clone())
                    .unwrap_or_else(|| defaults::SWEEP_VALUES.to_vec());
                let k = pick(*k, file.mode.k, defaults::K);
                let config = resolve_noise(&file, noise, seed)?;
                let n_traj = pick(noise.n_traj, file.sweep.n_traj, defaults::N_TRAJ);
                cmd_sweep(&d, axis, &values, k, &config, n_traj)
            }
        }
    };

    let (mut report, passed) = match cli.common.threads {
        Some(0) => return Err(Error::config("threads must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::config(format!("cannot start thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    if let Value::Object(cfg) = &mut report.config {
        cfg.insert("seed".into(), json!(seed));
        cfg.insert("format".into(), json!(format));
    }
    emit(&report, format, output.as_deref(), cli.common.deterministic)
        .map_err(|e| Error::config(format!("cannot write output: {e}")))?;
    Ok(if passed { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn resolve_defect(file: &FileConfig, args: &DefectArgs) -> Result<ScrewDefect> {
    match args.beta {
        Some(beta) => ScrewDefect::from_beta(beta),
        None => ScrewDefect::new(pick(args.b0, file.defect.b0, defaults::B0)),
    }
}

fn resolve_noise(file: &FileConfig, args: &NoiseArgs, seed: u64) -> Result<NoiseConfig> {
    NoiseConfig::new(
        pick(args.diffusion, file.noise.diffusion, defaults::DIFFUSION),
        pick(args.dt, file.noise.dt, defaults::DT),
        pick(args.horizon, file.noise.horizon, defaults::HORIZON),
        pick(args.dims, file.noise.dims, defaults::DIMS),
        seed,
    )
}

fn noise_json(c: &NoiseConfig) -> Value {
    json!({"D": c.diffusion(), "dt": c.dt(), "T": c.horizon(), "dims": c.dims()})
}

fn cmd_metric(
    file: &FileConfig,
    defect: &DefectArgs,
    rho: &[f64],
    rho_min: Option<f64>,
    rho_max: Option<f64>,
    n_rho: Option<usize>,
) -> Result<(Report, bool)> {
    let d = resolve_defect(file, defect)?;
    let radii: Vec<f64> = if rho.is_empty() {
        let g = CylGrid::new(
            pick(rho_min, file.grid.rho_min, defaults::RHO_MIN),
            pick(rho_max, file.grid.rho_max, defaults::RHO_MAX),
            pick(n_rho, file.grid.n_rho, defaults::N_RHO),
            defaults::N_PHI,
        )?;
        (0..g.n_rho).map(|i| g.rho(i)).collect()
    } else {
        rho.to_vec()
    };
    let mut table = Table::new(&[
        "rho", "g_rr", "g_pp", "g_pz", "g_zz", "det", "ginv_rr", "ginv_pp", "ginv_pz", "ginv_zz",
    ]);
    for &r in &radii {
        let p = CylPoint::new(r, 0.0, 0.0)?;
        let g = metric_tensor(&d, &p)?;
        let inv = metric_inverse(&d, &p)?;
        table.push(vec![
            r.into(),
            g.get(0, 0).into(),
            g.get(1, 1).into(),
            g.get(1, 2).into(),
            g.get(2, 2).into(),
            metric_det(&d, &p)?.into(),
            inv.get(0, 0).into(),
            inv.get(1, 1).into(),
            inv.get(1, 2).into(),
            inv.get(2, 2).into(),
        ]);
    }
    let mut summary = Map::new();
    summary.insert("points".into(), json!(radii.len()));
    Ok((
        Report {
            command: "metric",
            config: json!({"defect": {"b0": d.b0(), "beta": d.beta()}}),
            table,
            summary,
        },
        true,
    ))
}

fn cmd_phase(
    file: &FileConfig,
    defect: &DefectArgs,
    k: Option<f64>,
    phi0: f64,
    phi1: Option<f64>,
    n_samples: usize,
) -> Result<(Report, bool)> {
    let d = resolve_defect(file, defect)?;
    let k = pick(k, file.mode.k, defaults::K);
    let phi1 = phi1.unwrap_or(phi0 + TAU);
    let closed = dirac_phase_closed(k, &d, phi0, phi1);
    let path = AngularPath::uniform(phi0, phi1, 1.0, n_samples)?;
    let quad = dirac_phase_quadrature(k, &vec![d.beta(); n_samples], &path)?;
    let factor = phase_factor(&closed);
    let agree = (closed.gamma - quad.gamma).abs() <= 1e-12 * closed.gamma.abs().max(1.0);

    let mut table = Table::new(&[
        "k",
        "b0",
        "phi0",
        "phi1",
        "gamma_closed",
        "gamma_quadrature",
        "factor_re",
        "factor_im",
    ]);
    table.push(vec![
        k.into(),
        d.b0().into(),
        phi0.into(),
        phi1.into(),
        closed.gamma.into(),
        quad.gamma.into(),
        factor.re.into(),
        factor.im.into(),
    ]);
    let mut summary = Map::new();
    summary.insert("gamma".into(), json!(closed.gamma));
    summary.insert("agree".into(), json!(agree));
    Ok((
        Report {
            command: "phase",
            config: json!({"defect": {"b0": d.b0()}, "mode": {"k": k}, "n_samples": n_samples}),
            table,
            summary,
        },
        agree,
    ))
}

fn cmd_mode_check(
    d: &ScrewDefect,
    consts: &PhysicalConstants,
    mode: &Mode,
    grid: &CylGrid,
    threshold: f64,
    energy_offset: f64,
) -> Result<(Report, bool)> {
    let energy = mode.energy() * (1.0 + energy_offset);
    let conv = residual_convergence(mode, d, consts, grid, energy)?;
    let exact = conv.coarse < EXACT_RESIDUAL;
    let ratio = conv.ratio();
    let converges = (CONVERGENCE_RATIO.0..=CONVERGENCE_RATIO.1).contains(&ratio);
    let passed = conv.coarse <= threshold && (exact || converges);

    let fine = grid.refined();
    let mut table = Table::new(&["n_rho", "n_phi", "h_rho", "h_phi", "residual"]);
    for (g, r) in [(grid, conv.coarse), (&fine, conv.fine)] {
        table.push(vec![
            g.n_rho.into(),
            g.n_phi.into(),
            g.h_rho().into(),
            g.h_phi().into(),
            r.into(),
        ]);
    }
    let mut summary = Map::new();
    summary.insert("residual".into(), json!(conv.coarse));
    summary.insert("residual_refined".into(), json!(conv.fine));
    summary.insert("ratio".into(), json!(ratio));
    summary.insert("nu".into(), json!(mode.nu()));
    summary.insert("energy".into(), json!(energy));
    summary.insert("threshold".into(), json!(threshold));
    summary.insert("passed".into(), json!(passed));
    Ok((
        Report {
            command: "mode-check",
            config: json!({
                "defect": {"b0": d.b0()},
                "constants": {"hbar": consts.hbar(), "mass": consts.mass()},
                "mode": {"l": mode.l(), "k": mode.k(), "kappa": mode.kappa()},
                "grid": {"rho_min": grid.rho_min, "rho_max": grid.rho_max, "n_rho": grid.n_rho, "n_phi": grid.n_phi},
                "energy_offset": energy_offset,
            }),
            table,
            summary,
        },
        passed,
    ))
}

fn cmd_noise_mc(d: &ScrewDefect, k: f64, config: &NoiseConfig, n_traj: usize, exact: bool) -> Result<(Report, bool)> {
    if n_traj < 2 {
        return Err(Error::config(format!("n_traj must be at least 2, got {n_traj}")));
    }
    let b0 = axial_burgers(d, config.dims());
    let stats = ensemble_moments(k, &b0, config, n_traj, exact)?;
    let prediction = predicted_second_moment(k, config);
    let (z_mean, z_m2) = (stats.z_mean(), stats.z_m2(prediction));
    let passed = z_mean.abs() < Z_LIMIT && z_m2.abs() < Z_LIMIT;

    let mut table = Table::new(&[
        "n_traj",
        "mean",
        "m2",
        "var",
        "se_mean",
        "se_m2",
        "prediction",
        "z_mean",
        "z_m2",
    ]);
    table.push(vec![
        stats.n_traj.into(),
        stats.mean_dgamma.into(),
        stats.m2_dgamma.into(),
        stats.var_dgamma.into(),
        stats.se_mean.into(),
        stats.se_m2.into(),
        prediction.into(),
        z_mean.into(),
        z_m2.into(),
    ]);
    let mut summary = Map::new();
    summary.insert("mean".into(), json!(stats.mean_dgamma));
    summary.insert("m2".into(), json!(stats.m2_dgamma));
    summary.insert("prediction".into(), json!(prediction));
    summary.insert("z_mean".into(), json!(z_mean));
    summary.insert("z_m2".into(), json!(z_m2));
    summary.insert("passed".into(), json!(passed));
    Ok((
        Report {
            command: "noise-mc",
            config: json!({
                "defect": {"b0": d.b0()},
                "mode": {"k": k},
                "noise": noise_json(config),
                "n_traj": n_traj,
                "exact": exact,
            }),
            table,
            summary,
        },
        passed,
    ))
}

fn cmd_sweep(
    d: &ScrewDefect,
    axis: SweepAxis,
    values: &[f64],
    k: f64,
    config: &NoiseConfig,
    n_traj: usize,
) -> Result<(Report, bool)> {
    let base = SweepBase {
        k,
        b0: axial_burgers(d, config.dims()),
        config: *config,
    };
    let result = scaling_sweep(axis, values, &base, n_traj)?;
    let passed = result.slope_within(SLOPE_TOLERANCE);

    let mut table = Table::new(&["value", "m2", "se_m2", "prediction", "mean", "se_mean"]);
    for p in &result.points {
        table.push(vec![
            p.value.into(),
            p.stats.m2_dgamma.into(),
            p.stats.se_m2.into(),
            p.prediction.into(),
            p.stats.mean_dgamma.into(),
            p.stats.se_mean.into(),
        ]);
    }
    let mut summary = Map::new();
    summary.insert("axis".into(), json!(axis.to_string()));
    summary.insert("slope".into(), json!(result.slope()));
    summary.insert("slope_se".into(), json!(result.fit.slope_se));
    summary.insert("expected_slope".into(), json!(result.expected_slope()));
    summary.insert("tolerance".into(), json!(SLOPE_TOLERANCE));
    summary.insert("passed".into(), json!(passed));
    Ok((
        Report {
            command: "sweep",
            config: json!({
                "defect": {"b0": d.b0()},
                "mode": {"k": k},
                "noise": noise_json(config),
                "sweep": {"axis": axis.to_string(), "values": values, "n_traj": n_traj},
            }),
            table,
            summary,
        },
        passed,
    ))
}
