//! White noise on the Burgers vector shifts the Dirac phase. Over an
//! ensemble the shift has zero mean and second moment `2Dk²/T`.
//!
//! Run with `cargo run --release --example noise_ensemble`.

use std::f64::consts::TAU;

use dislocation_phase::noise::{
    axial_burgers, delta_gamma_exact, delta_gamma_linear, ensemble_moments, noisy_phase_trajectory,
    predicted_second_moment, sample_noise_path,
};
use dislocation_phase::{AngularPath, NoiseConfig, Result, ScrewDefect};

fn main() -> Result<()> {
    let defect = ScrewDefect::new(1.0)?;
    let config = NoiseConfig::new(0.5, 1e-3, 1.0, 3, 42)?;
    let b0 = axial_burgers(&defect, config.dims());
    let k = 1.0;

    // one trajectory three ways: orbit quadrature of the noisy phase, the
    // unexpanded sum and its first-order expansion
    let small = sample_noise_path(&config, 0).scaled(1e-5);
    let orbit = AngularPath::uniform(0.0, TAU, config.horizon(), config.n_steps() + 1)?;
    println!(
        "trajectory 0, amplitude × 1e-5: orbit {:.9e}, exact {:.9e}, linear {:.9e}",
        noisy_phase_trajectory(k, &defect, &small, &config, &orbit)?,
        delta_gamma_exact(k, &b0, &small, &config)?,
        delta_gamma_linear(k, &[0.0, 0.0, 1.0], &small, &config)?,
    );

    let stats = ensemble_moments(k, &b0, &config, 10_000, false)?;
    let pred = predicted_second_moment(k, &config);
    println!(
        "D = 0.5: ⟨Δγ⟩ = {:+.4} ± {:.4} (z {:+.2}), ⟨Δγ²⟩ = {:.4} ± {:.4} vs 2Dk²/T = {pred} (z {:+.2})",
        stats.mean_dgamma,
        stats.se_mean,
        stats.z_mean(),
        stats.m2_dgamma,
        stats.se_m2,
        stats.z_m2(pred),
    );

    // weak noise: the unexpanded shift drifts by k σ² / |b0| with σ² = 2D/dt
    // from the two components perpendicular to b0
    let weak = config.with_diffusion(1e-6)?;
    let linear = ensemble_moments(k, &b0, &weak, 10_000, false)?;
    let exact = ensemble_moments(k, &b0, &weak, 10_000, true)?;
    println!(
        "D = 1e-6: linear ⟨Δγ⟩ = {:+.3e}, exact ⟨Δγ⟩ = {:+.3e}, drift k·2D/(dt·b0) = {:.3e}",
        linear.mean_dgamma,
        exact.mean_dgamma,
        k * 2.0 * weak.diffusion() / (weak.dt() * defect.b0()),
    );
    Ok(())
}
