//! Log-log scaling of the phase-shift variance: `k²`, `1/T` and `D`.
//!
//! Run with `cargo run --release --example scaling_sweep`.

use dislocation_phase::noise::axial_burgers;
use dislocation_phase::sweep::{scaling_sweep, SweepBase};
use dislocation_phase::{NoiseConfig, Result, ScrewDefect, SweepAxis};

fn main() -> Result<()> {
    let config = NoiseConfig::new(0.5, 1e-2, 1.0, 3, 42)?;
    let base = SweepBase {
        k: 1.0,
        b0: axial_burgers(&ScrewDefect::new(1.0)?, config.dims()),
        config,
    };
    let sweeps = [
        (SweepAxis::K, vec![0.5, 1.0, 2.0, 4.0, 8.0]),
        (SweepAxis::T, vec![1.0, 2.0, 4.0, 8.0, 16.0]),
        (SweepAxis::D, vec![0.1, 0.25, 0.5, 1.0, 2.0]),
    ];
    for (axis, values) in sweeps {
        let r = scaling_sweep(axis, &values, &base, 10_000)?;
        println!(
            "{axis}-sweep: slope {:+.4} ± {:.4} (expected {:+})",
            r.slope(),
            r.fit.slope_se,
            r.expected_slope()
        );
        for p in &r.points {
            println!(
                "    {:>6}  m2 {:.5e} ± {:.1e}  prediction {:.5e}",
                p.value, p.stats.m2_dgamma, p.stats.se_m2, p.prediction
            );
        }
    }
    Ok(())
}
