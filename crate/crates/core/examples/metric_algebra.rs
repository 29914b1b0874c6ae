//! Metric of the twisted medium around a screw dislocation: components,
//! inverse, determinant and the effective gauge potential.
//!
//! Run with `cargo run --example metric_algebra`.

use dislocation_phase::geometry::{gauge_circulation, gauge_potential, metric_det, metric_inverse, metric_tensor};
use dislocation_phase::{CylPoint, Metric3, Result, ScrewDefect};

fn main() -> Result<()> {
    let defect = ScrewDefect::from_beta(0.5)?;
    println!("b0 = {:.6}, beta = {}", defect.b0(), defect.beta());
    println!(
        "{:>6} {:>8} {:>8} {:>8} {:>8} {:>12}",
        "rho", "g_pp", "g_pz", "det", "A_phi", "|g g⁻¹ − I|"
    );
    for rho in [0.5, 1.0, 2.0, 4.0] {
        let p = CylPoint::new(rho, 0.0, 0.0)?;
        let g = metric_tensor(&defect, &p)?;
        let identity_gap = g
            .matmul(&metric_inverse(&defect, &p)?)
            .max_abs_diff(&Metric3::identity());
        println!(
            "{rho:>6} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {identity_gap:>12.2e}",
            g.get(1, 1),
            g.get(1, 2),
            metric_det(&defect, &p)?,
            gauge_potential(1.0, &defect, &p)?,
        );
    }
    // ∮ A·dl = k b0 on every circle
    for rho in [0.5, 3.0] {
        println!(
            "circulation at rho = {rho}: {:.12}",
            gauge_circulation(1.0, &defect, rho, 64)?
        );
    }
    Ok(())
}
