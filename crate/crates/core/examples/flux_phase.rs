//! The Dirac phase around the dislocation behaves like an Aharonov–Bohm
//! phase: a closed loop picks up `γ = k b0` whatever its starting angle.
//!
//! Run with `cargo run --example flux_phase`.

use std::f64::consts::TAU;

use dislocation_phase::modes::phase_factor_equivalence;
use dislocation_phase::phase::{dirac_phase_closed, dirac_phase_quadrature, phase_factor};
use dislocation_phase::{AngularPath, Result, ScrewDefect};

fn main() -> Result<()> {
    let defect = ScrewDefect::new(1.3)?;
    let k = 2.0;
    for (phi0, phi1) in [(0.0, TAU), (1.0, 1.0 + TAU), (0.0, TAU / 4.0), (0.0, 2.0 * TAU)] {
        let closed = dirac_phase_closed(k, &defect, phi0, phi1);
        let path = AngularPath::uniform(phi0, phi1, 1.0, 101)?;
        let quad = dirac_phase_quadrature(k, &vec![defect.beta(); path.len()], &path)?;
        let factor = phase_factor(&closed);
        println!(
            "φ ∈ [{phi0:.3}, {phi1:.3}]: γ = {:.12} (quadrature {:.12}), e^{{iγ}} = {:.6}{:+.6}i",
            closed.gamma, quad.gamma, factor.re, factor.im
        );
    }
    println!("k b0 = {}", k * defect.b0());

    // the phase factor times the shifted-order angular dependence reproduces e^{ilφ}
    let pair = phase_factor_equivalence(2, k, &defect, 0.0, 2.5);
    println!("direct {:.6}, factored {:.6}", pair.direct, pair.factored);
    Ok(())
}
