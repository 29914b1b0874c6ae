//! Real-order Bessel functions `J_ν(x)` from the built-in kernel, checked
//! against the three-term recurrence and the half-integer closed form.
//!
//! Run with `cargo run --example bessel_kernel`.

use std::f64::consts::PI;

use dislocation_phase::special::{bessel_j, gamma};
use dislocation_phase::Result;

fn main() -> Result<()> {
    println!("Γ(5) = {}, Γ(1/2)² = {:.15}", gamma(5.0), gamma(0.5).powi(2));
    println!("{:>6} {:>6} {:>22} {:>10}", "nu", "x", "J_nu(x)", "recur");
    for (nu, x) in [
        (0.0, 1.0),
        (0.37, 5.0),
        (2.5, 20.0),
        (7.3, 15.0),
        (13.7, 13.0),
        (19.0, 45.0),
    ] {
        let j = bessel_j(nu, x)?;
        let residual = if nu >= 1.0 {
            let (lo, hi) = (bessel_j(nu - 1.0, x)?, bessel_j(nu + 1.0, x)?);
            format!("{:.1e}", (lo + hi - 2.0 * nu / x * j).abs())
        } else {
            "-".to_string()
        };
        println!("{nu:>6} {x:>6} {j:>22.15e} {residual:>10}");
    }
    // J_{1/2}(x) = √(2/πx) sin x
    let x = 7.5;
    println!(
        "J_1/2({x}) = {:.15}, closed form {:.15}",
        bessel_j(0.5, x)?,
        (2.0 / (PI * x)).sqrt() * x.sin()
    );
    Ok(())
}
