//! Gamma function and Bessel functions of the first kind of real order.
//!
//! `J_ν(x)` is evaluated by one of two routes:
//!
//! * the ascending power series when `x ≤ 12` or `x ≤ ν`, where the terms
//!   never grow large enough to cancel away more than a few digits;
//! * otherwise the Hankel large-argument expansion at the fractional orders
//!   `ν − ⌊ν⌋` and `ν − ⌊ν⌋ + 1`, followed by forward recurrence up to `ν`.
//!   Forward recurrence is stable while the order stays below `x`, which the
//!   region split guarantees.
//!
//! Accuracy is better than `1e-10` relative (measured against the local
//! envelope `√(2/πx)` in the oscillatory region) for `ν ∈ [0, 20]`,
//! `x ∈ [0, 50]`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Below this argument the power series is always used.
const SERIES_CUTOFF: f64 = 12.0;
const MIN_HANKEL_TERMS: usize = 8;
const MAX_TERMS: usize = 500;

/// Γ(x) by the Lanczos approximation (g = 7, nine coefficients), with the
/// reflection formula for `x < 1/2`.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

/// ln Γ(x) for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Bessel function of the first kind `J_ν(x)` for real `ν ≥ 0`, `x ≥ 0`.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    if !nu.is_finite() || nu < 0.0 {
        return Err(Error::domain(format!("Bessel order must be non-negative, got {nu}")));
    }
    if !x.is_finite() || x < 0.0 {
        return Err(Error::domain(format!("Bessel argument must be non-negative, got {x}")));
    }
    if x <= SERIES_CUTOFF || x <= nu {
        return Ok(series(nu, x));
    }
    let steps = nu.floor() as usize;
    let base = nu - steps as f64;
    let j_base = hankel(base, x);
    if steps == 0 {
        return Ok(j_base);
    }
    let (mut prev, mut cur) = (j_base, hankel(base + 1.0, x));
    for step in 1..steps {
        let m = base + step as f64;
        let next = 2.0 * m / x * cur - prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Σ_m (−1)^m (x/2)^{2m+ν} / (m! Γ(m+ν+1))
fn series(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * x;
    let mut term = if nu <= 40.0 {
        half.powf(nu) / gamma(nu + 1.0)
    } else {
        (nu * half.ln() - ln_gamma(nu + 1.0)).exp()
    };
    let q = -half * half;
    let mut sum = term;
    for m in 1..MAX_TERMS {
        let mf = m as f64;
        term *= q / (mf * (mf + nu));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && mf > half {
            break;
        }
    }
    sum
}

/// Hankel expansion `√(2/πx) (P cos ω − Q sin ω)`, `ω = x − νπ/2 − π/4`.
///
/// Terms are summed until they drop below double precision or, once past
/// the order-dependent hump, start to grow again.
fn hankel(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0f64;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        let next = term * (mu - odd * odd) / (8.0 * kf * x);
        if k > MIN_HANKEL_TERMS && next.abs() > term.abs() && kf > nu {
            break;
        }
        term = next;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        if k >= MIN_HANKEL_TERMS && term.abs() < 1e-17 {
            break;
        }
    }
    let omega = x - nu * FRAC_PI_2 - FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * omega.cos() - q * omega.sin())
}
