//! Separated solutions of the Schrödinger equation around a screw
//! dislocation, and a residual check of those solutions against the
//! discrete Laplace–Beltrami operator.
//!
//! With `ψ = e^{−iEt/ħ} e^{ikz} e^{ilφ} R(ρ)` the angular derivative enters
//! as `∂_φ − ikβ`, so the radial equation is Bessel's equation of order
//! `ν = |l − kβ|`. The regular branch `R = J_ν(κρ)` is taken and the energy is
//! the full kinetic energy `E = ħ²(k² + κ²) / 2m`, independent of `β`.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{laplace_beltrami_apply, CylGrid, CylPoint, ScrewDefect};
use crate::phase::{dirac_phase_closed, phase_factor};
use crate::special::bessel_j;

/// ħ and the electron mass. Both default to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    hbar: f64,
    mass: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants { hbar: 1.0, mass: 1.0 }
    }
}

impl PhysicalConstants {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::domain(format!("hbar must be positive, got {hbar}")));
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::domain(format!("mass must be positive, got {mass}")));
        }
        Ok(PhysicalConstants { hbar, mass })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// `ħ² / 2m`, the prefactor of `−∇²` in the Hamiltonian.
    pub fn kinetic_prefactor(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mass)
    }
}

/// One separated solution, tied to the defect and constants it was built for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    l: i32,
    k: f64,
    kappa: f64,
    nu: f64,
    energy: f64,
}

fn shifted_order(l: i32, k: f64, defect: &ScrewDefect) -> f64 {
    (l as f64 - k * defect.beta()).abs()
}

impl Mode {
    pub fn new(l: i32, k: f64, kappa: f64, defect: &ScrewDefect, consts: &PhysicalConstants) -> Result<Self> {
        if !k.is_finite() {
            return Err(Error::domain(format!("k must be finite, got {k}")));
        }
        if !(kappa.is_finite() && kappa >= 0.0) {
            return Err(Error::domain(format!("kappa must be non-negative, got {kappa}")));
        }
        Ok(Mode {
            l,
            k,
            kappa,
            nu: shifted_order(l, k, defect),
            energy: consts.kinetic_prefactor() * (k * k + kappa * kappa),
        })
    }

    pub fn l(&self) -> i32 {
        self.l
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Bessel order `|l − kβ|`.
    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// Whether the stored order and energy are exactly what `defect` and
    /// `consts` give.
    pub fn is_consistent_with(&self, defect: &ScrewDefect, consts: &PhysicalConstants) -> bool {
        self.nu == shifted_order(self.l, self.k, defect)
            && self.energy == consts.kinetic_prefactor() * (self.k * self.k + self.kappa * self.kappa)
            && self.energy >= consts.kinetic_prefactor() * self.k * self.k
    }

    fn check(&self, defect: &ScrewDefect, consts: &PhysicalConstants) -> Result<()> {
        if self.is_consistent_with(defect, consts) {
            Ok(())
        } else {
            Err(Error::domain("mode was built for a different defect or constants"))
        }
    }

    fn radial(&self, rho: f64) -> Result<f64> {
        bessel_j(self.nu, self.kappa * rho)
    }
}

/// `ψ(ρ, φ, z, t) = e^{−iEt/ħ} e^{ikz} e^{ilφ} J_ν(κρ)`.
pub fn mode_eval(
    mode: &Mode,
    defect: &ScrewDefect,
    consts: &PhysicalConstants,
    p: &CylPoint,
    t: f64,
) -> Result<Complex64> {
    if !(p.rho.is_finite() && p.rho > 0.0) {
        return Err(Error::domain(format!("rho must be positive, got {}", p.rho)));
    }
    mode.check(defect, consts)?;
    let phase = -mode.energy * t / consts.hbar() + mode.k * p.z + mode.l as f64 * p.phi;
    Ok(Complex64::from_polar(1.0, phase) * mode.radial(p.rho)?)
}

/// The mode at `z = 0`, `t = 0` sampled on every grid node.
pub fn mode_on_grid(mode: &Mode, grid: &CylGrid) -> Result<Array2<Complex64>> {
    let radial: Vec<f64> = (0..grid.n_rho)
        .map(|i| mode.radial(grid.rho(i)))
        .collect::<Result<_>>()?;
    Ok(Array2::from_shape_fn(grid.shape(), |(i, j)| {
        Complex64::from_polar(radial[i], mode.l as f64 * grid.phi(j))
    }))
}

/// Relative residual `max |Hψ − Eψ| / max |ψ|` of the mode on `grid`, with
/// `H = −(ħ²/2m) ∇²` and the maximum of the numerator over interior radial
/// rows only.
pub fn pde_residual(mode: &Mode, defect: &ScrewDefect, consts: &PhysicalConstants, grid: &CylGrid) -> Result<f64> {
    pde_residual_with_energy(mode, defect, consts, grid, mode.energy)
}

/// [`pde_residual`] against an arbitrary trial energy.
pub fn pde_residual_with_energy(
    mode: &Mode,
    defect: &ScrewDefect,
    consts: &PhysicalConstants,
    grid: &CylGrid,
    energy: f64,
) -> Result<f64> {
    mode.check(defect, consts)?;
    let psi = mode_on_grid(mode, grid)?;
    let scale = psi.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::domain("mode vanishes identically on the grid"));
    }
    let lap = laplace_beltrami_apply(defect, grid, mode.k, &psi)?;
    let pre = consts.kinetic_prefactor();
    let mut worst = 0.0f64;
    for i in 1..grid.n_rho - 1 {
        for j in 0..grid.n_phi {
            let h_psi = lap[[i, j]] * -pre;
            worst = worst.max((h_psi - psi[[i, j]] * energy).norm());
        }
    }
    Ok(worst / scale)
}

/// Residual on a grid and on its refinement with both spacings halved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualConvergence {
    pub coarse: f64,
    pub fine: f64,
}

impl ResidualConvergence {
    /// `fine / coarse`; about 0.25 for a second-order scheme.
    pub fn ratio(&self) -> f64 {
        self.fine / self.coarse
    }
}

pub fn residual_convergence(
    mode: &Mode,
    defect: &ScrewDefect,
    consts: &PhysicalConstants,
    grid: &CylGrid,
    energy: f64,
) -> Result<ResidualConvergence> {
    Ok(ResidualConvergence {
        coarse: pde_residual_with_energy(mode, defect, consts, grid, energy)?,
        fine: pde_residual_with_energy(mode, defect, consts, &grid.refined(), energy)?,
    })
}

/// Angular factor of a mode built two ways between `phi0` and `phi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorPair {
    /// `e^{il(φ−φ0)}`, the angular dependence of the solution in the defect.
    pub direct: Complex64,
    /// `e^{iγ} · ψ0`, with `ψ0 = e^{i(l−kβ)(φ−φ0)}` the defect-free solution
    /// carrying the shifted angular momentum.
    pub factored: Complex64,
    /// The Dirac factor `e^{iγ}`, `γ = kβ(φ − φ0)`.
    pub extra: Complex64,
}

/// Compares the direct solution with the Dirac phase-factor construction
/// `ψ = e^{i∫A·dr} ψ0`. Angles are unwrapped, so `phi − phi0 = 2π` is a full
/// loop.
pub fn phase_factor_equivalence(l: i32, k: f64, defect: &ScrewDefect, phi0: f64, phi: f64) -> FactorPair {
    let sweep = phi - phi0;
    let extra = phase_factor(&dirac_phase_closed(k, defect, phi0, phi));
    let flat = Complex64::from_polar(1.0, (l as f64 - k * defect.beta()) * sweep);
    FactorPair {
        direct: Complex64::from_polar(1.0, l as f64 * sweep),
        factored: extra * flat,
        extra,
    }
}
