//! Numerical laboratory for the Dirac phase of an electron moving around a
//! screw dislocation.
//!
//! A screw dislocation with Burgers vector magnitude `b0` turns flat
//! cylindrical space into a torsion-carrying geometry with metric
//! `ds² = (dz + β dφ)² + dρ² + ρ² dφ²`, `β = b0 / 2π`. An electron with axial
//! wavenumber `k` then behaves as if it encircled a flux tube: its angular
//! momentum shifts `l → l − kβ` and it picks up the phase `γ = ∫ kβ dφ`.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: metric, inverse, determinant, effective gauge potential and
//!   a finite-difference Laplace–Beltrami operator.
//! * [`phase`]: the Dirac phase in closed form and by quadrature.
//! * [`special`]: self-contained Gamma and real-order Bessel `J_ν`.
//! * [`modes`]: separated Bessel solutions and their PDE residual.
//! * [`noise`]: white noise on the Burgers vector, the induced phase shift
//!   `Δγ`, and deterministic parallel ensembles.
//! * [`sweep`]: log-log scaling sweeps over `k`, `T` or `D`.
//! * [`cli`]: the command-line front end used by the `dislocation-phase` binary.

pub mod cli;
pub mod error;
pub mod geometry;
pub mod modes;
pub mod noise;
pub mod phase;
pub mod special;
pub mod stats;
pub mod sweep;

pub use error::{Error, Result};
pub use geometry::{CylGrid, CylPoint, Metric3, ScrewDefect};
pub use modes::{Mode, PhysicalConstants};
pub use noise::{EnsembleStats, NoiseConfig, NoisePath};
pub use phase::{AngularPath, PhaseMethod, PhaseResult, QuadratureRule};
pub use sweep::{SweepAxis, SweepResult};
