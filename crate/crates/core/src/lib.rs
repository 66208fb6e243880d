//! Nonlinear coherent states of the two-dimensional harmonic oscillator on
//! flat space and on a sphere, treated as an f-deformed one-dimensional
//! oscillator on the finite Fock space `{|0>, ..., |N>}`.
//!
//! Units are `hbar = m = omega = 1`; the curvature `lambda = 1/R^2` is
//! dimensionless and restricted to `lambda >= 0`.
//!
//! * [`algebra`]: spectra, structure functions, deformation functions.
//! * [`fock`]: dense operator matrices and expectation values.
//! * [`coherent`]: coherent-state construction and resolution of identity.
//! * [`statistics`]: photon statistics and quadrature squeezing.

pub mod algebra;
pub mod coherent;
pub mod error;
pub mod fock;
pub mod quad;
pub mod statistics;

pub use algebra::{Flavor, StructureValue, SurfaceSpec};
pub use coherent::{CoherentState, DeformedBinomial, QuadratureSpec};
pub use error::{Error, Result};
pub use fock::{FockVector, OperatorLabel, OperatorMatrix};
pub use num_complex::Complex64;
pub use statistics::{SqueezeCurve, SqueezeKind, StatsReport};
