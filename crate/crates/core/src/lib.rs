//! Pseudospectral laboratory for the Navier-Stokes and dissipative SQG
//! equations with a time-oscillating coefficient on the nonlinear term.

pub mod dynamics;
pub mod equation;
pub mod harness;
pub mod error;
pub mod inequality;
pub mod norms;
pub mod oscillation;
pub mod spectral;

pub use equation::EquationKind;
pub use error::{Error, Result};
pub use oscillation::{OscillationProfile, ProfileKind};
pub use spectral::{MollifierKernel, SpectralField, TorusGrid};
