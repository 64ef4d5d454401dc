//! Torus grid, transforms and Fourier-multiplier operators.

pub mod fft;
mod field;
mod grid;
mod mollifier;

pub use field::SpectralField;
pub use grid::TorusGrid;
pub use mollifier::MollifierKernel;
