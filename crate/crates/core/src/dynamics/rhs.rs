//! Pseudo-spectral nonlinear terms. Products are formed on the grid and
//! the result is truncated by the 2/3 rule.

use num_complex::Complex64;

use crate::error::{config, domain, Result};
use crate::oscillation::OscillationProfile;
use crate::spectral::{fft, SpectralField};

/// Largest divergence defect accepted by [`rhs_ns`].
pub const DIVERGENCE_TOLERANCE: f64 = 1e-9;

fn finish(grid: &crate::TorusGrid, coeffs: Vec<Vec<Complex64>>, factor: f64) -> Result<SpectralField> {
    let mut field = SpectralField::from_components(*grid, coeffs)?.dealias().scale(factor);
    field = field.without_mean();
    Ok(field)
}

/// `u·∇f` for every component of `f`, pseudo-spectrally.
pub(crate) fn advect(velocity: &[Vec<f64>], f: &SpectralField) -> Result<Vec<Vec<Complex64>>> {
    let grid = *f.grid();
    let dim = grid.dim();
    let mut parts = Vec::with_capacity(dim * f.components());
    for c in 0..f.components() {
        let comp = SpectralField::from_coefficients(grid, 1, f.component(c).to_vec())?;
        for axis in 0..dim {
            parts.push(comp.derivative(axis)?.into_coefficients());
        }
    }
    let refs: Vec<&[Complex64]> = parts.iter().map(|p| p.as_slice()).collect();
    let grads = fft::inverse_real_many(&refs, &grid);
    let mut products = Vec::with_capacity(f.components());
    for c in 0..f.components() {
        let mut out = vec![0.0; grid.len()];
        for (axis, u) in velocity.iter().enumerate() {
            let g = &grads[c * dim + axis];
            for i in 0..out.len() {
                out[i] += u[i] * g[i];
            }
        }
        products.push(out);
    }
    let refs: Vec<&[f64]> = products.iter().map(|p| p.as_slice()).collect();
    Ok(fft::forward_real_many(&refs, &grid))
}

/// SQG nonlinearity `-b(Nt) · dealias(u·∇θ)` with `u = ∇^⊥(-Δ)^{-1/2} θ`.
/// Dissipation is not included.
pub fn rhs_sqg(theta: &SpectralField, t: f64, profile: &OscillationProfile, alpha: f64) -> Result<SpectralField> {
    if theta.grid().dim() != 2 || !theta.is_scalar() {
        return Err(config("SQG right-hand side needs a scalar field on a 2D grid"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    theta.require_mean_zero("SQG right-hand side")?;
    let b = profile.evaluate(t)?;
    if b == 0.0 {
        return Ok(SpectralField::zeros(*theta.grid(), 1));
    }
    let velocity = theta.riesz_velocity()?.component_samples();
    let coeffs = advect(&velocity, theta)?;
    finish(theta.grid(), coeffs, -b)
}

/// NS nonlinearity `-b(Nt) · P dealias(u·∇u)`; pressure is removed by the
/// Leray projection `P`.
pub fn rhs_ns(u: &SpectralField, t: f64, profile: &OscillationProfile) -> Result<SpectralField> {
    if u.components() != u.grid().dim() {
        return Err(config("NS right-hand side needs a vector field"));
    }
    let defect = u.divergence_defect()?;
    if defect > DIVERGENCE_TOLERANCE {
        return Err(domain(format!("velocity is not divergence-free (defect {defect:e})")));
    }
    let b = profile.evaluate(t)?;
    if b == 0.0 {
        return Ok(SpectralField::zeros(*u.grid(), u.components()));
    }
    let velocity = u.component_samples();
    let coeffs = advect(&velocity, u)?;
    finish(u.grid(), coeffs, -b)?.leray_project()
}
