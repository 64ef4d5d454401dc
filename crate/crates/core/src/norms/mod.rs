//! Sobolev norms, sup-norms and trajectory functionals.

pub mod quadrature;
mod trace;

pub use trace::{
    bootstrap_monitor, energy_balance_report, xt_functional, BootstrapVerdict, NormSample,
    NormTrace,
};

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::spectral::{fft, SpectralField};

/// Homogeneous Sobolev norm `((2π)^d Σ_k |k|^{2s} |f̂(k)|²)^{1/2}`, summed
/// over components. The zero mode contributes only at `s = 0`.
pub fn sobolev_norm(f: &SpectralField, s: f64) -> Result<f64> {
    Ok(sobolev_norms(f, &[s])?[0])
}

/// [`sobolev_norm`] for several indices in one pass over the coefficients.
pub fn sobolev_norms(f: &SpectralField, indices: &[f64]) -> Result<Vec<f64>> {
    if let Some(s) = indices.iter().find(|s| !(**s >= 0.0) || !s.is_finite()) {
        return Err(domain(format!(
            "Sobolev index must be finite and non-negative, got {s}"
        )));
    }
    let grid = f.grid();
    let mut sums = vec![0.0; indices.len()];
    for c in 0..f.components() {
        for (flat, coeff) in f.component(c).iter().enumerate() {
            let mag = coeff.norm_sqr();
            if mag == 0.0 {
                continue;
            }
            let k2 = grid.k_squared(flat);
            for (sum, &s) in sums.iter_mut().zip(indices) {
                let weight = if s == 0.0 {
                    1.0
                } else if k2 == 0.0 {
                    0.0
                } else {
                    k2.powf(s)
                };
                *sum += weight * mag;
            }
        }
    }
    Ok(sums.into_iter().map(|sum| (grid.volume() * sum).sqrt()).collect())
}

/// Inhomogeneous `H²` norm, `(‖f‖²_{L²} + ‖f‖²_{Ḣ²})^{1/2}`.
pub fn h2_full_norm(f: &SpectralField) -> f64 {
    let l2 = sobolev_norm(f, 0.0).expect("s = 0 is valid");
    let h2 = sobolev_norm(f, 2.0).expect("s = 2 is valid");
    l2.hypot(h2)
}

/// Grid maximum of the pointwise Euclidean (Frobenius, for vector fields)
/// norm of the gradient.
pub fn grad_sup_norm(f: &SpectralField) -> f64 {
    let grid = *f.grid();
    let dim = grid.dim();
    let support: Vec<&[Complex64]> = (0..f.components()).map(|c| f.component(c)).collect();
    fft::sup_pointwise_norm(&grid, &support, dim * f.components(), |i, flats, out| {
        let (c, axis) = (i / dim, i % dim);
        let comp = f.component(c);
        for (o, &flat) in out.iter_mut().zip(flats) {
            *o = Complex64::new(0.0, grid.mode(flat)[axis] as f64) * comp[flat];
        }
    })
}

/// Grid maximum of the pointwise Euclidean norm of the field itself.
pub fn sup_norm(f: &SpectralField) -> f64 {
    let support: Vec<&[Complex64]> = (0..f.components()).map(|c| f.component(c)).collect();
    fft::sup_pointwise_norm(f.grid(), &support, f.components(), |c, flats, out| {
        let comp = f.component(c);
        for (o, &flat) in out.iter_mut().zip(flats) {
            *o = comp[flat];
        }
    })
}
