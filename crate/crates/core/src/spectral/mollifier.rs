use crate::error::{domain, Result};

/// Gaussian mollifier `ρ_ε`, acting in Fourier space as `ρ̂(εk) = exp(-ε²|k|²/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MollifierKernel {
    epsilon: f64,
}

impl MollifierKernel {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(domain(format!("mollifier scale must be positive, got {epsilon}")));
        }
        Ok(Self { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Unscaled symbol `ρ̂(ξ)` as a function of `|ξ|`.
    pub fn base_symbol(xi: f64) -> f64 {
        (-0.5 * xi * xi).exp()
    }

    pub fn symbol_at(&self, k: [i64; 3]) -> f64 {
        let k2 = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64;
        (-0.5 * self.epsilon * self.epsilon * k2).exp()
    }

    /// `sup_ξ |ξ|^m |ρ̂(ξ)| = (m/e)^{m/2}`, the decay constant of the symbol.
    pub fn decay_constant(m: u32) -> f64 {
        if m == 0 {
            1.0
        } else {
            (m as f64 / std::f64::consts::E).powf(m as f64 / 2.0)
        }
    }
}
