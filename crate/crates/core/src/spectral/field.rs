use num_complex::Complex64;

use super::fft;
use super::grid::TorusGrid;
use super::mollifier::MollifierKernel;
use crate::error::{config, domain, Result};

/// Relative size below which a zero mode counts as absent.
const MEAN_TOLERANCE: f64 = 1e-12;

/// Fourier coefficients of a real scalar or vector field on a torus.
///
/// Coefficients follow `f(x) = Σ_k f̂(k) e^{i k·x}` and are stored
/// component-major, each component in the grid's row-major mode order.
/// Every constructor leaves the Nyquist planes at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: TorusGrid,
    components: usize,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: TorusGrid, components: usize) -> Self {
        Self {
            grid,
            components,
            coeffs: vec![Complex64::default(); components * grid.len()],
        }
    }

    /// Wraps raw coefficients. Nyquist entries are cleared; reality is not
    /// enforced (see [`SpectralField::symmetrize`]).
    pub fn from_coefficients(
        grid: TorusGrid,
        components: usize,
        coeffs: Vec<Complex64>,
    ) -> Result<Self> {
        if components == 0 || coeffs.len() != components * grid.len() {
            return Err(config(format!(
                "expected {} coefficients for {} component(s), got {}",
                components * grid.len(),
                components,
                coeffs.len()
            )));
        }
        let mut field = Self {
            grid,
            components,
            coeffs,
        };
        field.clear_nyquist();
        Ok(field)
    }

    /// Builds a field from single-component pieces.
    pub fn from_components(grid: TorusGrid, parts: Vec<Vec<Complex64>>) -> Result<Self> {
        let components = parts.len();
        let coeffs: Vec<Complex64> = parts.into_iter().flatten().collect();
        Self::from_coefficients(grid, components, coeffs)
    }

    /// Transforms real grid samples (component-major) into coefficients.
    pub fn forward_transform(grid: TorusGrid, components: usize, samples: &[f64]) -> Result<Self> {
        if components == 0 || samples.len() != components * grid.len() {
            return Err(config(format!(
                "expected {} samples for {} component(s), got {}",
                components * grid.len(),
                components,
                samples.len()
            )));
        }
        let parts: Vec<&[f64]> = samples.chunks(grid.len()).collect();
        let coeffs = fft::forward_real_many(&parts, &grid);
        Self::from_components(grid, coeffs)
    }

    /// Real grid samples, component-major.
    pub fn inverse_transform(&self) -> Vec<f64> {
        self.component_samples().into_iter().flatten().collect()
    }

    /// Real grid samples of each component.
    pub fn component_samples(&self) -> Vec<Vec<f64>> {
        let parts: Vec<&[Complex64]> = (0..self.components).map(|c| self.component(c)).collect();
        fft::inverse_real_many(&parts, &self.grid)
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coefficients(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        let len = self.grid.len();
        &self.coeffs[c * len..(c + 1) * len]
    }

    /// Coefficient of component `c` at lattice vector `k`; zero outside the lattice.
    pub fn coefficient(&self, c: usize, k: &[i64]) -> Complex64 {
        match self.grid.flat_index(k) {
            Some(flat) if c < self.components => self.coeffs[c * self.grid.len() + flat],
            _ => Complex64::default(),
        }
    }

    /// Sets `f̂(k)` and `f̂(-k) = conj(f̂(k))` together.
    pub fn set_mode(&mut self, c: usize, k: &[i64], value: Complex64) -> Result<()> {
        let flat = self
            .grid
            .flat_index(k)
            .ok_or_else(|| config(format!("wavenumber {k:?} is outside the retained lattice")))?;
        let len = self.grid.len();
        let neg = self.grid.negated(flat);
        if neg == flat {
            self.coeffs[c * len + flat] = Complex64::new(value.re, 0.0);
        } else {
            self.coeffs[c * len + flat] = value;
            self.coeffs[c * len + neg] = value.conj();
        }
        Ok(())
    }

    pub fn is_scalar(&self) -> bool {
        self.components == 1
    }

    fn clear_nyquist(&mut self) {
        let len = self.grid.len();
        for c in 0..self.components {
            for flat in self.grid.nyquist_indices() {
                self.coeffs[c * len + flat] = Complex64::default();
            }
        }
    }

    /// Applies a per-mode scalar multiplier to every component.
    pub fn map_multiplier(&self, multiplier: impl Fn([i64; 3]) -> Complex64) -> Self {
        let len = self.grid.len();
        let symbols: Vec<Complex64> = (0..len).map(|flat| multiplier(self.grid.mode(flat))).collect();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| if self.grid.is_nyquist(i % len) { Complex64::default() } else { c * symbols[i % len] })
            .collect();
        Self {
            grid: self.grid,
            components: self.components,
            coeffs,
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            grid: self.grid,
            components: self.components,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// `self + factor * other`.
    pub fn axpy(&self, factor: f64, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            grid: self.grid,
            components: self.components,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b * factor)
                .collect(),
        })
    }

    pub(crate) fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid || self.components != other.components {
            return Err(config("fields live on different grids or have different component counts"));
        }
        Ok(())
    }

    /// Mean value of every component (the k = 0 coefficients).
    pub fn means(&self) -> Vec<Complex64> {
        (0..self.components).map(|c| self.component(c)[0]).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).fold(0.0, f64::max).sqrt()
    }

    pub fn is_mean_zero(&self) -> bool {
        let means = self.means();
        if means.iter().all(|m| m.norm_sqr() == 0.0) {
            return true;
        }
        let scale = self.max_abs();
        means.iter().all(|m| m.norm() <= MEAN_TOLERANCE * scale)
    }

    pub(crate) fn require_mean_zero(&self, what: &str) -> Result<()> {
        if self.is_mean_zero() {
            Ok(())
        } else {
            Err(domain(format!("{what} requires a mean-zero field")))
        }
    }

    /// Drops the k = 0 coefficients.
    pub fn without_mean(&self) -> Self {
        let mut out = self.clone();
        let len = self.grid.len();
        for c in 0..self.components {
            out.coeffs[c * len] = Complex64::default();
        }
        out
    }

    /// `Σ_k |f̂(k)|²` summed over components; equals the grid average of `|f|²`.
    pub fn spectral_energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Largest violation of `f̂(-k) = conj f̂(k)`.
    pub fn reality_defect(&self) -> f64 {
        let len = self.grid.len();
        let mut worst: f64 = 0.0;
        for c in 0..self.components {
            let comp = self.component(c);
            for flat in 0..len {
                let d = comp[flat] - comp[self.grid.negated(flat)].conj();
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    /// Projects onto real fields: `f̂(k) ← (f̂(k) + conj f̂(-k)) / 2`.
    pub fn symmetrize(&self) -> Self {
        let len = self.grid.len();
        let mut coeffs = self.coeffs.clone();
        for c in 0..self.components {
            let comp = self.component(c);
            for flat in 0..len {
                coeffs[c * len + flat] = (comp[flat] + comp[self.grid.negated(flat)].conj()) * 0.5;
            }
        }
        let mut out = Self {
            grid: self.grid,
            components: self.components,
            coeffs,
        };
        out.clear_nyquist();
        out
    }

    /// `max_k |k·û(k)| / max_k |û(k)|`, zero for the zero field.
    pub fn divergence_defect(&self) -> Result<f64> {
        self.require_vector("divergence")?;
        let len = self.grid.len();
        let dim = self.grid.dim();
        let mut worst: f64 = 0.0;
        for flat in 0..len {
            let k = self.grid.mode(flat);
            let mut div = Complex64::default();
            for j in 0..dim {
                div += self.coeffs[j * len + flat] * k[j] as f64;
            }
            worst = worst.max(div.norm());
        }
        let scale = self.max_abs();
        Ok(if scale == 0.0 { 0.0 } else { worst / scale })
    }

    fn require_vector(&self, what: &str) -> Result<()> {
        if self.components != self.grid.dim() {
            return Err(config(format!(
                "{what} needs a vector field with {} components, got {}",
                self.grid.dim(),
                self.components
            )));
        }
        Ok(())
    }

    /// Partial derivative along `axis` (multiplier `i k_axis`).
    pub fn derivative(&self, axis: usize) -> Result<Self> {
        if axis >= self.grid.dim() {
            return Err(config(format!(
                "axis {axis} out of range for a {}-dimensional grid",
                self.grid.dim()
            )));
        }
        Ok(self.map_multiplier(|k| Complex64::new(0.0, k[axis] as f64)))
    }

    /// Gradient of a scalar field as a vector field.
    pub fn gradient(&self) -> Result<Self> {
        if !self.is_scalar() {
            return Err(config("gradient is defined for scalar fields"));
        }
        let parts = (0..self.grid.dim())
            .map(|axis| self.derivative(axis).map(|d| d.coeffs))
            .collect::<Result<Vec<_>>>()?;
        Self::from_components(self.grid, parts)
    }

    /// `(-Δ)^β`, the multiplier `|k|^{2β}`; the zero mode maps to zero for
    /// `β > 0` and is required to vanish for `β < 0`.
    pub fn fractional_laplacian(&self, beta: f64) -> Result<Self> {
        if !beta.is_finite() || beta < -1.0 {
            return Err(domain(format!("fractional exponent must be finite and >= -1, got {beta}")));
        }
        if beta == 0.0 {
            return Ok(self.clone());
        }
        if beta < 0.0 {
            self.require_mean_zero("a negative fractional power")?;
        }
        Ok(self.map_multiplier(|k| {
            let k2 = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64;
            if k2 == 0.0 {
                Complex64::default()
            } else {
                Complex64::new(k2.powf(beta), 0.0)
            }
        }))
    }

    /// SQG velocity `∇^⊥(-Δ)^{-1/2} θ`, per mode `(-i k₂, i k₁)/|k|`.
    pub fn riesz_velocity(&self) -> Result<Self> {
        if self.grid.dim() != 2 || !self.is_scalar() {
            return Err(config("riesz velocity needs a scalar field on a 2D grid"));
        }
        self.require_mean_zero("riesz velocity")?;
        let len = self.grid.len();
        let mut coeffs = vec![Complex64::default(); 2 * len];
        for flat in 0..len {
            if self.grid.is_nyquist(flat) {
                continue;
            }
            let k = self.grid.mode(flat);
            let norm = ((k[0] * k[0] + k[1] * k[1]) as f64).sqrt();
            if norm == 0.0 {
                continue;
            }
            let t = self.coeffs[flat];
            coeffs[flat] = Complex64::new(0.0, -(k[1] as f64) / norm) * t;
            coeffs[len + flat] = Complex64::new(0.0, k[0] as f64 / norm) * t;
        }
        Ok(Self {
            grid: self.grid,
            components: 2,
            coeffs,
        })
    }

    /// Leray projection `I - k kᵀ/|k|²` per mode; the mean passes through.
    pub fn leray_project(&self) -> Result<Self> {
        self.require_vector("leray projection")?;
        let len = self.grid.len();
        let dim = self.grid.dim();
        let mut coeffs = self.coeffs.clone();
        for flat in 1..len {
            let k = self.grid.mode(flat);
            let k2 = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64;
            let mut div = Complex64::default();
            for j in 0..dim {
                div += self.coeffs[j * len + flat] * k[j] as f64;
            }
            let factor = div / k2;
            for j in 0..dim {
                coeffs[j * len + flat] -= factor * k[j] as f64;
            }
        }
        Ok(Self {
            grid: self.grid,
            components: self.components,
            coeffs,
        })
    }

    /// 2/3 rule: zeroes every mode with some `|k_j| > n/3`.
    pub fn dealias(&self) -> Self {
        let n = self.grid.n() as i64;
        self.map_multiplier(|k| {
            if k.iter().any(|&kj| 3 * kj.abs() > n) {
                Complex64::default()
            } else {
                Complex64::new(1.0, 0.0)
            }
        })
    }

    /// Convolution with the Gaussian mollifier at scale `epsilon`.
    pub fn mollify(&self, epsilon: f64) -> Result<Self> {
        let kernel = MollifierKernel::new(epsilon)?;
        Ok(self.map_multiplier(|k| Complex64::new(kernel.symbol_at(k), 0.0)))
    }

    /// Re-samples the field on a finer grid of the same dimension by
    /// zero-padding its spectrum.
    pub fn padded(&self, grid: TorusGrid) -> Result<Self> {
        if grid.dim() != self.grid.dim() || grid.n() < self.grid.n() {
            return Err(config("padding target must be a finer grid of the same dimension"));
        }
        let len = self.grid.len();
        let mut out = Self::zeros(grid, self.components);
        let target_len = grid.len();
        for c in 0..self.components {
            for flat in 0..len {
                let value = self.coeffs[c * len + flat];
                if value == Complex64::default() {
                    continue;
                }
                let k = self.grid.mode(flat);
                if let Some(target) = grid.flat_index(&k[..grid.dim()]) {
                    out.coeffs[c * target_len + target] = value;
                }
            }
        }
        Ok(out)
    }
}
