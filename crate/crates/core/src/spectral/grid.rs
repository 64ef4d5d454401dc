use serde::{Deserialize, Serialize};

use crate::error::{config, Result};

/// Uniform grid on the periodic box `[0, 2π)^dim`.
///
/// Array index `j` along an axis corresponds to the integer wavenumber
/// `j` for `j < n/2` and `j - n` otherwise, so the Nyquist index `n/2`
/// carries wavenumber `-n/2`. Storage is row-major with axis 0 slowest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusGrid {
    dim: usize,
    n: usize,
}

impl TorusGrid {
    pub fn new(dim: usize, n: usize) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(config(format!("grid dimension must be 2 or 3, got {dim}")));
        }
        if n < 8 || !n.is_multiple_of(2) {
            return Err(config(format!(
                "points per axis must be even and at least 8, got {n}"
            )));
        }
        Ok(Self { dim, n })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of grid points (and of Fourier modes) per component.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.n as f64
    }

    /// `(2π)^dim`, the measure of the box.
    pub fn volume(&self) -> f64 {
        (2.0 * std::f64::consts::PI).powi(self.dim as i32)
    }

    #[inline]
    pub fn wavenumber(&self, index: usize) -> i64 {
        let half = self.n / 2;
        if index < half {
            index as i64
        } else {
            index as i64 - self.n as i64
        }
    }

    #[inline]
    pub fn index_of_wavenumber(&self, k: i64) -> Option<usize> {
        let half = (self.n / 2) as i64;
        if k <= -half || k >= half {
            None
        } else if k >= 0 {
            Some(k as usize)
        } else {
            Some((k + self.n as i64) as usize)
        }
    }

    /// Lattice vector of a flat index; unused trailing axes are zero.
    #[inline]
    pub fn mode(&self, flat: usize) -> [i64; 3] {
        let n = self.n;
        let mut out = [0i64; 3];
        let mut rest = flat;
        for axis in (0..self.dim).rev() {
            out[axis] = self.wavenumber(rest % n);
            rest /= n;
        }
        out
    }

    /// Flat index of a lattice vector, `None` outside the retained lattice
    /// (including the Nyquist planes).
    pub fn flat_index(&self, k: &[i64]) -> Option<usize> {
        if k.len() != self.dim {
            return None;
        }
        let mut flat = 0usize;
        for &kj in k {
            flat = flat * self.n + self.index_of_wavenumber(kj)?;
        }
        Some(flat)
    }

    /// Flat indices on any Nyquist plane. Indices on an intersection of
    /// planes appear more than once.
    pub fn nyquist_indices(&self) -> impl Iterator<Item = usize> + '_ {
        let n = self.n;
        let len = self.len();
        (0..self.dim).flat_map(move |axis| {
            let stride = n.pow((self.dim - 1 - axis) as u32);
            let block = n * stride;
            (0..len)
                .step_by(block)
                .flat_map(move |base| (0..stride).map(move |j| base + (n / 2) * stride + j))
        })
    }

    /// True when any axis index sits on the Nyquist plane.
    #[inline]
    pub fn is_nyquist(&self, flat: usize) -> bool {
        let n = self.n;
        let half = n / 2;
        let mut rest = flat;
        for _ in 0..self.dim {
            if rest % n == half {
                return true;
            }
            rest /= n;
        }
        false
    }

    /// Flat index of `-k` (the Nyquist plane maps to itself).
    #[inline]
    pub fn negated(&self, flat: usize) -> usize {
        let n = self.n;
        let mut rest = flat;
        let mut out = 0usize;
        let mut scale = 1usize;
        for _ in 0..self.dim {
            let j = rest % n;
            out += ((n - j) % n) * scale;
            scale *= n;
            rest /= n;
        }
        out
    }

    #[inline]
    pub fn k_squared(&self, flat: usize) -> f64 {
        let k = self.mode(flat);
        (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64
    }

    /// Largest axis wavenumber magnitude of a mode.
    #[inline]
    pub fn max_axis_wavenumber(&self, flat: usize) -> i64 {
        let k = self.mode(flat);
        k[0].abs().max(k[1].abs()).max(k[2].abs())
    }

    /// Physical coordinate of a flat grid-point index.
    pub fn point(&self, flat: usize) -> [f64; 3] {
        let n = self.n;
        let h = self.spacing();
        let mut out = [0.0; 3];
        let mut rest = flat;
        for axis in (0..self.dim).rev() {
            out[axis] = (rest % n) as f64 * h;
            rest /= n;
        }
        out
    }

    /// Samples a function of position on every grid point.
    pub fn sample(&self, f: impl Fn([f64; 3]) -> f64) -> Vec<f64> {
        (0..self.len()).map(|i| f(self.point(i))).collect()
    }
}
