//! Multidimensional complex FFTs on a [`TorusGrid`], with helpers that pack
//! two real fields into one complex transform.
//!
//! Forward transforms are normalized by `1/len` so that
//! `f(x) = Σ_k f̂(k) e^{i k·x}`. Inverse transforms skip lines that are
//! known to be identically zero, which matters for band-limited fields on
//! fine grids.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use super::grid::TorusGrid;

fn plan(n: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    static PLANS: OnceLock<Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>> = OnceLock::new();
    let cache = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut cache = cache.lock().expect("fft plan cache poisoned");
    let key = (n, direction == FftDirection::Forward);
    cache
        .entry(key)
        .or_insert_with(|| FftPlanner::new().plan_fft(n, direction))
        .clone()
}

/// Per-axis flags marking indices that carry at least one nonzero value.
fn occupancy(data: &[Complex64], grid: &TorusGrid) -> Vec<Vec<bool>> {
    let n = grid.n();
    let dim = grid.dim();
    let mut occ = vec![vec![false; n]; dim];
    for (row, line) in data.chunks_exact(n).enumerate() {
        // Branch-free test first; the shift drops sign bits so -0.0 counts as zero.
        let bits = line.iter().fold(0u64, |acc, v| acc | ((v.re.to_bits() | v.im.to_bits()) << 1));
        if bits != 0 {
            for (i, v) in line.iter().enumerate() {
                if v.re != 0.0 || v.im != 0.0 {
                    occ[dim - 1][i] = true;
                }
            }
            let mut rest = row;
            for axis in (0..dim - 1).rev() {
                occ[axis][rest % n] = true;
                rest /= n;
            }
        }
    }
    occ
}

/// In-place unnormalized transform along every axis.
fn transform(data: &mut [Complex64], grid: &TorusGrid, direction: FftDirection, prune: bool) {
    let occ = if prune { Some(occupancy(data, grid)) } else { None };
    transform_with(data, grid, direction, occ)
}

/// [`transform`] with precomputed occupancy flags (`None` transforms every line).
fn transform_with(data: &mut [Complex64], grid: &TorusGrid, direction: FftDirection, occ: Option<Vec<Vec<bool>>>) {
    let n = grid.n();
    let dim = grid.dim();
    debug_assert_eq!(data.len(), grid.len());
    let fft = plan(n, direction);
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];

    for axis in 0..dim {
        let stride = n.pow((dim - 1 - axis) as u32);
        if stride == 1 {
            fft.process_with_scratch(data, &mut scratch);
            continue;
        }
        let block = n * stride;
        // Columns j in 0..stride whose not-yet-transformed axis indices are occupied.
        let columns: Vec<usize> = (0..stride)
            .filter(|&j| match &occ {
                None => true,
                Some(occ) => {
                    let mut rest = j;
                    for later in (axis + 1..dim).rev() {
                        if !occ[later][rest % n] {
                            return false;
                        }
                        rest /= n;
                    }
                    true
                }
            })
            .collect();
        if columns.is_empty() {
            continue;
        }
        const TILE: usize = 32;
        let mut lines = vec![Complex64::default(); TILE * n];
        for base in (0..data.len()).step_by(block) {
            for tile in columns.chunks(TILE) {
                let width = tile.len();
                for i in 0..n {
                    let row = base + i * stride;
                    for (w, &j) in tile.iter().enumerate() {
                        lines[w * n + i] = data[row + j];
                    }
                }
                fft.process_with_scratch(&mut lines[..width * n], &mut scratch);
                for i in 0..n {
                    let row = base + i * stride;
                    for (w, &j) in tile.iter().enumerate() {
                        data[row + j] = lines[w * n + i];
                    }
                }
            }
        }
    }
}

fn zero_nyquist(coeffs: &mut [Complex64], grid: &TorusGrid) {
    for flat in grid.nyquist_indices() {
        coeffs[flat] = Complex64::default();
    }
}

/// Spectral coefficients of real samples; Nyquist planes are zeroed and the
/// result is exactly Hermitian.
pub fn forward_real(samples: &[f64], grid: &TorusGrid) -> Vec<Complex64> {
    let mut data: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    transform(&mut data, grid, FftDirection::Forward, false);
    let scale = 1.0 / grid.len() as f64;
    let mut out = vec![Complex64::default(); data.len()];
    for flat in 0..data.len() {
        let a = data[flat];
        let b = data[grid.negated(flat)].conj();
        out[flat] = (a + b) * (0.5 * scale);
    }
    zero_nyquist(&mut out, grid);
    out
}

/// Transforms two real sample arrays with one complex FFT.
pub fn forward_real_pair(
    first: &[f64],
    second: &[f64],
    grid: &TorusGrid,
) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut data: Vec<Complex64> = first
        .iter()
        .zip(second)
        .map(|(&a, &b)| Complex64::new(a, b))
        .collect();
    transform(&mut data, grid, FftDirection::Forward, false);
    let scale = 0.5 / grid.len() as f64;
    let mut a = vec![Complex64::default(); data.len()];
    let mut b = vec![Complex64::default(); data.len()];
    for flat in 0..data.len() {
        let h = data[flat];
        let hm = data[grid.negated(flat)].conj();
        a[flat] = (h + hm) * scale;
        // (h - hm) / (2i)
        let d = h - hm;
        b[flat] = Complex64::new(d.im, -d.re) * scale;
    }
    zero_nyquist(&mut a, grid);
    zero_nyquist(&mut b, grid);
    (a, b)
}

/// Real samples of Hermitian coefficients.
pub fn inverse_real(coeffs: &[Complex64], grid: &TorusGrid) -> Vec<f64> {
    let mut data = coeffs.to_vec();
    transform(&mut data, grid, FftDirection::Inverse, true);
    data.into_iter().map(|c| c.re).collect()
}

/// Real samples of two Hermitian coefficient arrays with one complex FFT.
pub fn inverse_real_pair(
    first: &[Complex64],
    second: &[Complex64],
    grid: &TorusGrid,
) -> (Vec<f64>, Vec<f64>) {
    let i = Complex64::new(0.0, 1.0);
    let mut data: Vec<Complex64> = first.iter().zip(second).map(|(&a, &b)| a + i * b).collect();
    transform(&mut data, grid, FftDirection::Inverse, true);
    data.into_iter().map(|c| (c.re, c.im)).unzip()
}

/// Real samples of any number of Hermitian arrays, packed two per FFT.
pub fn inverse_real_many(arrays: &[&[Complex64]], grid: &TorusGrid) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(arrays.len());
    for pair in arrays.chunks(2) {
        match pair {
            [a, b] => {
                let (x, y) = inverse_real_pair(a, b, grid);
                out.push(x);
                out.push(y);
            }
            [a] => out.push(inverse_real(a, grid)),
            _ => unreachable!(),
        }
    }
    out
}

/// Grid maximum of `(Σ_i g_i(x)²)^{1/2}` over `count` Hermitian coefficient
/// arrays `g_i`, each supported where some array of `support` is nonzero.
///
/// Work happens on the box of occupied indices: `fill(i, flats, out)`
/// writes `ĝ_i` at the full-grid flat indices `flats` into `out`. Pairs are
/// packed into one complex transform, each axis is expanded to full length
/// in turn and squared magnitudes are accumulated along the last axis.
pub fn sup_pointwise_norm(
    grid: &TorusGrid,
    support: &[&[Complex64]],
    count: usize,
    mut fill: impl FnMut(usize, &[usize], &mut [Complex64]),
) -> f64 {
    let (n, dim) = (grid.n(), grid.dim());
    let mut occ = vec![vec![false; n]; dim];
    for data in support {
        for (axis, flags) in occupancy(data, grid).into_iter().enumerate() {
            for (o, f) in occ[axis].iter_mut().zip(flags) {
                *o |= f;
            }
        }
    }
    let idx: Vec<Vec<usize>> = occ.iter().map(|f| (0..n).filter(|&i| f[i]).collect()).collect();
    if count == 0 || idx.iter().any(|v| v.is_empty()) {
        return 0.0;
    }
    let shape: Vec<usize> = idx.iter().map(|v| v.len()).collect();
    let boxed: usize = shape.iter().product();
    let mut flats = vec![0usize; boxed];
    for (m, flat) in flats.iter_mut().enumerate() {
        let mut rest = m;
        let mut stride = 1;
        for axis in (0..dim).rev() {
            *flat += idx[axis][rest % shape[axis]] * stride;
            rest /= shape[axis];
            stride *= n;
        }
    }

    let fft = plan(n, FftDirection::Inverse);
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    let mut acc = vec![0.0f64; grid.len()];
    let mut a = vec![Complex64::default(); boxed];
    let mut b = vec![Complex64::default(); boxed];
    let mut max = 0.0f64;
    for first in (0..count).step_by(2) {
        fill(first, &flats, &mut a);
        let paired = first + 1 < count;
        if paired {
            fill(first + 1, &flats, &mut b);
            for (x, y) in a.iter_mut().zip(&b) {
                *x = Complex64::new(x.re - y.im, x.im + y.re);
            }
        }
        let last = first + 2 >= count;
        // Expand axes 0..dim-1 to full length.
        let mut cur = a.clone();
        let mut dims = shape.clone();
        for axis in 0..dim - 1 {
            let outer: usize = dims[..axis].iter().product();
            let inner: usize = dims[axis + 1..].iter().product();
            let m = dims[axis];
            let mut next = vec![Complex64::default(); outer * n * inner];
            let mut lines = vec![Complex64::default(); inner * n];
            for o in 0..outer {
                lines.iter_mut().for_each(|v| *v = Complex64::default());
                for (j, &i) in idx[axis].iter().enumerate() {
                    let src = &cur[(o * m + j) * inner..(o * m + j + 1) * inner];
                    for (t, v) in src.iter().enumerate() {
                        lines[t * n + i] = *v;
                    }
                }
                fft.process_with_scratch(&mut lines, &mut scratch);
                for t in 0..inner {
                    for i in 0..n {
                        next[(o * n + i) * inner + t] = lines[t * n + i];
                    }
                }
            }
            cur = next;
            dims[axis] = n;
        }
        // Last axis: transform each line and accumulate.
        let m = dims[dim - 1];
        let mut line = vec![Complex64::default(); n];
        for (row, chunk) in cur.chunks_exact(m).enumerate() {
            line.iter_mut().for_each(|v| *v = Complex64::default());
            for (&i, v) in idx[dim - 1].iter().zip(chunk) {
                line[i] = *v;
            }
            fft.process_with_scratch(&mut line, &mut scratch);
            for (s, v) in acc[row * n..(row + 1) * n].iter_mut().zip(&line) {
                *s += v.re * v.re;
                if paired {
                    *s += v.im * v.im;
                }
                if last {
                    max = max.max(*s);
                }
            }
        }
    }
    max.sqrt()
}

/// Spectral coefficients of any number of real arrays, packed two per FFT.
pub fn forward_real_many(arrays: &[&[f64]], grid: &TorusGrid) -> Vec<Vec<Complex64>> {
    let mut out = Vec::with_capacity(arrays.len());
    for pair in arrays.chunks(2) {
        match pair {
            [a, b] => {
                let (x, y) = forward_real_pair(a, b, grid);
                out.push(x);
                out.push(y);
            }
            [a] => out.push(forward_real(a, grid)),
            _ => unreachable!(),
        }
    }
    out
}
