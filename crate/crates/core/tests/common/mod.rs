//! Brute-force Fourier convolution oracle for the nonlinear terms.

use std::collections::HashMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use oscilloflow::{SpectralField, TorusGrid};

pub const N: usize = 16;
pub const BAND: i64 = 5;

pub type Modes = HashMap<[i64; 3], Vec<Complex64>>;

pub fn band(dim: usize) -> Vec<[i64; 3]> {
    let r = -BAND..=BAND;
    let mut out = Vec::new();
    for a in r.clone() {
        for b in r.clone() {
            if dim == 2 {
                out.push([a, b, 0]);
            } else {
                for c in r.clone() {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

pub fn neg(k: [i64; 3]) -> [i64; 3] {
    [-k[0], -k[1], -k[2]]
}

pub fn dot(a: [i64; 3], b: [i64; 3]) -> f64 {
    (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]) as f64
}

/// Random real, mean-zero modes on the band; optionally solenoidal.
pub fn random_modes(dim: usize, comps: usize, seed: u64, solenoidal: bool) -> Modes {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut modes = Modes::new();
    for k in band(dim) {
        if k == [0, 0, 0] || modes.contains_key(&k) {
            continue;
        }
        let mut v: Vec<Complex64> = (0..comps)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        if solenoidal {
            let kk = dot(k, k);
            let kv: Complex64 = (0..comps).map(|j| v[j] * k[j] as f64).sum();
            for j in 0..comps {
                v[j] -= kv * (k[j] as f64 / kk);
            }
        }
        modes.insert(neg(k), v.iter().map(|c| c.conj()).collect());
        modes.insert(k, v);
    }
    modes
}

pub fn to_field(grid: TorusGrid, comps: usize, modes: &Modes) -> SpectralField {
    let mut f = SpectralField::zeros(grid, comps);
    for (k, v) in modes {
        for (c, value) in v.iter().enumerate() {
            f.set_mode(c, &k[..grid.dim()], *value).unwrap();
        }
    }
    f
}

/// `Σ_{p+q=k} Σ_j a_j(p) (i q_j) f_c(q)` for every `k` in the band.
pub fn convolve(velocity: &Modes, f: &Modes, dim: usize) -> Modes {
    let comps = f.values().next().unwrap().len();
    let mut out = Modes::new();
    for k in band(dim) {
        let mut acc = vec![Complex64::default(); comps];
        for (q, fq) in f {
            let p = [k[0] - q[0], k[1] - q[1], k[2] - q[2]];
            let Some(up) = velocity.get(&p) else { continue };
            let adv: Complex64 = (0..dim).map(|j| up[j] * Complex64::new(0.0, q[j] as f64)).sum();
            for c in 0..comps {
                acc[c] += adv * fq[c];
            }
        }
        out.insert(k, acc);
    }
    out
}

/// Largest deviation from `expected` relative to its largest coefficient,
/// or `None` if anything outside the band is nonzero.
pub fn relative_error(grid: TorusGrid, got: &SpectralField, expected: &Modes) -> Option<f64> {
    let scale = expected.values().flatten().map(|c| c.norm()).fold(0.0, f64::max);
    let mut worst: f64 = 0.0;
    for (k, v) in expected {
        for (c, value) in v.iter().enumerate() {
            worst = worst.max((got.coefficient(c, &k[..grid.dim()]) - value).norm());
        }
    }
    for c in 0..got.components() {
        for (flat, value) in got.component(c).iter().enumerate() {
            if grid.max_axis_wavenumber(flat) > BAND && *value != Complex64::default() {
                return None;
            }
        }
    }
    Some(worst / scale)
}

/// Expected SQG right-hand side `-b (u·∇θ)` with `u = ∇^⊥(-Δ)^{-1/2}θ`.
pub fn sqg_expected(theta: &Modes, b: f64) -> Modes {
    let velocity: Modes = theta
        .iter()
        .map(|(k, v)| {
            let norm = dot(*k, *k).sqrt();
            let t = v[0];
            (*k, vec![Complex64::new(0.0, -k[1] as f64) * t / norm, Complex64::new(0.0, k[0] as f64) * t / norm])
        })
        .collect();
    let mut expected = convolve(&velocity, theta, 2);
    for v in expected.values_mut() {
        v[0] *= -b;
    }
    expected.insert([0, 0, 0], vec![Complex64::default()]);
    expected
}

/// Expected NS right-hand side `-b P(u·∇u)`.
pub fn ns_expected(u: &Modes, b: f64) -> Modes {
    let mut expected = convolve(u, u, 3);
    for (k, v) in expected.iter_mut() {
        let kk = dot(*k, *k);
        if kk == 0.0 {
            v.iter_mut().for_each(|c| *c = Complex64::default());
            continue;
        }
        let kv: Complex64 = (0..3).map(|j| v[j] * k[j] as f64).sum();
        for j in 0..3 {
            v[j] = -b * (v[j] - kv * (k[j] as f64 / kk));
        }
    }
    expected
}
