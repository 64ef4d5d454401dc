use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::norms::sobolev_norm;
use crate::spectral::{MollifierKernel, SpectralField};

/// Scaling of the mollification error and of the smoothing gain over a
/// list of mollifier scales.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MollifierReport {
    pub s: f64,
    pub m1: u32,
    pub m2: u32,
    pub eps: Vec<f64>,
    /// `‖f − f_ε‖_{L²}` per scale.
    pub residuals: Vec<f64>,
    /// `‖f − f_ε‖_{L²} / (ε^s ‖f‖_{Ḣ^s})`; `None` when `‖f‖_{Ḣ^s} = 0`.
    pub approximation_ratios: Vec<Option<f64>>,
    /// Least-squares slope of `log residual` against `log ε`; `None` when
    /// some residual vanishes.
    pub fitted_slope: Option<f64>,
    /// `ε^{m2} ‖f_ε‖_{Ḣ^{m1+m2}} / ‖f‖_{Ḣ^{m1}}`; `None` when the
    /// denominator vanishes.
    pub smoothing_ratios: Vec<Option<f64>>,
    /// `sup_ξ |ξ|^{m2} ρ̂(ξ)`, which bounds every smoothing ratio.
    pub smoothing_bound: f64,
    pub smoothing_bounded: bool,
    /// Whether the smoothing ratios are non-increasing along `eps`.
    pub smoothing_monotone: bool,
}

fn least_squares_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Runs both mollifier checks on `f`. `eps` must hold at least three
/// strictly decreasing scales in `(0, 1)`. Returns `None` for `f = 0`.
pub fn mollifier_checks(f: &SpectralField, s: f64, m1: u32, m2: u32, eps: &[f64]) -> Result<Option<MollifierReport>> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(domain(format!("s must lie in (0, 1], got {s}")));
    }
    if m2 < 1 {
        return Err(domain("m2 must be at least 1"));
    }
    if eps.len() < 3 || eps.iter().any(|&e| !(e > 0.0 && e < 1.0)) || eps.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(domain("eps list needs at least three strictly decreasing values in (0, 1)"));
    }
    if f.max_abs() == 0.0 {
        return Ok(None);
    }

    let hs = sobolev_norm(f, s)?;
    let hm1 = sobolev_norm(f, m1 as f64)?;
    let bound = MollifierKernel::decay_constant(m2);
    let mut residuals = Vec::with_capacity(eps.len());
    let mut approximation_ratios = Vec::with_capacity(eps.len());
    let mut smoothing_ratios = Vec::with_capacity(eps.len());
    for &e in eps {
        // 1 − ρ̂(εk) via expm1 keeps precision for small ε|k|.
        let defect = f.map_multiplier(|k| {
            let k2 = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64;
            Complex64::new(-(-0.5 * e * e * k2).exp_m1(), 0.0)
        });
        let residual = sobolev_norm(&defect, 0.0)?;
        residuals.push(residual);
        approximation_ratios.push((hs > 0.0).then(|| residual / (e.powf(s) * hs)));
        let smoothed = sobolev_norm(&f.mollify(e)?, (m1 + m2) as f64)?;
        smoothing_ratios.push((hm1 > 0.0).then(|| e.powi(m2 as i32) * smoothed / hm1));
    }

    let fitted_slope = residuals.iter().all(|&r| r > 0.0).then(|| {
        let x: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
        let y: Vec<f64> = residuals.iter().map(|r| r.ln()).collect();
        least_squares_slope(&x, &y)
    });
    let known: Vec<f64> = smoothing_ratios.iter().flatten().copied().collect();
    let smoothing_bounded = known.iter().all(|&r| r <= bound * (1.0 + 1e-12));
    let smoothing_monotone = known.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
    Ok(Some(MollifierReport {
        s,
        m1,
        m2,
        eps: eps.to_vec(),
        residuals,
        approximation_ratios,
        fitted_slope,
        smoothing_ratios,
        smoothing_bound: bound,
        smoothing_bounded,
        smoothing_monotone,
    }))
}
