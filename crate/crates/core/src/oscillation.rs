//! The oscillating coefficient `b(Nt)` in front of the nonlinear term.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{config, domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    Sine,
    /// `+1` on `[0, π)`, `-1` on `[π, 2π)`, extended periodically.
    SquareWave,
    /// The classical equation. Its antiderivative grows without bound, so
    /// it does not have a finite oscillation bound on unbounded horizons.
    ConstantOne,
    Zero,
    /// Piecewise-linear interpolation of sampled values.
    Tabulated,
}

/// Samples of a tabulated base function `b(τ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl Table {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() < 2 || times.len() != values.len() {
            return Err(config("oscillation table needs at least two (time, value) pairs of equal length"));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(config("oscillation table times must increase strictly"));
        }
        if times.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(config("oscillation table entries must be finite"));
        }
        Ok(Self { times, values })
    }

    fn interpolate(&self, tau: f64) -> Result<f64> {
        let (first, last) = (self.times[0], self.times[self.times.len() - 1]);
        if tau < first || tau > last {
            return Err(domain(format!(
                "b evaluated at {tau}, outside the table range [{first}, {last}]"
            )));
        }
        let upper = self.times.partition_point(|&t| t < tau).max(1);
        let (t0, t1) = (self.times[upper - 1], self.times[upper]);
        let (v0, v1) = (self.values[upper - 1], self.values[upper]);
        Ok(v0 + (v1 - v0) * (tau - t0) / (t1 - t0))
    }
}

/// `b` together with its frequency multiplier `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillationProfile {
    kind: ProfileKind,
    n_multiplier: f64,
    table: Option<Table>,
}

impl OscillationProfile {
    pub fn new(kind: ProfileKind, n_multiplier: f64) -> Result<Self> {
        if kind == ProfileKind::Tabulated {
            return Err(config("tabulated profiles are built with OscillationProfile::tabulated"));
        }
        Self::check_multiplier(n_multiplier)?;
        Ok(Self {
            kind,
            n_multiplier,
            table: None,
        })
    }

    pub fn tabulated(table: Table, n_multiplier: f64) -> Result<Self> {
        Self::check_multiplier(n_multiplier)?;
        Ok(Self {
            kind: ProfileKind::Tabulated,
            n_multiplier,
            table: Some(table),
        })
    }

    pub fn sine(n_multiplier: f64) -> Self {
        Self::new(ProfileKind::Sine, n_multiplier).expect("valid multiplier")
    }

    pub fn zero() -> Self {
        Self::new(ProfileKind::Zero, 0.0).expect("valid multiplier")
    }

    fn check_multiplier(n: f64) -> Result<()> {
        if !(n >= 0.0) || !n.is_finite() {
            return Err(config(format!("oscillation multiplier N must be finite and >= 0, got {n}")));
        }
        Ok(())
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn n_multiplier(&self) -> f64 {
        self.n_multiplier
    }

    pub fn table(&self) -> Option<&Table> {
        self.table.as_ref()
    }

    /// Same base function with a different `N`.
    pub fn with_multiplier(&self, n_multiplier: f64) -> Result<Self> {
        Self::check_multiplier(n_multiplier)?;
        Ok(Self {
            n_multiplier,
            ..self.clone()
        })
    }

    /// The base function `b(τ)`.
    pub fn base(&self, tau: f64) -> Result<f64> {
        Ok(match self.kind {
            ProfileKind::Sine => tau.sin(),
            ProfileKind::SquareWave => {
                if tau.rem_euclid(2.0 * PI) < PI {
                    1.0
                } else {
                    -1.0
                }
            }
            ProfileKind::ConstantOne => 1.0,
            ProfileKind::Zero => 0.0,
            ProfileKind::Tabulated => self
                .table
                .as_ref()
                .expect("tabulated profile carries a table")
                .interpolate(tau)?,
        })
    }

    /// `b(N t)`.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(domain(format!("b(Nt) evaluated at negative time {t}")));
        }
        self.base(self.n_multiplier * t)
    }
}

/// Estimate of the admissibility constant
/// `M = sup|b| + sup_{t₁<t₂} |∫_{t₁}^{t₂} b|` on `[0, horizon]`.
///
/// The pairwise supremum equals the range (max minus min) of the sampled
/// antiderivative, which is accumulated by the trapezoid rule with
/// compensated summation.
pub fn oscillation_bound_estimate(
    profile: &OscillationProfile,
    horizon: f64,
    samples: usize,
) -> Result<f64> {
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(domain(format!("horizon must be positive, got {horizon}")));
    }
    if samples < 100 {
        return Err(domain(format!("need at least 100 samples, got {samples}")));
    }
    let step = horizon / (samples - 1) as f64;
    let values = (0..samples)
        .map(|i| profile.base(if i + 1 == samples { horizon } else { i as f64 * step }))
        .collect::<Result<Vec<f64>>>()?;
    let sup_b = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));

    // Neumaier summation of the running integral.
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    for w in values.windows(2) {
        let term = 0.5 * step * (w[0] + w[1]);
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        let current = sum + comp;
        lo = lo.min(current);
        hi = hi.max(current);
    }
    Ok(sup_b + (hi - lo))
}

/// Oscillation threshold for the Navier-Stokes result,
/// `500 M³ C⁸ (‖u₀‖_{H²} + 1)⁴`.
pub fn n_zero_ns(h2_norm: f64, m_bound: f64, c_const: f64) -> f64 {
    500.0 * m_bound.powi(3) * c_const.powi(8) * (h2_norm + 1.0).powi(4)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluate_examples() {
        let p = OscillationProfile::sine(10.0);
        assert_eq!(p.evaluate(PI / 20.0).unwrap(), (PI / 2.0).sin());
        assert_eq!(p.evaluate(PI / 20.0).unwrap(), 1.0);
        assert_eq!(OscillationProfile::zero().evaluate(3.7).unwrap(), 0.0);
        let one = OscillationProfile::new(ProfileKind::ConstantOne, 5.0).unwrap();
        assert_eq!(one.evaluate(123.0).unwrap(), 1.0);
        assert!(p.evaluate(-1.0).is_err());
    }

    #[test]
    fn tabulated_range_checked() {
        let table = Table::new(vec![0.0, 1.0, 2.0], vec![0.0, 2.0, -2.0]).unwrap();
        let p = OscillationProfile::tabulated(table, 2.0).unwrap();
        assert_eq!(p.evaluate(0.25).unwrap(), 1.0);
        assert_eq!(p.evaluate(0.75).unwrap(), 0.0);
        assert!(matches!(p.evaluate(1.5), Err(crate::Error::Domain(_))));
        assert!(Table::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn bound_estimates() {
        let sine = OscillationProfile::sine(1.0);
        let m = oscillation_bound_estimate(&sine, 20.0 * PI, 10_000).unwrap();
        assert!((m - 3.0).abs() < 1e-2, "{m}");

        let one = OscillationProfile::new(ProfileKind::ConstantOne, 1.0).unwrap();
        assert_eq!(oscillation_bound_estimate(&one, 1.0, 10_000).unwrap(), 2.0);
        assert_eq!(oscillation_bound_estimate(&one, 10.0, 10_000).unwrap(), 11.0);

        let sq = OscillationProfile::new(ProfileKind::SquareWave, 1.0).unwrap();
        let m = oscillation_bound_estimate(&sq, 20.0 * PI, 10_000).unwrap();
        assert!((m - (1.0 + PI)).abs() < 1e-2, "{m}");

        assert!(oscillation_bound_estimate(&sine, 1.0, 99).is_err());
        assert!(oscillation_bound_estimate(&sine, 0.0, 1000).is_err());
    }

    #[test]
    fn n_zero_examples() {
        assert_eq!(n_zero_ns(1.0, 3.0, 1.0), 216_000.0);
        assert_eq!(n_zero_ns(0.0, 1.0, 1.0), 500.0);
        // quartic / cubic / eighth-power shape
        assert_eq!(n_zero_ns(3.0, 1.0, 1.0) / n_zero_ns(1.0, 1.0, 1.0), 16.0);
        assert_eq!(n_zero_ns(0.0, 2.0, 1.0) / n_zero_ns(0.0, 1.0, 1.0), 8.0);
        assert_eq!(n_zero_ns(0.0, 1.0, 2.0) / n_zero_ns(0.0, 1.0, 1.0), 256.0);
    }
}
