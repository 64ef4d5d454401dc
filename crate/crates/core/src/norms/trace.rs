use serde::{Deserialize, Serialize};

use super::quadrature::{cumulative_simpson, cumulative_trapezoid, simpson, trapezoid};
use super::{grad_sup_norm, sobolev_norm};
use crate::equation::EquationKind;
use crate::error::{domain, Result};
use crate::spectral::SpectralField;

/// Norms of one field snapshot.
///
/// `dissipation` is the norm whose square drives the energy law:
/// `Ḣ¹` for NS, `Ḣ^{α/2}` for SQG. `h_top` is `Ḣ³` for NS and
/// `Ḣ^{2+α/2}` for SQG.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormSample {
    pub l2: f64,
    pub dissipation: f64,
    pub h1: f64,
    pub h2: f64,
    pub h_top: f64,
    pub grad_linf: f64,
}

impl NormSample {
    pub fn measure(field: &SpectralField, kind: EquationKind, alpha: f64) -> Result<Self> {
        let (dissipation_index, top_index) = match kind {
            EquationKind::Ns => (1.0, 3.0),
            EquationKind::Sqg => (alpha / 2.0, 2.0 + alpha / 2.0),
        };
        Ok(Self {
            l2: sobolev_norm(field, 0.0)?,
            dissipation: sobolev_norm(field, dissipation_index)?,
            h1: sobolev_norm(field, 1.0)?,
            h2: sobolev_norm(field, 2.0)?,
            h_top: sobolev_norm(field, top_index)?,
            grad_linf: grad_sup_norm(field),
        })
    }

    fn values(&self) -> [f64; 6] {
        [self.l2, self.dissipation, self.h1, self.h2, self.h_top, self.grad_linf]
    }

    /// `(‖·‖²_{L²} + ‖·‖²_{Ḣ²})^{1/2}`.
    pub fn h2_full(&self) -> f64 {
        self.l2.hypot(self.h2)
    }
}

/// Time series of norms along one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormTrace {
    kind: EquationKind,
    alpha: f64,
    start: f64,
    times: Vec<f64>,
    samples: Vec<NormSample>,
    running_sup_h2_sq: f64,
    /// Trapezoid running integral of the squared dissipation norm.
    running_dissipation_integral: f64,
}

impl NormTrace {
    /// Empty trace. `alpha` is ignored for NS.
    pub fn new(kind: EquationKind, alpha: f64) -> Self {
        Self::starting_at(kind, alpha, 0.0)
    }

    /// Empty trace for a run resumed at `start`; the first sample must be
    /// taken at that time.
    pub fn starting_at(kind: EquationKind, alpha: f64, start: f64) -> Self {
        Self {
            kind,
            alpha: if kind == EquationKind::Sqg { alpha } else { 0.0 },
            start,
            times: Vec::new(),
            samples: Vec::new(),
            running_sup_h2_sq: 0.0,
            running_dissipation_integral: 0.0,
        }
    }

    /// Appends a sample. The first time must be the start time (0 unless
    /// resumed) and times must increase.
    pub fn push(&mut self, time: f64, sample: NormSample) -> Result<()> {
        match self.times.last() {
            None if time != self.start => {
                return Err(domain(format!("trace must start at t = {}, got {time}", self.start)));
            }
            Some(&last) if !(time > last) => {
                return Err(domain(format!(
                    "trace times must increase strictly ({time} after {last})"
                )));
            }
            _ => {}
        }
        if sample.values().iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(domain(format!("norm sample at t = {time} is not finite and non-negative")));
        }
        if let (Some(&t0), Some(prev)) = (self.times.last(), self.samples.last()) {
            self.running_dissipation_integral += 0.5
                * (time - t0)
                * (prev.dissipation.powi(2) + sample.dissipation.powi(2));
        }
        self.running_sup_h2_sq = self.running_sup_h2_sq.max(sample.h2 * sample.h2);
        self.times.push(time);
        self.samples.push(sample);
        Ok(())
    }

    /// Measures `field` and appends it.
    pub fn record(&mut self, time: f64, field: &SpectralField) -> Result<NormSample> {
        let sample = NormSample::measure(field, self.kind, self.alpha)?;
        self.push(time, sample)?;
        Ok(sample)
    }

    pub fn kind(&self) -> EquationKind {
        self.kind
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn samples(&self) -> &[NormSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn running_sup_h2_sq(&self) -> f64 {
        self.running_sup_h2_sq
    }

    pub fn running_dissipation_integral(&self) -> f64 {
        self.running_dissipation_integral
    }

    pub fn sup_h2(&self) -> f64 {
        self.running_sup_h2_sq.sqrt()
    }

    /// Prefix of the first `len` samples.
    pub fn truncated(&self, len: usize) -> Self {
        let mut out = Self::starting_at(self.kind, self.alpha, self.start);
        for (t, s) in self.times.iter().zip(&self.samples).take(len) {
            out.push(*t, *s).expect("prefix of a valid trace is valid");
        }
        out
    }

    fn column(&self, f: impl Fn(&NormSample) -> f64) -> Vec<f64> {
        self.samples.iter().map(f).collect()
    }

    /// `X_t` evaluated at every sample time (trapezoid in time).
    pub fn xt_running(&self) -> Vec<f64> {
        let top = cumulative_trapezoid(&self.times, &self.column(|s| s.h_top * s.h_top));
        let mut sup: f64 = 0.0;
        self.samples
            .iter()
            .zip(top)
            .map(|(s, integral)| {
                sup = sup.max(s.h2 * s.h2);
                sup + integral
            })
            .collect()
    }

    /// Energy-law residual of every prefix (zero for the first sample).
    pub fn energy_residual_running(&self) -> Vec<f64> {
        let Some(first) = self.samples.first() else {
            return Vec::new();
        };
        let e0 = first.l2 * first.l2;
        let dissipated = cumulative_simpson(&self.times, &self.column(|s| s.dissipation.powi(2)));
        self.samples
            .iter()
            .zip(dissipated)
            .map(|(s, d)| {
                if e0 == 0.0 {
                    0.0
                } else {
                    (s.l2 * s.l2 - e0 + 2.0 * d).abs() / e0
                }
            })
            .collect()
    }
}

/// `sup_t ‖·‖²_{Ḣ²} + ∫ ‖·‖²_top dt` over the sampled times, trapezoid in time.
pub fn xt_functional(trace: &NormTrace) -> Result<f64> {
    if trace.is_empty() {
        return Err(domain("X_T of an empty trace"));
    }
    let sup = trace
        .samples
        .iter()
        .map(|s| s.h2 * s.h2)
        .fold(0.0, f64::max);
    Ok(sup + trapezoid(&trace.times, &trace.column(|s| s.h_top * s.h_top)))
}

/// Relative residual `|E(T) - E(0) + 2∫D dt| / E(0)` of the energy law.
///
/// The dissipation integral uses composite Simpson on the sample times,
/// so the residual reflects the integrator rather than the diagnostic
/// cadence.
pub fn energy_balance_report(trace: &NormTrace) -> Result<f64> {
    if trace.len() < 2 {
        return Err(domain("energy balance needs at least two samples"));
    }
    let e0 = trace.samples[0].l2.powi(2);
    if e0 == 0.0 {
        return Err(domain("energy balance is undefined for zero initial energy"));
    }
    let et = trace.samples[trace.len() - 1].l2.powi(2);
    let dissipated = simpson(&trace.times, &trace.column(|s| s.dissipation.powi(2)));
    Ok((et - e0 + 2.0 * dissipated).abs() / e0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapVerdict {
    pub holds: bool,
    pub first_violation: Option<f64>,
    pub bound: f64,
}

/// Checks `X_t ≤ 2 C ‖u₀‖²_{H²}` at every sample time.
pub fn bootstrap_monitor(trace: &NormTrace, c_bootstrap: f64, h2_initial: f64) -> Result<BootstrapVerdict> {
    if !(h2_initial > 0.0) {
        return Err(domain(format!("initial H² norm must be positive, got {h2_initial}")));
    }
    if !(c_bootstrap > 0.0) {
        return Err(domain(format!("bootstrap constant must be positive, got {c_bootstrap}")));
    }
    let bound = 2.0 * c_bootstrap * h2_initial * h2_initial;
    let first_violation = trace
        .xt_running()
        .iter()
        .zip(&trace.times)
        .find(|(x, _)| **x > bound)
        .map(|(_, t)| *t);
    Ok(BootstrapVerdict {
        holds: first_violation.is_none(),
        first_violation,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(h2: f64, h_top: f64) -> NormSample {
        NormSample {
            l2: 1.0,
            dissipation: 0.0,
            h1: 0.0,
            h2,
            h_top,
            grad_linf: 0.0,
        }
    }

    #[test]
    fn trace_rejects_bad_times() {
        let mut t = NormTrace::new(EquationKind::Ns, 0.0);
        assert!(t.push(0.5, sample(0.0, 0.0)).is_err());
        t.push(0.0, sample(0.0, 0.0)).unwrap();
        assert!(t.push(0.0, sample(0.0, 0.0)).is_err());
        assert!(t.push(1.0, sample(f64::NAN, 0.0)).is_err());
        assert!(t.push(1.0, sample(-1.0, 0.0)).is_err());
    }

    #[test]
    fn xt_examples() {
        let mut t = NormTrace::new(EquationKind::Ns, 0.0);
        assert!(xt_functional(&t).is_err());
        t.push(0.0, sample(3.0, 0.0)).unwrap();
        assert_eq!(xt_functional(&t).unwrap(), 9.0);

        let mut t = NormTrace::new(EquationKind::Ns, 0.0);
        t.push(0.0, sample(0.0, 2.0)).unwrap();
        t.push(1.0, sample(0.0, 0.0)).unwrap();
        assert_eq!(xt_functional(&t).unwrap(), 2.0);

        let mut z = NormTrace::new(EquationKind::Sqg, 0.5);
        z.push(0.0, sample(0.0, 0.0)).unwrap();
        z.push(0.3, sample(0.0, 0.0)).unwrap();
        assert_eq!(xt_functional(&z).unwrap(), 0.0);
    }

    #[test]
    fn energy_constant_trace_has_zero_residual() {
        let mut t = NormTrace::new(EquationKind::Sqg, 0.5);
        for i in 0..5 {
            t.push(i as f64 * 0.25, sample(1.0, 1.0)).unwrap();
        }
        assert_eq!(energy_balance_report(&t).unwrap(), 0.0);
        assert!(energy_balance_report(&t.truncated(1)).is_err());
    }

    #[test]
    fn energy_zero_initial_is_domain_error() {
        let mut t = NormTrace::new(EquationKind::Ns, 0.0);
        let mut s = sample(0.0, 0.0);
        s.l2 = 0.0;
        t.push(0.0, s).unwrap();
        t.push(1.0, s).unwrap();
        assert!(matches!(energy_balance_report(&t), Err(crate::Error::Domain(_))));
    }

    #[test]
    fn bootstrap_examples() {
        let mut z = NormTrace::new(EquationKind::Ns, 0.0);
        z.push(0.0, sample(0.0, 0.0)).unwrap();
        z.push(1.0, sample(0.0, 0.0)).unwrap();
        let v = bootstrap_monitor(&z, 1.0, 1.0).unwrap();
        assert!(v.holds && v.first_violation.is_none());

        let mut j = NormTrace::new(EquationKind::Ns, 0.0);
        j.push(0.0, sample(1.0, 0.0)).unwrap();
        j.push(0.25, sample(1.0, 0.0)).unwrap();
        j.push(0.5, sample(5.0, 0.0)).unwrap();
        j.push(0.75, sample(1.0, 0.0)).unwrap();
        let v = bootstrap_monitor(&j, 1.0, 1.0).unwrap();
        assert!(!v.holds);
        assert_eq!(v.first_violation, Some(0.5));
        assert!(bootstrap_monitor(&j, 1.0, 0.0).is_err());
    }

    #[test]
    fn running_sup_is_monotone() {
        let mut t = NormTrace::new(EquationKind::Ns, 0.0);
        let mut last = 0.0;
        for (i, h) in [1.0, 3.0, 2.0, 0.5, 4.0].iter().enumerate() {
            t.push(i as f64, sample(*h, 0.0)).unwrap();
            assert!(t.running_sup_h2_sq() >= last);
            last = t.running_sup_h2_sq();
        }
        assert_eq!(last, 16.0);
    }
}
