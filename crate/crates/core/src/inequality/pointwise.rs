use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::id::InequalityId;
use crate::dynamics::random_band_field;
use crate::error::{config, domain, Result};
use crate::norms::{grad_sup_norm, sobolev_norms, sup_norm};
use crate::spectral::{SpectralField, TorusGrid};

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("alpha must lie in (0, 1), got {alpha}")))
    }
}

pub(crate) fn check_shape(f: &SpectralField, id: InequalityId) -> Result<()> {
    let shape = id.shape();
    if f.grid().dim() != shape.dim() || f.components() != shape.components() {
        return Err(config(format!(
            "{id} needs a {}-component field on a {}D grid",
            shape.components(),
            shape.dim()
        )));
    }
    Ok(())
}

fn norms<const K: usize>(f: &SpectralField, indices: [f64; K]) -> Result<[f64; K]> {
    let values = sobolev_norms(f, &indices)?;
    Ok(std::array::from_fn(|i| values[i]))
}

/// Left- and right-hand sides of a single-field inequality. `alpha` is
/// only read by the SQG ids.
pub fn pointwise_sides(f: &SpectralField, id: InequalityId, alpha: f64) -> Result<(f64, f64)> {
    if id.is_trajectory() {
        return Err(config(format!("{id} is a time-integrated estimate; use trajectory_ratio")));
    }
    check_shape(f, id)?;
    if id.shape().components() == 1 {
        check_alpha(alpha)?;
    }
    f.require_mean_zero("interpolation check")?;
    let (a2, a1) = (2.0 + alpha / 2.0, alpha / 2.0);
    let sides = match id {
        InequalityId::GnUInf => {
            let [l2, h3] = norms(f, [0.0, 3.0])?;
            (sup_norm(f), l2.sqrt() * h3.sqrt())
        }
        InequalityId::GnGradInf => {
            let [l2, h3] = norms(f, [0.0, 3.0])?;
            (grad_sup_norm(f), l2.powf(1.0 / 6.0) * h3.powf(5.0 / 6.0))
        }
        InequalityId::GnH1a => {
            let [h1, l2, h3] = norms(f, [1.0, 0.0, 3.0])?;
            (h1, l2.powf(2.0 / 3.0) * h3.powf(1.0 / 3.0))
        }
        InequalityId::GnH1b => {
            let [h1, l2, h2] = norms(f, [1.0, 0.0, 2.0])?;
            (h1, l2.sqrt() * h2.sqrt())
        }
        InequalityId::GnH2 => {
            let [h2, l2, h3] = norms(f, [2.0, 0.0, 3.0])?;
            (h2, l2.powf(1.0 / 3.0) * h3.powf(2.0 / 3.0))
        }
        InequalityId::SqgGradInf => {
            let [top, low] = norms(f, [a2, a1])?;
            (grad_sup_norm(f), top.powf(1.0 - alpha / 4.0) * low.powf(alpha / 4.0))
        }
        InequalityId::SqgH1 => {
            let [h1, h2, l2] = norms(f, [1.0, 2.0, 0.0])?;
            (h1, h2.sqrt() * l2.sqrt())
        }
        InequalityId::SqgH1Alpha => {
            let [lhs, top, low] = norms(f, [1.0 + alpha, a2, a1])?;
            (lhs, top.powf(0.5 + alpha / 4.0) * low.powf(0.5 - alpha / 4.0))
        }
        _ => unreachable!("trajectory ids are rejected above"),
    };
    Ok(sides)
}

/// `LHS / RHS` for one field; `None` when the right-hand side vanishes.
pub fn pointwise_ratio(f: &SpectralField, id: InequalityId, alpha: f64) -> Result<Option<f64>> {
    let (lhs, rhs) = pointwise_sides(f, id, alpha)?;
    Ok(if rhs == 0.0 { None } else { Some(lhs / rhs) })
}

/// Slack allowed on constant-one inequalities for floating point.
pub const TIGHT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub inequality: InequalityId,
    pub alpha: Option<f64>,
    pub grid_n: usize,
    pub ensemble_size: usize,
    /// Samples with a vanishing right-hand side; excluded from `ratios`.
    pub degenerate: usize,
    pub max_ratio: Option<f64>,
    pub mean_ratio: Option<f64>,
    pub ratios: Vec<f64>,
    pub seeds: Vec<u64>,
    /// For constant-one ids, whether `max_ratio ≤ 1 + 1e-10`.
    pub tight_bound_holds: Option<bool>,
}

impl RatioReport {
    /// False only when a constant-one bound is violated.
    pub fn passed(&self) -> bool {
        self.tight_bound_holds != Some(false)
    }
}

/// Evaluates `id` on `count` seeded random band-limited mean-zero fields
/// (seeds `seed, seed + 1, …`).
pub fn ensemble_report(
    id: InequalityId,
    count: usize,
    seed: u64,
    grid: TorusGrid,
    alpha: f64,
) -> Result<RatioReport> {
    if count < 10 {
        return Err(config(format!("ensemble needs at least 10 fields, got {count}")));
    }
    let shape = id.shape();
    if grid.dim() != shape.dim() {
        return Err(config(format!("{id} needs a {}D grid", shape.dim())));
    }
    let seeds: Vec<u64> = (0..count as u64).map(|i| seed.wrapping_add(i)).collect();
    let outcomes = seeds
        .par_iter()
        .map(|&s| pointwise_ratio(&random_band_field(grid, shape.components(), s), id, alpha))
        .collect::<Result<Vec<_>>>()?;
    let ratios: Vec<f64> = outcomes.iter().flatten().copied().collect();
    let degenerate = count - ratios.len();
    let max_ratio = ratios.iter().copied().reduce(f64::max);
    let mean_ratio = (!ratios.is_empty()).then(|| ratios.iter().sum::<f64>() / ratios.len() as f64);
    let tight_bound_holds = id
        .tight_constant_one()
        .then(|| max_ratio.is_none_or(|m| m <= 1.0 + TIGHT_TOLERANCE));
    Ok(RatioReport {
        inequality: id,
        alpha: (shape.components() == 1).then_some(alpha),
        grid_n: grid.n(),
        ensemble_size: count,
        degenerate,
        max_ratio,
        mean_ratio,
        ratios,
        seeds,
        tight_bound_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(n: usize, f: impl Fn([f64; 3]) -> f64) -> SpectralField {
        let g = TorusGrid::new(2, n).unwrap();
        SpectralField::forward_transform(g, 1, &g.sample(f)).unwrap()
    }

    #[test]
    fn zero_field_is_degenerate() {
        let z = SpectralField::zeros(TorusGrid::new(2, 16).unwrap(), 1);
        assert_eq!(pointwise_ratio(&z, InequalityId::SqgH1, 0.5).unwrap(), None);
        let z3 = SpectralField::zeros(TorusGrid::new(3, 16).unwrap(), 3);
        assert_eq!(pointwise_ratio(&z3, InequalityId::GnUInf, 0.5).unwrap(), None);
    }

    #[test]
    fn single_mode_is_sharp_and_two_modes_are_not() {
        let one = scalar(32, |x| x[0].cos());
        let r = pointwise_ratio(&one, InequalityId::SqgH1, 0.5).unwrap().unwrap();
        assert!((r - 1.0).abs() < 1e-12, "{r}");
        let two = scalar(32, |x| x[0].cos() + (2.0 * x[1]).cos());
        let r = pointwise_ratio(&two, InequalityId::SqgH1, 0.5).unwrap().unwrap();
        // Ḣ¹² = c·5, Ḣ²² = c·17, L²² = c·2 with c = 2π².
        let expected = (5.0f64 / (17.0f64 * 2.0).sqrt()).sqrt();
        assert!((r - expected).abs() < 1e-12);
        assert!(r < 1.0);
    }

    #[test]
    fn shape_and_mean_are_checked() {
        let f = scalar(16, |x| x[0].cos());
        assert!(matches!(pointwise_ratio(&f, InequalityId::GnH2, 0.5), Err(crate::Error::Config(_))));
        assert!(pointwise_ratio(&f, InequalityId::SqgEst1, 0.5).is_err());
        assert!(matches!(pointwise_ratio(&f, InequalityId::SqgH1, 1.5), Err(crate::Error::Domain(_))));
        let with_mean = scalar(16, |x| 1.0 + x[0].cos());
        assert!(matches!(
            pointwise_ratio(&with_mean, InequalityId::SqgH1, 0.5),
            Err(crate::Error::Domain(_))
        ));
    }

    #[test]
    fn small_ensemble_is_rejected() {
        let g = TorusGrid::new(2, 16).unwrap();
        assert!(ensemble_report(InequalityId::SqgH1, 0, 1, g, 0.5).is_err());
        assert!(ensemble_report(InequalityId::SqgH1, 9, 1, g, 0.5).is_err());
        let r = ensemble_report(InequalityId::SqgH1, 10, 1, g, 0.5).unwrap();
        assert_eq!(r.ratios.len(), 10);
        assert_eq!(r.seeds, (1..11).collect::<Vec<_>>());
        assert_eq!(r.tight_bound_holds, Some(true));
    }
}
