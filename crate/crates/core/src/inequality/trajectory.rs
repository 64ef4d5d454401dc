use super::id::InequalityId;
use super::pointwise::{check_alpha, check_shape};
use crate::dynamics::rhs::advect;
use crate::error::{config, domain, Result};
use crate::norms::quadrature::trapezoid;
use crate::norms::{grad_sup_norm, sobolev_norm};
use crate::spectral::{SpectralField, TorusGrid};

/// `‖u·∇u‖_{Ḣ¹}`, with the product formed on a grid twice as fine so that
/// no product mode aliases.
pub fn advection_h1(u: &SpectralField) -> Result<f64> {
    let grid = u.grid();
    let fine = TorusGrid::new(grid.dim(), 2 * grid.n())?;
    let padded = u.padded(fine)?;
    let velocity = padded.component_samples();
    let product = SpectralField::from_components(fine, advect(&velocity, &padded)?)?;
    sobolev_norm(&product, 1.0)
}

/// Per-snapshot quantities entering the time-integrated estimates.
struct Row {
    l2: f64,
    h1: f64,
    h2: f64,
    /// `Ḣ³` (NS) or `Ḣ^{2+α/2}` (SQG).
    top: f64,
    grad: f64,
    /// `‖u·∇u‖_{Ḣ¹}` (NS_5_2) or `Ḣ^{1+α}` (SQG_est2); unused otherwise.
    extra: f64,
    /// `Ḣ^{α/2}`, SQG only.
    half_alpha: f64,
}

fn measure(f: &SpectralField, id: InequalityId, alpha: f64) -> Result<Row> {
    let sqg = id.shape().components() == 1;
    let top = if sqg { 2.0 + alpha / 2.0 } else { 3.0 };
    let extra = match id {
        InequalityId::Ns5over2 => advection_h1(f)?,
        InequalityId::SqgEst2 => sobolev_norm(f, 1.0 + alpha)?,
        _ => 0.0,
    };
    Ok(Row {
        l2: sobolev_norm(f, 0.0)?,
        h1: sobolev_norm(f, 1.0)?,
        h2: sobolev_norm(f, 2.0)?,
        top: sobolev_norm(f, top)?,
        grad: grad_sup_norm(f),
        extra,
        half_alpha: if sqg { sobolev_norm(f, alpha / 2.0)? } else { 0.0 },
    })
}

/// Left- and right-hand sides of a time-integrated estimate over stored
/// snapshots `(t, field)`. Time integrals use the trapezoid rule over the
/// snapshot times; `sup` is the maximum over snapshots.
pub fn trajectory_sides(
    snapshots: &[(f64, SpectralField)],
    id: InequalityId,
    alpha: f64,
) -> Result<(f64, f64)> {
    if !id.is_trajectory() {
        return Err(config(format!("{id} is a single-field inequality; use pointwise_ratio")));
    }
    if snapshots.len() < 2 {
        return Err(domain("a trajectory needs at least two snapshots"));
    }
    if snapshots.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(domain("snapshot times must increase strictly"));
    }
    let sqg = id.shape().components() == 1;
    if sqg {
        check_alpha(alpha)?;
    }
    let times: Vec<f64> = snapshots.iter().map(|(t, _)| *t).collect();
    let rows = snapshots
        .iter()
        .map(|(_, f)| {
            check_shape(f, id)?;
            measure(f, id, alpha)
        })
        .collect::<Result<Vec<_>>>()?;

    let integral = |g: &dyn Fn(&Row) -> f64| {
        let values: Vec<f64> = rows.iter().map(g).collect();
        trapezoid(&times, &values)
    };
    let sup = |g: &dyn Fn(&Row) -> f64| rows.iter().map(g).fold(0.0, f64::max);
    let l2t = |g: &dyn Fn(&Row) -> f64| integral(&|r| g(r).powi(2)).sqrt();

    let sup_l2 = sup(&|r| r.l2);
    let sides = match id {
        InequalityId::Ns11over4 | InequalityId::Ns9over4 | InequalityId::Ns5over2 => {
            let sup_h2 = sup(&|r| r.h2);
            let top = l2t(&|r| r.top);
            match id {
                InequalityId::Ns11over4 => (
                    integral(&|r| r.grad * r.h2 * r.top),
                    sup_l2.powf(0.25) * (sup_h2.powf(2.75) + top.powf(2.75)),
                ),
                InequalityId::Ns9over4 => (
                    integral(&|r| r.grad * r.h1 * r.top),
                    sup_l2.powf(0.75) * (sup_h2.powf(2.25) + top.powf(2.25)),
                ),
                _ => (
                    integral(&|r| r.grad * r.h1 * r.extra),
                    sup_l2.powf(1.5) * (sup_h2.powf(2.5) + top.powf(2.5)),
                ),
            }
        }
        _ => {
            let sup_ha = sup(&|r| r.half_alpha);
            let top = l2t(&|r| r.top);
            let h2 = l2t(&|r| r.h2);
            match id {
                InequalityId::SqgEst1 => {
                    let p = (12.0 - alpha) / 4.0;
                    (
                        integral(&|r| r.top * r.grad * r.h2),
                        sup_ha.powf(alpha / 4.0) * (top.powf(p) + h2.powf(p)),
                    )
                }
                InequalityId::SqgEst2 => (
                    integral(&|r| r.extra * r.grad * r.h1),
                    sup_ha.sqrt() * sup_l2.sqrt() * (top.powi(2) + h2.powi(2)),
                ),
                InequalityId::SqgEst3 | InequalityId::SqgEst4 => {
                    let p = (6.0 - alpha) / 2.0;
                    let rhs = sup_l2 * sup_ha.powf(alpha / 2.0) * (top.powf(p) + h2.powf(p));
                    let lhs = if id == InequalityId::SqgEst3 {
                        integral(&|r| (r.grad * r.h1).powi(2))
                    } else {
                        integral(&|r| r.grad.powi(2) * r.l2 * r.h2)
                    };
                    (lhs, rhs)
                }
                _ => unreachable!("non-trajectory ids are rejected above"),
            }
        }
    };
    Ok(sides)
}

/// `LHS / RHS` of a time-integrated estimate; `None` when the right-hand
/// side vanishes.
pub fn trajectory_ratio(
    snapshots: &[(f64, SpectralField)],
    id: InequalityId,
    alpha: f64,
) -> Result<Option<f64>> {
    let (lhs, rhs) = trajectory_sides(snapshots, id, alpha)?;
    Ok(if rhs == 0.0 { None } else { Some(lhs / rhs) })
}
