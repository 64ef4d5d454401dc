//! Numerical checks of the interpolation and time-integrated estimates
//! used in the energy arguments, and of the mollifier scaling laws.

mod id;
mod mollifier_check;
mod pointwise;
mod trajectory;

pub use id::{FieldShape, InequalityId};
pub use mollifier_check::{mollifier_checks, MollifierReport};
pub use pointwise::{ensemble_report, pointwise_ratio, pointwise_sides, RatioReport, TIGHT_TOLERANCE};
pub use trajectory::{advection_h1, trajectory_ratio, trajectory_sides};
