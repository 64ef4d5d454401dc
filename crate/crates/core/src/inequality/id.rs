use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{config, Error};

/// Interpolation and time-integrated estimates checked by the lab.
///
/// `GN_*` and `NS_*` act on 3D vector fields, `SQG_*` on 2D scalars.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InequalityId {
    #[serde(rename = "NS_11_4")]
    Ns11over4,
    #[serde(rename = "NS_9_4")]
    Ns9over4,
    #[serde(rename = "NS_5_2")]
    Ns5over2,
    #[serde(rename = "GN_u_inf")]
    GnUInf,
    #[serde(rename = "GN_grad_inf")]
    GnGradInf,
    #[serde(rename = "GN_H1_a")]
    GnH1a,
    #[serde(rename = "GN_H1_b")]
    GnH1b,
    #[serde(rename = "GN_H2")]
    GnH2,
    #[serde(rename = "SQG_est1")]
    SqgEst1,
    #[serde(rename = "SQG_est2")]
    SqgEst2,
    #[serde(rename = "SQG_est3")]
    SqgEst3,
    #[serde(rename = "SQG_est4")]
    SqgEst4,
    #[serde(rename = "SQG_grad_inf")]
    SqgGradInf,
    #[serde(rename = "SQG_H1")]
    SqgH1,
    #[serde(rename = "SQG_H1alpha")]
    SqgH1Alpha,
}

/// Shape of the fields an inequality applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldShape {
    Vector3d,
    Scalar2d,
}

impl FieldShape {
    pub fn dim(self) -> usize {
        match self {
            FieldShape::Vector3d => 3,
            FieldShape::Scalar2d => 2,
        }
    }

    pub fn components(self) -> usize {
        match self {
            FieldShape::Vector3d => 3,
            FieldShape::Scalar2d => 1,
        }
    }
}

impl InequalityId {
    pub const ALL: [InequalityId; 15] = [
        InequalityId::Ns11over4,
        InequalityId::Ns9over4,
        InequalityId::Ns5over2,
        InequalityId::GnUInf,
        InequalityId::GnGradInf,
        InequalityId::GnH1a,
        InequalityId::GnH1b,
        InequalityId::GnH2,
        InequalityId::SqgEst1,
        InequalityId::SqgEst2,
        InequalityId::SqgEst3,
        InequalityId::SqgEst4,
        InequalityId::SqgGradInf,
        InequalityId::SqgH1,
        InequalityId::SqgH1Alpha,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InequalityId::Ns11over4 => "NS_11_4",
            InequalityId::Ns9over4 => "NS_9_4",
            InequalityId::Ns5over2 => "NS_5_2",
            InequalityId::GnUInf => "GN_u_inf",
            InequalityId::GnGradInf => "GN_grad_inf",
            InequalityId::GnH1a => "GN_H1_a",
            InequalityId::GnH1b => "GN_H1_b",
            InequalityId::GnH2 => "GN_H2",
            InequalityId::SqgEst1 => "SQG_est1",
            InequalityId::SqgEst2 => "SQG_est2",
            InequalityId::SqgEst3 => "SQG_est3",
            InequalityId::SqgEst4 => "SQG_est4",
            InequalityId::SqgGradInf => "SQG_grad_inf",
            InequalityId::SqgH1 => "SQG_H1",
            InequalityId::SqgH1Alpha => "SQG_H1alpha",
        }
    }

    pub fn shape(self) -> FieldShape {
        match self {
            InequalityId::Ns11over4
            | InequalityId::Ns9over4
            | InequalityId::Ns5over2
            | InequalityId::GnUInf
            | InequalityId::GnGradInf
            | InequalityId::GnH1a
            | InequalityId::GnH1b
            | InequalityId::GnH2 => FieldShape::Vector3d,
            _ => FieldShape::Scalar2d,
        }
    }

    /// Pure Fourier-side interpolations, which hold with constant exactly 1.
    pub fn tight_constant_one(self) -> bool {
        matches!(
            self,
            InequalityId::GnH1a
                | InequalityId::GnH1b
                | InequalityId::GnH2
                | InequalityId::SqgH1
                | InequalityId::SqgH1Alpha
        )
    }

    /// Time-integrated estimates, evaluated on trajectories rather than on
    /// single fields.
    pub fn is_trajectory(self) -> bool {
        matches!(
            self,
            InequalityId::Ns11over4
                | InequalityId::Ns9over4
                | InequalityId::Ns5over2
                | InequalityId::SqgEst1
                | InequalityId::SqgEst2
                | InequalityId::SqgEst3
                | InequalityId::SqgEst4
        )
    }

    /// Estimates with a sup-norm on the left-hand side.
    pub fn is_sup_type(self) -> bool {
        matches!(
            self,
            InequalityId::GnUInf | InequalityId::GnGradInf | InequalityId::SqgGradInf
        )
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InequalityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        InequalityId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| config(format!("unknown inequality id `{s}`")))
    }
}
