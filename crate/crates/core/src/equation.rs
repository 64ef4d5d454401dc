use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Which of the two oscillated systems a field or trace belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EquationKind {
    /// Incompressible Navier-Stokes with unit viscosity.
    Ns,
    /// Dissipative surface quasi-geostrophic equation.
    Sqg,
}

impl fmt::Display for EquationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EquationKind::Ns => "ns",
            EquationKind::Sqg => "sqg",
        })
    }
}

impl FromStr for EquationKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ns" => Ok(EquationKind::Ns),
            "sqg" => Ok(EquationKind::Sqg),
            other => Err(crate::error::config(format!("unknown equation `{other}`"))),
        }
    }
}
