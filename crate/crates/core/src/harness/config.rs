//! The JSON run configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dynamics::{
    Generator, InitialData, SimulationConfig, DEFAULT_CFL, DEFAULT_DIAGNOSTIC_INTERVAL,
    DEFAULT_DT_MAX, DEFAULT_OSC_FRACTION, DEFAULT_TAIL_THRESHOLD,
};
use crate::equation::EquationKind;
use crate::error::{config, Result};
use crate::oscillation::{OscillationProfile, ProfileKind, Table};
use crate::spectral::TorusGrid;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillationSection {
    pub kind: ProfileKind,
    #[serde(rename = "N")]
    pub n: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    pub t_end: f64,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default = "default_osc_fraction")]
    pub osc_fraction: f64,
    #[serde(default = "default_dt_max")]
    pub dt_max: f64,
    #[serde(default = "default_diagnostic_interval")]
    pub diagnostic_interval: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialDataSection {
    pub generator: Generator,
    #[serde(default)]
    pub target_h2: Option<f64>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default)]
    pub strict: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: default_dir(),
            strict: false,
        }
    }
}

fn default_cfl() -> f64 {
    DEFAULT_CFL
}
fn default_osc_fraction() -> f64 {
    DEFAULT_OSC_FRACTION
}
fn default_dt_max() -> f64 {
    DEFAULT_DT_MAX
}
fn default_diagnostic_interval() -> f64 {
    DEFAULT_DIAGNOSTIC_INTERVAL
}
fn default_tail_threshold() -> f64 {
    DEFAULT_TAIL_THRESHOLD
}
fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

/// On-disk run configuration. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub equation: EquationKind,
    /// Required for SQG; ignored for NS.
    #[serde(default)]
    pub alpha: Option<f64>,
    pub grid_n: usize,
    /// Defaults to 2 for SQG and 3 for NS.
    #[serde(default)]
    pub dim: Option<usize>,
    pub oscillation: OscillationSection,
    pub time: TimeSection,
    pub initial_data: InitialDataSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default = "default_tail_threshold")]
    pub tail_threshold: f64,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| config(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn profile(&self) -> Result<OscillationProfile> {
        let o = &self.oscillation;
        match (o.kind, &o.times, &o.values) {
            (ProfileKind::Tabulated, Some(times), Some(values)) => {
                OscillationProfile::tabulated(Table::new(times.clone(), values.clone())?, o.n)
            }
            (ProfileKind::Tabulated, _, _) => Err(config("oscillation.times and oscillation.values are required for a tabulated profile")),
            (_, None, None) => OscillationProfile::new(o.kind, o.n),
            _ => Err(config("oscillation.times and oscillation.values only apply to tabulated profiles")),
        }
    }

    /// Validated solver configuration.
    pub fn simulation(&self) -> Result<SimulationConfig> {
        let dim = self.dim.unwrap_or(match self.equation {
            EquationKind::Sqg => 2,
            EquationKind::Ns => 3,
        });
        let alpha = match (self.equation, self.alpha) {
            (EquationKind::Sqg, None) => return Err(config("alpha is required for SQG")),
            (EquationKind::Sqg, Some(a)) => a,
            (EquationKind::Ns, a) => a.unwrap_or(0.0),
        };
        let grid = TorusGrid::new(dim, self.grid_n).map_err(|e| config(format!("grid_n/dim: {e}")))?;
        let data = &self.initial_data;
        let mut cfg = SimulationConfig::new(
            self.equation,
            alpha,
            grid,
            self.profile()?,
            self.time.t_end,
            InitialData::new(data.generator, data.target_h2, data.seed),
        );
        cfg.cfl = self.time.cfl;
        cfg.osc_fraction = self.time.osc_fraction;
        cfg.dt_max = self.time.dt_max;
        cfg.diagnostic_interval = self.time.diagnostic_interval;
        cfg.tail_threshold = self.tail_threshold;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Copy with a different oscillation multiplier.
    pub fn with_multiplier(&self, n: f64) -> Self {
        let mut out = self.clone();
        out.oscillation.n = n;
        out
    }

    /// SHA-256 of the canonical serialization, ignoring the output section.
    pub fn digest(&self) -> String {
        let mut canonical = self.clone();
        canonical.output = OutputSection::default();
        let bytes = serde_json::to_vec(&canonical).expect("config serializes");
        hex::encode(Sha256::digest(bytes))
    }
}

/// SHA-256 of the little-endian coefficient bytes.
pub fn field_digest(field: &crate::SpectralField) -> String {
    let mut hasher = Sha256::new();
    for c in field.coefficients() {
        hasher.update(c.re.to_le_bytes());
        hasher.update(c.im.to_le_bytes());
    }
    hex::encode(hasher.finalize())
}
