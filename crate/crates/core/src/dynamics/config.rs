use serde::{Deserialize, Serialize};

use crate::equation::EquationKind;
use crate::error::{config, Result};
use crate::oscillation::OscillationProfile;
use crate::spectral::TorusGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    /// `sin x₁ sin x₂ + cos x₂` (SQG).
    Cmt,
    /// Seeded Hermitian coefficients on `|k| ≤ 8`; projected for NS.
    RandomBand,
    /// `(sin x cos y cos z, -cos x sin y cos z, 0)` (3D NS).
    #[serde(rename = "taylor_green_3d")]
    TaylorGreen3d,
    /// `cos x₁` for SQG, the shear `cos x₁ e₂` for NS.
    Cosine,
}

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Generator::Cmt => "cmt",
            Generator::RandomBand => "random_band",
            Generator::TaylorGreen3d => "taylor_green_3d",
            Generator::Cosine => "cosine",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialData {
    pub generator: Generator,
    /// `H²` norm after rescaling; `None` keeps the generator's own amplitude.
    pub target_h2: Option<f64>,
    pub seed: u64,
}

impl InitialData {
    pub fn new(generator: Generator, target_h2: Option<f64>, seed: u64) -> Self {
        Self {
            generator,
            target_h2,
            seed,
        }
    }
}

/// Everything needed to reproduce one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub equation: EquationKind,
    /// Dissipation exponent (SQG only).
    pub alpha: f64,
    pub grid: TorusGrid,
    pub profile: OscillationProfile,
    pub t_end: f64,
    pub cfl: f64,
    /// Largest fraction of one period of `b(N·)` covered by a single step.
    pub osc_fraction: f64,
    pub dt_max: f64,
    pub diagnostic_interval: f64,
    pub initial_data: InitialData,
    /// Spectral tail energy fraction that flags a run as under-resolved.
    pub tail_threshold: f64,
}

pub const DEFAULT_CFL: f64 = 0.5;
pub const DEFAULT_OSC_FRACTION: f64 = 1.0 / 16.0;
pub const DEFAULT_DT_MAX: f64 = 1e-2;
pub const DEFAULT_DIAGNOSTIC_INTERVAL: f64 = 1e-2;
pub const DEFAULT_TAIL_THRESHOLD: f64 = 1e-6;

impl SimulationConfig {
    /// Config with default time-step policy and diagnostics.
    pub fn new(
        equation: EquationKind,
        alpha: f64,
        grid: TorusGrid,
        profile: OscillationProfile,
        t_end: f64,
        initial_data: InitialData,
    ) -> Self {
        Self {
            equation,
            alpha,
            grid,
            profile,
            t_end,
            cfl: DEFAULT_CFL,
            osc_fraction: DEFAULT_OSC_FRACTION,
            dt_max: DEFAULT_DT_MAX,
            diagnostic_interval: DEFAULT_DIAGNOSTIC_INTERVAL,
            initial_data,
            tail_threshold: DEFAULT_TAIL_THRESHOLD,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.equation {
            EquationKind::Sqg => {
                if self.grid.dim() != 2 {
                    return Err(config("SQG runs on a 2D grid"));
                }
                if !(self.alpha > 0.0 && self.alpha < 1.0) {
                    return Err(config(format!("alpha must lie in (0, 1), got {}", self.alpha)));
                }
            }
            EquationKind::Ns => {}
        }
        let positive = [
            ("t_end", self.t_end),
            ("dt_max", self.dt_max),
            ("osc_fraction", self.osc_fraction),
            ("diagnostic_interval", self.diagnostic_interval),
        ];
        for (key, value) in positive {
            if !(value > 0.0) || !value.is_finite() {
                return Err(config(format!("{key} must be positive and finite, got {value}")));
            }
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(config(format!("cfl must lie in (0, 1], got {}", self.cfl)));
        }
        if !(self.tail_threshold > 0.0 && self.tail_threshold < 1.0) {
            return Err(config(format!(
                "tail_threshold must lie in (0, 1), got {}",
                self.tail_threshold
            )));
        }
        if let Some(h2) = self.initial_data.target_h2 {
            if !(h2 > 0.0) || !h2.is_finite() {
                return Err(config(format!("target_h2 must be positive, got {h2}")));
            }
        }
        super::initial::check_generator(self.initial_data.generator, self.equation, &self.grid)
    }

    /// Number of field components for this equation.
    pub fn components(&self) -> usize {
        match self.equation {
            EquationKind::Sqg => 1,
            EquationKind::Ns => self.grid.dim(),
        }
    }

    /// Dissipation exponent in use (`α` for SQG, 0 placeholder for NS).
    pub fn effective_alpha(&self) -> f64 {
        match self.equation {
            EquationKind::Sqg => self.alpha,
            EquationKind::Ns => 0.0,
        }
    }
}
