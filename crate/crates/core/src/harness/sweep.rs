//! Sweeps over the oscillation multiplier `N` with shared initial data.

use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use super::run::{csv_error, execute, write_run, RunSummary};
use crate::dynamics::{make_initial_data, SimulationState};
use crate::error::{config, Result};

pub const SWEEP_SUMMARY_FILE: &str = "summary.csv";

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "OSCILLOFLOW_THREADS";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepPlan {
    pub base_config: RunConfig,
    pub n_values: Vec<f64>,
    #[serde(default = "one")]
    pub parallelism: usize,
    /// Defaults to the base config's output directory.
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

fn one() -> usize {
    1
}

impl SweepPlan {
    pub fn from_json(text: &str) -> Result<Self> {
        let plan: Self = serde_json::from_str(text).map_err(|e| config(format!("invalid sweep plan: {e}")))?;
        plan.validate()?;
        Ok(plan)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config(format!("cannot read sweep plan {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() {
            return Err(config("n_values must not be empty"));
        }
        if self.n_values.iter().any(|n| !(*n >= 0.0) || !n.is_finite()) {
            return Err(config("n_values must be finite and >= 0"));
        }
        if self.n_values.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(config("n_values must increase strictly"));
        }
        if self.parallelism == 0 {
            return Err(config("parallelism must be at least 1"));
        }
        for &n in &self.n_values {
            self.base_config.with_multiplier(n).simulation()?;
        }
        Ok(())
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output_dir.clone().unwrap_or_else(|| self.base_config.output.dir.clone())
    }

    /// Worker threads: `parallelism`, capped by `OSCILLOFLOW_THREADS`.
    pub fn threads(&self) -> usize {
        let cap = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()).filter(|&c| c > 0);
        cap.map_or(self.parallelism, |c| c.min(self.parallelism))
    }
}

/// Directory name of the run with multiplier `n`.
pub fn run_dir_name(n: f64) -> String {
    format!("N_{n}")
}

/// Runs every `N` from the same initial field. Summaries are sorted by `N`.
/// When `out` is given, each run is written to `out/N_<n>/` and the sweep
/// summary to `out/summary.csv`.
pub fn run_sweep(plan: &SweepPlan, out: Option<&Path>) -> Result<Vec<RunSummary>> {
    plan.validate()?;
    let base = plan.base_config.simulation()?;
    let initial = make_initial_data(&base.initial_data, base.equation, base.grid)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.threads())
        .build()
        .map_err(|e| config(format!("cannot start worker pool: {e}")))?;
    let mut summaries = pool.install(|| {
        plan.n_values
            .par_iter()
            .map(|&n| {
                let cfg = plan.base_config.with_multiplier(n);
                let run = execute(&cfg, Some(SimulationState::initial(initial.clone())))?;
                log::info!("N = {n}: {} after {} steps", run.summary.health.as_str(), run.summary.steps);
                if let Some(dir) = out {
                    write_run(&dir.join(run_dir_name(n)), &cfg, &run)?;
                }
                Ok(run.summary)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    summaries.sort_by(|a, b| a.n.total_cmp(&b.n));
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        write_summary_csv(&summaries, std::fs::File::create(dir.join(SWEEP_SUMMARY_FILE))?)?;
    }
    Ok(summaries)
}

/// Sweep summary CSV: `n, health, sup_h2, xt, energy_residual,
/// bootstrap_ok, wall_seconds`. Missing values are left empty.
pub fn write_summary_csv(summaries: &[RunSummary], writer: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["n", "health", "sup_h2", "xt", "energy_residual", "bootstrap_ok", "wall_seconds"])
        .map_err(csv_error)?;
    for s in summaries {
        w.write_record([
            s.n.to_string(),
            s.health.as_str().to_string(),
            s.sup_h2.to_string(),
            s.xt.to_string(),
            s.energy_residual.map(|v| v.to_string()).unwrap_or_default(),
            s.bootstrap_ok.map(|v| v.to_string()).unwrap_or_default(),
            s.wall_seconds.to_string(),
        ])
        .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}
