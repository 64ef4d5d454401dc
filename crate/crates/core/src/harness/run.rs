//! Single runs: execution, summaries and trace files.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::checkpoint::persist_checkpoint;
use super::config::{field_digest, RunConfig};
use crate::dynamics::{make_initial_data, run_observed, Health, RunOutput, SimulationState};
use crate::equation::EquationKind;
use crate::error::Result;
use crate::norms::{bootstrap_monitor, energy_balance_report, xt_functional, NormTrace};
use crate::spectral::SpectralField;

pub const TRACE_FILE: &str = "trace.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const CONFIG_FILE: &str = "config.json";
pub const CHECKPOINT_FILE: &str = "final.ckpt";

/// Outcome of one launched run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    /// Oscillation multiplier `N`.
    pub n: f64,
    pub equation: EquationKind,
    pub config_digest: String,
    pub initial_data_digest: String,
    pub health: Health,
    pub t_final: f64,
    pub steps: u64,
    pub sup_h2: f64,
    /// `X_T` for NS, `X̃_T` for SQG.
    pub xt: f64,
    /// `None` when the energy law is undefined (zero data or one sample).
    pub energy_residual: Option<f64>,
    /// Bootstrap verdict with constant 1; `None` for zero initial data.
    pub bootstrap_ok: Option<bool>,
    pub wall_seconds: f64,
}

impl RunSummary {
    pub fn build(cfg: &RunConfig, initial: &SpectralField, out: &RunOutput, wall_seconds: f64) -> Result<Self> {
        let trace = &out.trace;
        let h2_initial = trace.samples()[0].h2_full();
        let bootstrap_ok = if h2_initial > 0.0 {
            Some(bootstrap_monitor(trace, 1.0, h2_initial)?.holds)
        } else {
            None
        };
        Ok(Self {
            n: cfg.oscillation.n,
            equation: cfg.equation,
            config_digest: cfg.digest(),
            initial_data_digest: field_digest(initial),
            health: out.state.health,
            t_final: out.state.time,
            steps: out.state.step_count,
            sup_h2: trace.sup_h2(),
            xt: xt_functional(trace)?,
            energy_residual: energy_balance_report(trace).ok(),
            bootstrap_ok,
            wall_seconds,
        })
    }
}

/// Trace CSV with a header row; the third column is `h_alpha2` for SQG and
/// `h1` for NS.
pub fn write_trace_csv(trace: &NormTrace, writer: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let dissipation = match trace.kind() {
        EquationKind::Sqg => "h_alpha2",
        EquationKind::Ns => "h1",
    };
    w.write_record([
        "time",
        "l2",
        dissipation,
        "h1",
        "h2",
        "h_top",
        "grad_linf",
        "xt_running",
        "energy_residual_running",
    ])
    .map_err(csv_error)?;
    let xt = trace.xt_running();
    let residual = trace.energy_residual_running();
    for (i, (t, s)) in trace.times().iter().zip(trace.samples()).enumerate() {
        let row = [*t, s.l2, s.dissipation, s.h1, s.h2, s.h_top, s.grad_linf, xt[i], residual[i]];
        w.write_record(row.iter().map(|v| v.to_string())).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub(crate) fn csv_error(e: csv::Error) -> crate::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => crate::Error::Io(io),
        other => crate::Error::Config(format!("csv: {other:?}")),
    }
}

/// Result of [`execute`].
#[derive(Debug, Clone)]
pub struct Execution {
    pub output: RunOutput,
    pub summary: RunSummary,
    pub initial: SpectralField,
}

/// Runs `cfg`, optionally from given initial data or from a resumed state
/// (in which case `initial` is the resumed field).
pub fn execute(cfg: &RunConfig, start: Option<SimulationState>) -> Result<Execution> {
    let sim = cfg.simulation()?;
    let state = match start {
        Some(state) => state,
        None => SimulationState::initial(make_initial_data(&sim.initial_data, sim.equation, sim.grid)?),
    };
    let initial = state.field.clone();
    let clock = Instant::now();
    let output = run_observed(&sim, Some((state, None)), |_| {})?;
    let wall = clock.elapsed().as_secs_f64();
    let summary = RunSummary::build(cfg, &initial, &output, wall)?;
    Ok(Execution {
        output,
        summary,
        initial,
    })
}

/// Writes the trace, summary, config and (for healthy runs) the final
/// checkpoint into `dir`.
pub fn write_run(dir: &Path, cfg: &RunConfig, run: &Execution) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    write_trace_csv(&run.output.trace, std::fs::File::create(dir.join(TRACE_FILE))?)?;
    std::fs::write(dir.join(SUMMARY_FILE), serde_json::to_string_pretty(&run.summary)?)?;
    std::fs::write(dir.join(CONFIG_FILE), cfg.to_json())?;
    if run.output.state.health == Health::Ok {
        persist_checkpoint(&dir.join(CHECKPOINT_FILE), &cfg.simulation()?, &run.output.state)?;
    }
    Ok(())
}
