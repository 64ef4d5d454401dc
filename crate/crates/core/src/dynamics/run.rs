use super::config::SimulationConfig;
use super::initial::make_initial_data;
use super::stepper::{assess_health, choose_dt, Health, Integrator, SimulationState};
use crate::error::{config, Result};
use crate::norms::NormTrace;

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub trace: NormTrace,
    pub state: SimulationState,
}

/// First diagnostic time strictly after `t`.
fn next_sample_time(cfg: &SimulationConfig, t: f64) -> f64 {
    let interval = cfg.diagnostic_interval;
    let slack = 1e-12 * cfg.t_end.max(1.0);
    let mut k = (t / interval + 1e-9).floor() + 1.0;
    while k * interval <= t + slack {
        k += 1.0;
    }
    (k * interval).min(cfg.t_end)
}

/// Integrates from the generated initial data to `t_end`.
pub fn run_simulation(cfg: &SimulationConfig) -> Result<RunOutput> {
    run_observed(cfg, None, |_| {})
}

/// Like [`run_simulation`], calling `observer` on the state at every
/// diagnostic sample. `start` resumes from an earlier state (and, when
/// given, extends an earlier trace).
pub fn run_observed(
    cfg: &SimulationConfig,
    start: Option<(SimulationState, Option<NormTrace>)>,
    mut observer: impl FnMut(&SimulationState),
) -> Result<RunOutput> {
    cfg.validate()?;
    let mut integrator = Integrator::new(cfg)?;
    let alpha = cfg.effective_alpha();

    let (mut state, trace) = match start {
        Some((state, trace)) => {
            if state.field.grid() != &cfg.grid || state.field.components() != cfg.components() {
                return Err(config("resumed state does not match the configured grid"));
            }
            (state, trace)
        }
        None => {
            let field = make_initial_data(&cfg.initial_data, cfg.equation, cfg.grid)?;
            (SimulationState::initial(field), None)
        }
    };
    let mut trace = match trace {
        Some(trace) => trace,
        None => NormTrace::starting_at(cfg.equation, alpha, state.time),
    };
    if trace.times().last() != Some(&state.time) {
        trace.record(state.time, &state.field)?;
    }
    state.health = assess_health(&state.field, cfg.tail_threshold);
    observer(&state);

    let finish = cfg.t_end - 1e-12 * cfg.t_end.max(1.0);
    while state.health == Health::Ok && state.time < finish {
        let target = next_sample_time(cfg, state.time);
        let proposed = choose_dt(cfg, &state)?;
        let remaining = target - state.time;
        let lands = proposed >= remaining * (1.0 - 1e-9);
        let dt = if lands { remaining } else { proposed };
        let mut next = integrator.step(&state, dt)?;
        if lands {
            next.time = target;
        }
        state = next;
        match state.health {
            Health::Diverged => break,
            Health::UnderResolved => {
                trace.record(state.time, &state.field)?;
                observer(&state);
            }
            Health::Ok if lands => {
                trace.record(state.time, &state.field)?;
                observer(&state);
            }
            Health::Ok => {}
        }
    }
    log::debug!(
        "run finished at t = {} after {} steps ({})",
        state.time,
        state.step_count,
        state.health.as_str()
    );
    Ok(RunOutput { trace, state })
}
