//! Time integration of the oscillated SQG and Navier-Stokes systems.

mod config;
mod initial;
pub(crate) mod rhs;
mod run;
mod stepper;

pub use config::{
    Generator, InitialData, SimulationConfig, DEFAULT_CFL, DEFAULT_DIAGNOSTIC_INTERVAL,
    DEFAULT_DT_MAX, DEFAULT_OSC_FRACTION, DEFAULT_TAIL_THRESHOLD,
};
pub use initial::{make_initial_data, random_band_field, RANDOM_BAND_RADIUS};
pub use rhs::{rhs_ns, rhs_sqg, DIVERGENCE_TOLERANCE};
pub use run::{run_observed, run_simulation, RunOutput};
pub use stepper::{
    assess_health, choose_dt, max_velocity, step, tail_energy_fraction, Health, Integrator,
    SimulationState,
};
