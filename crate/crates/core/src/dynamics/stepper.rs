use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::config::SimulationConfig;
use super::rhs::{rhs_ns, rhs_sqg};
use crate::equation::EquationKind;
use crate::error::{domain, Result};
use crate::norms::sup_norm;
use crate::spectral::SpectralField;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Health {
    Ok,
    UnderResolved,
    Diverged,
}

impl Health {
    pub fn as_str(&self) -> &'static str {
        match self {
            Health::Ok => "ok",
            Health::UnderResolved => "under_resolved",
            Health::Diverged => "diverged",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationState {
    pub time: f64,
    /// `θ` for SQG, the solenoidal velocity `u` for NS.
    pub field: SpectralField,
    pub step_count: u64,
    pub health: Health,
}

impl SimulationState {
    pub fn initial(field: SpectralField) -> Self {
        Self {
            time: 0.0,
            field,
            step_count: 0,
            health: Health::Ok,
        }
    }
}

/// Fraction of spectral energy in modes whose largest axis wavenumber
/// exceeds `0.9 · n/3`.
pub fn tail_energy_fraction(field: &SpectralField) -> f64 {
    let grid = field.grid();
    let cutoff = 0.9 * grid.n() as f64 / 3.0;
    let len = grid.len();
    let (mut tail, mut total) = (0.0, 0.0);
    for (i, c) in field.coefficients().iter().enumerate() {
        let e = c.norm_sqr();
        total += e;
        if e > 0.0 && grid.max_axis_wavenumber(i % len) as f64 > cutoff {
            tail += e;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        tail / total
    }
}

/// Classifies a freshly computed field.
pub fn assess_health(field: &SpectralField, tail_threshold: f64) -> Health {
    if !field.is_finite() {
        Health::Diverged
    } else if tail_energy_fraction(field) > tail_threshold {
        Health::UnderResolved
    } else {
        Health::Ok
    }
}

/// Grid maximum of the advecting velocity magnitude.
pub fn max_velocity(cfg: &SimulationConfig, field: &SpectralField) -> Result<f64> {
    Ok(match cfg.equation {
        EquationKind::Sqg => sup_norm(&field.riesz_velocity()?),
        EquationKind::Ns => sup_norm(field),
    })
}

/// `min(cfl·Δx / max|u|, osc_fraction·2π / max(N, 1), dt_max)`.
pub fn choose_dt(cfg: &SimulationConfig, state: &SimulationState) -> Result<f64> {
    if state.health != Health::Ok {
        return Err(domain("time step requested for an unhealthy state"));
    }
    let umax = max_velocity(cfg, &state.field)?.max(1e-8);
    let advective = cfg.cfl * cfg.grid.spacing() / umax;
    let oscillation = cfg.osc_fraction * 2.0 * std::f64::consts::PI / cfg.profile.n_multiplier().max(1.0);
    Ok(advective.min(oscillation).min(cfg.dt_max))
}

/// Integrating-factor RK4 stepper. Caches the exponential factors for the
/// most recent step size.
#[derive(Debug, Clone)]
pub struct Integrator {
    cfg: SimulationConfig,
    /// Dissipation rate `|k|²` (NS) or `|k|^α` (SQG) per mode.
    rates: Vec<f64>,
    cached_dt: f64,
    half: Vec<f64>,
    full: Vec<f64>,
}

impl Integrator {
    pub fn new(cfg: &SimulationConfig) -> Result<Self> {
        cfg.validate()?;
        let grid = cfg.grid;
        let rates = (0..grid.len())
            .map(|flat| {
                let k2 = grid.k_squared(flat);
                match cfg.equation {
                    EquationKind::Ns => k2,
                    EquationKind::Sqg => {
                        if k2 == 0.0 {
                            0.0
                        } else {
                            k2.powf(cfg.alpha / 2.0)
                        }
                    }
                }
            })
            .collect();
        Ok(Self {
            cfg: cfg.clone(),
            rates,
            cached_dt: f64::NAN,
            half: Vec::new(),
            full: Vec::new(),
        })
    }

    pub fn config(&self) -> &SimulationConfig {
        &self.cfg
    }

    fn factors(&mut self, dt: f64) {
        if self.cached_dt != dt {
            self.half = self.rates.iter().map(|r| (-r * dt / 2.0).exp()).collect();
            self.full = self.rates.iter().map(|r| (-r * dt).exp()).collect();
            self.cached_dt = dt;
        }
    }

    fn nonlinear(&self, field: &SpectralField, t: f64) -> Result<SpectralField> {
        match self.cfg.equation {
            EquationKind::Sqg => rhs_sqg(field, t, &self.cfg.profile, self.cfg.alpha),
            EquationKind::Ns => rhs_ns(field, t, &self.cfg.profile),
        }
    }

    /// One step of size `dt`.
    pub fn step(&mut self, state: &SimulationState, dt: f64) -> Result<SimulationState> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(domain(format!("time step must be positive, got {dt}")));
        }
        self.factors(dt);
        let grid = self.cfg.grid;
        let len = grid.len();
        let comps = state.field.components();
        let t = state.time;
        let v = state.field.coefficients();

        // Multiplies every component by a per-mode factor.
        let apply = |factor: &[f64], x: &[Complex64]| -> Vec<Complex64> {
            x.iter().enumerate().map(|(i, c)| c * factor[i % len]).collect()
        };
        let make = |coeffs: Vec<Complex64>| SpectralField::from_coefficients(grid, comps, coeffs);

        let a = self.nonlinear(&state.field, t)?;
        let a = a.coefficients();

        let stage2: Vec<Complex64> = v.iter().zip(a).map(|(x, k)| x + k * (dt / 2.0)).collect();
        let v2 = make(apply(&self.half, &stage2))?;
        let b = self.nonlinear(&v2, t + dt / 2.0)?;
        let b = b.coefficients();

        let ev_half = apply(&self.half, v);
        let v3 = make(ev_half.iter().zip(b).map(|(x, k)| x + k * (dt / 2.0)).collect())?;
        let c = self.nonlinear(&v3, t + dt / 2.0)?;
        let c = c.coefficients();

        let ev_full = apply(&self.full, v);
        let ec_half = apply(&self.half, c);
        let v4 = make(ev_full.iter().zip(&ec_half).map(|(x, k)| x + k * dt).collect())?;
        let d = self.nonlinear(&v4, t + dt)?;
        let d = d.coefficients();

        let ea_full = apply(&self.full, a);
        let ebc_half: Vec<Complex64> = {
            let bc: Vec<Complex64> = b.iter().zip(c).map(|(x, y)| x + y).collect();
            apply(&self.half, &bc)
        };
        let next: Vec<Complex64> = (0..v.len())
            .map(|i| ev_full[i] + (ea_full[i] + ebc_half[i] * 2.0 + d[i]) * (dt / 6.0))
            .collect();

        let mut field = make(next)?.symmetrize();
        field = match self.cfg.equation {
            EquationKind::Ns => field.leray_project()?,
            EquationKind::Sqg => field.without_mean(),
        };
        let health = assess_health(&field, self.cfg.tail_threshold);
        Ok(SimulationState {
            time: t + dt,
            field,
            step_count: state.step_count + 1,
            health,
        })
    }
}

/// One integrating-factor RK4 step. Prefer [`Integrator`] in loops.
pub fn step(state: &SimulationState, dt: f64, cfg: &SimulationConfig) -> Result<SimulationState> {
    Integrator::new(cfg)?.step(state, dt)
}
