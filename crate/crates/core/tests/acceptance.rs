//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails. Pass criterion numbers as arguments to run a
//! subset, e.g. `cargo test --test acceptance -- 1 8`.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use oscilloflow::dynamics::{
    make_initial_data, random_band_field, rhs_ns, rhs_sqg, run_observed, Generator, Health, InitialData, Integrator,
    SimulationConfig, SimulationState,
};
use oscilloflow::harness::{decode_checkpoint, encode_checkpoint, run_sweep, RunConfig, RunSummary, SweepPlan};
use oscilloflow::inequality::{ensemble_report, mollifier_checks, pointwise_ratio, InequalityId};
use oscilloflow::norms::{energy_balance_report, sobolev_norm};
use oscilloflow::oscillation::{n_zero_ns, oscillation_bound_estimate};
use oscilloflow::{EquationKind, OscillationProfile, ProfileKind, SpectralField, TorusGrid};

// Ensembles allocate and drop 100 MB fields at a high rate. Keeping freed
// pages mapped avoids refaulting them on every field.
#[global_allocator]
static GLOBAL: tikv_jemallocator::Jemalloc = tikv_jemallocator::Jemalloc;

#[allow(non_upper_case_globals)]
#[export_name = "_rjem_malloc_conf"]
pub static malloc_conf: &[u8] = b"oversize_threshold:0,dirty_decay_ms:-1,muzzy_decay_ms:-1\0";

type Outcome = Result<String, String>;

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn max_diff(a: &SpectralField, b: &SpectralField) -> f64 {
    a.coefficients().iter().zip(b.coefficients()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn random_vector(rng: &mut ChaCha8Rng, dim: usize, n: usize) -> Vec<i64> {
    let half = n as i64 / 2 - 1;
    loop {
        let k: Vec<i64> = (0..dim).map(|_| rng.gen_range(-half..=half)).collect();
        if k.iter().any(|&x| x != 0) {
            return k;
        }
    }
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn norm2(k: &[i64]) -> f64 {
    k.iter().map(|&x| (x * x) as f64).sum()
}

/// Every multiplier against its per-mode formula on single-mode fields.
fn operator_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (dim, n) in [(2, 64), (3, 32)] {
        let grid = TorusGrid::new(dim, n).map_err(e)?;
        let mut vectors: Vec<Vec<i64>> = (0..20).map(|_| random_vector(&mut rng, dim, n)).collect();
        vectors.push(vec![1; dim]);
        let mut edge = vec![0; dim];
        edge[dim - 1] = n as i64 / 2 - 1;
        vectors.push(edge);
        for k in vectors {
            let z = random_complex(&mut rng);
            let mut check = |got: SpectralField, expected: SpectralField| {
                let scale = expected.max_abs();
                worst = worst.max(max_diff(&got, &expected) / scale);
                count += 1;
            };
            let mut f = SpectralField::zeros(grid, 1);
            f.set_mode(0, &k, z).map_err(e)?;

            for axis in 0..dim {
                let mut expected = SpectralField::zeros(grid, 1);
                expected.set_mode(0, &k, Complex64::new(0.0, k[axis] as f64) * z).map_err(e)?;
                check(f.derivative(axis).map_err(e)?, expected);
            }
            for beta in [-0.5, 0.25, 0.5, 1.0, 1.5] {
                let mut expected = SpectralField::zeros(grid, 1);
                expected.set_mode(0, &k, z * norm2(&k).powf(beta)).map_err(e)?;
                check(f.fractional_laplacian(beta).map_err(e)?, expected);
            }
            if dim == 2 {
                let norm = norm2(&k).sqrt();
                let mut expected = SpectralField::zeros(grid, 2);
                expected.set_mode(0, &k, Complex64::new(0.0, -k[1] as f64 / norm) * z).map_err(e)?;
                expected.set_mode(1, &k, Complex64::new(0.0, k[0] as f64 / norm) * z).map_err(e)?;
                check(f.riesz_velocity().map_err(e)?, expected);
            }

            let v: Vec<Complex64> = (0..dim).map(|_| random_complex(&mut rng)).collect();
            let mut u = SpectralField::zeros(grid, dim);
            let mut expected = SpectralField::zeros(grid, dim);
            let kv: Complex64 = (0..dim).map(|j| v[j] * k[j] as f64).sum();
            for j in 0..dim {
                u.set_mode(j, &k, v[j]).map_err(e)?;
                expected.set_mode(j, &k, v[j] - kv * (k[j] as f64 / norm2(&k))).map_err(e)?;
            }
            check(u.leray_project().map_err(e)?, expected);
        }
    }
    ensure(worst <= 1e-12, || format!("worst relative error {worst:e}"))?;
    Ok(format!("{count} single-mode checks, worst relative error {worst:.1e}"))
}

fn nonlinearity_oracle() -> Outcome {
    use common::{ns_expected, random_modes, relative_error, sqg_expected, to_field, N};
    let (t, freq) = (0.4, 3.0);
    let profile = OscillationProfile::sine(freq);
    let b = (freq * t).sin();
    let mut worst: f64 = 0.0;
    let g2 = TorusGrid::new(2, N).map_err(e)?;
    let g3 = TorusGrid::new(3, N).map_err(e)?;
    for seed in 0..20 {
        let theta = random_modes(2, 1, seed, false);
        let got = rhs_sqg(&to_field(g2, 1, &theta), t, &profile, 0.5).map_err(e)?;
        let err = relative_error(g2, &got, &sqg_expected(&theta, b)).ok_or("SQG: energy outside the 2/3 band")?;
        worst = worst.max(err);

        let u = random_modes(3, 3, 1000 + seed, true);
        let got = rhs_ns(&to_field(g3, 3, &u), t, &profile).map_err(e)?;
        let err = relative_error(g3, &got, &ns_expected(&u, b)).ok_or("NS: energy outside the 2/3 band")?;
        worst = worst.max(err);
    }
    ensure(worst <= 1e-10, || format!("worst relative error {worst:e}"))?;
    Ok(format!("20 SQG + 20 NS fields, worst relative error {worst:.1e}"))
}

fn sqg_config(n: usize, profile: OscillationProfile, t_end: f64, data: InitialData) -> Result<SimulationConfig, String> {
    Ok(SimulationConfig::new(EquationKind::Sqg, 0.5, TorusGrid::new(2, n).map_err(e)?, profile, t_end, data))
}

fn analytic_heat() -> Outcome {
    let cfg = sqg_config(64, OscillationProfile::zero(), 1.0, InitialData::new(Generator::Cosine, None, 0))?;
    let out = run_observed(&cfg, None, |_| {}).map_err(e)?;
    ensure(out.state.health == Health::Ok, || "run unhealthy".into())?;
    let grid = cfg.grid;
    let expected = SpectralField::forward_transform(grid, 1, &grid.sample(|x| (-1.0f64).exp() * x[0].cos())).map_err(e)?;
    let coeff_err = max_diff(&out.state.field, &expected);
    let point_err = out
        .state
        .field
        .inverse_transform()
        .iter()
        .zip(expected.inverse_transform())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let residual = energy_balance_report(&out.trace).map_err(e)?;
    ensure(point_err <= 1e-8 && coeff_err <= 1e-8, || format!("state error {point_err:e}"))?;
    ensure(residual <= 1e-6, || format!("energy residual {residual:e}"))?;
    Ok(format!("max pointwise error {point_err:.1e}, energy residual {residual:.1e}"))
}

fn scheme_order() -> Outcome {
    let mut cfg = sqg_config(32, OscillationProfile::sine(5.0), 0.4, InitialData::new(Generator::Cmt, Some(6.0), 0))?;
    cfg.tail_threshold = 0.5;
    let theta0 = make_initial_data(&cfg.initial_data, cfg.equation, cfg.grid).map_err(e)?;
    let mut integrator = Integrator::new(&cfg).map_err(e)?;
    let mut integrate = |steps: usize| -> Result<SpectralField, String> {
        let dt = cfg.t_end / steps as f64;
        let mut s = SimulationState::initial(theta0.clone());
        for _ in 0..steps {
            s = integrator.step(&s, dt).map_err(e)?;
        }
        Ok(s.field)
    };
    let coarse = integrate(8)?;
    let fine = integrate(16)?;
    let reference = integrate(128)?;
    let e1 = sobolev_norm(&coarse.axpy(-1.0, &reference).map_err(e)?, 0.0).map_err(e)?;
    let e2 = sobolev_norm(&fine.axpy(-1.0, &reference).map_err(e)?, 0.0).map_err(e)?;
    let order = (e1 / e2).log2();
    ensure(order >= 3.5, || format!("measured order {order:.3}"))?;
    Ok(format!("measured order {order:.3}"))
}

fn energy_neutrality() -> Outcome {
    let sqg = sqg_config(256, OscillationProfile::sine(10.0), 1.0, InitialData::new(Generator::Cmt, Some(5.0), 0))?;
    let out = run_observed(&sqg, None, |_| {}).map_err(e)?;
    ensure(out.state.health == Health::Ok, || format!("SQG run {}", out.state.health.as_str()))?;
    let sqg_residual = energy_balance_report(&out.trace).map_err(e)?;

    let ns = SimulationConfig::new(
        EquationKind::Ns,
        0.0,
        TorusGrid::new(3, 48).map_err(e)?,
        OscillationProfile::sine(10.0),
        0.5,
        InitialData::new(Generator::TaylorGreen3d, None, 0),
    );
    let mut worst_div: f64 = 0.0;
    let mut failed = None;
    let out = run_observed(&ns, None, |s| match s.field.divergence_defect() {
        Ok(d) => worst_div = worst_div.max(d),
        Err(err) => failed = Some(err.to_string()),
    })
    .map_err(e)?;
    if let Some(err) = failed {
        return Err(err);
    }
    ensure(out.state.health == Health::Ok, || format!("NS run {}", out.state.health.as_str()))?;
    let ns_residual = energy_balance_report(&out.trace).map_err(e)?;
    ensure(sqg_residual <= 1e-5, || format!("SQG energy residual {sqg_residual:e}"))?;
    ensure(ns_residual <= 1e-5, || format!("NS energy residual {ns_residual:e}"))?;
    ensure(worst_div <= 1e-12, || format!("divergence {worst_div:e}"))?;
    Ok(format!(
        "SQG residual {sqg_residual:.1e}, NS residual {ns_residual:.1e}, max divergence {worst_div:.1e} over {} samples",
        out.trace.len()
    ))
}

fn single_mode(grid: TorusGrid, components: usize, k: &[i64]) -> Result<SpectralField, String> {
    let mut f = SpectralField::zeros(grid, components);
    f.set_mode(components - 1, k, Complex64::new(0.3, -0.2)).map_err(e)?;
    Ok(f)
}

fn inequality_suite() -> Outcome {
    // (a) constant-one interpolations.
    let mut tight_max: f64 = 0.0;
    for id in InequalityId::ALL.into_iter().filter(|i| i.tight_constant_one()) {
        let grid = TorusGrid::new(id.shape().dim(), if id.shape().dim() == 3 { 16 } else { 32 }).map_err(e)?;
        let r = ensemble_report(id, 200, 17, grid, 0.5).map_err(e)?;
        let max = r.max_ratio.ok_or_else(|| format!("{id}: every sample degenerate"))?;
        ensure(r.ratios.len() == 200, || format!("{id}: only {} usable samples", r.ratios.len()))?;
        ensure(max <= 1.0 + 1e-10, || format!("{id}: max ratio {max}"))?;
        tight_max = tight_max.max(max);
    }

    // (b) sup-type ratios: amplitude invariance and resolution stability.
    let mut worst_scale: f64 = 0.0;
    let mut worst_factor: f64 = 1.0;
    for id in InequalityId::ALL.into_iter().filter(|i| i.is_sup_type()) {
        let dim = id.shape().dim();
        let comps = id.shape().components();
        let grid = TorusGrid::new(dim, 32).map_err(e)?;
        for seed in 0..5 {
            let f = random_band_field(grid, comps, seed);
            let base = pointwise_ratio(&f, id, 0.5).map_err(e)?.ok_or("degenerate sample")?;
            for lambda in [1e-3, 0.1, 10.0, 1e3] {
                let scaled = pointwise_ratio(&f.scale(lambda), id, 0.5).map_err(e)?.ok_or("degenerate sample")?;
                worst_scale = worst_scale.max((scaled - base).abs() / base);
            }
        }
        let coarse = ensemble_report(id, 200, 3, TorusGrid::new(dim, 64).map_err(e)?, 0.5).map_err(e)?;
        let fine = ensemble_report(id, 200, 3, TorusGrid::new(dim, 128).map_err(e)?, 0.5).map_err(e)?;
        let (a, b) = (coarse.max_ratio.ok_or("degenerate")?, fine.max_ratio.ok_or("degenerate")?);
        worst_factor = worst_factor.max(a / b).max(b / a);
    }
    ensure(worst_scale <= 1e-10, || format!("sup-type ratio changes by {worst_scale:e} under scaling"))?;
    ensure(worst_factor <= 2.0, || format!("n=64 vs n=128 max ratios differ by factor {worst_factor}"))?;

    // (c) mollification error slope.
    let eps = [0.12, 0.06, 0.03, 0.015];
    let grid = TorusGrid::new(2, 64).map_err(e)?;
    let mut min_margin = f64::INFINITY;
    for seed in 0..20 {
        let f = random_band_field(grid, 1, seed);
        for s in [0.5, 1.0] {
            let r = mollifier_checks(&f, s, 0, 1, &eps).map_err(e)?.ok_or("zero field")?;
            let slope = r.fitted_slope.ok_or("vanishing residual")?;
            min_margin = min_margin.min(slope - (s - 0.1));
        }
    }
    ensure(min_margin >= 0.0, || format!("fitted slope below s - 0.1 by {}", -min_margin))?;

    // (d) smoothing ratio on single modes, as ε decreases.
    let grid = TorusGrid::new(2, 32).map_err(e)?;
    for k in [[1, 0], [2, 1], [0, 3], [4, -4]] {
        let f = single_mode(grid, 1, &k)?;
        let kk = norm2(&k).sqrt();
        for (m1, m2) in [(0, 1), (1, 1), (1, 2), (2, 1), (0, 3)] {
            let eps: Vec<f64> = [0.9, 0.5, 0.2, 0.1, 0.05].iter().map(|x| x / kk).collect();
            let r = mollifier_checks(&f, 1.0, m1, m2, &eps).map_err(e)?.ok_or("zero field")?;
            ensure(r.smoothing_bounded && r.smoothing_monotone, || {
                format!("k={k:?} m1={m1} m2={m2}: ratios {:?}", r.smoothing_ratios)
            })?;
        }
    }
    Ok(format!(
        "(a) max tight ratio {tight_max:.6} (b) scale drift {worst_scale:.1e}, resolution factor {worst_factor:.3} \
         (c) min slope margin {min_margin:.3} (d) bounded and monotone"
    ))
}

fn sweep_config(grid_n: usize, t_end: f64) -> Result<RunConfig, String> {
    RunConfig::from_json(&format!(
        r#"{{"equation": "sqg", "alpha": 0.5, "grid_n": {grid_n},
            "oscillation": {{"kind": "sine", "N": 1}},
            "time": {{"t_end": {t_end}}},
            "initial_data": {{"generator": "cmt", "target_h2": 5.0}}}}"#
    ))
    .map_err(e)
}

fn stabilization_sweep() -> Outcome {
    let plan = SweepPlan {
        base_config: sweep_config(256, 2.0)?,
        n_values: vec![1.0, 10.0, 100.0, 1000.0],
        parallelism: 1,
        output_dir: None,
    };
    let rows = run_sweep(&plan, None).map_err(e)?;
    let table = rows
        .iter()
        .map(|r| format!("N={} sup_h2={:.4} xt={:.4} {}", r.n, r.sup_h2, r.xt, r.health.as_str()))
        .collect::<Vec<_>>()
        .join("; ");
    let (first, last) = (&rows[0], &rows[rows.len() - 1]);
    ensure(last.health == Health::Ok, || format!("N=1000 run unhealthy: {table}"))?;
    ensure(last.sup_h2 <= first.sup_h2, || format!("sup H2 grew: {table}"))?;
    ensure(last.xt <= first.xt, || format!("X_T grew: {table}"))?;
    Ok(table)
}

fn oscillation_admissibility() -> Outcome {
    let sine = oscillation_bound_estimate(&OscillationProfile::sine(1.0), 20.0 * PI, 200_001).map_err(e)?;
    ensure((sine - 3.0).abs() <= 1e-2, || format!("M(sine) = {sine}"))?;
    let one = OscillationProfile::new(ProfileKind::ConstantOne, 1.0).map_err(e)?;
    for t in [1.0, 10.0] {
        let m = oscillation_bound_estimate(&one, t, 1001).map_err(e)?;
        ensure(m == 1.0 + t, || format!("M(constant_one) over {t} = {m}"))?;
    }
    let n0 = n_zero_ns(1.0, 3.0, 1.0);
    ensure(n0 == 216_000.0, || format!("n_zero_ns = {n0}"))?;
    Ok(format!("M(sine) = {sine:.6}, M(one) = 1 + T, N0 = {n0}"))
}

fn without_wall(rows: &[RunSummary]) -> Vec<RunSummary> {
    rows.iter().cloned().map(|r| RunSummary { wall_seconds: 0.0, ..r }).collect()
}

fn harness_checks() -> Outcome {
    // Checkpoint round trips for both equations.
    let sqg = sqg_config(64, OscillationProfile::sine(4.0), 0.1, InitialData::new(Generator::RandomBand, Some(1.0), 5))?;
    let ns = SimulationConfig::new(
        EquationKind::Ns,
        0.0,
        TorusGrid::new(3, 16).map_err(e)?,
        OscillationProfile::sine(4.0),
        0.05,
        InitialData::new(Generator::TaylorGreen3d, None, 0),
    );
    for cfg in [sqg, ns] {
        let state = run_observed(&cfg, None, |_| {}).map_err(e)?.state;
        let bytes = encode_checkpoint(&cfg, &state).map_err(e)?;
        let back = decode_checkpoint(&bytes).map_err(e)?;
        let same_bits = back
            .state
            .field
            .coefficients()
            .iter()
            .zip(state.field.coefficients())
            .all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits());
        ensure(same_bits && back.state == state, || format!("{} checkpoint changed", cfg.equation))?;
        ensure(encode_checkpoint(&cfg, &back.state).map_err(e)? == bytes, || "re-encoding differs".into())?;
    }

    // Determinism and parallel == serial.
    let plan = |parallelism| -> Result<SweepPlan, String> {
        Ok(SweepPlan {
            base_config: sweep_config(32, 0.2)?,
            n_values: vec![1.0, 100.0],
            parallelism,
            output_dir: None,
        })
    };
    let dirs = [tempfile::tempdir().map_err(e)?, tempfile::tempdir().map_err(e)?, tempfile::tempdir().map_err(e)?];
    let serial = run_sweep(&plan(1)?, Some(dirs[0].path())).map_err(e)?;
    let again = run_sweep(&plan(1)?, Some(dirs[1].path())).map_err(e)?;
    let parallel = run_sweep(&plan(2)?, Some(dirs[2].path())).map_err(e)?;
    ensure(without_wall(&serial) == without_wall(&again), || "repeated sweep differs".into())?;
    ensure(without_wall(&serial) == without_wall(&parallel), || "parallel sweep differs from serial".into())?;
    for n in ["N_1", "N_100"] {
        let read = |i: usize| std::fs::read(dirs[i].path().join(n).join("trace.csv")).map_err(e);
        let first = read(0)?;
        ensure(first == read(1)? && first == read(2)?, || format!("{n}/trace.csv differs between sweeps"))?;
    }
    Ok("checkpoint bit-exact (SQG, NS); repeated and parallel sweeps identical".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("operator exactness", operator_exactness),
        ("nonlinearity oracle", nonlinearity_oracle),
        ("analytic heat solution", analytic_heat),
        ("scheme order", scheme_order),
        ("energy neutrality", energy_neutrality),
        ("inequality suite", inequality_suite),
        ("stabilization sweep", stabilization_sweep),
        ("oscillation admissibility", oscillation_admissibility),
        ("harness", harness_checks),
    ];
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let number = i + 1;
        if !selected.is_empty() && !selected.contains(&number) {
            continue;
        }
        let clock = Instant::now();
        let outcome = check();
        let secs = clock.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {number} {name} ({secs:.1}s): {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL {number} {name} ({secs:.1}s): {detail}");
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
