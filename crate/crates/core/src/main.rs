use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use oscilloflow::dynamics::{random_band_field, Health};
use oscilloflow::harness::{
    collect_summaries, execute, load_checkpoint, run_sweep, write_run, write_summary_csv, RunConfig, SweepPlan,
};
use oscilloflow::inequality::{ensemble_report, mollifier_checks, InequalityId, MollifierReport, RatioReport};
use oscilloflow::norms::{h2_full_norm, NormSample};
use oscilloflow::{EquationKind, Error, TorusGrid};

#[derive(Parser)]
#[command(name = "oscilloflow", version, about = "Oscillated Navier-Stokes / SQG spectral lab")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration and write its trace, summary and final checkpoint.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output.dir`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Exit with status 1 unless the run ends healthy.
        #[arg(long)]
        strict: bool,
        /// Continue from a checkpoint instead of fresh initial data.
        #[arg(long)]
        resume: Option<PathBuf>,
    },
    /// Run a sweep plan over the oscillation multiplier N.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        parallelism: Option<usize>,
        #[arg(long)]
        strict: bool,
    },
    /// Interpolation ensembles and mollifier scaling checks.
    VerifyInequalities {
        /// Comma-separated ids; defaults to every single-field inequality.
        #[arg(long, value_delimiter = ',')]
        ids: Vec<String>,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Grid size used for both 2D and 3D ensembles.
        #[arg(long, default_value_t = 32)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long)]
        skip_mollifier: bool,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the norms of a checkpointed field.
    Norms {
        #[arg(long)]
        checkpoint: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Collect run summaries below a directory.
    Report {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Status 2 for bad input, 1 for anything else.
fn exit_status(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Config(_) | Error::Json(_) | Error::Checkpoint { .. }) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_status(&err))
        }
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// Returns whether the command succeeded in the sense of the exit status.
fn dispatch(command: Command) -> anyhow::Result<bool> {
    match command {
        Command::Simulate { config, out, strict, resume } => simulate(config, out, strict, resume),
        Command::Sweep { config, out, parallelism, strict } => sweep(config, out, parallelism, strict),
        Command::VerifyInequalities { ids, count, seed, n, alpha, skip_mollifier, out } => {
            verify(ids, count, seed, n, alpha, skip_mollifier, out)
        }
        Command::Norms { checkpoint, json } => norms(checkpoint, json),
        Command::Report { dir, format, out } => report(dir, format, out),
    }
}

fn simulate(config: PathBuf, out: Option<PathBuf>, strict: bool, resume: Option<PathBuf>) -> anyhow::Result<bool> {
    let mut cfg = RunConfig::load(&config)?;
    if let Some(dir) = out {
        cfg.output.dir = dir;
    }
    cfg.output.strict |= strict;
    let sim = cfg.simulation()?;
    let start = match resume {
        None => None,
        Some(path) => {
            let ckpt = load_checkpoint(&path)?;
            let field = &ckpt.state.field;
            let alpha_matches = sim.equation == EquationKind::Ns || ckpt.alpha == sim.alpha;
            if ckpt.equation != sim.equation
                || field.grid() != &sim.grid
                || !alpha_matches
                || ckpt.n_multiplier != sim.profile.n_multiplier()
            {
                return Err(Error::Config(format!("checkpoint {} does not match the config", path.display())).into());
            }
            Some(ckpt.state)
        }
    };
    let run = execute(&cfg, start)?;
    write_run(&cfg.output.dir, &cfg, &run)?;
    println!("{}", serde_json::to_string_pretty(&run.summary)?);
    Ok(!cfg.output.strict || run.summary.health == Health::Ok)
}

fn sweep(config: PathBuf, out: Option<PathBuf>, parallelism: Option<usize>, strict: bool) -> anyhow::Result<bool> {
    let mut plan = SweepPlan::load(&config)?;
    if let Some(p) = parallelism {
        plan.parallelism = p;
    }
    let dir = out.unwrap_or_else(|| plan.output_dir());
    let strict = strict || plan.base_config.output.strict;
    let rows = run_sweep(&plan, Some(&dir))?;
    let mut buf = Vec::new();
    write_summary_csv(&rows, &mut buf)?;
    print!("{}", String::from_utf8(buf)?);
    Ok(!strict || rows.iter().all(|r| r.health == Health::Ok))
}

#[derive(Serialize)]
struct MollifierCampaign {
    fields: usize,
    eps: Vec<f64>,
    reports: Vec<MollifierReport>,
    min_slope_margin: f64,
    passed: bool,
}

/// Mollifier scaling checks on random band fields with `ε·8 ≤ 1`.
fn mollifier_campaign(count: usize, seed: u64, grid: TorusGrid) -> anyhow::Result<MollifierCampaign> {
    let eps = vec![0.12, 0.06, 0.03, 0.015];
    let fields = count.min(20);
    let mut reports = Vec::new();
    let mut margin = f64::INFINITY;
    let mut passed = true;
    for i in 0..fields as u64 {
        let f = random_band_field(grid, 1, seed.wrapping_add(i));
        for s in [0.5, 1.0] {
            for (m1, m2) in [(0, 1), (1, 1), (0, 2)] {
                let Some(r) = mollifier_checks(&f, s, m1, m2, &eps)? else { continue };
                if let Some(slope) = r.fitted_slope {
                    margin = margin.min(slope - (s - 0.1));
                }
                passed &= r.smoothing_bounded && r.fitted_slope.is_none_or(|k| k >= s - 0.1);
                reports.push(r);
            }
        }
    }
    Ok(MollifierCampaign { fields, eps, reports, min_slope_margin: margin, passed })
}

#[derive(Serialize)]
struct VerifyReport {
    ensembles: Vec<RatioReport>,
    mollifier: Option<MollifierCampaign>,
    passed: bool,
}

fn verify(
    ids: Vec<String>,
    count: usize,
    seed: u64,
    n: usize,
    alpha: f64,
    skip_mollifier: bool,
    out: Option<PathBuf>,
) -> anyhow::Result<bool> {
    let ids: Vec<InequalityId> = if ids.is_empty() {
        InequalityId::ALL.into_iter().filter(|i| !i.is_trajectory()).collect()
    } else {
        ids.iter().map(|s| s.parse()).collect::<Result<_, _>>()?
    };
    if let Some(id) = ids.iter().find(|i| i.is_trajectory()) {
        return Err(Error::Config(format!("{id} is a time-integrated estimate and needs a trajectory")).into());
    }
    let mut ensembles = Vec::new();
    for id in ids {
        let grid = TorusGrid::new(id.shape().dim(), n)?;
        let report = ensemble_report(id, count, seed, grid, alpha)?;
        eprintln!(
            "{id}: max ratio {:?} over {} fields{}",
            report.max_ratio,
            report.ratios.len(),
            match report.tight_bound_holds {
                Some(true) => " (constant one holds)",
                Some(false) => " (CONSTANT ONE VIOLATED)",
                None => "",
            }
        );
        ensembles.push(report);
    }
    let mollifier = if skip_mollifier {
        None
    } else {
        Some(mollifier_campaign(count, seed, TorusGrid::new(2, n.max(32))?)?)
    };
    let passed = ensembles.iter().all(|r| r.passed()) && mollifier.as_ref().is_none_or(|m| m.passed);
    let report = VerifyReport { ensembles, mollifier, passed };
    emit(out.as_ref(), &(serde_json::to_string_pretty(&report)? + "\n"))?;
    Ok(passed)
}

fn norms(checkpoint: PathBuf, json: bool) -> anyhow::Result<bool> {
    let ckpt = load_checkpoint(&checkpoint)?;
    let field = &ckpt.state.field;
    let sample = NormSample::measure(field, ckpt.equation, ckpt.alpha)?;
    let divergence = match ckpt.equation {
        EquationKind::Ns => Some(field.divergence_defect()?),
        EquationKind::Sqg => None,
    };
    if json {
        let value = serde_json::json!({
            "equation": ckpt.equation,
            "n": field.grid().n(),
            "dim": field.grid().dim(),
            "time": ckpt.state.time,
            "steps": ckpt.state.step_count,
            "norms": sample,
            "h2_full": h2_full_norm(field),
            "divergence_defect": divergence,
        });
        println!("{}", serde_json::to_string_pretty(&value)?);
    } else {
        let dissipation = match ckpt.equation {
            EquationKind::Sqg => "h_alpha2",
            EquationKind::Ns => "h1 (dissipation)",
        };
        println!("equation   {}", ckpt.equation);
        println!("grid       {}^{}", field.grid().n(), field.grid().dim());
        println!("time       {}", ckpt.state.time);
        println!("steps      {}", ckpt.state.step_count);
        for (name, value) in [
            ("l2", sample.l2),
            (dissipation, sample.dissipation),
            ("h1", sample.h1),
            ("h2", sample.h2),
            ("h_top", sample.h_top),
            ("grad_linf", sample.grad_linf),
            ("h2_full", h2_full_norm(field)),
        ] {
            println!("{name:<10} {value:.12e}");
        }
        if let Some(d) = divergence {
            println!("div defect {d:.3e}");
        }
    }
    Ok(true)
}

fn report(dir: PathBuf, format: Format, out: Option<PathBuf>) -> anyhow::Result<bool> {
    if !dir.is_dir() {
        bail!(Error::Config(format!("{} is not a directory", dir.display())));
    }
    let rows = collect_summaries(&dir)?;
    if rows.is_empty() {
        return Err(Error::Config(format!("no run summaries found below {}", dir.display())).into());
    }
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
        Format::Csv => {
            let mut buf = Vec::new();
            write_summary_csv(&rows, &mut buf)?;
            String::from_utf8(buf)?
        }
    };
    emit(out.as_ref(), &text)?;
    Ok(true)
}
