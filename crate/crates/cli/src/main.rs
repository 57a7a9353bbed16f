//! `gmtlab`: generate instances, run single computations, and verify the
//! quantitative checks, writing self-describing JSON or CSV artifacts.
//!
//! Exit status: 0 on success or pass, 2 when a check fails, 3 when it is
//! inconclusive, 1 on usage, input or I/O errors.

mod artifact;
mod checks;
mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gmtlab::flatnorm::Objective;
use gmtlab::harness::{ExperimentReport, Verdict};
use serde_json::json;

use artifact::{render_report, write_atomic};
use checks::{run_check, run_suite, workers, Check};
use commands::FamilyArg;
use config::{Format, RunConfig};
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "gmtlab", version, about = "Integral currents, flat norms and metric-measure checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate an instance of a family.
    Gen {
        #[arg(value_name = "FAMILY")]
        kind: FamilyArg,
    },
    /// Mass of a chain.
    Mass,
    /// Boundary of a chain.
    Boundary,
    /// Simplicial flat norm of a chain in an ambient complex.
    Flatnorm,
    /// Least mass of a filling of a cycle.
    Fillvol,
    /// Rips filling radius of a cycle on its vertex metric.
    Fillrad,
    /// Hausdorff distance between two index sets of a metric space.
    Hausdorff,
    /// Gromov-Hausdorff distance between two metric spaces.
    Gh,
    /// Covering numbers of a metric space over an eps grid.
    Cover,
    /// Ball measures and lower density at a point.
    Measure,
    /// Run one check.
    Verify { check: Check },
    /// Run every check, writing one artifact each and a summary.
    Suite,
}

/// Settings shared by all subcommands; any of them can also come from
/// `--config FILE` (`key=value` lines), flags taking precedence.
#[derive(Args, Debug, Default)]
struct Flags {
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    out: Option<String>,
    #[arg(long, global = true)]
    format: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    #[arg(long, global = true)]
    mesh: Option<String>,
    /// Comma-separated grid of radii or scales.
    #[arg(long, global = true, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Family index.
    #[arg(long, global = true)]
    n: Option<String>,
    /// Alphabet size of the word space.
    #[arg(long = "N", global = true)]
    symbols: Option<String>,
    #[arg(long, global = true)]
    m: Option<String>,
    #[arg(long, global = true)]
    depth: Option<String>,
    #[arg(long, global = true)]
    l: Option<String>,
    #[arg(long, global = true)]
    alpha: Option<String>,
    /// Assumed contractibility factor.
    #[arg(long, global = true)]
    lambda: Option<String>,
    /// Assumed contractibility scale.
    #[arg(long, global = true)]
    r: Option<String>,
    /// Density constant.
    #[arg(long, global = true)]
    c: Option<String>,
    /// Covering constant.
    #[arg(long, global = true)]
    k: Option<String>,
    #[arg(long, global = true)]
    family: Option<String>,
    /// Comma-separated family indices.
    #[arg(long, global = true)]
    ns: Option<String>,
    #[arg(long, global = true)]
    rounds: Option<String>,
    #[arg(long, global = true)]
    cap: Option<String>,
    #[arg(long, global = true)]
    instances: Option<String>,
    #[arg(long, global = true)]
    complex: Option<String>,
    #[arg(long, global = true)]
    chain: Option<String>,
    #[arg(long, global = true)]
    ambient: Option<String>,
    #[arg(long, global = true)]
    space: Option<String>,
    #[arg(long, global = true)]
    other: Option<String>,
    #[arg(long, global = true)]
    measure: Option<String>,
    #[arg(long, global = true)]
    a: Option<String>,
    #[arg(long, global = true)]
    b: Option<String>,
    #[arg(long, global = true)]
    point: Option<String>,
    #[arg(long, global = true)]
    exact: Option<String>,
    #[arg(long, global = true)]
    solver: Option<String>,
    #[arg(long, global = true)]
    ratio: Option<String>,
}

impl Flags {
    fn pairs(&self) -> Vec<(&'static str, &String)> {
        let all = [
            ("out", &self.out),
            ("format", &self.format),
            ("seed", &self.seed),
            ("mesh", &self.mesh),
            ("grid", &self.grid),
            ("n", &self.n),
            ("N", &self.symbols),
            ("m", &self.m),
            ("depth", &self.depth),
            ("l", &self.l),
            ("alpha", &self.alpha),
            ("lambda", &self.lambda),
            ("r", &self.r),
            ("c", &self.c),
            ("k", &self.k),
            ("family", &self.family),
            ("ns", &self.ns),
            ("rounds", &self.rounds),
            ("cap", &self.cap),
            ("instances", &self.instances),
            ("complex", &self.complex),
            ("chain", &self.chain),
            ("ambient", &self.ambient),
            ("space", &self.space),
            ("other", &self.other),
            ("measure", &self.measure),
            ("a", &self.a),
            ("b", &self.b),
            ("point", &self.point),
            ("exact", &self.exact),
            ("solver", &self.solver),
            ("ratio", &self.ratio),
        ];
        all.into_iter().filter_map(|(k, v)| v.as_ref().map(|v| (k, v))).collect()
    }

    fn config(&self) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        for (k, v) in self.pairs() {
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }
}

fn exit_for(v: Verdict) -> u8 {
    match v {
        Verdict::Pass => 0,
        Verdict::Fail => 2,
        Verdict::Inconclusive => 3,
    }
}

/// Print or write a report; the exit status follows its verdict.
fn emit(report: &ExperimentReport, command: &str, cfg: &RunConfig) -> Result<u8, CliError> {
    let (text, _) = render_report(report, command, cfg);
    let ext = match cfg.format() {
        Format::Json => "json",
        Format::Csv => "csv",
    };
    match commands::target(cfg, &report.check, ext) {
        Some(path) => {
            write_atomic(&path, &text)?;
            println!("{}: {}", path.display(), json!(report.verdict).as_str().unwrap_or(""));
        }
        None => print!("{text}"),
    }
    Ok(exit_for(report.verdict))
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let cfg = cli.flags.config()?;
    let report = match cli.command {
        Command::Gen { kind } => {
            for path in commands::gen(kind.into(), &cfg)? {
                println!("{}", path.display());
            }
            return Ok(0);
        }
        Command::Suite => {
            let suite_cfg = RunConfig {
                out: cfg.out.clone(),
                format: cfg.format,
                seed: cfg.seed,
                ..Default::default()
            };
            let outcomes = run_suite(&suite_cfg, workers()?)?;
            let verdict = outcomes.iter().fold(Verdict::Pass, |v, o| v.combine(o.verdict));
            let summary = json!({ "jobs": outcomes, "verdict": verdict, "config": suite_cfg.to_value() });
            let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
            text.push('\n');
            let out = suite_cfg.out.as_ref().expect("suite requires --out");
            write_atomic(&out.join("suite.json"), &text)?;
            for o in &outcomes {
                println!("{}: {}", o.name, json!(o.verdict).as_str().unwrap_or(""));
            }
            return Ok(exit_for(verdict));
        }
        Command::Verify { check } => {
            let rep = run_check(check, &cfg)?;
            return emit(&rep, &format!("verify {}", check.name()), &cfg);
        }
        Command::Mass => commands::mass(&cfg)?,
        Command::Boundary => commands::boundary(&cfg)?,
        Command::Flatnorm => commands::filling(&cfg, Objective::FlatNorm)?,
        Command::Fillvol => commands::filling(&cfg, Objective::FillVolume)?,
        Command::Fillrad => commands::fillrad(&cfg)?,
        Command::Hausdorff => commands::hausdorff(&cfg)?,
        Command::Gh => commands::gh(&cfg)?,
        Command::Cover => commands::cover(&cfg)?,
        Command::Measure => commands::measure(&cfg)?,
    };
    let name = report.check.clone();
    emit(&report, &name, &cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
