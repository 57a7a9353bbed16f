//! `verify` checks and the `suite` that runs them all.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::ValueEnum;
use gmtlab::generators::{gen_sphere, Family, TowerParams};
use gmtlab::harness::calibration::{
    fibonacci_sphere, reference_covering_grid, reference_density_grid, COVERING_K, DENSITY_C, REFERENCE_LAMBDA,
    REFERENCE_MESH,
};
use gmtlab::harness::{
    check_covering_bound, check_density_points, check_family_with, check_fillrad_bound, check_ilp_oracle,
    check_properties, check_tower_geometry, check_ultrametric_covering, check_ultrametric_lemma, CMode,
    CancellationOptions, CoveringParams, DensityBoundParams, ExperimentReport, FillradParams, PropertyCounts, Verdict,
};
use serde::Serialize;

use crate::artifact::{render_report, write_atomic};
use crate::config::{Format, RunConfig};
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    UltrametricLemma,
    UltrametricCovering,
    TowerGeometry,
    Density,
    Fillrad,
    Covering,
    Cancellation,
    IlpOracle,
    Properties,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::UltrametricLemma => "ultrametric-lemma",
            Check::UltrametricCovering => "ultrametric-covering",
            Check::TowerGeometry => "tower-geometry",
            Check::Density => "density",
            Check::Fillrad => "fillrad",
            Check::Covering => "covering",
            Check::Cancellation => "cancellation",
            Check::IlpOracle => "ilp-oracle",
            Check::Properties => "properties",
        }
    }
}

/// Reference contractibility scales: the radius window `r / 2048` (at
/// `lambda = 2`, `m = 2`) must reach the largest grid radius.
pub const DENSITY_R: f64 = 1024.0;
pub const FILLRAD_R0: f64 = 1280.0;
pub const COVERING_R0: f64 = 1024.0;
pub const FILLRAD_MESH: u32 = 3;
pub const FILLRAD_GRID: [f64; 3] = [0.2, 0.4, 0.6];
pub const DENSITY_POINTS: usize = 20;

fn family_defaults(f: Family) -> (Vec<u32>, u32) {
    match f {
        Family::Torus => (vec![1, 2, 4, 8], 64),
        Family::Ellipsoid => (vec![1, 4, 16, 64], 32),
        _ => (vec![1, 1, 1], 2),
    }
}

pub fn run_check(check: Check, cfg: &RunConfig) -> Result<ExperimentReport, CliError> {
    let lambda = cfg.lambda.unwrap_or(REFERENCE_LAMBDA);
    let rep = match check {
        Check::UltrametricLemma => {
            check_ultrametric_lemma(cfg.symbols.unwrap_or(4), cfg.m.unwrap_or(2), cfg.depth.unwrap_or(3))?
        }
        Check::UltrametricCovering => {
            let depth = cfg.depth.unwrap_or(3);
            let ks = cfg.ns.clone().unwrap_or_else(|| (0..=depth).collect());
            check_ultrametric_covering(cfg.symbols.unwrap_or(4), cfg.m.unwrap_or(2), depth, &ks)?
        }
        Check::TowerGeometry => check_tower_geometry(&TowerParams::new(
            cfg.m.unwrap_or(2),
            cfg.l.unwrap_or(2),
            cfg.alpha.unwrap_or(0.5),
            cfg.n.unwrap_or(2),
            cfg.mesh.unwrap_or(1),
        )?)?,
        Check::Density => {
            let s = gen_sphere(cfg.mesh.unwrap_or(REFERENCE_MESH))?;
            let (_, reference) = reference_density_grid();
            let grid = cfg.grid.clone().unwrap_or(reference);
            let p = DensityBoundParams {
                m: 2,
                lambda,
                r: cfg.r.unwrap_or(DENSITY_R),
                c_mode: CMode::Supplied(cfg.c.unwrap_or(DENSITY_C)),
                rounds: cfg.rounds.unwrap_or(1),
            };
            let points = fibonacci_sphere(cfg.n.map_or(DENSITY_POINTS, |n| n as usize));
            check_density_points(&s.chain, &points, &p, &grid)?
        }
        Check::Fillrad => {
            let s = gen_sphere(cfg.mesh.unwrap_or(FILLRAD_MESH))?;
            let p = FillradParams {
                lambda,
                r0: cfg.r.unwrap_or(FILLRAD_R0),
                rounds: cfg.rounds.unwrap_or(0),
                cap: cfg.cap.unwrap_or(200_000),
            };
            let grid = cfg.grid.clone().unwrap_or(FILLRAD_GRID.to_vec());
            check_fillrad_bound(&s.chain, &[0.0, 0.0, 1.0], &p, &grid)?
        }
        Check::Covering => {
            let s = gen_sphere(cfg.mesh.unwrap_or(REFERENCE_MESH))?;
            let p = CoveringParams {
                lambda,
                r0: cfg.r.unwrap_or(COVERING_R0),
                k: cfg.k.unwrap_or(COVERING_K),
                max_sample: cfg.cap.unwrap_or(50_000),
            };
            let grid = cfg.grid.clone().unwrap_or_else(reference_covering_grid);
            check_covering_bound(&s.chain, &p, &grid)?
        }
        Check::Cancellation => {
            let family = cfg.family.ok_or_else(|| CliError::missing("family"))?;
            let (ns, mesh) = family_defaults(family);
            let ns = cfg.ns.clone().unwrap_or(ns);
            let ratio = cfg.ratio.unwrap_or(CancellationOptions::default().ratio);
            check_family_with(family, &ns, cfg.mesh.unwrap_or(mesh), ratio)?
        }
        Check::IlpOracle => check_ilp_oracle(cfg.seed, cfg.instances.unwrap_or(50))?,
        Check::Properties => check_properties(cfg.seed, &PropertyCounts::default())?,
    };
    Ok(rep)
}

/// Suite jobs: artifact name, check and family (for cancellation).
pub const SUITE: &[(&str, Check, Option<Family>)] = &[
    ("cancellation-torus", Check::Cancellation, Some(Family::Torus)),
    ("cancellation-ellipsoid", Check::Cancellation, Some(Family::Ellipsoid)),
    ("ultrametric-lemma", Check::UltrametricLemma, None),
    ("tower-geometry", Check::TowerGeometry, None),
    ("ultrametric-covering", Check::UltrametricCovering, None),
    ("ilp-oracle", Check::IlpOracle, None),
    ("density", Check::Density, None),
    ("fillrad", Check::Fillrad, None),
    ("covering", Check::Covering, None),
    ("properties", Check::Properties, None),
];

#[derive(Debug, Clone, Serialize)]
pub struct JobOutcome {
    pub name: String,
    pub verdict: Verdict,
    pub content_sha256: String,
}

pub fn workers() -> Result<usize, CliError> {
    match std::env::var("GMTLAB_WORKERS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::Config {
                field: "GMTLAB_WORKERS".into(),
                msg: format!("expected a positive integer, got `{v}`"),
            }),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

/// Run every suite job on a pool of `workers` threads. Jobs share nothing
/// but a work index; each writes its own artifact. Outcomes come back in
/// suite order whatever the scheduling.
pub fn run_suite(cfg: &RunConfig, workers: usize) -> Result<Vec<JobOutcome>, CliError> {
    let out = cfg.out.clone().ok_or_else(|| CliError::missing("out"))?;
    let ext = match cfg.format() {
        Format::Json => "json",
        Format::Csv => "csv",
    };
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<JobOutcome, CliError>>>> = Mutex::new((0..SUITE.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers.clamp(1, SUITE.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(&(name, check, family)) = SUITE.get(i) else { break };
                let mut job = cfg.clone();
                job.family = family;
                let res = run_check(check, &job).and_then(|rep| {
                    let (text, hash) = render_report(&rep, &format!("verify {}", check.name()), &job);
                    write_atomic(&out.join(format!("{name}.{ext}")), &text)?;
                    Ok(JobOutcome { name: name.into(), verdict: rep.verdict, content_sha256: hash })
                });
                results.lock().expect("no job panics while holding the lock")[i] = Some(res);
            });
        }
    });
    results
        .into_inner()
        .expect("workers joined")
        .into_iter()
        .map(|r| r.expect("every job ran"))
        .collect()
}
