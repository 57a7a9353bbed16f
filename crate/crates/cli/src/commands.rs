//! Generation and single-computation subcommands.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::ValueEnum;
use gmtlab::chains::{ChainJson, EmbeddedComplex, IntegralChain};
use gmtlab::flatnorm::{
    filling_radius, solve_filling, FillOptions, FillingProblem, Objective, DEFAULT_SIMPLEX_CAP,
};
use gmtlab::generators::{generate, Family, FamilyDescriptor, Generated};
use gmtlab::harness::{exact, real, ExperimentReport, Series};
use gmtlab::metric::{
    ball_measure, covering_number, gh_distance, hausdorff_distance, lower_density, CoverMode, FiniteMetricSpace,
    GhMode, Metric, WeightedMeasure,
};
use serde_json::{json, Value};

use crate::artifact::{read_as, render_data, write_atomic};
use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Torus,
    Ellipsoid,
    Sphere,
    Tower,
    Ultrametric,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Torus => Family::Torus,
            FamilyArg::Ellipsoid => Family::Ellipsoid,
            FamilyArg::Sphere => Family::Sphere,
            FamilyArg::Tower => Family::Tower,
            FamilyArg::Ultrametric => Family::Ultrametric,
        }
    }
}

fn need<'a, T>(v: &'a Option<T>, field: &str) -> Result<&'a T, CliError> {
    v.as_ref().ok_or_else(|| CliError::missing(field))
}

/// Descriptor from the configuration, with per-family defaults.
pub fn descriptor(family: Family, cfg: &RunConfig) -> FamilyDescriptor {
    let (n, mesh) = match family {
        Family::Torus | Family::Ellipsoid => (1, 32),
        Family::Sphere => (0, 3),
        Family::Tower => (2, 1),
        Family::Ultrametric => (cfg.depth.unwrap_or(3), 0),
    };
    let mut d = FamilyDescriptor::new(family, cfg.n.unwrap_or(n), cfg.mesh.unwrap_or(mesh));
    d.seed = cfg.seed;
    if matches!(family, Family::Tower | Family::Ultrametric) {
        d.m = cfg.m;
    }
    if family == Family::Tower {
        d.l = cfg.l;
        d.alpha = cfg.alpha;
    }
    if family == Family::Ultrametric {
        d.symbols = cfg.symbols;
        if let Some(depth) = cfg.depth {
            d.n = depth;
        }
    }
    d
}

/// Write the generated instance and its descriptor into the output
/// directory; returns the written paths.
pub fn gen(family: Family, cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let d = descriptor(family, cfg);
    let command = format!("gen {}", serde_json::to_value(family).expect("family").as_str().unwrap_or(""));
    let mut files: Vec<(&str, Value)> = vec![("descriptor", serde_json::to_value(&d).expect("descriptor"))];
    match generate(&d)? {
        Generated::Surface(s) => {
            files.push(("complex", serde_json::to_value(&*s.complex).expect("complex")));
            files.push(("chain", serde_json::to_value(s.chain.to_json()).expect("chain")));
            files.push(("ambient", serde_json::to_value(&*s.ambient).expect("ambient")));
        }
        Generated::Ultrametric(u) => {
            let mu = WeightedMeasure::uniform(u.len(), 1.0)?;
            files.push(("space", serde_json::to_value(&u.space).expect("space")));
            files.push(("measure", serde_json::to_value(&mu).expect("measure")));
        }
        Generated::Tower(t) => {
            let mut markers = BTreeMap::new();
            for mk in &t.markers {
                markers.insert(format!("tower_{}_base", mk.tower), mk.base.clone());
                markers.insert(format!("tower_{}_roof", mk.tower), mk.roof.clone());
            }
            let nodes: Vec<_> = (0..t.n_nodes()).map(|i| t.node(i)).collect();
            files.push((
                "tower",
                json!({
                    "params": t.params,
                    "spacing": real(t.spacing),
                    "edges": t.n_edges(),
                    "facet_area_exact": exact(t.facet_area_exact()),
                    "facet_area_sum": real(t.facet_area_sum()),
                    "faces": t.faces,
                    "towers": t.towers,
                    "markers": markers,
                    "nodes": nodes,
                }),
            ));
        }
    }
    let mut written = Vec::new();
    for (name, data) in files {
        let path = dir.join(format!("{name}.json"));
        let (text, _) = render_data(&data, &command, cfg);
        write_atomic(&path, &text)?;
        written.push(path);
    }
    Ok(written)
}

fn load_complex(path: &str) -> Result<Arc<EmbeddedComplex>, CliError> {
    Ok(Arc::new(read_as(path)?))
}

fn load_chain(cfg: &RunConfig) -> Result<IntegralChain, CliError> {
    let k = load_complex(need(&cfg.complex, "complex")?)?;
    let path = need(&cfg.chain, "chain")?;
    let json: ChainJson = read_as(path)?;
    IntegralChain::from_json(k, &json).map_err(|e| CliError::Parse {
        path: path.clone(),
        msg: e.to_string(),
    })
}

fn load_space(path: &str) -> Result<FiniteMetricSpace, CliError> {
    read_as(path)
}

pub fn mass(cfg: &RunConfig) -> Result<ExperimentReport, CliError> {
    let t = load_chain(cfg)?;
    let mut rep = ExperimentReport::new("mass");
    rep.input("dim", t.dim());
    rep.value("mass", real(t.mass().total));
    rep.value("terms", t.terms().len().into());
    rep.value("volume_metric", serde_json::to_value(t.complex().volume_metric()).expect("metric"));
    Ok(rep)
}

pub fn boundary(cfg: &RunConfig) -> Result<ExperimentReport, CliError> {
    let t = load_chain(cfg)?;
    let b = t.boundary()?;
    let mut rep = ExperimentReport::new("boundary");
    rep.input("dim", t.dim());
    rep.value("boundary", serde_json::to_value(b.to_json()).expect("chain"));
    rep.value("mass", real(b.mass().total));
    rep.value("is_cycle", b.is_zero().into());
    Ok(rep)
}

pub fn filling(cfg: &RunConfig, objective: Objective) -> Result<ExperimentReport, CliError> {
    let t = load_chain(cfg)?;
    let ambient = match &cfg.ambient {
        Some(p) => load_complex(p)?,
        None => t.complex().clone(),
    };
    let opts = FillOptions {
        solver: cfg.solver.unwrap_or_default(),
        ..Default::default()
    };
    let w = solve_filling(&FillingProblem::new(ambient, &t, objective)?, &opts)?;
    let name = match objective {
        Objective::FlatNorm => "flatnorm",
        Objective::FillVolume => "fillvol",
    };
    let mut rep = ExperimentReport::new(name);
    rep.input("dim", t.dim());
    rep.value("value", real(w.value));
    rep.value("value_exact", exact(&w.value_exact));
    rep.value("method", serde_json::to_value(w.method).expect("method"));
    rep.value("optimality", serde_json::to_value(w.optimality).expect("optimality"));
    rep.value("witness", serde_json::to_value(w.to_json()).expect("witness"));
    Ok(rep)
}

pub fn fillrad(cfg: &RunConfig) -> Result<ExperimentReport, CliError> {
    let t = load_chain(cfg)?;
    let k = t.complex();
    let x = match &cfg.space {
        Some(p) => load_space(p)?,
        None => FiniteMetricSpace::from_points(k.vertices(), k.norm()),
    };
    let cycle: Vec<(Vec<usize>, i64)> =
        t.terms().iter().map(|(&p, &c)| (k.simplex((t.dim(), p)).to_vec(), c)).collect();
    let f = filling_radius(&x, &cycle, cfg.grid.as_deref(), cfg.cap.unwrap_or(DEFAULT_SIMPLEX_CAP))?;
    let mut rep = ExperimentReport::new("fillrad");
    rep.input("dim", t.dim());
    rep.value("value", real(f.value));
    rep.value("coefficients", f.coefficients.clone().into());
    rep.value("grid_points", f.grid.len().into());
    Ok(rep)
}

pub fn hausdorff(cfg: &RunConfig) -> Result<ExperimentReport, CliError> {
    let x = load_space(need(&cfg.space, "space")?)?;
    let (a, b) = (need(&cfg.a, "a")?, need(&cfg.b, "b")?);
    let d = hausdorff_distance(a, b, &x)?;
    let mut rep = ExperimentReport::new("hausdorff");
    rep.input("a", a);
    rep.input("b", b);
    rep.value("distance", real(d));
    Ok(rep)
}

pub fn gh(cfg: &RunConfig) -> Result<ExperimentReport, CliError> {
    let x = load_space(need(&cfg.space, "space")?)?;
    let y = load_space(need(&cfg.other, "other")?)?;
    let mode = if cfg.exact == Some(false) { GhMode::LowerBound } else { GhMode::Exact };
    let d = gh_distance(&x, &y, mode)?;
    let mut rep = ExperimentReport::new("gh");
    rep.input("mode", if mode == GhMode::Exact { "exact" } else { "lower_bound" });
    rep.value("distance", real(d));
    Ok(rep)
}

pub fn cover(cfg: &RunConfig) -> Result<ExperimentReport, CliError> {
    let x = load_space(need(&cfg.space, "space")?)?;
    let grid = need(&cfg.grid, "grid")?;
    let mode = if cfg.exact == Some(true) { CoverMode::Exact } else { CoverMode::Greedy };
    let mut rep = ExperimentReport::new("cover");
    rep.input("mode", mode);
    let mut s = Series::new("covering_number", "eps");
    for &eps in grid {
        s.push(eps, covering_number(&x, eps, mode)? as f64, None, None);
    }
    rep.series.push(s);
    Ok(rep)
}

pub fn measure(cfg: &RunConfig) -> Result<ExperimentReport, CliError> {
    let x = load_space(need(&cfg.space, "space")?)?;
    let mu = match &cfg.measure {
        Some(p) => read_as(p)?,
        None => WeightedMeasure::uniform(x.len(), 1.0)?,
    };
    let z = cfg.point.unwrap_or(0);
    let m = cfg.m.unwrap_or(2);
    let grid = need(&cfg.grid, "grid")?;
    let mut rep = ExperimentReport::new("measure");
    rep.input("point", z);
    rep.input("m", m);
    if z >= x.len() || mu.len() != x.len() {
        return Err(CliError::Usage("point index or measure size out of range".into()));
    }
    let mut s = Series::new("ball_measure", "r");
    for &r in grid {
        s.push(r, ball_measure(&mu, &x, z, r), None, None);
    }
    rep.series.push(s);
    let mut desc = grid.clone();
    desc.sort_by(|a, b| b.total_cmp(a));
    let d = lower_density(&mu, &x, z, m, &desc)?;
    rep.value("lower_density", real(d.value));
    rep.value("lower_density_radius", real(d.radius));
    Ok(rep)
}

/// `<out>/<name>.<ext>` when an output directory is set.
pub fn target(cfg: &RunConfig, name: &str, ext: &str) -> Option<PathBuf> {
    cfg.out.as_deref().map(|d: &Path| d.join(format!("{name}.{ext}")))
}
