//! Run configuration: `key=value` files merged with command-line flags.

use std::path::{Path, PathBuf};

use gmtlab::flatnorm::SolverChoice;
use gmtlab::generators::Family;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Every setting a run can take. Serialized (minus the output directory,
/// which is a location rather than an input) into each artifact's
/// provenance block.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunConfig {
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mesh: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub symbols: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ns: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rounds: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instances: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complex: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ambient: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub space: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub other: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverChoice>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
}

/// Accepted keys, in the order used to print regeneration commands.
pub const KEYS: &[&str] = &[
    "out", "format", "seed", "mesh", "grid", "n", "N", "m", "depth", "l", "alpha", "lambda", "r", "c", "k",
    "family", "ns", "rounds", "cap", "instances", "complex", "chain", "ambient", "space", "other", "measure",
    "a", "b", "point", "exact", "solver", "ratio",
];

fn num<T: std::str::FromStr>(field: &str, v: &str) -> Result<T, CliError> {
    v.trim().parse().map_err(|_| CliError::Config {
        field: field.into(),
        msg: format!("cannot parse `{v}`"),
    })
}

fn list<T: std::str::FromStr>(field: &str, v: &str) -> Result<Vec<T>, CliError> {
    v.split(',').filter(|s| !s.trim().is_empty()).map(|s| num(field, s)).collect()
}

fn named<T: for<'de> Deserialize<'de>>(field: &str, v: &str) -> Result<T, CliError> {
    serde_json::from_value(serde_json::Value::String(v.trim().to_lowercase())).map_err(|_| CliError::Config {
        field: field.into(),
        msg: format!("unknown value `{v}`"),
    })
}

impl RunConfig {
    pub fn set(&mut self, key: &str, v: &str) -> Result<(), CliError> {
        let path = |v: &str| Some(v.trim().to_string());
        match key {
            "out" => self.out = Some(PathBuf::from(v.trim())),
            "format" => self.format = Some(named(key, v)?),
            "seed" => self.seed = num(key, v)?,
            "mesh" => self.mesh = Some(num(key, v)?),
            "grid" => self.grid = Some(list(key, v)?),
            "n" => self.n = Some(num(key, v)?),
            "N" => self.symbols = Some(num(key, v)?),
            "m" => self.m = Some(num(key, v)?),
            "depth" => self.depth = Some(num(key, v)?),
            "l" => self.l = Some(num(key, v)?),
            "alpha" => self.alpha = Some(num(key, v)?),
            "lambda" => self.lambda = Some(num(key, v)?),
            "r" => self.r = Some(num(key, v)?),
            "c" => self.c = Some(num(key, v)?),
            "k" => self.k = Some(num(key, v)?),
            "family" => self.family = Some(named(key, v)?),
            "ns" => self.ns = Some(list(key, v)?),
            "rounds" => self.rounds = Some(num(key, v)?),
            "cap" => self.cap = Some(num(key, v)?),
            "instances" => self.instances = Some(num(key, v)?),
            "complex" => self.complex = path(v),
            "chain" => self.chain = path(v),
            "ambient" => self.ambient = path(v),
            "space" => self.space = path(v),
            "other" => self.other = path(v),
            "measure" => self.measure = path(v),
            "a" => self.a = Some(list(key, v)?),
            "b" => self.b = Some(list(key, v)?),
            "point" => self.point = Some(num(key, v)?),
            "exact" => self.exact = Some(num(key, v)?),
            "solver" => self.solver = Some(named(key, v)?),
            "ratio" => self.ratio = Some(num(key, v)?),
            other => {
                return Err(CliError::Config {
                    field: other.into(),
                    msg: "unknown key".into(),
                })
            }
        }
        Ok(())
    }

    /// Apply a `key=value` file: blank lines and `#` comments are skipped.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| CliError::Config {
                field: format!("{}:{}", path.display(), i + 1),
                msg: "expected key=value".into(),
            })?;
            self.set(k.trim(), v)?;
        }
        Ok(())
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    /// Serialized form, as written to provenance blocks.
    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }

    /// Flags reproducing this configuration.
    pub fn flags(&self) -> Vec<String> {
        let v = self.to_value();
        let obj = v.as_object().expect("config is an object");
        let mut out = Vec::new();
        for key in KEYS {
            let Some(val) = obj.get(*key) else { continue };
            let text = match val {
                serde_json::Value::Array(xs) => xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push(format!("--{}", key.replace('_', "-")));
            out.push(text);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_and_bad_values_name_the_field() {
        let mut c = RunConfig::default();
        match c.set("meshh", "3") {
            Err(CliError::Config { field, .. }) => assert_eq!(field, "meshh"),
            other => panic!("{other:?}"),
        }
        match c.set("mesh", "x") {
            Err(CliError::Config { field, .. }) => assert_eq!(field, "mesh"),
            other => panic!("{other:?}"),
        }
        c.set("grid", "0.1, 0.2,0.4").unwrap();
        c.set("family", "Torus").unwrap();
        assert_eq!(c.grid, Some(vec![0.1, 0.2, 0.4]));
        assert_eq!(c.family, Some(Family::Torus));
    }

    #[test]
    fn flags_round_trip() {
        let mut c = RunConfig::default();
        c.set("N", "4").unwrap();
        c.set("grid", "0.5,1").unwrap();
        c.set("ratio", "0.25").unwrap();
        c.set("out", "somewhere").unwrap();
        let flags = c.flags();
        assert_eq!(flags, ["--seed", "0", "--grid", "0.5,1.0", "--N", "4", "--ratio", "0.25"]);
        let mut d = RunConfig::default();
        for pair in flags.chunks(2) {
            d.set(&pair[0][2..].replace('-', "_"), &pair[1]).unwrap();
        }
        assert_eq!(d.to_value(), c.to_value());
    }
}
