//! Self-describing artifacts: every output carries the tool version, the
//! full configuration, a regeneration command and a SHA-256 of its
//! content, and lands on disk by atomic rename.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use gmtlab::harness::ExperimentReport;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::{Format, RunConfig};
use crate::error::CliError;

pub const TOOL: &str = "gmtlab";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn provenance(command: &str, cfg: &RunConfig, hash: &str) -> Value {
    let mut regen = vec![TOOL.to_string(), command.to_string()];
    regen.extend(cfg.flags());
    json!({
        "tool": TOOL,
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": cfg.to_value(),
        "regenerate": regen.join(" "),
        "content_sha256": hash,
    })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// Report with its provenance, in the requested format. The hash covers
/// the report body: its canonical JSON, or the CSV rows.
pub fn render_report(report: &ExperimentReport, command: &str, cfg: &RunConfig) -> (String, String) {
    match cfg.format() {
        Format::Json => {
            let body = report.to_json();
            let hash = sha256_hex(body.as_bytes());
            let mut v = serde_json::to_value(report).expect("reports serialize");
            v["provenance"] = provenance(command, cfg, &hash);
            (pretty(&v), hash)
        }
        Format::Csv => {
            let body = report.to_csv();
            let hash = sha256_hex(body.as_bytes());
            let p = provenance(command, cfg, &hash);
            let mut out = String::new();
            out.push_str(&format!("# {TOOL} {}\n", env!("CARGO_PKG_VERSION")));
            out.push_str(&format!("# verdict: {}\n", serde_json::to_value(report.verdict).expect("verdict")));
            out.push_str(&format!("# regenerate: {}\n", p["regenerate"].as_str().unwrap_or_default()));
            out.push_str(&format!("# config: {}\n", p["config"]));
            out.push_str(&format!("# content_sha256: {hash}\n"));
            out.push_str(&body);
            (out, hash)
        }
    }
}

/// Data artifact (complex, chain, space, ...) wrapped as
/// `{"data": ..., "provenance": ...}`.
pub fn render_data(data: &impl Serialize, command: &str, cfg: &RunConfig) -> (String, String) {
    let data = serde_json::to_value(data).expect("artifacts serialize");
    let hash = sha256_hex(pretty(&data).as_bytes());
    (pretty(&json!({ "data": data, "provenance": provenance(command, cfg, &hash) })), hash)
}

/// Write via a temporary file in the target directory and rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp: PathBuf = dir.join(format!(".{name}.tmp"));
    let mut f = fs::File::create(&tmp).map_err(|e| CliError::io(&tmp, e))?;
    f.write_all(contents.as_bytes()).map_err(|e| CliError::io(&tmp, e))?;
    f.sync_all().map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

/// Read a JSON input, unwrapping the `data` member of an artifact.
pub fn read_json(path: &str) -> Result<Value, CliError> {
    let p = Path::new(path);
    let text = fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.into(),
        msg: e.to_string(),
    })?;
    Ok(match v {
        Value::Object(mut o) if o.contains_key("data") && o.contains_key("provenance") => o.remove("data").expect("checked"),
        other => other,
    })
}

pub fn read_as<T: serde::de::DeserializeOwned>(path: &str) -> Result<T, CliError> {
    serde_json::from_value(read_json(path)?).map_err(|e| CliError::Parse {
        path: path.into(),
        msg: e.to_string(),
    })
}
