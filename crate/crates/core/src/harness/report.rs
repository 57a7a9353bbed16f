use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::exact::{parse_real, rational_string, real_to_string, round_sig};

/// Significant digits of every float in an emitted report.
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    /// Fail dominates inconclusive, which dominates pass.
    pub fn combine(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }

    pub fn from_pass(pass: bool) -> Verdict {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// A float that serializes rounded to [`SIGNIFICANT_DIGITS`], with
/// non-finite values written as the strings `inf`, `-inf`, `nan`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(round_sig(self.0, SIGNIFICANT_DIGITS))
        } else if self.0.is_nan() {
            s.serialize_str("nan")
        } else {
            s.serialize_str(&real_to_string(self.0))
        }
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        match Value::deserialize(d)? {
            Value::Number(n) => n
                .as_f64()
                .map(Real)
                .ok_or_else(|| D::Error::custom("bad number")),
            Value::String(s) if s == "nan" => Ok(Real(f64::NAN)),
            Value::String(s) => parse_real(&s)
                .map(Real)
                .ok_or_else(|| D::Error::custom(format!("bad real `{s}`"))),
            other => Err(D::Error::custom(format!("expected a real, got {other}"))),
        }
    }
}

/// JSON value of a float, formatted like [`Real`].
pub fn real(x: f64) -> Value {
    serde_json::to_value(Real(x)).expect("reals serialize")
}

/// JSON value of an exact rational as `"p/q"`.
pub fn exact(q: &BigRational) -> Value {
    Value::String(rational_string(q))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: Real,
    pub measured: Real,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<Real>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
}

/// One measured curve over a grid, with the bound it is checked against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    /// What the grid coordinate is (`s`, `r`, `eps`, `n`, ...).
    pub x: String,
    pub points: Vec<Point>,
}

impl Series {
    pub fn new(name: impl Into<String>, x: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            x: x.into(),
            points: Vec::new(),
        }
    }

    pub fn push(&mut self, x: f64, measured: f64, bound: Option<f64>, pass: Option<bool>) {
        self.points.push(Point {
            x: Real(x),
            measured: Real(measured),
            bound: bound.map(Real),
            pass,
        });
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubCheck {
    pub name: String,
    pub pass: bool,
    /// Tolerance used, `0` for exact comparisons.
    pub tolerance: Real,
    pub detail: String,
}

/// Self-contained outcome of one check: inputs, measured and bound
/// series, scalar values, sub-check outcomes, tolerances and verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub check: String,
    pub inputs: BTreeMap<String, Value>,
    pub series: Vec<Series>,
    pub values: BTreeMap<String, Value>,
    pub subchecks: Vec<SubCheck>,
    pub tolerances: BTreeMap<String, Value>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl ExperimentReport {
    pub fn new(check: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            inputs: BTreeMap::new(),
            series: Vec::new(),
            values: BTreeMap::new(),
            subchecks: Vec::new(),
            tolerances: BTreeMap::new(),
            verdict: Verdict::Pass,
            notes: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, v: impl Serialize) {
        self.inputs.insert(
            key.into(),
            serde_json::to_value(v).expect("serializable input"),
        );
    }

    pub fn value(&mut self, key: &str, v: Value) {
        self.values.insert(key.into(), v);
    }

    pub fn tolerance(&mut self, key: &str, tol: f64) {
        self.tolerances.insert(key.into(), real(tol));
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn subcheck(&mut self, name: &str, pass: bool, tolerance: f64, detail: impl Into<String>) {
        self.subchecks.push(SubCheck {
            name: name.into(),
            pass,
            tolerance: Real(tolerance),
            detail: detail.into(),
        });
    }

    /// Verdict from the sub-checks: pass iff all pass.
    pub fn settle(&mut self) {
        self.verdict = Verdict::from_pass(self.subchecks.iter().all(|c| c.pass));
    }

    /// Canonical JSON: sorted keys, two-space indentation, trailing newline.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("reports serialize");
        let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// One row per grid point of every series.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,series,x_name,x,measured,bound,pass\n");
        let cell = |v: Value| match v {
            Value::String(s) => s,
            other => other.to_string(),
        };
        for s in &self.series {
            for p in &s.points {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    self.check,
                    s.name,
                    s.x,
                    cell(real(p.x.0)),
                    cell(real(p.measured.0)),
                    p.bound.map(|b| cell(real(b.0))).unwrap_or_default(),
                    p.pass.map(|b| b.to_string()).unwrap_or_default()
                );
            }
        }
        out
    }

    pub fn csv_rows(&self) -> usize {
        self.series.iter().map(|s| s.points.len()).sum()
    }

    /// One report from labelled parts: series, values and sub-checks are
    /// prefixed `label/`, tolerances and notes are merged, and the verdict
    /// is the combination of the parts' verdicts.
    pub fn combine(check: impl Into<String>, parts: Vec<(String, ExperimentReport)>) -> Self {
        let mut out = Self::new(check);
        out.input(
            "parts",
            parts.iter().map(|(l, _)| l.clone()).collect::<Vec<_>>(),
        );
        for (label, part) in parts {
            out.verdict = out.verdict.combine(part.verdict);
            for (k, v) in part.inputs {
                out.inputs.insert(format!("{label}/{k}"), v);
            }
            for mut s in part.series {
                s.name = format!("{label}/{}", s.name);
                out.series.push(s);
            }
            for (k, v) in part.values {
                out.values.insert(format!("{label}/{k}"), v);
            }
            for mut c in part.subchecks {
                c.name = format!("{label}/{}", c.name);
                out.subchecks.push(c);
            }
            out.tolerances.extend(part.tolerances);
            for n in part.notes {
                if !out.notes.contains(&n) {
                    out.notes.push(n);
                }
            }
        }
        out
    }
}
