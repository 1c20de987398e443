//! Machine-readable run reports: CSV tables and one JSON summary per run.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};

/// Scientific notation with 17 significant digits.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Version string recorded in every summary.
pub fn version_string() -> String {
    format!("v{}", env!("CARGO_PKG_VERSION"))
}

/// One pass/fail line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `value <= tolerance`.
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance, pass: value <= tolerance }
    }

    /// Passes when `value >= tolerance`.
    pub fn at_least(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance, pass: value >= tolerance }
    }
}

/// A criterion with its headline value and any supporting checks. It passes
/// only when every check does.
#[derive(Debug, Clone, PartialEq)]
pub struct Criterion {
    pub id: String,
    pub title: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl Criterion {
    /// The first check is the headline.
    pub fn from_checks(id: impl Into<String>, title: impl Into<String>, checks: Vec<Check>) -> Self {
        let head = checks.first().cloned().unwrap_or(Check { name: String::new(), value: f64::NAN, tolerance: f64::NAN, pass: false });
        Self {
            id: id.into(),
            title: title.into(),
            value: head.value,
            tolerance: head.tolerance,
            pass: !checks.is_empty() && checks.iter().all(|c| c.pass),
            checks,
            notes: Vec::new(),
        }
    }

    pub fn failed(id: impl Into<String>, title: impl Into<String>, error: &Error) -> Self {
        Self {
            id: id.into(),
            title: title.into(),
            value: f64::NAN,
            tolerance: f64::NAN,
            pass: false,
            checks: Vec::new(),
            notes: vec![format!("error: {error}")],
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn status_line(&self) -> String {
        format!(
            "criterion {:>2} {} {} value={} tolerance={}",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.title,
            fmt17(self.value),
            fmt17(self.tolerance)
        )
    }
}

/// Number with 17 significant digits; non-finite values become `null`.
pub fn number17(v: f64) -> Value {
    if v.is_finite() {
        Value::Number(Number::from_str(&fmt17(v)).expect("formatted float parses"))
    } else {
        Value::Null
    }
}

/// Rewrites every non-integer number in `value` with 17 significant digits.
pub fn json17(value: Value) -> Value {
    match value {
        Value::Number(n) if n.is_u64() || n.is_i64() => Value::Number(n),
        Value::Number(n) => number17(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(a) => Value::Array(a.into_iter().map(json17).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, json17(v))).collect()),
        other => other,
    }
}

fn criterion_json(c: &Criterion) -> Value {
    let mut m = Map::new();
    m.insert("id".into(), Value::String(c.id.clone()));
    m.insert("title".into(), Value::String(c.title.clone()));
    m.insert("value".into(), number17(c.value));
    m.insert("tolerance".into(), number17(c.tolerance));
    m.insert("pass".into(), Value::Bool(c.pass));
    let checks = c
        .checks
        .iter()
        .map(|k| {
            let mut o = Map::new();
            o.insert("name".into(), Value::String(k.name.clone()));
            o.insert("value".into(), number17(k.value));
            o.insert("tolerance".into(), number17(k.tolerance));
            o.insert("pass".into(), Value::Bool(k.pass));
            Value::Object(o)
        })
        .collect();
    m.insert("checks".into(), Value::Array(checks));
    m.insert("notes".into(), Value::Array(c.notes.iter().cloned().map(Value::String).collect()));
    Value::Object(m)
}

/// `{scenario, version, criteria: [...]}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub scenario: String,
    pub command: String,
    pub version: String,
    pub criteria: Vec<Criterion>,
}

impl Summary {
    pub fn new(scenario: impl Into<String>, command: impl Into<String>, criteria: Vec<Criterion>) -> Self {
        Self { scenario: scenario.into(), command: command.into(), version: version_string(), criteria }
    }

    pub fn all_pass(&self) -> bool {
        self.criteria.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Criterion> {
        self.criteria.iter().filter(|c| !c.pass).collect()
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("scenario".into(), Value::String(self.scenario.clone()));
        m.insert("command".into(), Value::String(self.command.clone()));
        m.insert("version".into(), Value::String(self.version.clone()));
        m.insert("all_pass".into(), Value::Bool(self.all_pass()));
        m.insert("criteria".into(), Value::Array(self.criteria.iter().map(criterion_json).collect()));
        Value::Object(m)
    }

    /// JSON list of failing criterion ids and values.
    pub fn failure_json(&self) -> Value {
        Value::Array(self.failures().into_iter().map(criterion_json).collect())
    }
}

/// Output directory with helpers for the files of one run.
#[derive(Debug, Clone)]
pub struct OutputDir {
    root: PathBuf,
}

impl OutputDir {
    pub fn create(root: impl AsRef<Path>) -> Result<Self> {
        let root = root.as_ref().to_path_buf();
        fs::create_dir_all(&root)?;
        Ok(Self { root })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn writer(&self, name: &str) -> Result<fs::File> {
        Ok(fs::File::create(self.path(name))?)
    }

    pub fn write_json(&self, name: &str, value: &Value) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        fs::write(self.path(name), text)?;
        Ok(())
    }

    /// Writes a CSV from a header and string rows.
    pub fn write_table(&self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
        let mut w = csv::Writer::from_writer(self.writer(name)?);
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }

    /// `<command>_summary.json` plus `<command>_criteria.csv`.
    pub fn write_summary(&self, summary: &Summary) -> Result<()> {
        self.write_json(&format!("{}_summary.json", summary.command), &summary.to_json())?;
        let rows: Vec<Vec<String>> = summary
            .criteria
            .iter()
            .map(|c| vec![c.id.clone(), c.title.clone(), fmt17(c.value), fmt17(c.tolerance), c.pass.to_string()])
            .collect();
        self.write_table(&format!("{}_criteria.csv", summary.command), &["id", "title", "value", "tolerance", "pass"], &rows)
    }
}
