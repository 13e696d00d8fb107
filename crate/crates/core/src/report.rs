//! Line-delimited JSON report records.
//!
//! Each record is one JSON object on one line with keys in insertion order.
//! Reals are written with 17 significant digits (`{:.16e}`) so a report is a
//! pure function of its inputs and diffs cleanly; non-finite reals become
//! `null`.

use std::fmt::Write as _;

use crate::identities::{IdentityCheck, Trail};
use crate::projection::ExperimentReport;

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Int(i64),
    UInt(u64),
    Real(f64),
    Bool(bool),
    Str(String),
    List(Vec<Value>),
    Null,
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Real(x)
    }
}

impl From<u64> for Value {
    fn from(x: u64) -> Self {
        Value::UInt(x)
    }
}

impl From<usize> for Value {
    fn from(x: usize) -> Self {
        Value::UInt(x as u64)
    }
}

impl From<i64> for Value {
    fn from(x: i64) -> Self {
        Value::Int(x)
    }
}

impl From<bool> for Value {
    fn from(x: bool) -> Self {
        Value::Bool(x)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Str(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Str(s)
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(x: Option<T>) -> Self {
        x.map_or(Value::Null, Into::into)
    }
}

impl<T: Into<Value>> From<Vec<T>> for Value {
    fn from(xs: Vec<T>) -> Self {
        Value::List(xs.into_iter().map(Into::into).collect())
    }
}

pub fn format_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

impl Value {
    fn write(&self, out: &mut String) {
        match self {
            Value::Int(i) => write!(out, "{i}").unwrap(),
            Value::UInt(u) => write!(out, "{u}").unwrap(),
            Value::Real(x) => out.push_str(&format_real(*x)),
            Value::Bool(b) => write!(out, "{b}").unwrap(),
            Value::Str(s) => out.push_str(&serde_json::to_string(s).expect("string encoding")),
            Value::List(xs) => {
                out.push('[');
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    x.write(out);
                }
                out.push(']');
            }
            Value::Null => out.push_str("null"),
        }
    }
}

/// One report line. The first key is always `"record"`.
#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    fields: Vec<(String, Value)>,
}

impl Record {
    pub fn new(kind: &str) -> Self {
        Record { fields: vec![("record".to_string(), Value::from(kind))] }
    }

    pub fn field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.push((key.to_string(), value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn to_line(&self) -> String {
        let mut out = String::from("{");
        for (i, (k, v)) in self.fields.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&serde_json::to_string(k).expect("key encoding"));
            out.push(':');
            v.write(&mut out);
        }
        out.push('}');
        out
    }
}

impl From<&ExperimentReport> for Record {
    fn from(r: &ExperimentReport) -> Self {
        Record::new("experiment")
            .field("experiment", r.experiment.as_str())
            .field("seed", r.seed)
            .field("samples", r.samples)
            .field("workers", r.workers)
            .field("accepted", r.accepted)
            .field("degenerate", r.degenerate)
            .field("estimate", r.estimate)
            .field("stderr", r.stderr)
            .field("prediction", r.prediction)
            .field("prediction_stderr", r.prediction_stderr)
            .field("residual", r.residual)
    }
}

impl From<&IdentityCheck> for Record {
    fn from(c: &IdentityCheck) -> Self {
        let (method, stderr) = match c.trail {
            Trail::Exact => ("exact", 0.0),
            Trail::MonteCarlo { combined_stderr } => ("monte-carlo", combined_stderr),
        };
        Record::new("check")
            .field("name", c.name.as_str())
            .field("lhs", c.lhs)
            .field("rhs", c.rhs)
            .field("residual", c.residual)
            .field("tolerance", c.tolerance)
            .field("passed", c.passed)
            .field("method", method)
            .field("stderr", stderr)
    }
}

/// Joins records into newline-terminated report text.
pub fn render(records: &[Record]) -> String {
    records.iter().map(|r| r.to_line() + "\n").collect()
}
