//! Versioned JSON reports and flat CSV tables.

use std::collections::{BTreeMap, BTreeSet};

use logrank_core::{Error, ErrorClass};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: &str = "logrank-report";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    NotFound,
    InvariantViolation,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::NotFound => 2,
            Status::InvariantViolation => 3,
        }
    }

    pub fn of_error(e: &Error) -> Status {
        match e.class() {
            ErrorClass::Invariant => Status::InvariantViolation,
            _ => Status::NotFound,
        }
    }

    /// The worse of two statuses.
    pub fn max(self, other: Status) -> Status {
        let rank = |s: Status| match s {
            Status::Ok => 0,
            Status::NotFound => 1,
            Status::InvariantViolation => 2,
        };
        if rank(other) > rank(self) {
            other
        } else {
            self
        }
    }
}

/// A named runtime check and its outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Assertion {
    pub fn new(name: impl Into<String>, passed: bool) -> Self {
        Assertion {
            name: name.into(),
            passed,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub version: u32,
    pub command: String,
    pub seed: u64,
    pub config: Value,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub result: Value,
    /// Flat per-instance records; the CSV form of the report.
    pub rows: Vec<BTreeMap<String, Value>>,
    pub assertions: Vec<Assertion>,
    /// Wall-clock milliseconds per stage; only present when requested,
    /// since it breaks byte-identical reruns.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn new(command: &str, seed: u64, config: Value) -> Self {
        Report {
            schema: SCHEMA.to_string(),
            version: SCHEMA_VERSION,
            command: command.to_string(),
            seed,
            config,
            status: Status::Ok,
            error: None,
            result: Value::Null,
            rows: Vec::new(),
            assertions: Vec::new(),
            timings_ms: None,
        }
    }

    pub fn assert(&mut self, a: Assertion) {
        if !a.passed {
            self.status = self.status.max(Status::InvariantViolation);
        }
        self.assertions.push(a);
    }

    pub fn fail(&mut self, e: &Error) {
        self.status = self.status.max(Status::of_error(e));
        self.error = Some(e.to_string());
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        let r: Report = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        if r.schema != SCHEMA {
            return Err(Error::Parse {
                line: 1,
                msg: format!("unknown schema {:?}", r.schema),
            });
        }
        Ok(r)
    }

    /// Rows as CSV. Columns are the union of row keys in sorted order;
    /// missing cells are empty.
    pub fn to_csv(&self) -> String {
        let columns: BTreeSet<&String> = self.rows.iter().flat_map(|r| r.keys()).collect();
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(columns.iter().map(|c| c.as_str()))
            .expect("in-memory write");
        for row in &self.rows {
            w.write_record(
                columns
                    .iter()
                    .map(|c| row.get(*c).map(cell).unwrap_or_default()),
            )
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }
}

/// Text of one CSV cell: bare strings, JSON for everything else.
pub fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Parses a CSV table back into string cells keyed by header.
pub fn parse_csv(text: &str) -> Result<Vec<BTreeMap<String, String>>, Error> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let headers = r
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            msg: e.to_string(),
        })?
        .clone();
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse {
            line: i + 2,
            msg: e.to_string(),
        })?;
        out.push(
            headers
                .iter()
                .zip(rec.iter())
                .filter(|(_, v)| !v.is_empty())
                .map(|(h, v)| (h.to_string(), v.to_string()))
                .collect(),
        );
    }
    Ok(out)
}
