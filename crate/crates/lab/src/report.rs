//! Report envelope, canonical JSON with 17 significant digits, determinism
//! hash, CSV projection and the matching reader.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::config::{Command, ExperimentConfig};
use crate::error::{ErrorRecord, LabError};

pub const SCHEMA: &str = "carleson-lab.report.v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Violation,
    Error,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Violation => 2,
            Status::Error => 1,
        }
    }
}

/// One audited threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema: String,
    pub command: Command,
    pub status: Status,
    pub config: Option<ExperimentConfig>,
    pub seed: Option<u64>,
    /// Seconds since the Unix epoch; excluded from the hash.
    pub timestamp: u64,
    /// SHA-256 of the report with `timestamp` and this field removed.
    pub determinism_hash: String,
    pub checks: Vec<Check>,
    pub payload: Value,
    pub error: Option<ErrorRecord>,
}

/// Writes every float as `d.dddddddddddddddde±x`.
struct SeventeenDigits;

impl serde_json::ser::Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{v:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, v as f64)
    }
}

/// Canonical JSON bytes of any serializable value.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<Vec<u8>, LabError> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SeventeenDigits);
    value.serialize(&mut ser)?;
    Ok(out)
}

fn hash_of(report: &Report) -> Result<String, LabError> {
    let mut copy = report.clone();
    copy.timestamp = 0;
    copy.determinism_hash = String::new();
    let digest = Sha256::digest(to_canonical_json(&copy)?);
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

fn now() -> u64 {
    std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

impl Report {
    pub fn new(
        command: Command,
        config: Option<ExperimentConfig>,
        checks: Vec<Check>,
        payload: Value,
        error: Option<ErrorRecord>,
    ) -> Result<Self, LabError> {
        let status = if error.is_some() {
            Status::Error
        } else if checks.iter().all(|c| c.passed) {
            Status::Ok
        } else {
            Status::Violation
        };
        let mut r = Report {
            schema: SCHEMA.into(),
            command,
            status,
            seed: config.as_ref().map(|c| c.seed),
            config,
            timestamp: now(),
            determinism_hash: String::new(),
            checks,
            payload,
            error,
        };
        r.determinism_hash = hash_of(&r)?;
        Ok(r)
    }

    /// Recompute the hash and compare with the stored one.
    pub fn verify_hash(&self) -> Result<bool, LabError> {
        Ok(hash_of(self)? == self.determinism_hash)
    }

    pub fn to_json(&self) -> Result<Vec<u8>, LabError> {
        let mut v = to_canonical_json(self)?;
        v.push(b'\n');
        Ok(v)
    }

    /// Flattened `path,value` rows of the whole report.
    pub fn to_csv(&self) -> Result<Vec<u8>, LabError> {
        // Go through the canonical text so numbers carry the same digits.
        let value: Value = serde_json::from_slice(&to_canonical_json(self)?)?;
        let mut rows = Vec::new();
        flatten("", &value, &mut rows);
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["path", "value"])?;
        for (path, v) in rows {
            w.write_record([path, v])?;
        }
        w.into_inner().map_err(|e| LabError::Io(e.into_error()))
    }

    /// Typed view of the payload.
    pub fn payload_as<T: serde::de::DeserializeOwned>(&self) -> Result<T, LabError> {
        Ok(serde_json::from_value(self.payload.clone())?)
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if !n.is_i64() && !n.is_u64() => format!("{x:.16e}"),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        _ => unreachable!("containers are flattened"),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&p, x, out);
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        _ => out.push((prefix.to_string(), scalar_text(v))),
    }
}

/// Parse a JSON report.
pub fn read_report(text: &str) -> Result<Report, LabError> {
    let r: Report = serde_json::from_str(text)?;
    if r.schema != SCHEMA {
        return Err(LabError::Report(format!("unknown schema {}", r.schema)));
    }
    Ok(r)
}

/// Parse a CSV report back into `(path, value)` rows.
pub fn read_csv_rows(text: &str) -> Result<Vec<(String, String)>, LabError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        if rec.len() != 2 {
            return Err(LabError::Report("csv rows must have two fields".into()));
        }
        out.push((rec[0].to_string(), rec[1].to_string()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits() {
        let s = String::from_utf8(to_canonical_json(&vec![0.1f64, 1.0, -2.5e-300]).unwrap()).unwrap();
        assert_eq!(s, "[1.0000000000000001e-1,1.0000000000000000e0,-2.5000000000000000e-300]");
        let back: Vec<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, vec![0.1, 1.0, -2.5e-300]);
    }
}
