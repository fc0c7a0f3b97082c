//! JSON run reports.
//!
//! Field order is fixed: `command`, `parameters`, `results`, `wall_time_ms`,
//! `artifact_version`. Floating-point values are written with 17
//! significant digits; non-finite values become `null`.

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// A float serialized with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return serializer.serialize_none();
        }
        let raw =
            RawValue::from_string(format!("{:.16e}", self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(serializer)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Param {
    Int(u64),
    Float(f64),
    Text(String),
    Flag(bool),
}

impl Serialize for Param {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Param::Int(v) => serializer.serialize_u64(*v),
            Param::Float(v) => Num(*v).serialize(serializer),
            Param::Text(v) => serializer.serialize_str(v),
            Param::Flag(v) => serializer.serialize_bool(*v),
        }
    }
}

impl From<usize> for Param {
    fn from(v: usize) -> Self {
        Param::Int(v as u64)
    }
}

impl From<u64> for Param {
    fn from(v: u64) -> Self {
        Param::Int(v)
    }
}

impl From<f64> for Param {
    fn from(v: f64) -> Self {
        Param::Float(v)
    }
}

impl From<&str> for Param {
    fn from(v: &str) -> Self {
        Param::Text(v.to_owned())
    }
}

impl From<String> for Param {
    fn from(v: String) -> Self {
        Param::Text(v)
    }
}

impl From<bool> for Param {
    fn from(v: bool) -> Self {
        Param::Flag(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub value: Num,
    pub threshold: Num,
    pub pass: bool,
}

impl Check {
    /// Passes when `value <= threshold`.
    pub fn at_most(value: f64, threshold: f64) -> Self {
        Self {
            value: Num(value),
            threshold: Num(threshold),
            pass: value <= threshold,
        }
    }
}

struct OrderedMap<'a, V>(&'a [(String, V)]);

impl<V: Serialize> Serialize for OrderedMap<'_, V> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub command: String,
    pub parameters: Vec<(String, Param)>,
    pub results: Vec<(String, Check)>,
    pub wall_time_ms: u64,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_owned(),
            parameters: Vec::new(),
            results: Vec::new(),
            wall_time_ms: 0,
        }
    }

    pub fn param(&mut self, name: &str, value: impl Into<Param>) -> &mut Self {
        self.parameters.push((name.to_owned(), value.into()));
        self
    }

    pub fn check(&mut self, name: impl Into<String>, check: Check) -> &mut Self {
        self.results.push((name.into(), check));
        self
    }

    pub fn passed(&self) -> bool {
        self.results.iter().all(|(_, c)| c.pass)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &str> {
        self.results
            .iter()
            .filter(|(_, c)| !c.pass)
            .map(|(n, _)| n.as_str())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

impl Serialize for RunReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("RunReport", 5)?;
        s.serialize_field("command", &self.command)?;
        s.serialize_field("parameters", &OrderedMap(&self.parameters))?;
        s.serialize_field("results", &OrderedMap(&self.results))?;
        s.serialize_field("wall_time_ms", &self.wall_time_ms)?;
        s.serialize_field("artifact_version", ARTIFACT_VERSION)?;
        s.end()
    }
}
