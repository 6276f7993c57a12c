//! Serializable command output. Exact rationals are written as decimal
//! numerator/denominator strings so documents are lossless and bit-stable.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::exact::{format_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalRecord {
    pub numerator: String,
    pub denominator: String,
}

impl RationalRecord {
    pub fn to_rational(&self) -> Option<Rational> {
        let n: BigInt = self.numerator.parse().ok()?;
        let d: BigInt = self.denominator.parse().ok()?;
        if d == BigInt::from(0) {
            return None;
        }
        Some(Rational::new(n, d))
    }
}

impl From<&Rational> for RationalRecord {
    fn from(x: &Rational) -> Self {
        Self {
            numerator: x.numer().to_string(),
            denominator: x.denom().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedResult {
    pub name: String,
    pub value: RationalRecord,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    /// Acceptance criterion number, 1 to 10.
    pub criterion: u8,
    pub name: String,
    /// What the expected value is taken from.
    pub reference: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputDocument {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub results: Vec<NamedResult>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckRecord>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub data: Value,
    #[serde(default)]
    pub notes: Vec<String>,
    /// Seconds since the Unix epoch; omitted in reproducible mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<u64>,
}

impl OutputDocument {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            inputs: BTreeMap::new(),
            results: Vec::new(),
            checks: Vec::new(),
            data: Value::Null,
            notes: Vec::new(),
            generated_at: None,
        }
    }

    pub fn input(mut self, key: &str, value: impl Into<String>) -> Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    pub fn push_result(&mut self, name: impl Into<String>, value: &Rational, provenance: impl Into<String>) {
        self.results.push(NamedResult {
            name: name.into(),
            value: value.into(),
            provenance: provenance.into(),
        });
    }

    pub fn result(&self, name: &str) -> Option<Rational> {
        self.results.iter().find(|r| r.name == name)?.value.to_rational()
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.command);
        for (k, v) in &self.inputs {
            let _ = writeln!(out, "  {k}: {v}");
        }
        if !self.results.is_empty() {
            let width = self.results.iter().map(|r| r.name.chars().count()).max().unwrap_or(0);
            out.push('\n');
            for r in &self.results {
                let v = r.value.to_rational().map(|x| format_rational(&x)).unwrap_or_default();
                let pad = width - r.name.chars().count();
                let _ = writeln!(out, "{}{} = {v}    [{}]", r.name, " ".repeat(pad), r.provenance);
            }
        }
        if let Value::Object(map) = &self.data {
            out.push('\n');
            for (k, v) in map {
                let _ = writeln!(out, "{k}: {v}");
            }
        }
        if !self.checks.is_empty() {
            out.push('\n');
            for c in &self.checks {
                let _ = writeln!(
                    out,
                    "{} [{}] {}: expected {}, actual {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.criterion,
                    c.name,
                    c.expected,
                    c.actual
                );
            }
            let passed = self.checks.iter().filter(|c| c.passed).count();
            let _ = writeln!(out, "{passed}/{} checks passed", self.checks.len());
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        if let Some(t) = self.generated_at {
            let _ = writeln!(out, "generated_at: {t}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn rationals_round_trip_through_json() {
        let mut doc = OutputDocument::new("test").input("k", "v");
        let values = [rat(-35, 24), rat(101449217, 1440), rat(0, 1), rat(1, 907200)];
        for (i, v) in values.iter().enumerate() {
            doc.push_result(format!("x{i}"), v, "unit");
        }
        let json = doc.to_json();
        assert!(!json.contains('.'), "no floats: {json}");
        let back: OutputDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(back, doc);
        for (i, v) in values.iter().enumerate() {
            assert_eq!(&back.result(&format!("x{i}")).unwrap(), v);
        }
        assert_eq!(doc.results[0].value.numerator, "-35");
        assert_eq!(doc.results[0].value.denominator, "24");
    }

    #[test]
    fn optional_fields_are_omitted() {
        let json = OutputDocument::new("x").to_json();
        assert!(!json.contains("generated_at"));
        assert!(!json.contains("checks"));
        assert!(!json.contains("data"));
    }

    #[test]
    fn bad_records_do_not_parse() {
        let r = RationalRecord {
            numerator: "1".into(),
            denominator: "0".into(),
        };
        assert!(r.to_rational().is_none());
    }
}
