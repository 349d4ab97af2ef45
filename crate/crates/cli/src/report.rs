use std::fmt::Write as _;
use std::time::Duration;

use facering::field::ExtField;
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct FieldInfo {
    pub characteristic: u32,
    pub degree: u32,
    pub modulus: String,
}

impl FieldInfo {
    pub fn of(f: &ExtField) -> Self {
        FieldInfo { characteristic: f.characteristic(), degree: f.degree(), modulus: f.modulus_string() }
    }
}

/// Outcome of one check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub detail: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, pass: bool) -> Self {
        CheckResult { name: name.into(), pass, method: None, detail: Value::Null, witness: None }
    }

    pub fn detail(mut self, v: Value) -> Self {
        self.detail = v;
        self
    }

    pub fn method(mut self, m: impl Into<String>) -> Self {
        self.method = Some(m.into());
        self
    }

    /// Attaches the witness, kept only when the check failed.
    pub fn witness(mut self, w: Value) -> Self {
        if !self.pass {
            self.witness = Some(w);
        }
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub check: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub version: &'static str,
    pub command: Vec<String>,
    pub field: FieldInfo,
    pub seeds: Vec<u64>,
    pub pass: bool,
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<Timing>>,
}

impl Report {
    pub fn new(command: Vec<String>, field: FieldInfo, seeds: Vec<u64>, checks: Vec<CheckResult>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Report {
            schema: SCHEMA_VERSION,
            version: env!("CARGO_PKG_VERSION"),
            command,
            field,
            seeds,
            pass,
            checks,
            timings: None,
        }
    }

    pub fn with_timings(mut self, t: Vec<(String, Duration)>) -> Self {
        self.timings = Some(t.into_iter().map(|(check, d)| Timing { check, seconds: d.as_secs_f64() }).collect());
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is serialisable");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "facering {} (schema {})", self.version, self.schema);
        let _ = writeln!(s, "command: {}", self.command.join(" "));
        let _ = writeln!(
            s,
            "field: GF({}^{}) mod {}",
            self.field.characteristic, self.field.degree, self.field.modulus
        );
        let seeds: Vec<String> = self.seeds.iter().map(u64::to_string).collect();
        let _ = writeln!(s, "seeds: {}", seeds.join(","));
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            let _ = write!(s, "{tag} {}", c.name);
            if let Some(m) = &c.method {
                let _ = write!(s, " [{m}]");
            }
            if !c.detail.is_null() {
                let _ = write!(s, " {}", c.detail);
            }
            if let Some(w) = &c.witness {
                let _ = write!(s, "\n    witness: {w}");
            }
            s.push('\n');
        }
        if let Some(ts) = &self.timings {
            for t in ts {
                let _ = writeln!(s, "time {} {:.3}s", t.check, t.seconds);
            }
        }
        let passed = self.checks.iter().filter(|c| c.pass).count();
        let _ = writeln!(s, "{}: {passed}/{} checks passed", if self.pass { "ok" } else { "failed" }, self.checks.len());
        s
    }
}
