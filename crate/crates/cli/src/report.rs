//! Versioned `key = value` reports.
//!
//! Structured form:
//!
//! ```text
//! hypergroup-report 1
//! command = verify
//! table = Conj(S3)
//! check.associativity = pass
//! check.associativity.violation = 0.000000000000e0
//! status = pass
//! ```
//!
//! Keys are dot-separated identifiers and appear in insertion order; values
//! run to the end of the line. Floats are written as `{:.12e}`. Every
//! `check.<name>` key is `pass` or `fail`, and the final `status` line is
//! `fail` iff some check failed.

use std::fmt::{self, Display, Write as _};

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    entries: Vec<(String, String)>,
    failed: bool,
}

pub fn float(v: f64) -> String {
    format!("{:.12e}", v + 0.0)
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report {
            entries: Vec::new(),
            failed: false,
        };
        r.field("command", command);
        r
    }

    pub fn field(&mut self, key: impl Into<String>, value: impl Display) -> &mut Self {
        let value = value.to_string().replace('\n', " ");
        self.entries.push((key.into(), value));
        self
    }

    pub fn number(&mut self, key: impl Into<String>, value: f64) -> &mut Self {
        self.field(key, float(value))
    }

    pub fn list(&mut self, key: impl Into<String>, values: &[f64]) -> &mut Self {
        let joined = values
            .iter()
            .map(|v| float(*v))
            .collect::<Vec<_>>()
            .join(" ");
        self.field(key, joined)
    }

    /// Records a mathematical check; a failed check makes the run exit with 1.
    pub fn check(&mut self, name: &str, pass: bool) -> &mut Self {
        self.failed |= !pass;
        self.field(format!("check.{name}"), if pass { "pass" } else { "fail" })
    }

    pub fn check_value(&mut self, name: &str, value: f64, limit: f64) -> &mut Self {
        self.check(name, value <= limit);
        self.number(format!("check.{name}.value"), value)
    }

    pub fn failed(&self) -> bool {
        self.failed
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    fn status(&self) -> &'static str {
        if self.failed {
            "fail"
        } else {
            "pass"
        }
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Structured => {
                let _ = writeln!(out, "hypergroup-report {REPORT_VERSION}");
                for (k, v) in &self.entries {
                    let _ = writeln!(out, "{k} = {v}");
                }
                let _ = writeln!(out, "status = {}", self.status());
            }
            Format::Text => {
                let width = self
                    .entries
                    .iter()
                    .map(|(k, _)| k.len())
                    .max()
                    .unwrap_or(0)
                    .max(6);
                for (k, v) in &self.entries {
                    let _ = writeln!(out, "{k:<width$}  {v}");
                }
                let _ = writeln!(out, "{:<width$}  {}", "status", self.status());
            }
        }
        out
    }

    /// Parses the structured form back into key/value pairs.
    pub fn parse_structured(text: &str) -> Option<Vec<(String, String)>> {
        let mut lines = text.lines();
        if lines.next()? != format!("hypergroup-report {REPORT_VERSION}") {
            return None;
        }
        lines
            .map(|l| {
                l.split_once(" = ")
                    .map(|(k, v)| (k.to_string(), v.to_string()))
            })
            .collect()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Format::Text))
    }
}
