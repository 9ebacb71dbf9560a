//! Report records and their JSON/CSV forms.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use hardy_core::report::Verdict;
use serde::Serialize;
use serde_json::Value;

use crate::config::SuiteConfig;

pub const SUITE_REPORT_SCHEMA: u32 = 1;

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// A closed form stated for the operator or example.
    ClosedForm,
    /// Frozen output of the reference oracle.
    Oracle,
    /// Follows from a definition or the filter semantics.
    Definition,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Expected {
    pub name: String,
    pub value: Value,
    pub source: Source,
}

impl Expected {
    pub fn new(name: &str, value: impl Into<Value>, source: Source) -> Self {
        Expected {
            name: name.to_string(),
            value: value.into(),
            source,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimRecord {
    pub id: String,
    pub topic: String,
    pub statement: String,
    pub inputs: Value,
    pub values: Value,
    pub expected: Vec<Expected>,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub counts: BTreeMap<String, usize>,
    pub failed: Vec<String>,
}

impl Summary {
    pub fn of(records: &[ClaimRecord]) -> Summary {
        let mut s = Summary {
            total: records.len(),
            ..Summary::default()
        };
        for r in records {
            *s.counts.entry(r.verdict.label().to_string()).or_default() += 1;
            if !r.verdict.is_ok() {
                s.failed.push(r.id.clone());
            }
        }
        s
    }
}

/// Non-reproducible facts about a run, kept apart from the comparable body.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metadata {
    pub generated_at: String,
    pub version: &'static str,
}

impl Metadata {
    pub fn now() -> Metadata {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        Metadata {
            generated_at: format!("unix:{secs}"),
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub config: SuiteConfig,
    pub summary: Summary,
    pub claims: Vec<ClaimRecord>,
    pub metadata: Metadata,
}

impl SuiteReport {
    pub fn new(config: SuiteConfig, claims: Vec<ClaimRecord>) -> SuiteReport {
        SuiteReport {
            schema: SUITE_REPORT_SCHEMA,
            config,
            summary: Summary::of(&claims),
            claims,
            metadata: Metadata::now(),
        }
    }

    /// No `FAIL` and no `INCONCLUSIVE`.
    pub fn all_ok(&self) -> bool {
        self.summary.failed.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    /// One row per claim; the metadata goes in a trailing comment.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,topic,verdict,detail\n");
        for r in &self.claims {
            let _ = writeln!(out, "{},{},{},{}", csv_field(&r.id), csv_field(&r.topic), r.verdict, csv_field(&r.detail));
        }
        let _ = writeln!(out, "# seed={} generated_at={}", self.config.seed, self.metadata.generated_at);
        out
    }
}

/// Quotes a field when it holds a separator, quote or newline.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// The report with `metadata` removed, for byte comparison.
pub fn comparable_json(text: &str) -> serde_json::Result<String> {
    let mut v: Value = serde_json::from_str(text)?;
    if let Value::Object(m) = &mut v {
        m.remove("metadata");
    }
    serde_json::to_string_pretty(&v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("a"), "a");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"x\""), "\"say \"\"x\"\"\"");
    }
}
