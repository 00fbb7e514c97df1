//! Reports: per-stage records, flat facts for `[expect]`, JSON and text output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use lechkit_core::bounds::Verdict;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StageStatus {
    /// Ran to completion; its verdicts may still be negative.
    Ok,
    /// Not run: deselected or a prerequisite stage did not complete.
    Skipped,
    /// A hypothesis of the stage fails, so it emits no verdicts.
    Refused,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub name: String,
    pub status: StageStatus,
    pub reason: Option<String>,
    pub verdicts: Vec<VerdictRecord>,
    pub data: Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictKind {
    /// A consequence of a theorem whose hypotheses were checked; a failure
    /// means a bug or a wrong case file.
    Theorem,
    /// A property of the case that may legitimately be false.
    Property,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub name: String,
    pub kind: VerdictKind,
    pub pass: bool,
    pub lhs: String,
    pub rhs: String,
}

impl VerdictRecord {
    pub fn theorem(v: Verdict) -> Self {
        VerdictRecord::with_kind(v, VerdictKind::Theorem)
    }

    pub fn property(v: Verdict) -> Self {
        VerdictRecord::with_kind(v, VerdictKind::Property)
    }

    fn with_kind(v: Verdict, kind: VerdictKind) -> Self {
        VerdictRecord {
            name: v.name,
            kind,
            pass: v.pass,
            lhs: v.lhs,
            rhs: v.rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectationCheck {
    pub key: String,
    pub expected: String,
    pub actual: Option<String>,
    pub matched: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub case: String,
    pub description: Option<String>,
    pub field: String,
    pub stages: Vec<Stage>,
    pub facts: BTreeMap<String, String>,
    pub expectations: Vec<ExpectationCheck>,
    /// Every theorem verdict holds and every expectation matched.
    pub pass: bool,
    /// Wall-clock time per stage; kept out of JSON so output is reproducible.
    #[serde(skip)]
    pub timings: Vec<(String, Duration)>,
}

impl Report {
    pub fn stage(&self, name: &str) -> Option<&Stage> {
        self.stages.iter().find(|s| s.name == name)
    }

    pub fn fact(&self, key: &str) -> Option<&str> {
        self.facts.get(key).map(String::as_str)
    }

    pub fn verdict(&self, stage: &str, name: &str) -> Option<&VerdictRecord> {
        self.stage(stage)?.verdicts.iter().find(|v| v.name == name)
    }

    pub fn expectations_met(&self) -> bool {
        self.expectations.iter().all(|e| e.matched)
    }

    pub fn theorems_hold(&self) -> bool {
        self.stages
            .iter()
            .flat_map(|s| &s.verdicts)
            .all(|v| v.kind == VerdictKind::Property || v.pass)
    }

    /// JSON with sorted keys (the `serde_json` map is ordered) and a
    /// trailing newline.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self, timings: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "case {} over {}", self.case, self.field);
        if let Some(d) = &self.description {
            let _ = writeln!(out, "  {d}");
        }
        let name_width = self
            .stages
            .iter()
            .flat_map(|s| s.verdicts.iter().map(|v| v.name.len()))
            .max()
            .unwrap_or(0);
        for s in &self.stages {
            let status = match s.status {
                StageStatus::Ok => "ok",
                StageStatus::Skipped => "skipped",
                StageStatus::Refused => "refused",
            };
            let _ = write!(out, "[{}] {status}", s.name);
            if let Some(r) = &s.reason {
                let _ = write!(out, ": {r}");
            }
            if timings {
                if let Some((_, t)) = self.timings.iter().find(|(n, _)| *n == s.name) {
                    let _ = write!(out, " ({:.3}s)", t.as_secs_f64());
                }
            }
            out.push('\n');
            for v in &s.verdicts {
                let _ = writeln!(
                    out,
                    "  {:<5} {:<name_width$}  {}  vs  {}",
                    match (v.kind, v.pass) {
                        (_, true) => "PASS",
                        (VerdictKind::Theorem, false) => "FAIL",
                        (VerdictKind::Property, false) => "no",
                    },
                    v.name,
                    v.lhs,
                    v.rhs
                );
            }
        }
        if !self.expectations.is_empty() {
            let _ = writeln!(out, "[expect]");
            for e in &self.expectations {
                let _ = writeln!(
                    out,
                    "  {:<5} {} = {} (got {})",
                    if e.matched { "ok" } else { "MISS" },
                    e.key,
                    e.expected,
                    e.actual.as_deref().unwrap_or("nothing")
                );
            }
        }
        let _ = writeln!(out, "overall: {}", if self.pass { "pass" } else { "FAIL" });
        out
    }
}
