//! Machine-readable check reports: one record per executed check, a suite
//! runner that times each item, and JSON rendering for the CLI.

use std::time::Instant;

use serde::Serialize;

use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A resource bound was hit before the check could run; never counted
    /// as a failure.
    Skip,
}

/// One executed check. `law` states the property the check exercises;
/// `witness` carries counterexample or context data when present.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub instance: String,
    pub law: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub elapsed_ms: u64,
}

/// What a check body reports back to the runner.
#[derive(Debug, Clone)]
pub enum Outcome {
    Pass,
    PassWith(String),
    Fail(String),
    Skip(String),
}

/// A check waiting to run: a name, the law it tests, and the body.
pub struct CheckItem<'a> {
    pub check: &'static str,
    pub law: &'static str,
    pub body: Box<dyn Fn() -> Outcome + Send + Sync + 'a>,
}

impl<'a> CheckItem<'a> {
    pub fn new(
        check: &'static str,
        law: &'static str,
        body: impl Fn() -> Outcome + Send + Sync + 'a,
    ) -> Self {
        CheckItem {
            check,
            law,
            body: Box::new(body),
        }
    }
}

/// Run every item (in parallel when the feature is on), timing each one.
pub fn run_checks(instance: &str, items: Vec<CheckItem<'_>>) -> Vec<CheckReport> {
    par::map_collect(items, |item| {
        let start = Instant::now();
        let outcome = (item.body)();
        let elapsed_ms = start.elapsed().as_millis() as u64;
        let (status, witness) = match outcome {
            Outcome::Pass => (Status::Pass, None),
            Outcome::PassWith(w) => (Status::Pass, Some(w)),
            Outcome::Fail(w) => (Status::Fail, Some(w)),
            Outcome::Skip(w) => (Status::Skip, Some(w)),
        };
        CheckReport {
            check: item.check.to_string(),
            instance: instance.to_string(),
            law: item.law.to_string(),
            status,
            witness,
            elapsed_ms,
        }
    })
}

pub fn all_passed(reports: &[CheckReport]) -> bool {
    reports.iter().all(|r| r.status != Status::Fail)
}

pub fn failures(reports: &[CheckReport]) -> Vec<&CheckReport> {
    reports
        .iter()
        .filter(|r| r.status == Status::Fail)
        .collect()
}

pub fn skipped(reports: &[CheckReport]) -> Vec<&CheckReport> {
    reports
        .iter()
        .filter(|r| r.status == Status::Skip)
        .collect()
}

pub fn to_json(reports: &[CheckReport]) -> serde_json::Value {
    serde_json::json!({
        "checks": reports,
        "passed": all_passed(reports),
        "failures": failures(reports).len(),
        "skipped": skipped(reports).len(),
    })
}

/// One line per check, the human-readable companion to the JSON report.
pub fn render_lines(reports: &[CheckReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let tag = match r.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skip => "skip",
        };
        out.push_str(&format!(
            "{tag}  {}  [{}]  {} ms",
            r.check, r.instance, r.elapsed_ms
        ));
        if let Some(w) = &r.witness {
            out.push_str(&format!("  ({w})"));
        }
        out.push('\n');
    }
    out
}
