//! Record validation. Problems come back as a list; nothing here fails.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{CorpusRecord, Status};
use crate::alignment::{check_links, LinkProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum IssueKind {
    Link {
        problem: LinkProblem,
    },
    EmptyId,
    EmptyText {
        side: String,
    },
    /// The stored flag disagrees with what the links imply. The stored flag
    /// is kept.
    FlagMismatch {
        stored: bool,
        computed: bool,
    },
    IllegalTransition {
        from: Status,
        to: Status,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    pub severity: Severity,
    #[serde(flatten)]
    pub kind: IssueKind,
    pub message: String,
}

impl Issue {
    fn new(severity: Severity, kind: IssueKind, message: String) -> Self {
        Issue { severity, kind, message }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{s}: {}", self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("status cannot change from {from} to {to}")]
pub struct TransitionError {
    pub from: Status,
    pub to: Status,
}

/// Only draft→reviewed and reviewed→confirmed are allowed. Staying put is
/// not a transition.
pub fn check_transition(from: Status, to: Status) -> Result<(), TransitionError> {
    if from == to || from.next() == Some(to) {
        Ok(())
    } else {
        Err(TransitionError { from, to })
    }
}

pub fn validate_record(record: &CorpusRecord) -> Vec<Issue> {
    let mut issues = Vec::new();
    if record.id.trim().is_empty() {
        issues.push(Issue::new(Severity::Error, IssueKind::EmptyId, "record id is empty".into()));
    }
    for (side, text) in [("informal", &record.informal), ("formal", &record.formal)] {
        if text.trim().is_empty() {
            issues.push(Issue::new(
                Severity::Error,
                IssueKind::EmptyText { side: side.into() },
                format!("{side} sentence is empty"),
            ));
        }
    }
    let (ni, nf) = (record.informal_tokens().len(), record.formal_tokens().len());
    for problem in check_links(&record.links, ni, nf) {
        let severity = if problem.is_error() { Severity::Error } else { Severity::Warning };
        let message = problem.to_string();
        issues.push(Issue::new(severity, IssueKind::Link { problem }, message));
    }
    let computed = record.computed_syntactic_change();
    if computed != record.syntactic_change {
        issues.push(Issue::new(
            Severity::Warning,
            IssueKind::FlagMismatch { stored: record.syntactic_change, computed },
            format!("stored syntactic_change={} but links imply {computed}", record.syntactic_change),
        ));
    }
    issues
}

/// Validation of `new` as a replacement for `old`, including the status move.
pub fn validate_update(old: &CorpusRecord, new: &CorpusRecord) -> Vec<Issue> {
    let mut issues = validate_record(new);
    if let Err(e) = check_transition(old.status, new.status) {
        issues.push(Issue::new(
            Severity::Error,
            IssueKind::IllegalTransition { from: e.from, to: e.to },
            e.to_string(),
        ));
    }
    issues
}
