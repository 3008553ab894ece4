//! Parallel-corpus records: persistence, validation, statistics, dictionary
//! extraction and candidate filtering.

mod extract;
mod filter;
mod io;
mod stats;
mod synthetic;
mod validate;

pub use extract::{extract_dictionary, word_pairs, SENTENCE_END, SENTENCE_START};
pub use filter::{filter_candidates, informal_hits, is_candidate, MAX_TOKENS, MIN_INFORMAL_HITS, MIN_TOKENS};
pub use io::{load_corpus, read_corpus, save_corpus, write_corpus, CorpusError, CorpusReader};
pub use stats::{compute_stats, CorpusStats, SourceShare, StatsAccumulator};
pub use synthetic::{synthetic_corpus, synthetic_records, SynthConfig};
pub use validate::{check_transition, validate_record, validate_update, Issue, IssueKind, Severity, TransitionError};

use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, FixedOffset};
use serde::{Deserialize, Serialize};

use crate::alignment::{has_syntactic_change, AlignmentLink};

/// Where an informal sentence was collected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Web,
    Twitter,
    Instagram,
    Myself,
    Movie,
    Messenger,
    Weblog,
    Book,
}

impl Source {
    pub const ALL: [Source; 8] = [
        Source::Web,
        Source::Twitter,
        Source::Instagram,
        Source::Myself,
        Source::Movie,
        Source::Messenger,
        Source::Weblog,
        Source::Book,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Source::Web => "web",
            Source::Twitter => "twitter",
            Source::Instagram => "instagram",
            Source::Myself => "myself",
            Source::Movie => "movie",
            Source::Messenger => "messenger",
            Source::Weblog => "weblog",
            Source::Book => "book",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Source {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Source::ALL.into_iter().find(|v| v.as_str() == s).ok_or_else(|| format!("unknown source `{s}`"))
    }
}

/// Review state. Records only move forward, one step at a time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Draft,
    Reviewed,
    Confirmed,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Draft => "draft",
            Status::Reviewed => "reviewed",
            Status::Confirmed => "confirmed",
        }
    }

    pub fn next(self) -> Option<Status> {
        match self {
            Status::Draft => Some(Status::Reviewed),
            Status::Reviewed => Some(Status::Confirmed),
            Status::Confirmed => None,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Status {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "draft" => Ok(Status::Draft),
            "reviewed" => Ok(Status::Reviewed),
            "confirmed" => Ok(Status::Confirmed),
            other => Err(format!("unknown status `{other}`")),
        }
    }
}

/// One aligned informal/formal sentence pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub id: String,
    pub informal: String,
    pub formal: String,
    pub links: Vec<AlignmentLink>,
    pub source: Source,
    pub annotator: String,
    pub created_at: DateTime<FixedOffset>,
    pub status: Status,
    pub syntactic_change: bool,
}

/// Space-separated tokens of a sentence.
pub fn tokens(text: &str) -> Vec<&str> {
    text.split_whitespace().collect()
}

impl CorpusRecord {
    pub fn informal_tokens(&self) -> Vec<&str> {
        tokens(&self.informal)
    }

    pub fn formal_tokens(&self) -> Vec<&str> {
        tokens(&self.formal)
    }

    /// The flag as implied by the links alone.
    pub fn computed_syntactic_change(&self) -> bool {
        has_syntactic_change(&self.links)
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enums_round_trip_through_strings() {
        for s in Source::ALL {
            assert_eq!(s.as_str().parse::<Source>().unwrap(), s);
            assert_eq!(serde_json::to_string(&s).unwrap(), format!("\"{s}\""));
        }
        assert!("tv".parse::<Source>().is_err());
        assert_eq!(Status::Draft.next(), Some(Status::Reviewed));
        assert_eq!(Status::Confirmed.next(), None);
        assert_eq!("reviewed".parse::<Status>().unwrap(), Status::Reviewed);
    }

    #[test]
    fn record_json_shape() {
        let r = fixtures::record("r1", "ye hendune", "yek hendavane", &[((0, 1), (0, 1)), ((1, 2), (1, 2))]);
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["links"][0]["informal_span"], serde_json::json!([0, 1]));
        assert_eq!(v["source"], "twitter");
        assert_eq!(v["status"], "draft");
        assert_eq!(v["created_at"], "2021-03-04T10:20:30+03:30");
    }
}
