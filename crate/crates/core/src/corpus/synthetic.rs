//! Seeded synthetic corpora for tests and benchmarks.
//!
//! Tokens are ASCII placeholders (`i12`, `f12`, ...). Every generated record
//! is valid and carries the flag its links imply.

use chrono::{DateTime, Duration, FixedOffset};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CorpusRecord, Source, Status};
use crate::alignment::{has_syntactic_change, AlignmentLink, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthConfig {
    pub records: usize,
    pub seed: u64,
    /// Draw tokens from a pool of this many words; `None` gives every record
    /// its own words, so each informal phrase has exactly one formal phrase.
    pub shared_vocab: Option<usize>,
    /// Allow insertion and deletion links.
    pub empty_links: bool,
    /// Allow crossing links.
    pub reorder: bool,
}

impl SynthConfig {
    pub fn new(records: usize, seed: u64) -> Self {
        SynthConfig { records, seed, shared_vocab: None, empty_links: true, reorder: true }
    }
}

enum Segment {
    Full(Vec<String>, Vec<String>),
    Deletion(String),
    Insertion(String),
}

struct Words<'a> {
    rng: &'a mut ChaCha8Rng,
    record: usize,
    next: usize,
    pool: Option<usize>,
}

impl Words<'_> {
    fn id(&mut self) -> String {
        match self.pool {
            Some(v) => self.rng.random_range(0..v).to_string(),
            None => {
                self.next += 1;
                format!("{}.{}", self.record, self.next)
            }
        }
    }
}

fn segment(w: &mut Words<'_>, empty_links: bool) -> Segment {
    let kind = w.rng.random_range(0..if empty_links { 8 } else { 6 });
    match kind {
        0..=2 => {
            let id = w.id();
            let formal = if w.rng.random_range(0..3) == 0 { format!("i{id}") } else { format!("f{id}") };
            Segment::Full(vec![format!("i{id}")], vec![formal])
        }
        3 => {
            let (a, b) = (w.id(), w.id());
            Segment::Full(vec![format!("i{a}"), format!("i{b}")], vec![format!("f{a}_{b}")])
        }
        4 => {
            let a = w.id();
            Segment::Full(vec![format!("i{a}")], vec![format!("f{a}"), format!("g{a}")])
        }
        5 => {
            let (a, b, c) = (w.id(), w.id(), w.id());
            Segment::Full(
                vec![format!("i{a}"), format!("i{b}"), format!("i{c}")],
                vec![format!("f{a}"), format!("f{c}")],
            )
        }
        6 => Segment::Deletion(format!("d{}", w.id())),
        _ => Segment::Insertion(format!("n{}", w.id())),
    }
}

fn record(k: usize, rng: &mut ChaCha8Rng, cfg: &SynthConfig, base: DateTime<FixedOffset>) -> CorpusRecord {
    let n = rng.random_range(3..=8);
    let mut words = Words { rng, record: k, next: 0, pool: cfg.shared_vocab };
    let mut segs: Vec<Segment> = (0..n).map(|_| segment(&mut words, cfg.empty_links)).collect();
    let rng = words.rng;
    if !segs.iter().any(|s| matches!(s, Segment::Full(..))) {
        segs.push(Segment::Full(vec![format!("i{k}.0")], vec![format!("f{k}.0")]));
    }
    // formal order: identity, or one adjacent pair of full segments swapped
    let mut order: Vec<usize> = (0..segs.len()).collect();
    if cfg.reorder && rng.random_range(0..3) == 0 {
        let full: Vec<usize> = (0..segs.len()).filter(|&i| matches!(segs[i], Segment::Full(..))).collect();
        if full.len() >= 2 {
            let j = rng.random_range(0..full.len() - 1);
            order.swap(full[j], full[j + 1]);
        }
    }
    let mut informal = Vec::new();
    let mut i_spans = Vec::new();
    for s in &segs {
        let start = informal.len();
        match s {
            Segment::Full(i, _) => informal.extend(i.iter().cloned()),
            Segment::Deletion(t) => informal.push(t.clone()),
            Segment::Insertion(_) => {}
        }
        i_spans.push(Span(start, informal.len()));
    }
    let mut formal = Vec::new();
    let mut f_spans = vec![Span(0, 0); segs.len()];
    for &idx in &order {
        let start = formal.len();
        match &segs[idx] {
            Segment::Full(_, f) => formal.extend(f.iter().cloned()),
            Segment::Insertion(t) => formal.push(t.clone()),
            Segment::Deletion(_) => {}
        }
        f_spans[idx] = Span(start, formal.len());
    }
    let links: Vec<AlignmentLink> = i_spans.into_iter().zip(f_spans).map(|(i, f)| AlignmentLink::new(i, f)).collect();
    const STATUSES: [Status; 3] = [Status::Draft, Status::Reviewed, Status::Confirmed];
    CorpusRecord {
        id: format!("syn-{k:06}"),
        informal: informal.join(" "),
        formal: formal.join(" "),
        syntactic_change: has_syntactic_change(&links),
        links,
        source: Source::ALL[rng.random_range(0..Source::ALL.len())],
        annotator: format!("annotator-{}", rng.random_range(0..4)),
        created_at: base + Duration::minutes(k as i64),
        status: STATUSES[rng.random_range(0..3)],
    }
}

pub fn synthetic_corpus(cfg: &SynthConfig) -> Vec<CorpusRecord> {
    synthetic_records(cfg).collect()
}

/// Lazily generated records, for streaming scale tests.
pub fn synthetic_records(cfg: &SynthConfig) -> impl Iterator<Item = CorpusRecord> + '_ {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let base = DateTime::parse_from_rfc3339("2021-01-01T00:00:00+03:30").expect("valid timestamp");
    (0..cfg.records).map(move |k| record(k, &mut rng, cfg, base))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::validate_record;

    #[test]
    fn records_are_valid_and_flagged_correctly() {
        for r in synthetic_corpus(&SynthConfig::new(300, 1)) {
            assert_eq!(validate_record(&r), [], "{r:?}");
        }
        let cfg = SynthConfig { shared_vocab: Some(10), ..SynthConfig::new(300, 2) };
        for r in synthetic_corpus(&cfg) {
            assert_eq!(validate_record(&r), [], "{r:?}");
        }
    }

    #[test]
    fn generation_is_seeded() {
        let cfg = SynthConfig::new(20, 9);
        assert_eq!(synthetic_corpus(&cfg), synthetic_corpus(&cfg));
        assert_ne!(synthetic_corpus(&cfg), synthetic_corpus(&SynthConfig::new(20, 10)));
    }

    #[test]
    fn no_empty_links_when_disabled() {
        let cfg = SynthConfig { empty_links: false, reorder: false, ..SynthConfig::new(100, 3) };
        assert!(synthetic_corpus(&cfg).iter().all(|r| !r.syntactic_change));
    }
}
