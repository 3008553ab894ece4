//! Corpus-level statistics.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{word_pairs, CorpusRecord, Source};
use crate::lexicon::MAX_INFORMAL_TOKENS;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub record_count: u64,
    /// Mean formal sentence length in tokens.
    pub avg_formal_length: f64,
    pub avg_informal_length: f64,
    /// All links, insertions and deletions included.
    pub alignment_count: u64,
    /// Distinct (informal, formal) phrase pairs, identity pairs included.
    pub unique_word_pairs: u64,
    /// Percentage of records whose stored flag is set.
    pub pct_syntactic_change: f64,
    pub dictionary_size: u64,
    /// Record count per source; every source is present.
    pub source_distribution: BTreeMap<Source, u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceShare {
    pub source: Source,
    pub count: u64,
    pub percent: f64,
}

impl CorpusStats {
    /// Per-source counts and percentages, in the fixed source order.
    pub fn source_shares(&self) -> Vec<SourceShare> {
        Source::ALL
            .into_iter()
            .map(|source| {
                let count = self.source_distribution.get(&source).copied().unwrap_or(0);
                let percent =
                    if self.record_count == 0 { 0.0 } else { 100.0 * count as f64 / self.record_count as f64 };
                SourceShare { source, count, percent }
            })
            .collect()
    }
}

/// Running sums, so statistics can be computed over a streamed corpus.
#[derive(Debug, Clone, Default)]
pub struct StatsAccumulator {
    records: u64,
    informal_tokens: u64,
    formal_tokens: u64,
    links: u64,
    flagged: u64,
    pairs: BTreeSet<(String, String)>,
    sources: BTreeMap<Source, u64>,
}

impl StatsAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, r: &CorpusRecord) {
        self.records += 1;
        self.informal_tokens += r.informal_tokens().len() as u64;
        self.formal_tokens += r.formal_tokens().len() as u64;
        self.links += r.links.len() as u64;
        self.flagged += u64::from(r.syntactic_change);
        self.pairs.extend(word_pairs([r]).into_keys());
        *self.sources.entry(r.source).or_default() += 1;
    }

    pub fn finish(&self) -> CorpusStats {
        let mean = |sum: u64| if self.records == 0 { 0.0 } else { sum as f64 / self.records as f64 };
        let dictionary_size =
            self.pairs.iter().filter(|(i, f)| i != f && i.split(' ').count() <= MAX_INFORMAL_TOKENS).count() as u64;
        CorpusStats {
            record_count: self.records,
            avg_formal_length: mean(self.formal_tokens),
            avg_informal_length: mean(self.informal_tokens),
            alignment_count: self.links,
            unique_word_pairs: self.pairs.len() as u64,
            pct_syntactic_change: 100.0 * mean(self.flagged),
            dictionary_size,
            source_distribution: Source::ALL
                .into_iter()
                .map(|s| (s, self.sources.get(&s).copied().unwrap_or(0)))
                .collect(),
        }
    }
}

pub fn compute_stats<'a, I>(records: I) -> CorpusStats
where
    I: IntoIterator<Item = &'a CorpusRecord>,
{
    let mut acc = StatsAccumulator::new();
    for r in records {
        acc.add(r);
    }
    acc.finish()
}

#[cfg(test)]
mod tests {
    use super::super::{extract_dictionary, fixtures::record};
    use super::*;

    #[test]
    fn empty_corpus_is_all_zero() {
        let s = compute_stats(std::iter::empty());
        assert_eq!(s.record_count, 0);
        assert_eq!(s.avg_formal_length, 0.0);
        assert_eq!(s.pct_syntactic_change, 0.0);
        assert_eq!(s.source_distribution.len(), 8);
        assert!(s.source_distribution.values().all(|&c| c == 0));
        assert!(s.source_shares().iter().all(|x| x.percent == 0.0));
    }

    #[test]
    fn dictionary_size_matches_extraction() {
        let a = record("a", "ye hendune", "yek hendavane", &[((0, 1), (0, 1)), ((1, 2), (1, 2))]);
        let b = record("b", "man hendune", "man hendavane", &[((0, 1), (0, 1)), ((1, 2), (1, 2))]);
        let s = compute_stats([&a, &b]);
        assert_eq!(s.dictionary_size, extract_dictionary([&a, &b]).len() as u64);
        assert_eq!(s.unique_word_pairs, 3);
        assert!(s.dictionary_size <= s.unique_word_pairs);
    }

    #[test]
    fn source_shares_sum_to_hundred() {
        let mut a = record("a", "x", "x", &[((0, 1), (0, 1))]);
        let b = a.clone();
        a.source = Source::Book;
        let s = compute_stats([&a, &b, &b, &b]);
        let shares = s.source_shares();
        assert_eq!(shares.iter().map(|x| x.count).sum::<u64>(), 4);
        assert!((shares.iter().map(|x| x.percent).sum::<f64>() - 100.0).abs() < 1e-9);
        assert_eq!(s.source_distribution[&Source::Book], 1);
    }
}
