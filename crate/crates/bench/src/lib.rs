//! Shared inputs for the benchmarks in `benches/`.

use rasmi_core::corpus::{synthetic_corpus, CorpusRecord, SynthConfig};
use rasmi_core::data;

/// Informal sides of the shipped worked examples.
pub fn example_sentences() -> Vec<String> {
    data::examples().into_iter().map(|e| e.informal).collect()
}

/// One long line made by joining `n` example sentences.
pub fn long_sentence(n: usize) -> String {
    example_sentences().into_iter().cycle().take(n).collect::<Vec<_>>().join(" ")
}

pub fn corpus(records: usize) -> Vec<CorpusRecord> {
    synthetic_corpus(&SynthConfig { shared_vocab: Some(200), ..SynthConfig::new(records, 11) })
}
