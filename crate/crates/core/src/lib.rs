//! Informal-to-formal Persian conversion with token-level alignments, plus the
//! tooling needed to build and evaluate an informal/formal parallel corpus.
//!
//! The main entry point is [`Converter`]; see the crate README for the data
//! files it loads by default.

pub mod alignment;
pub mod converter;
pub mod corpus;
pub mod data;
pub mod eval;
pub mod lexicon;
pub mod rules;
pub mod suggest;
pub mod text;

pub use alignment::AlignmentLink;
pub use converter::{ConversionResult, Converter, ConverterConfig};
pub use corpus::{CorpusRecord, CorpusStats, Source, Status};
pub use lexicon::{LexEntry, Lexicon, Vocabulary};
pub use rules::RuleSet;
pub use text::{normalize_text, tokenize, NormalizedText, Token, TokenSequence};
