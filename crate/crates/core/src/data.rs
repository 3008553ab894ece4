//! Default data shipped with the crate, embedded at compile time.

use crate::converter::verbs::VerbLexicon;
use crate::lexicon::{AmbiguityTable, Lexicon, Vocabulary};
use crate::rules::RuleSet;

pub const RULES: &str = include_str!("../data/rules.txt");
pub const LEXICON: &str = include_str!("../data/lexicon.tsv");
pub const VOCABULARY: &str = include_str!("../data/vocab.tsv");
pub const VERBS: &str = include_str!("../data/verbs.tsv");
pub const AMBIGUITY: &str = include_str!("../data/ambiguity.tsv");
pub const IDIOMS: &str = include_str!("../data/idioms.txt");
pub const DESTINATIONS: &str = include_str!("../data/destinations.txt");
pub const EXAMPLES: &str = include_str!("../data/examples.tsv");

// The embedded files are covered by tests, so failures here are build bugs.

pub fn vocabulary() -> Vocabulary {
    Vocabulary::parse(VOCABULARY).expect("embedded vocabulary parses")
}

pub fn lexicon() -> Lexicon {
    Lexicon::parse(LEXICON).expect("embedded lexicon parses").0
}

pub fn rules(vocab: &Vocabulary) -> RuleSet {
    RuleSet::parse(RULES, vocab).expect("embedded rules parse")
}

pub fn verbs() -> VerbLexicon {
    VerbLexicon::parse(VERBS).expect("embedded verb lexicon parses")
}

pub fn ambiguity() -> AmbiguityTable {
    AmbiguityTable::parse(AMBIGUITY).expect("embedded ambiguity table parses")
}

/// Non-comment lines of a word-list file, normalized.
pub fn word_list(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| crate::text::normalize_text(l).into_string())
        .collect()
}

pub fn idioms() -> Vec<String> {
    word_list(IDIOMS)
}

pub fn destinations() -> Vec<String> {
    word_list(DESTINATIONS)
}

/// A worked informal/formal example pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Example {
    pub id: String,
    pub informal: String,
    pub formal: String,
}

/// The shipped worked examples, normalized.
pub fn examples() -> Vec<Example> {
    EXAMPLES
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let cols: Vec<&str> = l.split('\t').collect();
            assert_eq!(cols.len(), 3, "bad example line {l:?}");
            Example {
                id: cols[0].to_string(),
                informal: crate::text::normalize_text(cols[1]).into_string(),
                formal: crate::text::normalize_text(cols[2]).into_string(),
            }
        })
        .collect()
}
