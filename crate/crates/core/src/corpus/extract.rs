//! Phrase pairs and the informal→formal dictionary derived from links.

use std::collections::BTreeMap;

use super::CorpusRecord;
use crate::alignment::Span;
use crate::lexicon::{Lexicon, MAX_INFORMAL_TOKENS};

/// Context placeholder before the first token of a sentence.
pub const SENTENCE_START: &str = "<s>";
/// Context placeholder after the last token of a sentence.
pub const SENTENCE_END: &str = "</s>";

fn span_text(tokens: &[&str], span: Span) -> Option<String> {
    (span.end() <= tokens.len() && !span.is_empty()).then(|| tokens[span.range()].join(" "))
}

/// Calls `f(informal, formal, (left, right))` for every link with two
/// non-empty, in-bounds spans.
fn for_each_pair(record: &CorpusRecord, mut f: impl FnMut(String, String, (String, String))) {
    let inf = record.informal_tokens();
    let form = record.formal_tokens();
    for link in &record.links {
        let (Some(i), Some(o)) = (span_text(&inf, link.informal_span), span_text(&form, link.formal_span)) else {
            continue;
        };
        let s = link.informal_span;
        let left = s.start().checked_sub(1).map_or(SENTENCE_START, |k| inf[k]);
        let right = inf.get(s.end()).copied().unwrap_or(SENTENCE_END);
        f(i, o, (left.to_string(), right.to_string()));
    }
}

/// Every aligned (informal, formal) phrase pair with its count, identity
/// pairs included.
pub fn word_pairs<'a, I>(records: I) -> BTreeMap<(String, String), u64>
where
    I: IntoIterator<Item = &'a CorpusRecord>,
{
    let mut out = BTreeMap::new();
    for r in records {
        for_each_pair(r, |i, f, _| *out.entry((i, f)).or_default() += 1);
    }
    out
}

/// The dictionary: non-identity pairs whose informal side fits the lexicon's
/// phrase bound, with neighbour-token context samples.
pub fn extract_dictionary<'a, I>(records: I) -> Lexicon
where
    I: IntoIterator<Item = &'a CorpusRecord>,
{
    let mut lex = Lexicon::new();
    for r in records {
        for_each_pair(r, |i, f, ctx| {
            if i == f || i.split(' ').count() > MAX_INFORMAL_TOKENS {
                return;
            }
            lex.record(&i, &f, Some(ctx)).expect("pair is non-empty, bounded and non-identity");
        });
    }
    lex
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::record;
    use super::*;

    #[test]
    fn identity_pairs_are_counted_but_not_kept() {
        let a = record("a", "ye hendune", "yek hendavane", &[((0, 1), (0, 1)), ((1, 2), (1, 2))]);
        let b = record("b", "hendune man", "hendavane man", &[((0, 1), (0, 1)), ((1, 2), (1, 2))]);
        let lex = extract_dictionary([&a, &b]);
        assert_eq!(lex.frequency("hendune", "hendavane"), 2);
        assert_eq!(lex.frequency("ye", "yek"), 1);
        assert_eq!(lex.len(), 2);
        let pairs = word_pairs([&a, &b]);
        assert_eq!(pairs.len(), 3);
        assert_eq!(pairs[&("man".to_string(), "man".to_string())], 1);
    }

    #[test]
    fn contexts_use_sentence_markers() {
        let a = record("a", "ye hendune", "yek hendavane", &[((0, 1), (0, 1)), ((1, 2), (1, 2))]);
        let lex = extract_dictionary([&a]);
        let e = lex.best("hendune").unwrap();
        assert_eq!(e.contexts, [("ye".to_string(), SENTENCE_END.to_string())]);
        let e = lex.best("ye").unwrap();
        assert_eq!(e.contexts, [(SENTENCE_START.to_string(), "hendune".to_string())]);
    }

    #[test]
    fn empty_spans_and_long_phrases_are_skipped() {
        let a = record("a", "a b c d e", "q", &[((0, 5), (0, 1))]);
        let b = record("b", "x", "y z", &[((0, 1), (0, 1)), ((1, 1), (1, 2))]);
        let lex = extract_dictionary([&a, &b]);
        assert_eq!(lex.len(), 1);
        assert_eq!(word_pairs([&a, &b]).len(), 2);
    }

    #[test]
    fn empty_corpus() {
        assert!(extract_dictionary(std::iter::empty()).is_empty());
    }
}
