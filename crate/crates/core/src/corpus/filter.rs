//! Selecting informal candidate sentences from raw text.

use crate::lexicon::Lexicon;
use crate::text::normalize_text;

pub const MIN_TOKENS: usize = 26;
pub const MAX_TOKENS: usize = 40;
pub const MIN_INFORMAL_HITS: usize = 4;

/// Number of tokens covered by at least one occurrence of a lexicon phrase.
pub fn informal_hits(tokens: &[&str], lexicon: &Lexicon) -> usize {
    let mut covered = vec![false; tokens.len()];
    let max_n = lexicon.max_phrase_tokens().max(1);
    for start in 0..tokens.len() {
        for n in 1..=max_n.min(tokens.len() - start) {
            if lexicon.contains_informal(&tokens[start..start + n].join(" ")) {
                covered[start..start + n].iter_mut().for_each(|c| *c = true);
            }
        }
    }
    covered.into_iter().filter(|&c| c).count()
}

/// Length in [26, 40] space-separated tokens and at least four informal hits.
pub fn is_candidate(sentence: &str, lexicon: &Lexicon) -> bool {
    let text = normalize_text(sentence);
    let tokens: Vec<&str> = text.as_str().split(' ').filter(|t| !t.is_empty()).collect();
    (MIN_TOKENS..=MAX_TOKENS).contains(&tokens.len()) && informal_hits(&tokens, lexicon) >= MIN_INFORMAL_HITS
}

/// The accepted sentences, in input order.
pub fn filter_candidates<S: AsRef<str>>(sentences: &[S], lexicon: &Lexicon) -> Vec<String> {
    sentences.iter().map(AsRef::as_ref).filter(|s| is_candidate(s, lexicon)).map(str::to_string).collect()
}
