//! Choosing a reading for tokens that end in a homographic informal suffix.

use serde::{Deserialize, Serialize};

use super::verbs::VerbLexicon;
use crate::lexicon::{AmbiguityTable, Cue, Lexicon, Vocabulary};
use crate::text::ZWNJ;

pub const NOMINAL_TAGS: [&str; 4] = ["N", "ADJ", "PRO", "NAME"];

/// Plural and possessive endings a nominal stem may already carry.
const NOMINAL_ENDINGS: [&str; 7] = [
    "\u{200C}هایمان",
    "\u{200C}هایتان",
    "\u{200C}هایشان",
    "\u{200C}هایم",
    "\u{200C}هایت",
    "\u{200C}هایش",
    "\u{200C}ها",
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DisambiguationError {
    #[error("suffix `{0}` is not in the ambiguity table")]
    UnknownSuffix(String),
    #[error("token `{token}` does not end in `{suffix}`")]
    SuffixMismatch { token: String, suffix: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Reason {
    History { frequency: u64 },
    Cue { cue: Cue },
    Fallback,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disambiguation {
    pub expansion: String,
    /// Index of the chosen candidate in the table entry.
    pub candidate: usize,
    pub role: String,
    pub reason: Reason,
    /// Expansions of the other candidates, in table order.
    pub alternatives: Vec<String>,
}

/// What the cues may look at.
#[derive(Debug, Clone, Copy)]
pub struct Context<'a> {
    pub tokens: &'a [String],
    pub index: usize,
    pub vocab: &'a Vocabulary,
    pub verbs: &'a VerbLexicon,
}

impl Context<'_> {
    fn is_verb(&self, t: &str) -> bool {
        self.verbs.is_verb(t) || self.vocab.has_tag(t, "V")
    }

    fn is_noun(&self, t: &str) -> bool {
        is_nominal_with(self.vocab, t, &["N", "NAME"])
    }

    fn later_verb(&self) -> bool {
        self.tokens[self.index + 1..].iter().any(|t| self.is_verb(t))
    }

    fn cue_fires(&self, cue: Cue, stem: &str) -> bool {
        let prev = self.index.checked_sub(1).map(|i| self.tokens[i].as_str());
        let next = self.tokens.get(self.index + 1).map(String::as_str);
        match cue {
            Cue::None => false,
            Cue::Always => true,
            Cue::LaterVerb => self.later_verb(),
            Cue::NounPairNoVerb => next.is_some_and(|n| self.is_noun(n)) && !self.later_verb(),
            Cue::AdjectiveAfterSubject => prev.is_some() && self.vocab.has_tag(stem, "ADJ"),
            Cue::AfterPronoun => prev.is_some_and(|p| self.vocab.has_tag(p, "PRO")) && self.is_noun(stem),
            Cue::Noun => self.is_noun(stem),
            Cue::Adjective => self.vocab.has_tag(stem, "ADJ"),
            Cue::TanvinKnown => self.vocab.contains(&format!("{stem}اً")),
        }
    }
}

fn is_nominal_with(vocab: &Vocabulary, word: &str, tags: &[&str]) -> bool {
    if vocab.has_any_tag(word, tags) {
        return true;
    }
    NOMINAL_ENDINGS
        .iter()
        .filter_map(|e| word.strip_suffix(e))
        .any(|base| !base.is_empty() && vocab.has_any_tag(base, &["N", "NAME"]))
}

/// Noun, adjective, pronoun or name, possibly carrying a plural/possessive
/// ending.
pub fn is_nominal(vocab: &Vocabulary, word: &str) -> bool {
    is_nominal_with(vocab, word, &NOMINAL_TAGS)
}

/// `token` without `suffix` and without a joiner left dangling before it.
pub fn stem_of<'a>(token: &'a str, suffix: &str) -> Option<&'a str> {
    let stem = token.strip_suffix(suffix)?;
    let stem = stem.strip_suffix(ZWNJ).unwrap_or(stem);
    (!stem.is_empty()).then_some(stem)
}

/// The longest table suffix that leaves a nominal stem, if any.
pub fn find_suffix<'t>(token: &str, table: &'t AmbiguityTable, vocab: &Vocabulary) -> Option<&'t str> {
    table.suffixes().into_iter().find(|s| stem_of(token, s).is_some_and(|stem| is_nominal(vocab, stem)))
}

/// Picks an expansion for `ctx.tokens[ctx.index]`, which ends in `suffix`.
///
/// Order of evidence: a unique highest `history` frequency for
/// (token, expansion); then the first candidate whose cue fires; then the
/// first candidate.
pub fn disambiguate(
    suffix: &str,
    ctx: &Context<'_>,
    table: &AmbiguityTable,
    history: &Lexicon,
) -> Result<Disambiguation, DisambiguationError> {
    let token = ctx.tokens[ctx.index].as_str();
    let entry = table.get(suffix).ok_or_else(|| DisambiguationError::UnknownSuffix(suffix.to_string()))?;
    let stem = stem_of(token, suffix)
        .ok_or_else(|| DisambiguationError::SuffixMismatch { token: token.to_string(), suffix: suffix.to_string() })?;
    let expansions: Vec<String> = entry.candidates.iter().map(|c| c.expand(stem, token)).collect();

    let freqs: Vec<u64> = expansions.iter().map(|e| history.frequency(token, e)).collect();
    let max = freqs.iter().copied().max().unwrap_or(0);
    let (chosen, reason) = if max > 0 && freqs.iter().filter(|&&f| f == max).count() == 1 {
        (freqs.iter().position(|&f| f == max).expect("max exists"), Reason::History { frequency: max })
    } else if let Some(i) = entry.candidates.iter().position(|c| ctx.cue_fires(c.cue, stem)) {
        (i, Reason::Cue { cue: entry.candidates[i].cue })
    } else {
        (0, Reason::Fallback)
    };

    Ok(Disambiguation {
        expansion: expansions[chosen].clone(),
        candidate: chosen,
        role: entry.candidates[chosen].role.clone(),
        reason,
        alternatives: expansions.iter().enumerate().filter(|(i, _)| *i != chosen).map(|(_, e)| e.clone()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data;
    use crate::lexicon::LexEntry;

    fn run(tokens: &[&str], index: usize, history: &Lexicon) -> Disambiguation {
        let vocab = data::vocabulary();
        let verbs = data::verbs();
        let table = data::ambiguity();
        let tokens: Vec<String> = tokens.iter().map(|s| s.to_string()).collect();
        let ctx = Context { tokens: &tokens, index, vocab: &vocab, verbs: &verbs };
        let suffix = find_suffix(&tokens[index], &table, &vocab).expect("suffix");
        disambiguate(suffix, &ctx, &table, history).unwrap()
    }

    #[test]
    fn object_marker_before_verb() {
        let d = run(&["منو", "ندید"], 0, &Lexicon::new());
        assert_eq!(d.expansion, "من را");
        assert_eq!(d.reason, Reason::Cue { cue: Cue::LaterVerb });
        assert_eq!(d.alternatives, ["من و"]);
    }

    #[test]
    fn conjunction_between_nouns() {
        let d = run(&["کتابو", "مداد"], 0, &Lexicon::new());
        assert_eq!(d.expansion, "کتاب و");
    }

    #[test]
    fn fallback_is_first_candidate() {
        let d = run(&["مامانم"], 0, &Lexicon::new());
        assert_eq!(d.expansion, "مامانم");
        assert_eq!(d.reason, Reason::Fallback);
        assert_eq!(d.alternatives, ["مامان هم", "مامان هستم"]);
    }

    #[test]
    fn history_beats_cues() {
        let mut h = Lexicon::new();
        h.insert(LexEntry::new("کتابو", "کتاب و", 3)).unwrap();
        let d = run(&["کتابو", "بده"], 0, &h);
        assert_eq!(d.expansion, "کتاب و");
        assert_eq!(d.reason, Reason::History { frequency: 3 });
    }

    #[test]
    fn history_tie_falls_through_to_cues() {
        let mut h = Lexicon::new();
        h.insert(LexEntry::new("کتابو", "کتاب و", 2)).unwrap();
        h.insert(LexEntry::new("کتابو", "کتاب را", 2)).unwrap();
        let d = run(&["کتابو", "بده"], 0, &h);
        assert_eq!(d.expansion, "کتاب را");
    }

    #[test]
    fn joiner_before_suffix_is_dropped() {
        let d = run(&["شیشه\u{200C}رو"], 0, &Lexicon::new());
        assert_eq!(d.expansion, "شیشه را");
    }

    #[test]
    fn unknown_suffix_is_an_error() {
        let vocab = data::vocabulary();
        let verbs = data::verbs();
        let tokens = vec!["کتابز".to_string()];
        let ctx = Context { tokens: &tokens, index: 0, vocab: &vocab, verbs: &verbs };
        let err = disambiguate("ز", &ctx, &data::ambiguity(), &Lexicon::new()).unwrap_err();
        assert_eq!(err, DisambiguationError::UnknownSuffix("ز".into()));
    }
}
