use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, BufReader, Read};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::LoadError;
use crate::text::normalize_text;

/// Context predicates a candidate expansion can be conditioned on. They are
/// evaluated by the converter's disambiguator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cue {
    /// No cue; the candidate is only reachable through history or fallback.
    None,
    Always,
    /// A verb occurs somewhere after the token.
    LaterVerb,
    /// The stem is nominal, the next token is a noun, and no verb follows.
    NounPairNoVerb,
    /// Adjective stem with some token before it (a subject).
    AdjectiveAfterSubject,
    /// Noun stem right after a personal pronoun.
    AfterPronoun,
    /// Noun stem.
    Noun,
    /// Adjective stem.
    Adjective,
    /// The tanvin spelling of the word is a known formal word.
    TanvinKnown,
}

impl Cue {
    pub fn as_str(self) -> &'static str {
        match self {
            Cue::None => "-",
            Cue::Always => "always",
            Cue::LaterVerb => "later-verb",
            Cue::NounPairNoVerb => "noun-pair-no-verb",
            Cue::AdjectiveAfterSubject => "adjective-after-subject",
            Cue::AfterPronoun => "after-pronoun",
            Cue::Noun => "noun",
            Cue::Adjective => "adjective",
            Cue::TanvinKnown => "tanvin-known",
        }
    }
}

impl FromStr for Cue {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim() {
            "-" | "" => Cue::None,
            "always" => Cue::Always,
            "later-verb" => Cue::LaterVerb,
            "noun-pair-no-verb" => Cue::NounPairNoVerb,
            "adjective-after-subject" => Cue::AdjectiveAfterSubject,
            "after-pronoun" => Cue::AfterPronoun,
            "noun" => Cue::Noun,
            "adjective" => Cue::Adjective,
            "tanvin-known" => Cue::TanvinKnown,
            other => return Err(format!("unknown cue `{other}`")),
        })
    }
}

impl fmt::Display for Cue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One reading of an ambiguous suffix. `expansion` is a template over
/// `{stem}` (the token without the suffix) and `{token}` (the whole token);
/// it may expand to several space-separated tokens.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbiguityCandidate {
    pub expansion: String,
    pub role: String,
    pub cue: Cue,
}

impl AmbiguityCandidate {
    pub fn expand(&self, stem: &str, token: &str) -> String {
        self.expansion.replace("{stem}", stem).replace("{token}", token)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbiguityEntry {
    pub suffix_surface: String,
    /// Non-empty; order is the fallback priority.
    pub candidates: Vec<AmbiguityCandidate>,
}

/// Homographic informal suffixes and their candidate expansions.
///
/// File format: `suffix \t expansion \t role \t cue`, one candidate per line,
/// candidates of one suffix listed in priority order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AmbiguityTable {
    entries: BTreeMap<String, AmbiguityEntry>,
}

impl AmbiguityTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, suffix: &str) -> Option<&AmbiguityEntry> {
        self.entries.get(suffix)
    }

    pub fn push(&mut self, suffix: &str, candidate: AmbiguityCandidate) {
        self.entries
            .entry(suffix.to_string())
            .or_insert_with(|| AmbiguityEntry { suffix_surface: suffix.to_string(), candidates: Vec::new() })
            .candidates
            .push(candidate);
    }

    /// Suffixes, longest first, then code-point order.
    pub fn suffixes(&self) -> Vec<&str> {
        let mut s: Vec<&str> = self.entries.keys().map(String::as_str).collect();
        s.sort_by(|a, b| b.chars().count().cmp(&a.chars().count()).then(a.cmp(b)));
        s
    }

    pub fn entries(&self) -> impl Iterator<Item = &AmbiguityEntry> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn parse(text: &str) -> Result<AmbiguityTable, LoadError> {
        Self::from_reader(text.as_bytes())
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<AmbiguityTable, LoadError> {
        let mut table = AmbiguityTable::new();
        for (i, line) in BufReader::new(reader).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let malformed = |message: String| LoadError::Malformed { line: i + 1, message };
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 4 {
                return Err(malformed(format!("expected 4 tab-separated columns, found {}", cols.len())));
            }
            let suffix = normalize_text(cols[0]).into_string();
            if suffix.is_empty() {
                return Err(malformed("empty suffix".into()));
            }
            let expansion = normalize_text(cols[1]).into_string();
            if !expansion.contains("{stem}") && !expansion.contains("{token}") {
                return Err(malformed(format!("expansion `{expansion}` uses neither {{stem}} nor {{token}}")));
            }
            let cue = cols[3].parse::<Cue>().map_err(malformed)?;
            table.push(&suffix, AmbiguityCandidate { expansion, role: cols[2].trim().to_string(), cue });
        }
        Ok(table)
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<AmbiguityTable, LoadError> {
        Self::from_reader(std::fs::File::open(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_keeps_candidate_order() {
        let t = AmbiguityTable::parse(
            "و\t{stem} را\tobject-marker\tlater-verb\nو\t{stem} و\tconjunction\tnoun-pair-no-verb\n",
        )
        .unwrap();
        let e = t.get("و").unwrap();
        assert_eq!(e.candidates.len(), 2);
        assert_eq!(e.candidates[0].role, "object-marker");
        assert_eq!(e.candidates[1].expand("کتاب", "کتابو"), "کتاب و");
    }

    #[test]
    fn suffixes_longest_first() {
        let t = AmbiguityTable::parse("و\t{stem}\tx\t-\nرو\t{stem}\tx\t-\n").unwrap();
        assert_eq!(t.suffixes(), ["رو", "و"]);
    }

    #[test]
    fn unknown_cue_is_an_error() {
        assert!(AmbiguityTable::parse("و\t{stem}\tx\tsometimes\n").is_err());
    }
}
