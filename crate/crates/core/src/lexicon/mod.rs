//! Informal-to-formal phrase dictionary.
//!
//! Persisted as tab-separated UTF-8, one entry per line:
//! `informal \t formal \t frequency \t category`, sorted by informal then
//! formal phrase. Context samples are an in-memory statistic and are not
//! persisted; equality between lexicons ignores them.

mod ambiguity;
mod vocab;

pub use ambiguity::{AmbiguityCandidate, AmbiguityEntry, AmbiguityTable, Cue};
pub use vocab::Vocabulary;

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::text::normalize_text;

/// Longest informal phrase, in tokens, the lexicon stores.
pub const MAX_INFORMAL_TOKENS: usize = 4;
/// Context samples kept per entry.
pub const CONTEXT_SAMPLE_BOUND: usize = 50;

/// The four families of informal/formal differences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Phonological,
    Morphological,
    Syntactic,
    Mistake,
}

impl Category {
    pub fn as_str(self) -> &'static str {
        match self {
            Category::Phonological => "phonological",
            Category::Morphological => "morphological",
            Category::Syntactic => "syntactic",
            Category::Mistake => "mistake",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "phonological" => Ok(Category::Phonological),
            "morphological" => Ok(Category::Morphological),
            "syntactic" => Ok(Category::Syntactic),
            "mistake" => Ok(Category::Mistake),
            other => Err(format!("unknown category `{other}`")),
        }
    }
}

/// A (previous informal token, next informal token) sample.
pub type Context = (String, String);

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LexEntry {
    pub informal: String,
    pub formal: String,
    pub frequency: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub contexts: Vec<Context>,
    #[serde(default)]
    pub category: Option<Category>,
    #[serde(skip)]
    contexts_seen: u64,
}

impl LexEntry {
    pub fn new(informal: impl Into<String>, formal: impl Into<String>, frequency: u64) -> Self {
        LexEntry {
            informal: informal.into(),
            formal: formal.into(),
            frequency,
            contexts: Vec::new(),
            category: None,
            contexts_seen: 0,
        }
    }

    pub fn with_category(mut self, category: Category) -> Self {
        self.category = Some(category);
        self
    }

    /// Reservoir-samples `ctx` into the bounded context list.
    pub fn record_context(&mut self, ctx: Context) {
        self.contexts_seen += 1;
        if self.contexts.len() < CONTEXT_SAMPLE_BOUND {
            self.contexts.push(ctx);
            return;
        }
        let seed = fnv1a(self.informal.as_bytes()) ^ fnv1a(self.formal.as_bytes()).rotate_left(17) ^ self.contexts_seen;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let slot = rng.random_range(0..self.contexts_seen);
        if (slot as usize) < CONTEXT_SAMPLE_BOUND {
            self.contexts[slot as usize] = ctx;
        }
    }

    fn key(&self) -> (&str, &str) {
        (&self.informal, &self.formal)
    }
}

/// Compares everything except context samples.
impl PartialEq for LexEntry {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key() && self.frequency == other.frequency && self.category == other.category
    }
}

impl Eq for LexEntry {}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LexiconError {
    #[error("identity pair `{0}` cannot be stored")]
    IdentityPair(String),
    #[error("entry `{0}` has zero frequency")]
    ZeroFrequency(String),
    #[error("informal phrase `{phrase}` has {tokens} tokens (allowed 1..={max})", max = MAX_INFORMAL_TOKENS)]
    PhraseLength { phrase: String, tokens: usize },
    #[error("empty phrase")]
    EmptyPhrase,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadWarning {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeMap<String, BTreeMap<String, LexEntry>>,
    max_phrase_tokens: usize,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts an entry, summing frequencies with an existing pair.
    pub fn insert(&mut self, entry: LexEntry) -> Result<(), LexiconError> {
        let tokens = entry.informal.split(' ').filter(|t| !t.is_empty()).count();
        if tokens == 0 || entry.formal.trim().is_empty() {
            return Err(LexiconError::EmptyPhrase);
        }
        if tokens > MAX_INFORMAL_TOKENS {
            return Err(LexiconError::PhraseLength { phrase: entry.informal, tokens });
        }
        if entry.informal == entry.formal {
            return Err(LexiconError::IdentityPair(entry.informal));
        }
        if entry.frequency == 0 {
            return Err(LexiconError::ZeroFrequency(entry.informal));
        }
        self.max_phrase_tokens = self.max_phrase_tokens.max(tokens);
        let slot = self.entries.entry(entry.informal.clone()).or_default();
        match slot.get_mut(&entry.formal) {
            Some(existing) => {
                existing.frequency += entry.frequency;
                if existing.category.is_none() {
                    existing.category = entry.category;
                }
                for ctx in entry.contexts {
                    if existing.contexts.len() >= CONTEXT_SAMPLE_BOUND {
                        break;
                    }
                    existing.contexts.push(ctx);
                }
            }
            None => {
                slot.insert(entry.formal.clone(), entry);
            }
        }
        Ok(())
    }

    /// Counts one occurrence of a pair, sampling its context.
    pub fn record(&mut self, informal: &str, formal: &str, context: Option<Context>) -> Result<(), LexiconError> {
        self.insert(LexEntry::new(informal, formal, 1))?;
        if let Some(ctx) = context {
            if let Some(e) = self.entries.get_mut(informal).and_then(|m| m.get_mut(formal)) {
                e.record_context(ctx);
            }
        }
        Ok(())
    }

    /// Entries for `phrase`, most frequent first, ties by formal phrase.
    pub fn lookup(&self, phrase: &str) -> Vec<&LexEntry> {
        let mut out: Vec<&LexEntry> = match self.entries.get(phrase) {
            Some(m) => m.values().collect(),
            None => return Vec::new(),
        };
        out.sort_by(|a, b| b.frequency.cmp(&a.frequency).then_with(|| a.formal.cmp(&b.formal)));
        out
    }

    pub fn best(&self, phrase: &str) -> Option<&LexEntry> {
        self.lookup(phrase).into_iter().next()
    }

    pub fn frequency(&self, informal: &str, formal: &str) -> u64 {
        self.entries.get(informal).and_then(|m| m.get(formal)).map_or(0, |e| e.frequency)
    }

    pub fn contains_informal(&self, phrase: &str) -> bool {
        self.entries.contains_key(phrase)
    }

    /// Number of (informal, formal) pairs.
    pub fn len(&self) -> usize {
        self.entries.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Longest informal phrase stored, in tokens.
    pub fn max_phrase_tokens(&self) -> usize {
        self.max_phrase_tokens
    }

    /// Entries in canonical (informal, formal) order.
    pub fn iter(&self) -> impl Iterator<Item = &LexEntry> {
        self.entries.values().flat_map(BTreeMap::values)
    }

    pub fn informal_keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Union of both lexicons; shared pairs sum their frequencies and
    /// concatenate context samples up to the bound.
    pub fn merge(&self, other: &Lexicon) -> Lexicon {
        let mut out = self.clone();
        for e in other.iter() {
            out.insert(e.clone()).expect("entries of a well-formed lexicon are valid");
        }
        out
    }

    pub fn parse(text: &str) -> Result<(Lexicon, Vec<LoadWarning>), LoadError> {
        Self::from_reader(text.as_bytes())
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<(Lexicon, Vec<LoadWarning>), LoadError> {
        let mut lex = Lexicon::new();
        let mut warnings = Vec::new();
        for (i, line) in BufReader::new(reader).lines().enumerate() {
            let line_no = i + 1;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let malformed = |message: String| LoadError::Malformed { line: line_no, message };
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 4 {
                return Err(malformed(format!("expected 4 tab-separated columns, found {}", cols.len())));
            }
            let informal = normalize_text(cols[0]).into_string();
            let formal = normalize_text(cols[1]).into_string();
            let frequency: u64 =
                cols[2].trim().parse().map_err(|_| malformed(format!("bad frequency `{}`", cols[2])))?;
            let category = match cols[3].trim() {
                "" => None,
                c => Some(c.parse::<Category>().map_err(malformed)?),
            };
            if lex.frequency(&informal, &formal) > 0 {
                let message = format!("duplicate pair `{informal}` -> `{formal}`; frequencies summed");
                log::warn!("line {line_no}: {message}");
                warnings.push(LoadWarning { line: line_no, message });
            }
            let mut entry = LexEntry::new(informal, formal, frequency);
            entry.category = category;
            lex.insert(entry).map_err(|e| malformed(e.to_string()))?;
        }
        Ok((lex, warnings))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Lexicon, LoadError> {
        Self::load_with_warnings(path).map(|(l, _)| l)
    }

    pub fn load_with_warnings(path: impl AsRef<Path>) -> Result<(Lexicon, Vec<LoadWarning>), LoadError> {
        Self::from_reader(std::fs::File::open(path)?)
    }

    pub fn write_tsv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for e in self.iter() {
            writeln!(w, "{}\t{}\t{}\t{}", e.informal, e.formal, e.frequency, e.category.map_or("", Category::as_str))?;
        }
        Ok(())
    }

    pub fn to_tsv(&self) -> String {
        let mut buf = Vec::new();
        self.write_tsv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("lexicon text is UTF-8")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> std::io::Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_tsv(&mut f)?;
        f.flush()
    }
}

impl FromIterator<LexEntry> for Lexicon {
    /// Panics on invalid entries; use [`Lexicon::insert`] for fallible input.
    fn from_iter<T: IntoIterator<Item = LexEntry>>(iter: T) -> Self {
        let mut lex = Lexicon::new();
        for e in iter {
            lex.insert(e).expect("valid lexicon entry");
        }
        lex
    }
}
