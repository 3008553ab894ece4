use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, BufReader, Read};

use super::LoadError;
use crate::text::normalize_text;

/// Formal-vocabulary list with part-of-speech style tags.
///
/// File format: `word \t TAG,TAG,...` per line; `#` starts a comment line.
/// Tags in use by the shipped data: `N` noun, `NAME`, `ADJ`, `ADV`, `PRO`
/// (with a person tag such as `1sg`), `V`, `VI` intransitive verb, `IMP`
/// imperative, `Q` question word, `CONJ`, `PREP`, `DET`, `PART`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    words: BTreeMap<String, BTreeSet<String>>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert<I, S>(&mut self, word: &str, tags: I)
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.words.entry(word.to_string()).or_default().extend(tags.into_iter().map(Into::into));
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains_key(word)
    }

    pub fn has_tag(&self, word: &str, tag: &str) -> bool {
        self.words.get(word).is_some_and(|t| t.contains(tag))
    }

    pub fn has_any_tag(&self, word: &str, tags: &[&str]) -> bool {
        tags.iter().any(|t| self.has_tag(word, t))
    }

    pub fn tags(&self, word: &str) -> impl Iterator<Item = &str> {
        self.words.get(word).into_iter().flatten().map(String::as_str)
    }

    /// Words carrying `tag`, in code-point order.
    pub fn words_with_tag<'a>(&'a self, tag: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.words.iter().filter(move |(_, t)| t.contains(tag)).map(|(w, _)| w.as_str())
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.words.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn extend(&mut self, other: &Vocabulary) {
        for (w, t) in &other.words {
            self.words.entry(w.clone()).or_default().extend(t.iter().cloned());
        }
    }

    pub fn parse(text: &str) -> Result<Vocabulary, LoadError> {
        Self::from_reader(text.as_bytes())
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<Vocabulary, LoadError> {
        let mut v = Vocabulary::new();
        for (i, line) in BufReader::new(reader).lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (word, tags) = line.split_once('\t').unwrap_or((trimmed, ""));
            let word = normalize_text(word).into_string();
            if word.is_empty() || word.contains(' ') {
                return Err(LoadError::Malformed {
                    line: i + 1,
                    message: format!("vocabulary word `{word}` must be a single token"),
                });
            }
            v.insert(&word, tags.split(',').map(str::trim).filter(|t| !t.is_empty()));
        }
        Ok(v)
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Vocabulary, LoadError> {
        Self::from_reader(std::fs::File::open(path)?)
    }
}

impl<S: AsRef<str>> FromIterator<S> for Vocabulary {
    fn from_iter<T: IntoIterator<Item = S>>(iter: T) -> Self {
        let mut v = Vocabulary::new();
        for w in iter {
            v.insert(w.as_ref(), std::iter::empty::<String>());
        }
        v
    }
}
