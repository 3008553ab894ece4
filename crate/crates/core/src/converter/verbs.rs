use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, BufReader, Read};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::lexicon::LoadError;
use crate::text::normalize_text;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mood {
    Past,
    Present,
    #[serde(rename = "subj")]
    Subjunctive,
    #[serde(rename = "imp")]
    Imperative,
    /// Perfect participle.
    #[serde(rename = "pp")]
    Participle,
}

impl Mood {
    pub fn as_str(self) -> &'static str {
        match self {
            Mood::Past => "past",
            Mood::Present => "present",
            Mood::Subjunctive => "subj",
            Mood::Imperative => "imp",
            Mood::Participle => "pp",
        }
    }
}

impl FromStr for Mood {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "past" => Mood::Past,
            "present" => Mood::Present,
            "subj" => Mood::Subjunctive,
            "imp" => Mood::Imperative,
            "pp" => Mood::Participle,
            _ => return Err(format!("unknown mood `{s}`")),
        })
    }
}

/// Grammatical person and number, written `1sg` .. `3pl`; the same strings
/// tag pronouns in the vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Person {
    #[serde(rename = "1sg")]
    FirstSingular,
    #[serde(rename = "2sg")]
    SecondSingular,
    #[serde(rename = "3sg")]
    ThirdSingular,
    #[serde(rename = "1pl")]
    FirstPlural,
    #[serde(rename = "2pl")]
    SecondPlural,
    #[serde(rename = "3pl")]
    ThirdPlural,
}

impl Person {
    pub const ALL: [Person; 6] = [
        Person::FirstSingular,
        Person::SecondSingular,
        Person::ThirdSingular,
        Person::FirstPlural,
        Person::SecondPlural,
        Person::ThirdPlural,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Person::FirstSingular => "1sg",
            Person::SecondSingular => "2sg",
            Person::ThirdSingular => "3sg",
            Person::FirstPlural => "1pl",
            Person::SecondPlural => "2pl",
            Person::ThirdPlural => "3pl",
        }
    }
}

impl FromStr for Person {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Person::ALL.into_iter().find(|p| p.as_str() == s).ok_or_else(|| format!("unknown person `{s}`"))
    }
}

impl fmt::Display for Person {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerbFeatures {
    pub mood: Option<Mood>,
    pub person: Option<Person>,
    /// Takes the destination preposition before a bare place noun.
    pub destination: bool,
    /// Formal non-causative transitive form this causative is replaced by.
    pub causative_of: Option<String>,
}

impl VerbFeatures {
    pub fn is_participle(&self) -> bool {
        self.mood == Some(Mood::Participle)
    }

    pub fn is_subjunctive(&self) -> bool {
        self.mood == Some(Mood::Subjunctive)
    }

    pub fn is_imperative(&self) -> bool {
        self.mood == Some(Mood::Imperative)
    }

    fn parse(s: &str) -> Result<VerbFeatures, String> {
        let mut f = VerbFeatures::default();
        for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
            if item == "dest" {
                f.destination = true;
            } else if let Some(base) = item.strip_prefix("caus=") {
                f.causative_of = Some(normalize_text(base).into_string());
            } else if let Ok(m) = item.parse::<Mood>() {
                f.mood = Some(m);
            } else if let Ok(p) = item.parse::<Person>() {
                f.person = Some(p);
            } else {
                return Err(format!("unknown verb feature `{item}`"));
            }
        }
        Ok(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerbLexEntry {
    pub informal: String,
    pub formal: String,
    pub features: VerbFeatures,
}

/// Verb forms with the features the syntactic transforms need.
///
/// File format: `informal \t formal \t features`, features comma-separated
/// from `past|present|subj|imp|pp`, a person such as `2sg`, `dest` and
/// `caus=BASE`. Rows with `informal == formal` only record features.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerbLexicon {
    by_formal: BTreeMap<String, VerbLexEntry>,
    informal_to_formal: BTreeMap<String, String>,
}

impl VerbLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, entry: VerbLexEntry) {
        if entry.informal != entry.formal {
            self.informal_to_formal.insert(entry.informal.clone(), entry.formal.clone());
        }
        self.by_formal.entry(entry.formal.clone()).or_insert(entry);
    }

    /// Features of a formal verb form.
    pub fn get(&self, formal: &str) -> Option<&VerbLexEntry> {
        self.by_formal.get(formal)
    }

    pub fn is_verb(&self, surface: &str) -> bool {
        self.by_formal.contains_key(surface) || self.informal_to_formal.contains_key(surface)
    }

    /// Formal form for an informal verb surface that differs from it.
    pub fn formal_of(&self, informal: &str) -> Option<&str> {
        self.informal_to_formal.get(informal).map(String::as_str)
    }

    pub fn entries(&self) -> impl Iterator<Item = &VerbLexEntry> {
        self.by_formal.values()
    }

    pub fn informal_forms(&self) -> impl Iterator<Item = (&str, &str)> {
        self.informal_to_formal.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn len(&self) -> usize {
        self.by_formal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_formal.is_empty()
    }

    pub fn parse(text: &str) -> Result<VerbLexicon, LoadError> {
        Self::from_reader(text.as_bytes())
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<VerbLexicon, LoadError> {
        let mut lex = VerbLexicon::new();
        for (i, line) in BufReader::new(reader).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let malformed = |message: String| LoadError::Malformed { line: i + 1, message };
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(malformed(format!("expected 3 tab-separated columns, found {}", cols.len())));
            }
            let informal = normalize_text(cols[0]).into_string();
            let formal = normalize_text(cols[1]).into_string();
            if informal.is_empty() || formal.is_empty() || informal.contains(' ') || formal.contains(' ') {
                return Err(malformed("verb surfaces must be single tokens".into()));
            }
            let features = VerbFeatures::parse(cols[2]).map_err(malformed)?;
            lex.insert(VerbLexEntry { informal, formal, features });
        }
        Ok(lex)
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<VerbLexicon, LoadError> {
        Self::from_reader(std::fs::File::open(path)?)
    }
}
