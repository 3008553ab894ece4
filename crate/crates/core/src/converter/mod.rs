//! The informal-to-formal pipeline.
//!
//! One pass runs, in order: idiom marking, phrase lexicon (longest match,
//! leftmost first), single-token lexicon and verb lexicon, the three rule
//! stages, left-dislocation and suffix disambiguation, the syntactic
//! transforms and imperfective-prefix joining. [`Converter::convert`] repeats
//! the pass until the output stops changing, which makes conversion
//! idempotent on its own output.
//!
//! Every token carries the informal token range it came from, so links are
//! derived at the end rather than maintained by each stage.

pub mod disambiguate;
pub mod links;
mod syntax;
pub mod verbs;

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::alignment::{has_syntactic_change, AlignmentLink};
use crate::data;
use crate::lexicon::{AmbiguityTable, LexEntry, Lexicon, LoadError, Vocabulary};
use crate::rules::{LoadRulesError, RuleSet, STAGE_ORDER};
use crate::text::{classify, normalize_text, tokenize, CharClass, EmphasisFlag, ZWNJ};

use disambiguate::{disambiguate, find_suffix, Context};
use syntax::Syntax;
use verbs::VerbLexicon;

pub use disambiguate::{Disambiguation, DisambiguationError, Reason};
pub use verbs::{Mood, Person, VerbFeatures, VerbLexEntry};

const IMPERFECTIVE: [&str; 2] = ["می", "نمی"];
const DISLOCATION_CLITIC: &str = "ش";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConverterConfig {
    /// Upper bound on pipeline passes.
    pub max_passes: usize,
    pub disambiguation: bool,
    pub syntax: bool,
}

impl Default for ConverterConfig {
    fn default() -> Self {
        ConverterConfig { max_passes: 8, disambiguation: true, syntax: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Step {
    PhraseLexicon,
    Lexicon,
    VerbLexicon,
    Morphological,
    Phonological,
    Mistake,
    Dislocation,
    Disambiguation,
    Syntax,
    Orthography,
}

impl Step {
    pub fn as_str(self) -> &'static str {
        match self {
            Step::PhraseLexicon => "phrase-lexicon",
            Step::Lexicon => "lexicon",
            Step::VerbLexicon => "verb-lexicon",
            Step::Morphological => "morphological",
            Step::Phonological => "phonological",
            Step::Mistake => "mistake",
            Step::Dislocation => "dislocation",
            Step::Disambiguation => "disambiguation",
            Step::Syntax => "syntax",
            Step::Orthography => "orthography",
        }
    }
}

impl std::fmt::Display for Step {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One applied change. `index` is the token position in that step's input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub pass: usize,
    pub step: Step,
    pub index: usize,
    pub rule: String,
    pub before: String,
    pub after: String,
}

/// An ambiguous informal token and the readings that were not chosen.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alternative {
    pub token_index: usize,
    pub chosen: String,
    pub alternatives: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConversionResult {
    pub informal_tokens: Vec<String>,
    pub formal_text: String,
    pub formal_tokens: Vec<String>,
    pub links: Vec<AlignmentLink>,
    pub trace: Vec<TraceStep>,
    pub alternatives: Vec<Alternative>,
    pub syntactic_change: bool,
    pub emphasis: Vec<EmphasisFlag>,
}

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("{path}: {source}")]
    Load { path: String, source: LoadError },
    #[error("{path}: {source}")]
    Rules { path: String, source: LoadRulesError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// Everything the converter reads: lexicons, rules and word lists.
#[derive(Debug, Clone)]
pub struct ConverterData {
    pub lexicon: Lexicon,
    pub vocabulary: Vocabulary,
    pub rules: RuleSet,
    pub verbs: VerbLexicon,
    pub ambiguity: AmbiguityTable,
    pub idioms: Vec<Vec<String>>,
    pub destinations: BTreeSet<String>,
}

/// Optional replacements for the embedded data files.
#[derive(Debug, Clone, Default)]
pub struct DataPaths {
    pub lexicon: Option<std::path::PathBuf>,
    pub vocabulary: Option<std::path::PathBuf>,
    pub rules: Option<std::path::PathBuf>,
    pub verbs: Option<std::path::PathBuf>,
    pub ambiguity: Option<std::path::PathBuf>,
    pub idioms: Option<std::path::PathBuf>,
    pub destinations: Option<std::path::PathBuf>,
}

fn split_idioms(lines: Vec<String>) -> Vec<Vec<String>> {
    lines.into_iter().map(|l| l.split(' ').map(str::to_string).collect::<Vec<_>>()).filter(|t| !t.is_empty()).collect()
}

impl Default for ConverterData {
    fn default() -> Self {
        let vocabulary = data::vocabulary();
        ConverterData {
            lexicon: data::lexicon(),
            rules: data::rules(&vocabulary),
            vocabulary,
            verbs: data::verbs(),
            ambiguity: data::ambiguity(),
            idioms: split_idioms(data::idioms()),
            destinations: data::destinations().into_iter().collect(),
        }
    }
}

impl ConverterData {
    /// Embedded defaults with any given files swapped in. Rules are compiled
    /// against whichever vocabulary is in effect.
    pub fn load(paths: &DataPaths) -> Result<ConverterData, DataError> {
        fn disp(p: &Path) -> String {
            p.display().to_string()
        }
        fn load_err(p: &Path) -> impl FnOnce(LoadError) -> DataError {
            let path = disp(p);
            move |source| DataError::Load { path, source }
        }
        let read = |p: &Path| std::fs::read_to_string(p).map_err(|source| DataError::Io { path: disp(p), source });

        let vocabulary = match &paths.vocabulary {
            Some(p) => Vocabulary::load(p).map_err(load_err(p))?,
            None => data::vocabulary(),
        };
        let rules = match &paths.rules {
            Some(p) => RuleSet::load(p, &vocabulary).map_err(|source| DataError::Rules { path: disp(p), source })?,
            None => data::rules(&vocabulary),
        };
        Ok(ConverterData {
            lexicon: match &paths.lexicon {
                Some(p) => Lexicon::load(p).map_err(load_err(p))?,
                None => data::lexicon(),
            },
            rules,
            vocabulary,
            verbs: match &paths.verbs {
                Some(p) => VerbLexicon::load(p).map_err(load_err(p))?,
                None => data::verbs(),
            },
            ambiguity: match &paths.ambiguity {
                Some(p) => AmbiguityTable::load(p).map_err(load_err(p))?,
                None => data::ambiguity(),
            },
            idioms: split_idioms(match &paths.idioms {
                Some(p) => data::word_list(&read(p)?),
                None => data::idioms(),
            }),
            destinations: match &paths.destinations {
                Some(p) => data::word_list(&read(p)?),
                None => data::destinations(),
            }
            .into_iter()
            .collect(),
        })
    }
}

impl ConverterData {
    /// The phrase lexicon plus every informal verb form that differs from
    /// its formal spelling; what candidate filtering counts as informal.
    pub fn informal_lexicon(&self) -> Lexicon {
        let mut lex = self.lexicon.clone();
        for (informal, formal) in self.verbs.informal_forms() {
            if informal != formal && !lex.contains_informal(informal) {
                // forms longer than the phrase bound are simply not counted
                let _ = lex.insert(LexEntry::new(informal, formal, 1));
            }
        }
        lex
    }
}

/// A token under conversion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Slot {
    pub text: String,
    pub prefix: String,
    pub suffix: String,
    /// Informal token range this token came from; `None` when inserted.
    pub origin: Option<(usize, usize)>,
    /// Part of an idiom; left alone.
    pub frozen: bool,
    /// Punctuation-only token.
    pub punct: bool,
}

impl Slot {
    pub fn inserted(text: &str) -> Slot {
        Slot {
            text: text.to_string(),
            prefix: String::new(),
            suffix: String::new(),
            origin: None,
            frozen: false,
            punct: false,
        }
    }

    fn from_token(surface: &str, index: usize) -> Slot {
        let is_p = |c: char| classify(c) == Some(CharClass::Punctuation);
        let core = surface.trim_matches(is_p);
        let origin = Some((index, index + 1));
        if core.is_empty() {
            return Slot {
                text: surface.to_string(),
                prefix: String::new(),
                suffix: String::new(),
                origin,
                frozen: true,
                punct: true,
            };
        }
        let start = surface.find(core).expect("core is a substring");
        Slot {
            text: core.to_string(),
            prefix: surface[..start].to_string(),
            suffix: surface[start + core.len()..].to_string(),
            origin,
            frozen: false,
            punct: false,
        }
    }

    pub fn editable(&self) -> bool {
        !self.frozen && !self.punct
    }

    fn render(&self) -> String {
        format!("{}{}{}", self.prefix, self.text, self.suffix)
    }
}

fn union(a: Option<(usize, usize)>, b: Option<(usize, usize)>) -> Option<(usize, usize)> {
    match (a, b) {
        (Some(x), Some(y)) => Some((x.0.min(y.0), x.1.max(y.1))),
        (x, None) | (None, x) => x,
    }
}

/// Replaces `slots[range]` with the tokens of `text`, which inherit the
/// combined origin. Punctuation around the old tokens moves to the ends of
/// the new ones; with nothing to attach to it goes to a neighbour.
fn splice(slots: &mut Vec<Slot>, range: std::ops::Range<usize>, text: &str) {
    let old: Vec<Slot> = slots.drain(range.clone()).collect();
    let origin = old.iter().fold(None, |acc, s| union(acc, s.origin));
    let prefix = old.first().map(|s| s.prefix.clone()).unwrap_or_default();
    let suffix = old.last().map(|s| s.suffix.clone()).unwrap_or_default();
    let mut new: Vec<Slot> =
        text.split(' ').filter(|t| !t.is_empty()).map(|t| Slot { origin, ..Slot::inserted(t) }).collect();
    if let Some(first) = new.first_mut() {
        first.prefix = prefix;
        new.last_mut().expect("non-empty").suffix = suffix;
    } else if range.start > 0 {
        let prev = &mut slots[range.start - 1];
        prev.suffix.push_str(&prefix);
        prev.suffix.push_str(&suffix);
    } else if let Some(next) = slots.get_mut(range.start) {
        next.prefix = format!("{prefix}{suffix}{}", next.prefix);
    }
    slots.splice(range.start..range.start, new);
}

fn texts(slots: &[Slot]) -> Vec<String> {
    slots.iter().map(|s| s.text.clone()).collect()
}

struct PassLog<'a> {
    pass: usize,
    trace: &'a mut Vec<TraceStep>,
    alternatives: &'a mut Vec<Alternative>,
}

impl PassLog<'_> {
    fn push(&mut self, step: Step, index: usize, rule: impl Into<String>, before: &str, after: &str) {
        self.trace.push(TraceStep {
            pass: self.pass,
            step,
            index,
            rule: rule.into(),
            before: before.to_string(),
            after: after.to_string(),
        });
    }
}

#[derive(Debug, Clone)]
pub struct Converter {
    data: ConverterData,
    config: ConverterConfig,
}

impl Default for Converter {
    fn default() -> Self {
        Converter::new(ConverterData::default(), ConverterConfig::default())
    }
}

impl Converter {
    pub fn new(data: ConverterData, config: ConverterConfig) -> Self {
        Converter { data, config }
    }

    pub fn data(&self) -> &ConverterData {
        &self.data
    }

    pub fn config(&self) -> &ConverterConfig {
        &self.config
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.data.vocabulary
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.data.lexicon
    }

    fn is_verb(&self, t: &str) -> bool {
        self.data.verbs.is_verb(t) || self.data.vocabulary.has_tag(t, "V")
    }

    pub fn convert(&self, informal: &str) -> ConversionResult {
        let normalized = normalize_text(informal);
        let tokens = tokenize(&normalized);
        let informal_tokens = tokens.to_surfaces();
        let originals: Vec<String> =
            informal_tokens.iter().enumerate().map(|(i, t)| Slot::from_token(t, i).text).collect();
        let mut slots: Vec<Slot> = informal_tokens.iter().enumerate().map(|(i, t)| Slot::from_token(t, i)).collect();

        let mut trace = Vec::new();
        let mut alternatives = Vec::new();
        for pass in 0..self.config.max_passes.max(1) {
            let before: Vec<String> = slots.iter().map(Slot::render).collect();
            let mut log = PassLog { pass, trace: &mut trace, alternatives: &mut alternatives };
            let next = self.run_pass(slots.clone(), &originals, &mut log);
            let after: Vec<String> = next.iter().map(Slot::render).collect();
            slots = next;
            if after == before {
                break;
            }
        }

        let formal_tokens: Vec<String> = slots.iter().map(Slot::render).collect();
        let origins: Vec<Option<(usize, usize)>> = slots.iter().map(|s| s.origin).collect();
        let links = links::build_links(&origins, informal_tokens.len());
        ConversionResult {
            formal_text: formal_tokens.join(" "),
            syntactic_change: has_syntactic_change(&links),
            informal_tokens,
            formal_tokens,
            links,
            trace,
            alternatives,
            emphasis: normalized.emphasis_flags().to_vec(),
        }
    }

    fn run_pass(&self, mut slots: Vec<Slot>, originals: &[String], log: &mut PassLog<'_>) -> Vec<Slot> {
        let has_idiom = self.mark_idioms(&mut slots);
        self.phrase_lexicon(&mut slots, log);
        self.token_lexicon(&mut slots, log);
        self.rule_stages(&mut slots, log);
        if self.config.disambiguation {
            self.dislocation(&mut slots, log);
            self.disambiguation(&mut slots, originals, log);
        }
        if self.config.syntax {
            self.syntax(&mut slots, !has_idiom, log);
        }
        self.join_imperfective(&mut slots, log);
        slots
    }

    fn mark_idioms(&self, slots: &mut [Slot]) -> bool {
        for s in slots.iter_mut() {
            s.frozen = s.punct;
        }
        let mut found = false;
        for idiom in &self.data.idioms {
            let n = idiom.len();
            if n == 0 || n > slots.len() {
                continue;
            }
            for i in 0..=slots.len() - n {
                if slots[i..i + n].iter().zip(idiom).all(|(s, w)| !s.punct && s.text == *w) {
                    slots[i..i + n].iter_mut().for_each(|s| s.frozen = true);
                    found = true;
                }
            }
        }
        found
    }

    fn phrase_lexicon(&self, slots: &mut Vec<Slot>, log: &mut PassLog<'_>) {
        let max = self.data.lexicon.max_phrase_tokens().min(crate::lexicon::MAX_INFORMAL_TOKENS);
        for n in (2..=max).rev() {
            let mut i = 0;
            while i + n <= slots.len() {
                let window = &slots[i..i + n];
                let clean = window.iter().all(Slot::editable)
                    && window[..n - 1].iter().all(|s| s.suffix.is_empty())
                    && window[1..].iter().all(|s| s.prefix.is_empty());
                if clean {
                    let phrase = window.iter().map(|s| s.text.as_str()).collect::<Vec<_>>().join(" ");
                    if let Some(e) = self.data.lexicon.best(&phrase) {
                        let formal = e.formal.clone();
                        log.push(Step::PhraseLexicon, i, format!("lexicon:{phrase}"), &phrase, &formal);
                        splice(slots, i..i + n, &formal);
                        i += formal.split(' ').count();
                        continue;
                    }
                }
                i += 1;
            }
        }
    }

    fn token_lexicon(&self, slots: &mut Vec<Slot>, log: &mut PassLog<'_>) {
        let mut i = 0;
        while i < slots.len() {
            if !slots[i].editable() {
                i += 1;
                continue;
            }
            let text = slots[i].text.clone();
            let (step, formal) = if let Some(e) = self.data.lexicon.best(&text) {
                (Step::Lexicon, e.formal.clone())
            } else if let Some(f) = self.data.verbs.formal_of(&text) {
                (Step::VerbLexicon, f.to_string())
            } else {
                i += 1;
                continue;
            };
            log.push(step, i, format!("lexicon:{text}"), &text, &formal);
            splice(slots, i..i + 1, &formal);
            i += formal.split(' ').filter(|t| !t.is_empty()).count().max(1);
        }
    }

    fn rule_stages(&self, slots: &mut Vec<Slot>, log: &mut PassLog<'_>) {
        for stage in STAGE_ORDER {
            let input = texts(slots);
            let step = match stage {
                crate::lexicon::Category::Morphological => Step::Morphological,
                crate::lexicon::Category::Phonological => Step::Phonological,
                _ => Step::Mistake,
            };
            let rewrites: Vec<(usize, String, String)> = self
                .data
                .rules
                .stage_rewrites(stage, &input)
                .into_iter()
                .enumerate()
                .filter_map(|(i, rw)| rw.filter(|_| slots[i].editable()).map(|(rule, after)| (i, rule, after)))
                .collect();
            for (i, rule, after) in &rewrites {
                log.push(step, *i, rule.as_str(), &input[*i], after);
            }
            // right to left so earlier indices stay valid
            for (i, _, after) in rewrites.into_iter().rev() {
                splice(slots, i..i + 1, &after);
            }
        }
    }

    /// `X N+ش` with X nominal becomes `N(-ye) X`.
    fn dislocation(&self, slots: &mut [Slot], log: &mut PassLog<'_>) {
        let vocab = &self.data.vocabulary;
        for i in 1..slots.len() {
            let (host, owner) = (&slots[i], &slots[i - 1]);
            if !host.editable() || !owner.editable() || vocab.contains(&host.text) || self.is_verb(&host.text) {
                continue;
            }
            let Some(stem) = host.text.strip_suffix(DISLOCATION_CLITIC) else { continue };
            if !vocab.has_any_tag(stem, &["N"]) || !vocab.has_any_tag(&owner.text, &["N", "NAME"]) {
                continue;
            }
            if !owner.suffix.is_empty() || !host.prefix.is_empty() {
                continue;
            }
            let head =
                if stem.ends_with('ا') || stem.ends_with('و') { format!("{stem}ی") } else { stem.to_string() };
            let before = format!("{} {}", owner.text, host.text);
            let after = format!("{head} {}", owner.text);
            log.push(Step::Dislocation, i, "dislocation.ezafe", &before, &after);
            slots[i].text = head;
            slots.swap(i - 1, i);
            // punctuation stays in place
            let (a, b) = slots.split_at_mut(i);
            std::mem::swap(&mut a[i - 1].prefix, &mut b[0].prefix);
            std::mem::swap(&mut a[i - 1].suffix, &mut b[0].suffix);
        }
    }

    fn disambiguation(&self, slots: &mut Vec<Slot>, originals: &[String], log: &mut PassLog<'_>) {
        let input = texts(slots);
        let vocab = &self.data.vocabulary;
        let mut edits = Vec::new();
        for (i, slot) in slots.iter().enumerate() {
            if !slot.editable() || vocab.contains(&slot.text) || self.is_verb(&slot.text) {
                continue;
            }
            let Some(suffix) = find_suffix(&slot.text, &self.data.ambiguity, vocab) else { continue };
            let ctx = Context { tokens: &input, index: i, vocab, verbs: &self.data.verbs };
            let Ok(d) = disambiguate(suffix, &ctx, &self.data.ambiguity, &self.data.lexicon) else { continue };
            if let Some((s, e)) = slot.origin {
                let untouched = e == s + 1 && originals.get(s) == Some(&slot.text);
                if untouched && !log.alternatives.iter().any(|a| a.token_index == s) {
                    log.alternatives.push(Alternative {
                        token_index: s,
                        chosen: d.expansion.clone(),
                        alternatives: d.alternatives.clone(),
                    });
                }
            }
            if d.expansion != slot.text {
                edits.push((i, d));
            }
        }
        for (i, d) in edits.into_iter().rev() {
            log.push(Step::Disambiguation, i, format!("ambiguity:{}", d.role), &input[i], &d.expansion);
            splice(slots, i..i + 1, &d.expansion);
        }
    }

    fn syntax(&self, slots: &mut Vec<Slot>, allow_reorder: bool, log: &mut PassLog<'_>) {
        // sentence-final punctuation stays sentence-final
        let mut tail = Vec::new();
        while slots.last().is_some_and(|s| s.punct) {
            tail.push(slots.pop().expect("non-empty"));
        }
        tail.reverse();
        let final_suffix = slots.last_mut().map(|s| std::mem::take(&mut s.suffix)).unwrap_or_default();

        let sx =
            Syntax { vocab: &self.data.vocabulary, verbs: &self.data.verbs, destinations: &self.data.destinations };
        for ev in sx.apply(slots, allow_reorder) {
            log.push(Step::Syntax, ev.index, ev.rule, &ev.before, &ev.after);
        }

        if let Some(last) = slots.last_mut() {
            last.suffix.push_str(&final_suffix);
        } else if let Some(first) = tail.first_mut() {
            first.prefix.insert_str(0, &final_suffix);
        }
        slots.extend(tail);
    }

    fn join_imperfective(&self, slots: &mut Vec<Slot>, log: &mut PassLog<'_>) {
        let mut i = 0;
        while i + 1 < slots.len() {
            let joinable = IMPERFECTIVE.contains(&slots[i].text.as_str())
                && slots[i].editable()
                && slots[i + 1].editable()
                && slots[i].suffix.is_empty()
                && slots[i + 1].prefix.is_empty();
            if joinable {
                let before = format!("{} {}", slots[i].text, slots[i + 1].text);
                let joined = format!("{}{ZWNJ}{}", slots[i].text, slots[i + 1].text);
                log.push(Step::Orthography, i, "orthography.imperfective", &before, &joined);
                splice(slots, i..i + 2, &joined);
            }
            i += 1;
        }
    }
}

/// Converter over the embedded data, built on first use.
pub fn default_converter() -> &'static Converter {
    static DEFAULT: std::sync::OnceLock<Converter> = std::sync::OnceLock::new();
    DEFAULT.get_or_init(Converter::default)
}

/// Converts with the embedded default data.
pub fn convert(informal: &str) -> ConversionResult {
    default_converter().convert(informal)
}
