//! Declarative token rewrite rules.
//!
//! A rule file has one rule per line:
//!
//! ```text
//! id | category | priority | pattern | replacement | guards | flags
//! ```
//!
//! `#` starts a comment line. See `docs/rules.md` for the pattern syntax.
//! Rules are grouped into stages by category and applied in
//! `(priority, id)` order; within a stage each token is rewritten at most
//! once and guards always see the stage's input.

mod pattern;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::lexicon::{Category, Vocabulary};
use crate::text::TokenSequence;

pub use pattern::{Pattern, Replacement, DELETE_MARK};

/// Stages run by the converter, in order. Syntactic rules are parsed but
/// handled by the converter's own reordering logic, not by a stage.
pub const STAGE_ORDER: [Category; 3] = [Category::Morphological, Category::Phonological, Category::Mistake];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Position {
    Initial,
    Medial,
    Final,
}

impl FromStr for Position {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "initial" => Ok(Position::Initial),
            "medial" => Ok(Position::Medial),
            "final" => Ok(Position::Final),
            _ => Err(format!("unknown position `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GuardKind {
    /// Neighbor token matches a pattern.
    Matches(Side, Pattern),
    /// Neighbor token is a vocabulary word with this tag.
    Tagged(Side, String),
    /// No neighbor on this side.
    Boundary(Side),
    At(Position),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Guard {
    pub negated: bool,
    pub kind: GuardKind,
}

impl Guard {
    fn parse(src: &str, vocab: &Vocabulary) -> Result<Guard, String> {
        let (negated, body) = match src.strip_prefix('!') {
            Some(rest) => (true, rest),
            None => (false, src),
        };
        let side_of = |s: &str| match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            _ => Err(format!("unknown guard side `{s}`")),
        };
        let kind = if let Some((key, value)) = body.split_once('=') {
            if key == "at" {
                GuardKind::At(value.parse()?)
            } else if value == "none" {
                GuardKind::Boundary(side_of(key)?)
            } else {
                GuardKind::Matches(side_of(key)?, Pattern::compile(value, vocab)?)
            }
        } else if let Some((key, tag)) = body.split_once('@') {
            if tag.is_empty() {
                return Err("empty tag in guard".into());
            }
            GuardKind::Tagged(side_of(key)?, tag.to_string())
        } else {
            return Err(format!("malformed guard `{src}`"));
        };
        Ok(Guard { negated, kind })
    }

    fn holds(&self, tokens: &[String], index: usize, vocab: &Vocabulary) -> bool {
        let neighbor = |side: Side| match side {
            Side::Left => index.checked_sub(1).map(|i| tokens[i].as_str()),
            Side::Right => tokens.get(index + 1).map(String::as_str),
        };
        let raw = match &self.kind {
            GuardKind::Matches(side, p) => neighbor(*side).is_some_and(|t| p.is_match(t)),
            GuardKind::Tagged(side, tag) => neighbor(*side).is_some_and(|t| vocab.has_tag(t, tag)),
            GuardKind::Boundary(side) => neighbor(*side).is_none(),
            GuardKind::At(pos) => {
                let first = index == 0;
                let last = index + 1 == tokens.len();
                match pos {
                    Position::Initial => first,
                    Position::Final => last,
                    Position::Medial => !first && !last,
                }
            }
        };
        raw != self.negated
    }
}

#[derive(Debug, Clone)]
pub struct Rule {
    pub id: String,
    pub category: Category,
    pub priority: i32,
    pub pattern: Pattern,
    pub replacement: Replacement,
    pub guards: Vec<Guard>,
    /// Every output token must be a vocabulary word.
    pub validate: bool,
    /// Only rewrite tokens that are not vocabulary words.
    pub oov: bool,
    /// 1-based line in the source file.
    pub line: usize,
}

impl Rule {
    /// Rewrites `tokens[index]` if the rule applies there. Returns the new
    /// surface (empty for deletion, possibly containing spaces).
    pub fn apply(&self, tokens: &[String], index: usize, vocab: &Vocabulary) -> Option<String> {
        let surface = tokens.get(index)?;
        if self.oov && vocab.contains(surface) {
            return None;
        }
        let caps = self.pattern.regex().captures(surface)?;
        if !self.guards.iter().all(|g| g.holds(tokens, index, vocab)) {
            return None;
        }
        let whole = caps.get(0)?;
        let mut out = String::with_capacity(surface.len() + 8);
        out.push_str(&surface[..whole.start()]);
        out.push_str(&self.replacement.expand(&caps));
        out.push_str(&surface[whole.end()..]);
        let out = out.split(' ').filter(|t| !t.is_empty()).collect::<Vec<_>>().join(" ");
        if out == *surface {
            return None;
        }
        if self.validate && !out.split(' ').filter(|t| !t.is_empty()).all(|t| vocab.contains(t)) {
            return None;
        }
        Some(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RuleErrorKind {
    Syntax { message: String },
    UnknownCategory { category: String },
    DuplicateId { id: String, first_line: usize },
    BadPattern { message: String },
    BadReplacement { message: String },
    UndefinedCapture { group: usize, available: usize },
    BadGuard { message: String },
    BadFlag { flag: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct RuleError {
    pub line: usize,
    pub kind: RuleErrorKind,
}

impl fmt::Display for RuleErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleErrorKind::Syntax { message } => f.write_str(message),
            RuleErrorKind::UnknownCategory { category } => write!(f, "unknown category `{category}`"),
            RuleErrorKind::DuplicateId { id, first_line } => {
                write!(f, "duplicate rule id `{id}` (first defined on line {first_line})")
            }
            RuleErrorKind::BadPattern { message } => write!(f, "bad pattern: {message}"),
            RuleErrorKind::BadReplacement { message } => write!(f, "bad replacement: {message}"),
            RuleErrorKind::UndefinedCapture { group, available } => {
                write!(f, "replacement uses ${group} but the pattern has {available} group(s)")
            }
            RuleErrorKind::BadGuard { message } => write!(f, "bad guard: {message}"),
            RuleErrorKind::BadFlag { flag } => write!(f, "unknown flag `{flag}`"),
        }
    }
}

/// All problems found in a rule file.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{} rule error(s); first: {}", .0.len(), .0.first().map(ToString::to_string).unwrap_or_default())]
pub struct RuleErrors(pub Vec<RuleError>);

#[derive(Debug, thiserror::Error)]
pub enum LoadRulesError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Rules(#[from] RuleErrors),
}

/// One applied rewrite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub stage: Category,
    /// Index into the stage's input sequence.
    pub token_index: usize,
    pub rule_id: String,
    pub before: String,
    pub after: String,
}

#[derive(Debug, Clone, Default)]
pub struct RuleSet {
    rules: Vec<Rule>,
    vocab: Vocabulary,
}

impl RuleSet {
    /// Parses a rule file. `<TAG>` classes and validation are resolved
    /// against `vocab`, which the set keeps. Either every rule is accepted
    /// or every problem is reported.
    pub fn parse(text: &str, vocab: &Vocabulary) -> Result<RuleSet, RuleErrors> {
        let mut rules: Vec<Rule> = Vec::new();
        let mut errors = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            match parse_line(trimmed, line, vocab) {
                Ok(rule) => {
                    if let Some(prev) = rules.iter().find(|r| r.id == rule.id) {
                        errors.push(RuleError {
                            line,
                            kind: RuleErrorKind::DuplicateId { id: rule.id.clone(), first_line: prev.line },
                        });
                    } else {
                        rules.push(rule);
                    }
                }
                Err(mut e) => errors.append(&mut e),
            }
        }
        if !errors.is_empty() {
            return Err(RuleErrors(errors));
        }
        rules.sort_by(|a, b| (a.priority, &a.id).cmp(&(b.priority, &b.id)));
        Ok(RuleSet { rules, vocab: vocab.clone() })
    }

    pub fn load(path: impl AsRef<std::path::Path>, vocab: &Vocabulary) -> Result<RuleSet, LoadRulesError> {
        let text = std::fs::read_to_string(path)?;
        Ok(RuleSet::parse(&text, vocab)?)
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn get(&self, id: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.id == id)
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn ids(&self) -> BTreeSet<&str> {
        self.rules.iter().map(|r| r.id.as_str()).collect()
    }

    /// Rules of one category in application order.
    pub fn stage_rules(&self, stage: Category) -> impl Iterator<Item = &Rule> {
        self.rules.iter().filter(move |r| r.category == stage)
    }

    /// The first applicable rule of `stage` for `tokens[index]`.
    pub fn rewrite_token(&self, stage: Category, tokens: &[String], index: usize) -> Option<(&Rule, String)> {
        self.stage_rules(stage).find_map(|r| r.apply(tokens, index, &self.vocab).map(|out| (r, out)))
    }

    /// Per-token rewrites for one stage: `None` leaves the token alone,
    /// `Some(s)` replaces it with the (possibly empty, possibly multi-token)
    /// surface `s`.
    pub fn stage_rewrites(&self, stage: Category, tokens: &[String]) -> Vec<Option<(String, String)>> {
        (0..tokens.len()).map(|i| self.rewrite_token(stage, tokens, i).map(|(r, out)| (r.id.clone(), out))).collect()
    }

    pub fn apply_stage(&self, stage: Category, tokens: &TokenSequence) -> (TokenSequence, Vec<TraceEntry>) {
        let input = tokens.to_surfaces();
        let rewrites = self.stage_rewrites(stage, &input);
        let mut out = Vec::with_capacity(input.len());
        let mut trace = Vec::new();
        for (i, (tok, rw)) in input.iter().zip(rewrites).enumerate() {
            match rw {
                Some((rule_id, after)) => {
                    trace.push(TraceEntry {
                        stage,
                        token_index: i,
                        rule_id,
                        before: tok.clone(),
                        after: after.clone(),
                    });
                    out.extend(after.split(' ').filter(|t| !t.is_empty()).map(str::to_string));
                }
                None => out.push(tok.clone()),
            }
        }
        (TokenSequence::from_surfaces(out), trace)
    }

    /// Runs the morphological, phonological and mistake stages in order.
    pub fn apply_stages(&self, tokens: &TokenSequence) -> (TokenSequence, Vec<TraceEntry>) {
        let mut cur = tokens.clone();
        let mut trace = Vec::new();
        for stage in STAGE_ORDER {
            let (next, mut t) = self.apply_stage(stage, &cur);
            trace.append(&mut t);
            cur = next;
        }
        (cur, trace)
    }
}

/// Re-applies a trace to `input`, stage by stage. Used to check that a
/// trace fully explains a rewrite.
pub fn replay(input: &TokenSequence, trace: &[TraceEntry]) -> Option<TokenSequence> {
    let mut cur = input.to_surfaces();
    for stage in STAGE_ORDER {
        let mut out = Vec::with_capacity(cur.len());
        let entries: Vec<&TraceEntry> = trace.iter().filter(|t| t.stage == stage).collect();
        for (i, tok) in cur.iter().enumerate() {
            match entries.iter().find(|e| e.token_index == i) {
                Some(e) if e.before == *tok => {
                    out.extend(e.after.split(' ').filter(|t| !t.is_empty()).map(str::to_string))
                }
                Some(_) => return None,
                None => out.push(tok.clone()),
            }
        }
        if entries.iter().any(|e| e.token_index >= cur.len()) {
            return None;
        }
        cur = out;
    }
    Some(TokenSequence::from_surfaces(cur))
}

fn parse_line(line: &str, lineno: usize, vocab: &Vocabulary) -> Result<Rule, Vec<RuleError>> {
    let err = |kind| vec![RuleError { line: lineno, kind }];
    let fields: Vec<&str> = line.split(" | ").map(str::trim).collect();
    if fields.len() != 7 {
        return Err(err(RuleErrorKind::Syntax {
            message: format!("expected 7 fields separated by ` | `, found {}", fields.len()),
        }));
    }
    let id = fields[0];
    if id.is_empty() || id.chars().any(char::is_whitespace) {
        return Err(err(RuleErrorKind::Syntax { message: format!("invalid rule id `{id}`") }));
    }
    let mut errors = Vec::new();
    let category = fields[1]
        .parse::<Category>()
        .map_err(|_| {
            errors.push(RuleError {
                line: lineno,
                kind: RuleErrorKind::UnknownCategory { category: fields[1].to_string() },
            })
        })
        .ok();
    let priority = fields[2]
        .parse::<i32>()
        .map_err(|_| {
            errors.push(RuleError {
                line: lineno,
                kind: RuleErrorKind::Syntax { message: format!("priority `{}` is not an integer", fields[2]) },
            })
        })
        .ok();
    let pattern = Pattern::compile(fields[3], vocab)
        .map_err(|message| errors.push(RuleError { line: lineno, kind: RuleErrorKind::BadPattern { message } }))
        .ok();
    let replacement = Replacement::parse(fields[4])
        .map_err(|message| errors.push(RuleError { line: lineno, kind: RuleErrorKind::BadReplacement { message } }))
        .ok();
    if let (Some(p), Some(r)) = (&pattern, &replacement) {
        if r.max_group() > p.capture_count() {
            errors.push(RuleError {
                line: lineno,
                kind: RuleErrorKind::UndefinedCapture { group: r.max_group(), available: p.capture_count() },
            });
        }
    }
    let mut guards = Vec::new();
    if fields[5] != "-" {
        for g in fields[5].split(',').map(str::trim).filter(|g| !g.is_empty()) {
            match Guard::parse(g, vocab) {
                Ok(g) => guards.push(g),
                Err(message) => errors.push(RuleError { line: lineno, kind: RuleErrorKind::BadGuard { message } }),
            }
        }
    }
    let mut validate = false;
    let mut oov = false;
    if fields[6] != "-" {
        for f in fields[6].split(',').map(str::trim).filter(|f| !f.is_empty()) {
            match f {
                "validate" => validate = true,
                "oov" => oov = true,
                other => errors.push(RuleError { line: lineno, kind: RuleErrorKind::BadFlag { flag: other.into() } }),
            }
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    Ok(Rule {
        id: id.to_string(),
        category: category.expect("checked"),
        priority: priority.expect("checked"),
        pattern: pattern.expect("checked"),
        replacement: replacement.expect("checked"),
        guards,
        validate,
        oov,
        line: lineno,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vocab() -> Vocabulary {
        let mut v = Vocabulary::new();
        v.insert("آسان", ["ADJ"]);
        v.insert("چند", ["Q"]);
        v.insert("خوب", ["ADJ"]);
        v.insert("است", ["V"]);
        v.insert("کتاب", ["N"]);
        v
    }

    fn seq(s: &str) -> TokenSequence {
        TokenSequence::from_surfaces(s.split(' ').map(str::to_string).collect::<Vec<_>>())
    }

    const SAMPLE: &str = "\
# sample
un-an | phonological | 10 | ^({L}*)ون({L}*)$ | $1ان$2 | - | validate
n-nd | phonological | 20 | ^({L}+)ن$ | $1ند | - | validate
hast | mistake | 10 | ^هست$ | است | left@ADJ | -
";

    #[test]
    fn parses_and_orders() {
        let rs = RuleSet::parse(SAMPLE, &vocab()).unwrap();
        assert_eq!(rs.len(), 3);
        let ids: Vec<_> = rs.stage_rules(Category::Phonological).map(|r| r.id.as_str()).collect();
        assert_eq!(ids, ["un-an", "n-nd"]);
    }

    #[test]
    fn applies_stages_with_trace() {
        let rs = RuleSet::parse(SAMPLE, &vocab()).unwrap();
        let input = seq("آسون چن خوب هست");
        let (out, trace) = rs.apply_stages(&input);
        assert_eq!(out.to_surfaces(), ["آسان", "چند", "خوب", "است"]);
        assert_eq!(trace.len(), 3);
        assert_eq!(trace[0].rule_id, "un-an");
        assert_eq!(replay(&input, &trace).unwrap(), out);
    }

    #[test]
    fn validation_blocks_unknown_output() {
        let rs = RuleSet::parse(SAMPLE, &vocab()).unwrap();
        let (out, trace) = rs.apply_stages(&seq("خون"));
        assert_eq!(out.to_surfaces(), ["خون"]);
        assert!(trace.is_empty());
    }

    #[test]
    fn guards_see_stage_input() {
        let text = "a | mistake | 1 | ^x$ | y | right=^x$ | -\n";
        let rs = RuleSet::parse(text, &Vocabulary::new()).unwrap();
        let (out, _) = rs.apply_stage(Category::Mistake, &seq("x x x"));
        // the last token has no right neighbour; the others see the original x
        assert_eq!(out.to_surfaces(), ["y", "y", "x"]);
    }

    #[test]
    fn deletion_and_split() {
        let text = "del | morphological | 1 | ^a$ | ∅ | - | -\nsplit | morphological | 2 | ^(b)(c)$ | $1 $2 | - | -\n";
        let rs = RuleSet::parse(text, &Vocabulary::new()).unwrap();
        let (out, trace) = rs.apply_stage(Category::Morphological, &seq("a bc d"));
        assert_eq!(out.to_surfaces(), ["b", "c", "d"]);
        assert_eq!(trace[0].after, "");
    }

    #[test]
    fn all_errors_reported_with_lines() {
        let text = "\
a | phonological | 1 | ^x$ | y | - | -
a | phonological | 1 | ^x$ | y | - | -
b | fancy | 1 | ^x$ | y | - | -
c | phonological | 1 | (x | y | - | -
d | phonological | 1 | ^(x)$ | $2 | - | -
e | phonological | 1 | ^x$ | y | up=^x$ | -
";
        let errs = RuleSet::parse(text, &Vocabulary::new()).unwrap_err().0;
        let lines: Vec<usize> = errs.iter().map(|e| e.line).collect();
        assert_eq!(lines, [2, 3, 4, 5, 6]);
        assert!(matches!(errs[0].kind, RuleErrorKind::DuplicateId { first_line: 1, .. }));
        assert!(matches!(errs[3].kind, RuleErrorKind::UndefinedCapture { group: 2, available: 1 }));
    }

    #[test]
    fn oov_flag_skips_known_words() {
        let text = "a | phonological | 1 | ^({L}+)ن$ | $1ند | - | oov\n";
        let mut v = Vocabulary::new();
        v.insert("من", ["PRO"]);
        let rs = RuleSet::parse(text, &v).unwrap();
        let (out, _) = rs.apply_stage(Category::Phonological, &seq("من چن"));
        assert_eq!(out.to_surfaces(), ["من", "چند"]);
    }

    #[test]
    fn negated_and_positional_guards() {
        let text = "a | mistake | 1 | ^x$ | y | !at=initial, right=none | -\n";
        let rs = RuleSet::parse(text, &Vocabulary::new()).unwrap();
        let (out, _) = rs.apply_stage(Category::Mistake, &seq("x x"));
        assert_eq!(out.to_surfaces(), ["x", "y"]);
    }
}
