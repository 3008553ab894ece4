//! Unicode normalization, character classes and tokenization for Persian text.
//!
//! Everything downstream (rules, lexicon lookups, alignments) operates on the
//! output of [`normalize_text`] and [`tokenize`], so both are deterministic and
//! idempotent.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_normalization::char::canonical_combining_class;
use unicode_normalization::UnicodeNormalization;

/// Zero-width non-joiner, the Persian "half-space".
pub const ZWNJ: char = '\u{200C}';
/// Zero-width joiner.
pub const ZWJ: char = '\u{200D}';

/// Letter runs of at least this length are collapsed to a single letter.
pub const REPETITION_THRESHOLD: usize = 3;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid UTF-8 at byte offset {offset}")]
pub struct DecodeError {
    pub offset: usize,
}

/// The character classes the rule pattern language can refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CharClass {
    Consonant,
    VowelLetter,
    Digit,
    Punctuation,
    Joiner,
}

impl CharClass {
    pub const ALL: [CharClass; 5] =
        [CharClass::Consonant, CharClass::VowelLetter, CharClass::Digit, CharClass::Punctuation, CharClass::Joiner];

    pub fn name(self) -> &'static str {
        match self {
            CharClass::Consonant => "consonant",
            CharClass::VowelLetter => "vowel-letter",
            CharClass::Digit => "digit",
            CharClass::Punctuation => "punctuation",
            CharClass::Joiner => "joiner",
        }
    }

    pub fn contains(self, c: char) -> bool {
        classify(c) == Some(self)
    }
}

impl fmt::Display for CharClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Long-vowel and semivowel letters: alef, vav, yeh, alef-madda.
pub const VOWEL_LETTERS: [char; 4] = ['\u{0627}', '\u{0648}', '\u{06CC}', '\u{0622}'];

/// Combining marks (harakat, tanvin and the like). Several of them carry the
/// Unicode `Alphabetic` property, so `char::is_alphabetic` alone is not enough.
pub fn is_mark(c: char) -> bool {
    unicode_normalization::char::canonical_combining_class(c) != 0
        || matches!(c, '\u{0610}'..='\u{061A}' | '\u{064B}'..='\u{065F}' | '\u{0670}' | '\u{06D6}'..='\u{06ED}')
}

/// Classifies a (normalized) character. Returns `None` for whitespace,
/// combining marks and anything else outside the five classes.
pub fn classify(c: char) -> Option<CharClass> {
    if c == ZWNJ || c == ZWJ {
        return Some(CharClass::Joiner);
    }
    if VOWEL_LETTERS.contains(&c) {
        return Some(CharClass::VowelLetter);
    }
    if c.is_numeric() {
        return Some(CharClass::Digit);
    }
    if c.is_alphabetic() && !is_mark(c) {
        return Some(CharClass::Consonant);
    }
    if is_punctuation(c) {
        return Some(CharClass::Punctuation);
    }
    None
}

pub fn is_punctuation(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(
            c,
            '\u{060C}' // arabic comma
                | '\u{061B}' // arabic semicolon
                | '\u{061F}' // arabic question mark
                | '\u{066A}'..='\u{066D}'
                | '\u{06D4}'
                | '\u{00AB}'
                | '\u{00BB}'
                | '\u{2010}'..='\u{2027}'
                | '\u{2030}'..='\u{205E}'
        )
}

/// Maps a single character onto its canonical Persian code point.
fn map_char(c: char) -> char {
    match c {
        // arabic yeh, its presentation forms, and the yeh forms of the Persian letter
        '\u{064A}' | '\u{FEF1}'..='\u{FEF4}' | '\u{FBFC}'..='\u{FBFF}' => '\u{06CC}',
        // arabic kaf and presentation forms of both kafs
        '\u{0643}' | '\u{FED9}'..='\u{FEDC}' | '\u{FB8E}'..='\u{FB91}' => '\u{06A9}',
        // arabic-indic digits to extended arabic-indic digits
        '\u{0660}'..='\u{0669}' => char::from_u32(c as u32 - 0x0660 + 0x06F0).unwrap_or(c),
        _ => c,
    }
}

/// One collapsed run: `offset` is the char offset of the surviving letter in
/// the output text, `run_length` the length of the original run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmphasisFlag {
    pub offset: usize,
    pub run_length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizedText {
    text: String,
    emphasis: Vec<EmphasisFlag>,
    /// For each char of `text`, the char offset in the raw input it came from.
    #[serde(skip)]
    raw_offsets: Vec<usize>,
}

impl NormalizedText {
    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn into_string(self) -> String {
        self.text
    }

    pub fn emphasis_flags(&self) -> &[EmphasisFlag] {
        &self.emphasis
    }

    /// Char offset in the raw input that produced the normalized char at `offset`.
    pub fn raw_offset(&self, offset: usize) -> Option<usize> {
        self.raw_offsets.get(offset).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }

    pub fn char_len(&self) -> usize {
        self.raw_offsets.len()
    }
}

impl fmt::Display for NormalizedText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl AsRef<str> for NormalizedText {
    fn as_ref(&self) -> &str {
        &self.text
    }
}

/// Decodes raw bytes, then normalizes.
pub fn normalize_bytes(raw: &[u8]) -> Result<NormalizedText, DecodeError> {
    let s = std::str::from_utf8(raw).map_err(|e| DecodeError { offset: e.valid_up_to() })?;
    Ok(normalize_text(s))
}

/// Canonical composition, Persian code-point mapping, whitespace collapse and
/// trimming, then repetition collapse.
pub fn normalize_text(raw: &str) -> NormalizedText {
    // (char, raw offset) pairs after composition + mapping.
    let composed = compose_with_offsets(raw);
    let mapped = composed.into_iter().map(|(c, o)| (map_char(c), o));

    let mut chars: Vec<(char, usize)> = Vec::new();
    let mut pending_space: Option<usize> = None;
    for (c, o) in mapped {
        if c.is_whitespace() {
            if !chars.is_empty() && pending_space.is_none() {
                pending_space = Some(o);
            }
            continue;
        }
        if let Some(so) = pending_space.take() {
            chars.push((' ', so));
        }
        chars.push((c, o));
    }

    let (collapsed, emphasis) = collapse_runs(&chars);
    let text: String = collapsed.iter().map(|&(c, _)| c).collect();
    let raw_offsets = collapsed.into_iter().map(|(_, o)| o).collect();
    NormalizedText { text, emphasis, raw_offsets }
}

/// Collapses every maximal run of 3 or more identical letters to one letter.
/// Runs of one or two letters are left alone.
pub fn collapse_repetition(text: &str) -> (String, Vec<EmphasisFlag>) {
    let chars: Vec<(char, usize)> = text.chars().enumerate().map(|(i, c)| (c, i)).collect();
    let (out, flags) = collapse_runs(&chars);
    (out.into_iter().map(|(c, _)| c).collect(), flags)
}

fn collapse_runs(chars: &[(char, usize)]) -> (Vec<(char, usize)>, Vec<EmphasisFlag>) {
    let mut out = Vec::with_capacity(chars.len());
    let mut flags = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i].0;
        let mut j = i + 1;
        while j < chars.len() && chars[j].0 == c {
            j += 1;
        }
        let run = j - i;
        if run >= REPETITION_THRESHOLD && c.is_alphabetic() {
            flags.push(EmphasisFlag { offset: out.len(), run_length: run });
            out.push(chars[i]);
        } else {
            out.extend_from_slice(&chars[i..j]);
        }
        i = j;
    }
    (out, flags)
}

/// NFC-composes `raw` segment by segment so that every output char keeps the
/// raw char offset of the segment that produced it.
fn compose_with_offsets(raw: &str) -> Vec<(char, usize)> {
    let mut out = Vec::with_capacity(raw.len());
    let mut seg = String::new();
    let mut seg_start = 0;
    for (i, c) in raw.chars().enumerate() {
        if !seg.is_empty() && starts_segment(c) {
            out.extend(seg.nfc().map(|n| (n, seg_start)));
            seg.clear();
        }
        if seg.is_empty() {
            seg_start = i;
        }
        seg.push(c);
    }
    out.extend(seg.nfc().map(|n| (n, seg_start)));

    // Starter-to-starter compositions outside the handled ranges would make
    // segment-wise composition diverge; fall back to whole-string composition.
    let whole: String = raw.nfc().collect();
    if out.iter().map(|&(c, _)| c).ne(whole.chars()) {
        return whole.chars().map(|c| (c, 0)).collect();
    }
    out
}

fn starts_segment(c: char) -> bool {
    canonical_combining_class(c) == 0 && !matches!(c, '\u{1161}'..='\u{1175}' | '\u{11A8}'..='\u{11C2}')
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub index: usize,
    /// Half-open char offsets into the source text.
    pub char_span: (usize, usize),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenSequence {
    tokens: Vec<Token>,
}

impl TokenSequence {
    /// Builds a sequence from surfaces, with spans laid out as if joined by
    /// single spaces. Empty surfaces are dropped and surfaces containing
    /// spaces are split.
    pub fn from_surfaces<I, S>(surfaces: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut tokens = Vec::new();
        let mut offset = 0;
        for s in surfaces {
            for part in s.as_ref().split(' ').filter(|p| !p.is_empty()) {
                let len = part.chars().count();
                tokens.push(Token {
                    surface: part.to_string(),
                    index: tokens.len(),
                    char_span: (offset, offset + len),
                });
                offset += len + 1;
            }
        }
        TokenSequence { tokens }
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Token> {
        self.tokens.get(i)
    }

    pub fn surfaces(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.surface.as_str())
    }

    pub fn to_surfaces(&self) -> Vec<String> {
        self.surfaces().map(str::to_string).collect()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Token> {
        self.tokens.iter()
    }
}

impl<'a> IntoIterator for &'a TokenSequence {
    type Item = &'a Token;
    type IntoIter = std::slice::Iter<'a, Token>;

    fn into_iter(self) -> Self::IntoIter {
        self.tokens.iter()
    }
}

/// Splits normalized text into maximal space-free runs. The zero-width
/// non-joiner is token-internal.
pub fn tokenize(text: &NormalizedText) -> TokenSequence {
    let mut tokens = Vec::new();
    let mut start = 0;
    let mut current = String::new();
    for (i, c) in text.as_str().chars().enumerate() {
        if c == ' ' {
            if !current.is_empty() {
                tokens.push(Token {
                    surface: std::mem::take(&mut current),
                    index: tokens.len(),
                    char_span: (start, i),
                });
            }
            start = i + 1;
        } else {
            current.push(c);
        }
    }
    if !current.is_empty() {
        let end = start + current.chars().count();
        tokens.push(Token { surface: current, index: tokens.len(), char_span: (start, end) });
    }
    TokenSequence { tokens }
}

/// Normalizes and tokenizes in one step.
pub fn tokenize_str(raw: &str) -> TokenSequence {
    tokenize(&normalize_text(raw))
}

pub fn detokenize(tokens: &TokenSequence) -> String {
    tokens.surfaces().collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn arabic_kaf_maps_to_persian_kaf() {
        // U+0643 -> U+06A9
        let n = normalize_text("\u{0643}\u{062A}\u{0627}\u{0628}");
        assert_eq!(n.as_str(), "کتاب");
        assert_eq!(n.as_str(), "\u{06A9}\u{062A}\u{0627}\u{0628}");
    }

    #[test]
    fn arabic_yeh_and_digits_map() {
        assert_eq!(normalize_text("\u{064A}").as_str(), "\u{06CC}");
        assert_eq!(normalize_text("\u{0661}\u{0662}").as_str(), "\u{06F1}\u{06F2}");
        assert_eq!(normalize_text("\u{FEF3}").as_str(), "\u{06CC}");
    }

    #[test]
    fn normal_text_unchanged() {
        assert_eq!(normalize_text("کتاب").as_str(), "کتاب");
    }

    #[test]
    fn whitespace_collapse_and_trim() {
        let n = normalize_text("  سلام   دوست\t\n");
        assert_eq!(n.as_str(), "سلام دوست");
    }

    #[test]
    fn alef_madda_composes() {
        assert_eq!(normalize_text("\u{0627}\u{0653}ب").as_str(), "\u{0622}ب");
    }

    #[test]
    fn emphasis_run_collapses() {
        let (s, flags) = collapse_repetition("خیلییییی");
        assert_eq!(s, "خیلی");
        assert_eq!(flags, vec![EmphasisFlag { offset: 3, run_length: 5 }]);
    }

    #[test]
    fn short_runs_untouched() {
        assert_eq!(collapse_repetition("سلام"), ("سلام".to_string(), vec![]));
        assert_eq!(collapse_repetition("الله").0, "الله");
        assert_eq!(collapse_repetition("abba").0, "abba");
        assert_eq!(collapse_repetition("aaa").0, "a");
    }

    #[test]
    fn non_letters_are_not_collapsed() {
        assert_eq!(collapse_repetition("!!!").0, "!!!");
        assert_eq!(collapse_repetition("1000").0, "1000");
    }

    #[test]
    fn normalize_reports_emphasis_in_output_offsets() {
        let n = normalize_text("سلام  خیلییییی");
        assert_eq!(n.as_str(), "سلام خیلی");
        assert_eq!(n.emphasis_flags(), &[EmphasisFlag { offset: 8, run_length: 5 }]);
        // surviving yeh is the first of the run in the raw text
        assert_eq!(n.raw_offset(8), Some(9));
    }

    #[test]
    fn decode_error_names_offset() {
        let err = normalize_bytes(b"ab\xffcd").unwrap_err();
        assert_eq!(err.offset, 2);
    }

    #[test]
    fn tokenize_basic() {
        let t = tokenize_str("من رفتم");
        assert_eq!(t.to_surfaces(), vec!["من", "رفتم"]);
        assert_eq!(t.get(1).unwrap().char_span, (3, 7));
    }

    #[test]
    fn zwnj_does_not_split() {
        let t = tokenize_str("می\u{200C}روم");
        assert_eq!(t.len(), 1);
        assert_eq!(t.get(0).unwrap().surface, "می\u{200C}روم");
    }

    #[test]
    fn empty_text_no_tokens() {
        assert!(tokenize_str("").is_empty());
        assert!(tokenize_str("   ").is_empty());
    }

    #[test]
    fn char_classes_are_disjoint_and_vowels_exact() {
        for c in ['ا', 'و', 'ی', 'آ'] {
            assert_eq!(classify(c), Some(CharClass::VowelLetter));
        }
        assert_eq!(classify('ب'), Some(CharClass::Consonant));
        assert_eq!(classify('ه'), Some(CharClass::Consonant));
        assert_eq!(classify('۵'), Some(CharClass::Digit));
        assert_eq!(classify('؟'), Some(CharClass::Punctuation));
        assert_eq!(classify(ZWNJ), Some(CharClass::Joiner));
        assert_eq!(classify(' '), None);
        for c in ['ا', 'ب', '۵', '؟', ZWNJ] {
            let n = CharClass::ALL.iter().filter(|k| k.contains(c)).count();
            assert_eq!(n, 1, "{c:?}");
        }
    }

    fn persianish() -> impl Strategy<Value = String> {
        let alphabet = prop::sample::select(vec![
            'ا', 'ب', 'ک', 'ي', 'ك', 'ی', 'و', 'ه', ' ', ' ', '\t', '\u{200C}', '\u{0653}', '٣', 'a', 'ً', '!',
            '\u{00A0}',
        ]);
        prop::collection::vec(alphabet, 0..40).prop_map(|v| v.into_iter().collect())
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(s in persianish()) {
            let once = normalize_text(&s);
            let twice = normalize_text(once.as_str());
            prop_assert_eq!(once.as_str(), twice.as_str());
            prop_assert!(twice.emphasis_flags().is_empty());
        }

        #[test]
        fn normalized_invariants_hold(s in persianish()) {
            let n = normalize_text(&s);
            let t = n.as_str();
            prop_assert!(!t.contains('\u{0643}') && !t.contains('\u{064A}'), "unmapped arabic letter");
            prop_assert!(!t.contains("  "));
            prop_assert_eq!(t.trim(), t);
            let chars: Vec<char> = t.chars().collect();
            for w in chars.windows(3) {
                prop_assert!(!(w[0] == w[1] && w[1] == w[2] && w[0].is_alphabetic()));
            }
            prop_assert_eq!(n.char_len(), chars.len());
        }

        #[test]
        fn tokenize_detokenize_roundtrip(s in persianish()) {
            let n = normalize_text(&s);
            let toks = tokenize(&n);
            prop_assert_eq!(detokenize(&toks), n.as_str());
            let again = TokenSequence::from_surfaces(toks.surfaces());
            prop_assert_eq!(again, toks.clone());
            for w in toks.tokens().windows(2) {
                prop_assert!(w[0].char_span.1 < w[1].char_span.0);
            }
        }

        #[test]
        fn collapse_never_grows(s in persianish()) {
            let (out, flags) = collapse_repetition(&s);
            prop_assert!(out.chars().count() <= s.chars().count());
            if flags.is_empty() {
                prop_assert_eq!(out, s);
            }
        }
    }
}
