//! Token pattern language, compiled onto `regex`.
//!
//! Literals match themselves; `{C}` consonant, `{V}` vowel letter, `{L}` any
//! letter, `{D}` digit, `{P}` punctuation, `{J}` joiner; `<TAG>` any
//! vocabulary word carrying `TAG`; `.`, `( )`, `|`, `*`, `+`, `?`, `^`, `$`
//! and `[...]` sets keep their regex meaning; `\x` escapes `x`.

use regex::Regex;

use crate::lexicon::Vocabulary;

const VOWELS: &str = "\u{0627}\u{0648}\u{06CC}\u{0622}";

fn class_regex(name: char) -> Option<String> {
    Some(match name {
        'C' => format!(r"[\p{{Alphabetic}}&&\P{{M}}&&\P{{N}}&&[^{VOWELS}]]"),
        'V' => format!("[{VOWELS}]"),
        'L' => r"[\p{Alphabetic}&&\P{M}&&\P{N}]".to_string(),
        'D' => r"\p{N}".to_string(),
        'P' => r"[[:punct:]\x{060C}\x{061B}\x{061F}\x{066A}-\x{066D}\x{06D4}\x{00AB}\x{00BB}\x{2010}-\x{2027}\x{2030}-\x{205E}]"
            .to_string(),
        'J' => r"[\x{200C}\x{200D}]".to_string(),
        _ => return None,
    })
}

fn vocab_class(tag: &str, vocab: &Vocabulary) -> String {
    let mut words: Vec<&str> = vocab.words_with_tag(tag).collect();
    if words.is_empty() {
        // matches nothing
        return r"(?:[^\x00-\x{10FFFF}])".to_string();
    }
    words.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    let alts: Vec<String> = words.into_iter().map(regex::escape).collect();
    format!("(?:{})", alts.join("|"))
}

/// Translates pattern source into regex syntax.
pub fn translate(src: &str, vocab: &Vocabulary) -> Result<String, String> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = String::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            '\\' => {
                let next = chars.get(i + 1).ok_or("dangling escape at end of pattern")?;
                out.push_str(&regex::escape(&next.to_string()));
                i += 2;
            }
            '{' => {
                let name = chars.get(i + 1).copied();
                if chars.get(i + 2) != Some(&'}') {
                    return Err(format!("malformed character class at offset {i}"));
                }
                let class = name
                    .and_then(class_regex)
                    .ok_or_else(|| format!("unknown character class `{{{}}}`", name.unwrap_or(' ')))?;
                out.push_str(&class);
                i += 3;
            }
            '<' => {
                let end = chars[i..]
                    .iter()
                    .position(|&c| c == '>')
                    .ok_or_else(|| format!("unterminated word class at offset {i}"))?;
                let tag: String = chars[i + 1..i + end].iter().collect();
                if tag.is_empty() {
                    return Err("empty word class `<>`".into());
                }
                out.push_str(&vocab_class(&tag, vocab));
                i += end + 1;
            }
            '[' => {
                let end = chars[i..]
                    .iter()
                    .position(|&c| c == ']')
                    .ok_or_else(|| format!("unterminated set at offset {i}"))?;
                out.extend(&chars[i..=i + end]);
                i += end + 1;
            }
            '}' | '>' | ']' => return Err(format!("unbalanced `{c}` at offset {i}")),
            '.' | '(' | ')' | '|' | '*' | '+' | '?' | '^' | '$' => {
                out.push(c);
                i += 1;
            }
            ' ' => return Err("patterns match single tokens and cannot contain spaces".into()),
            _ => {
                out.push_str(&regex::escape(&c.to_string()));
                i += 1;
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct Pattern {
    source: String,
    regex: Regex,
}

impl Pattern {
    pub fn compile(src: &str, vocab: &Vocabulary) -> Result<Pattern, String> {
        if src.is_empty() {
            return Err("empty pattern".into());
        }
        let translated = translate(src, vocab)?;
        let regex = Regex::new(&translated).map_err(|e| format!("invalid pattern `{src}`: {e}"))?;
        Ok(Pattern { source: src.to_string(), regex })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn regex(&self) -> &Regex {
        &self.regex
    }

    pub fn capture_count(&self) -> usize {
        self.regex.captures_len() - 1
    }

    pub fn is_match(&self, s: &str) -> bool {
        self.regex.is_match(s)
    }
}

impl PartialEq for Pattern {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.regex.as_str() == other.regex.as_str()
    }
}

/// A piece of a replacement template.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Piece {
    Literal(String),
    Group(usize),
}

/// Replacement template. `∅` alone deletes the token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Replacement {
    source: String,
    pieces: Vec<Piece>,
}

pub const DELETE_MARK: &str = "∅";

impl Replacement {
    pub fn parse(src: &str) -> Result<Replacement, String> {
        if src == DELETE_MARK {
            return Ok(Replacement { source: src.to_string(), pieces: Vec::new() });
        }
        let chars: Vec<char> = src.chars().collect();
        let mut pieces = Vec::new();
        let mut lit = String::new();
        let mut i = 0;
        while i < chars.len() {
            match chars[i] {
                '\\' if i + 1 < chars.len() => {
                    lit.push(chars[i + 1]);
                    i += 2;
                }
                '$' => {
                    let (num, used) = if chars.get(i + 1) == Some(&'{') {
                        let end = chars[i..].iter().position(|&c| c == '}').ok_or("unterminated `${`")?;
                        (chars[i + 2..i + end].iter().collect::<String>(), end + 1)
                    } else {
                        let digits: String = chars[i + 1..].iter().take_while(|c| c.is_ascii_digit()).collect();
                        let n = digits.len();
                        (digits, n + 1)
                    };
                    let n: usize = num.parse().map_err(|_| format!("bad capture reference in `{src}`"))?;
                    if !lit.is_empty() {
                        pieces.push(Piece::Literal(std::mem::take(&mut lit)));
                    }
                    pieces.push(Piece::Group(n));
                    i += used;
                }
                c => {
                    lit.push(c);
                    i += 1;
                }
            }
        }
        if !lit.is_empty() {
            pieces.push(Piece::Literal(lit));
        }
        Ok(Replacement { source: src.to_string(), pieces })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn max_group(&self) -> usize {
        self.pieces
            .iter()
            .filter_map(|p| match p {
                Piece::Group(n) => Some(*n),
                Piece::Literal(_) => None,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn is_delete(&self) -> bool {
        self.source == DELETE_MARK
    }

    pub fn expand(&self, caps: &regex::Captures<'_>) -> String {
        let mut out = String::new();
        for p in &self.pieces {
            match p {
                Piece::Literal(s) => out.push_str(s),
                Piece::Group(n) => out.push_str(caps.get(*n).map_or("", |m| m.as_str())),
            }
        }
        out
    }
}
