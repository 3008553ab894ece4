//! BLEU scoring and corpus evaluation of converter output.

use std::collections::HashMap;
use std::fmt::Write as _;

use log::warn;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::text::normalize_text;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BleuConfig {
    pub max_order: usize,
    /// One weight per order; must sum to 1.
    pub weights: Vec<f64>,
    /// Add-one smoothing for orders ≥ 2 that have no matches.
    pub smoothing: bool,
    /// Inclusive token-count range a reference must fall in to be scored.
    pub length_filter: Option<(usize, usize)>,
}

impl Default for BleuConfig {
    fn default() -> Self {
        Self::uniform(4)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("max n-gram order must be at least 1")]
    ZeroOrder,
    #[error("expected {expected} weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("weights sum to {0}, not 1")]
    WeightSum(f64),
    #[error("length filter [{0}, {1}] is empty")]
    EmptyFilter(usize, usize),
    #[error("{outputs} outputs but {references} references")]
    LengthMismatch { outputs: usize, references: usize },
}

impl BleuConfig {
    pub fn uniform(max_order: usize) -> Self {
        let w = if max_order == 0 { 0.0 } else { 1.0 / max_order as f64 };
        BleuConfig { max_order, weights: vec![w; max_order], smoothing: true, length_filter: None }
    }

    pub fn with_length_filter(mut self, min: usize, max: usize) -> Self {
        self.length_filter = Some((min, max));
        self
    }

    pub fn validate(&self) -> Result<(), EvalError> {
        if self.max_order == 0 {
            return Err(EvalError::ZeroOrder);
        }
        if self.weights.len() != self.max_order {
            return Err(EvalError::WeightCount { expected: self.max_order, got: self.weights.len() });
        }
        let sum: f64 = self.weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(EvalError::WeightSum(sum));
        }
        if let Some((lo, hi)) = self.length_filter {
            if lo > hi {
                return Err(EvalError::EmptyFilter(lo, hi));
            }
        }
        Ok(())
    }
}

/// Clipped n-gram matches and totals per order, plus the lengths the brevity
/// penalty needs. Sums of these are corpus statistics.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct NgramStats {
    pub matches: Vec<u64>,
    pub totals: Vec<u64>,
    pub candidate_len: u64,
    pub reference_len: u64,
}

fn ngram_counts<'t, 'a>(tokens: &'t [&'a str], n: usize) -> HashMap<&'t [&'a str], u64> {
    let mut m = HashMap::new();
    if tokens.len() >= n {
        for w in tokens.windows(n) {
            *m.entry(w).or_default() += 1;
        }
    }
    m
}

impl NgramStats {
    pub fn new(max_order: usize) -> Self {
        NgramStats { matches: vec![0; max_order], totals: vec![0; max_order], candidate_len: 0, reference_len: 0 }
    }

    /// Statistics for one candidate against its references. The reference
    /// length is the one closest to the candidate's, the shorter on a tie.
    pub fn sentence<S: AsRef<str>, R: AsRef<str>>(candidate: &[S], references: &[Vec<R>], max_order: usize) -> Self {
        let cand: Vec<&str> = candidate.iter().map(AsRef::as_ref).collect();
        let refs: Vec<Vec<&str>> = references.iter().map(|r| r.iter().map(AsRef::as_ref).collect()).collect();
        let mut s = NgramStats::new(max_order);
        s.candidate_len = cand.len() as u64;
        s.reference_len =
            refs.iter().map(|r| r.len() as u64).min_by_key(|&l| (l.abs_diff(s.candidate_len), l)).unwrap_or(0);
        for n in 1..=max_order {
            let c = ngram_counts(&cand, n);
            let mut max_ref: HashMap<&[&str], u64> = HashMap::new();
            for r in &refs {
                for (g, k) in ngram_counts(r, n) {
                    let e = max_ref.entry(g).or_default();
                    *e = (*e).max(k);
                }
            }
            s.totals[n - 1] = c.values().sum();
            s.matches[n - 1] = c.iter().map(|(g, &k)| k.min(max_ref.get(g).copied().unwrap_or(0))).sum();
        }
        s
    }

    pub fn add(&mut self, other: &NgramStats) {
        for (a, b) in self.matches.iter_mut().zip(&other.matches) {
            *a += b;
        }
        for (a, b) in self.totals.iter_mut().zip(&other.totals) {
            *a += b;
        }
        self.candidate_len += other.candidate_len;
        self.reference_len += other.reference_len;
    }

    pub fn bleu(&self, config: &BleuConfig) -> f64 {
        if self.candidate_len == 0 {
            warn!("empty candidate scores 0");
            return 0.0;
        }
        if self.matches.first().copied().unwrap_or(0) == 0 {
            return 0.0;
        }
        let mut log_sum = 0.0;
        for (n, (&m, &t)) in self.matches.iter().zip(&self.totals).enumerate() {
            let p = if m > 0 {
                m as f64 / t as f64
            } else if config.smoothing && n >= 1 {
                1.0 / (t as f64 + 1.0)
            } else {
                return 0.0;
            };
            log_sum += config.weights[n] * p.ln();
        }
        let (c, r) = (self.candidate_len as f64, self.reference_len as f64);
        let bp = if c > r { 1.0 } else { (1.0 - r / c).exp() };
        (bp * log_sum.exp()).clamp(0.0, 1.0)
    }
}

/// Sentence BLEU of `candidate` against one or more references.
pub fn bleu<S: AsRef<str>, R: AsRef<str>>(candidate: &[S], references: &[Vec<R>], config: &BleuConfig) -> f64 {
    NgramStats::sentence(candidate, references, config.max_order).bleu(config)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentenceScore {
    /// Position in the input lists.
    pub index: usize,
    pub bleu: f64,
    pub candidate_len: usize,
    pub reference_len: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub corpus_bleu: f64,
    /// Corpus BLEU × 100, rounded to 4 decimals.
    pub corpus_bleu_percent: f64,
    pub total_pairs: usize,
    pub scored_pairs: usize,
    pub filtered_out: usize,
    pub length_filter: Option<(usize, usize)>,
    pub sentences: Vec<SentenceScore>,
}

pub fn percent(score: f64) -> f64 {
    (score * 100.0 * 10_000.0).round() / 10_000.0
}

fn words(text: &str) -> Vec<String> {
    normalize_text(text).as_str().split(' ').filter(|t| !t.is_empty()).map(str::to_string).collect()
}

/// Scores `outputs[i]` against `references[i]`. Pairs whose reference length
/// falls outside the configured filter are counted but not scored.
pub fn evaluate_corpus<S: AsRef<str>, R: AsRef<str>>(
    outputs: &[S],
    references: &[R],
    config: &BleuConfig,
) -> Result<EvalReport, EvalError> {
    config.validate()?;
    if outputs.len() != references.len() {
        return Err(EvalError::LengthMismatch { outputs: outputs.len(), references: references.len() });
    }
    let mut total = NgramStats::new(config.max_order);
    let mut sentences = Vec::new();
    for (index, (o, r)) in outputs.iter().zip(references).enumerate() {
        let cand = words(o.as_ref());
        let reference = words(r.as_ref());
        if let Some((lo, hi)) = config.length_filter {
            if !(lo..=hi).contains(&reference.len()) {
                continue;
            }
        }
        let stats = NgramStats::sentence(&cand, std::slice::from_ref(&reference), config.max_order);
        sentences.push(SentenceScore {
            index,
            bleu: stats.bleu(config),
            candidate_len: cand.len(),
            reference_len: reference.len(),
        });
        total.add(&stats);
    }
    let corpus_bleu = if sentences.is_empty() { 0.0 } else { total.bleu(config) };
    Ok(EvalReport {
        corpus_bleu,
        corpus_bleu_percent: percent(corpus_bleu),
        total_pairs: outputs.len(),
        scored_pairs: sentences.len(),
        filtered_out: outputs.len() - sentences.len(),
        length_filter: config.length_filter,
        sentences,
    })
}

impl EvalReport {
    /// Human-readable summary.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "BLEU: {:.4}%", self.corpus_bleu_percent);
        let _ = writeln!(
            s,
            "pairs: {} scored, {} filtered out, {} total",
            self.scored_pairs, self.filtered_out, self.total_pairs
        );
        if let Some((lo, hi)) = self.length_filter {
            let _ = writeln!(s, "reference length filter: [{lo}, {hi}] tokens");
        }
        s
    }
}
