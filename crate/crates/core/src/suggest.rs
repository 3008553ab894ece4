//! Alignment suggestions learned from previously accepted links.
//!
//! Informal n-grams (4 tokens down to 1, leftmost first) are matched against
//! phrase pairs seen before; a historical formal phrase that occurs in the
//! unclaimed part of the formal sentence is proposed, preferring higher pair
//! frequency, then more context agreement, then the earliest position.
//! Whatever is left is aligned by relative position so the result always
//! covers both sentences.

use std::collections::BTreeMap;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::Path;

use log::warn;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alignment::{AlignmentLink, Span};
use crate::corpus::{validate_record, CorpusRecord, Issue, Status, SENTENCE_END, SENTENCE_START};
use crate::lexicon::MAX_INFORMAL_TOKENS;

/// First line of a snapshot file.
pub const SNAPSHOT_HEADER: &str = "rasmi-alignment-history";
pub const SNAPSHOT_VERSION: u32 = 1;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct PairStats {
    count: u64,
    /// (left neighbour, right neighbour) → occurrences.
    contexts: BTreeMap<(String, String), u64>,
}

/// Counts of accepted (informal phrase, formal phrase) pairs with the
/// informal neighbours each was seen between.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AlignmentHistory {
    pairs: BTreeMap<String, BTreeMap<String, PairStats>>,
}

#[derive(Debug, Error)]
#[error("record `{id}` has validation errors")]
pub struct IngestError {
    pub id: String,
    pub issues: Vec<Issue>,
}

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("not an alignment history snapshot")]
    Header,
    #[error("unsupported snapshot version {0}")]
    Version(u32),
    #[error("malformed snapshot: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    History,
    DiagonalFallback,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Suggestion {
    pub link: AlignmentLink,
    /// Pair frequency in the history; 0 for fallback links.
    pub score: u64,
    /// Context samples agreeing with the actual neighbours.
    pub tie_break: u64,
    pub provenance: Provenance,
}

#[derive(Serialize, Deserialize)]
struct SnapshotPair {
    informal: String,
    formal: String,
    count: u64,
    contexts: Vec<(String, String, u64)>,
}

fn neighbours<S: AsRef<str>>(tokens: &[S], span: Span) -> (String, String) {
    let left = span.start().checked_sub(1).map_or(SENTENCE_START, |k| tokens[k].as_ref());
    let right = tokens.get(span.end()).map_or(SENTENCE_END, |t| t.as_ref());
    (left.to_string(), right.to_string())
}

impl AlignmentHistory {
    pub fn new() -> Self {
        Self::default()
    }

    /// Ingests every reviewed or confirmed record; invalid ones are skipped.
    pub fn rebuild<'a, I>(records: I) -> Self
    where
        I: IntoIterator<Item = &'a CorpusRecord>,
    {
        let mut h = Self::new();
        for r in records {
            if !matches!(r.status, Status::Reviewed | Status::Confirmed) {
                continue;
            }
            if let Err(e) = h.ingest(r) {
                warn!("{e}; skipped");
            }
        }
        h
    }

    /// Counts one occurrence of a pair in the given context.
    pub fn add_pair(&mut self, informal: &str, formal: &str, context: (String, String)) {
        let p = self.pairs.entry(informal.to_string()).or_default().entry(formal.to_string()).or_default();
        p.count += 1;
        *p.contexts.entry(context).or_default() += 1;
    }

    /// Adds every link of `record` with two non-empty spans.
    pub fn ingest(&mut self, record: &CorpusRecord) -> Result<(), IngestError> {
        let issues = validate_record(record);
        if issues.iter().any(Issue::is_error) {
            return Err(IngestError { id: record.id.clone(), issues });
        }
        let inf = record.informal_tokens();
        let form = record.formal_tokens();
        for link in &record.links {
            if link.has_empty_span() {
                continue;
            }
            let i = inf[link.informal_span.range()].join(" ");
            let f = form[link.formal_span.range()].join(" ");
            self.add_pair(&i, &f, neighbours(&inf, link.informal_span));
        }
        Ok(())
    }

    pub fn count(&self, informal: &str, formal: &str) -> u64 {
        self.pairs.get(informal).and_then(|m| m.get(formal)).map_or(0, |p| p.count)
    }

    /// All (informal, formal, count) triples in canonical order.
    pub fn pair_counts(&self) -> impl Iterator<Item = (&str, &str, u64)> {
        self.pairs.iter().flat_map(|(i, m)| m.iter().map(move |(f, p)| (i.as_str(), f.as_str(), p.count)))
    }

    /// Context samples for every pair with this informal phrase, merged.
    pub fn contexts(&self, informal: &str) -> BTreeMap<(String, String), u64> {
        let mut out = BTreeMap::new();
        for p in self.pairs.get(informal).into_iter().flat_map(BTreeMap::values) {
            for (c, k) in &p.contexts {
                *out.entry(c.clone()).or_default() += k;
            }
        }
        out
    }

    pub fn pair_contexts(&self, informal: &str, formal: &str) -> Vec<((String, String), u64)> {
        self.pairs
            .get(informal)
            .and_then(|m| m.get(formal))
            .map(|p| p.contexts.iter().map(|(c, k)| (c.clone(), *k)).collect())
            .unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.pairs.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    fn overlap(&self, informal: &str, formal: &str, ctx: &(String, String)) -> u64 {
        let Some(p) = self.pairs.get(informal).and_then(|m| m.get(formal)) else { return 0 };
        p.contexts.iter().map(|((l, r), k)| k * (u64::from(*l == ctx.0) + u64::from(*r == ctx.1))).sum()
    }

    /// Proposed links covering both sentences, sorted by informal position.
    pub fn suggest<S: AsRef<str>, T: AsRef<str>>(&self, informal: &[S], formal: &[T]) -> Vec<Suggestion> {
        let inf: Vec<&str> = informal.iter().map(AsRef::as_ref).collect();
        let form: Vec<&str> = formal.iter().map(AsRef::as_ref).collect();
        let mut claimed_i = vec![false; inf.len()];
        let mut claimed_f = vec![false; form.len()];
        let mut out = Vec::new();

        for n in (1..=MAX_INFORMAL_TOKENS.min(inf.len())).rev() {
            for start in 0..=inf.len() - n {
                if claimed_i[start..start + n].iter().any(|&c| c) {
                    continue;
                }
                let phrase = inf[start..start + n].join(" ");
                let Some(candidates) = self.pairs.get(&phrase) else { continue };
                let span = Span(start, start + n);
                let ctx = neighbours(&inf, span);
                // (score, overlap, position), best first; BTreeMap order breaks
                // any remaining tie by formal phrase
                let mut best: Option<(u64, u64, usize, usize)> = None;
                for (f, p) in candidates {
                    let f_tokens: Vec<&str> = f.split(' ').collect();
                    let m = f_tokens.len();
                    if m > form.len() {
                        continue;
                    }
                    let overlap = self.overlap(&phrase, f, &ctx);
                    for pos in 0..=form.len() - m {
                        if form[pos..pos + m] != f_tokens[..] || claimed_f[pos..pos + m].iter().any(|&c| c) {
                            continue;
                        }
                        let better = match best {
                            None => true,
                            Some((s, o, bp, _)) => {
                                (p.count, overlap, std::cmp::Reverse(pos)) > (s, o, std::cmp::Reverse(bp))
                            }
                        };
                        if better {
                            best = Some((p.count, overlap, pos, m));
                        }
                        break;
                    }
                }
                if let Some((score, tie_break, pos, m)) = best {
                    claimed_i[start..start + n].iter_mut().for_each(|c| *c = true);
                    claimed_f[pos..pos + m].iter_mut().for_each(|c| *c = true);
                    out.push(Suggestion {
                        link: AlignmentLink::new(span, Span(pos, pos + m)),
                        score,
                        tie_break,
                        provenance: Provenance::History,
                    });
                }
            }
        }
        let history_links: Vec<AlignmentLink> = out.iter().map(|s| s.link).collect();
        out.extend(diagonal(&claimed_i, &claimed_f, &history_links).into_iter().map(|link| Suggestion {
            link,
            score: 0,
            tie_break: 0,
            provenance: Provenance::DiagonalFallback,
        }));
        out.sort_by_key(|s| (s.link.informal_span.start(), s.link.formal_span.start(), s.link));
        out
    }

    pub fn write_snapshot<W: Write>(&self, mut w: W) -> Result<(), SnapshotError> {
        writeln!(w, "{SNAPSHOT_HEADER} {SNAPSHOT_VERSION}")?;
        let pairs: Vec<SnapshotPair> = self
            .pairs
            .iter()
            .flat_map(|(i, m)| {
                m.iter().map(move |(f, p)| SnapshotPair {
                    informal: i.clone(),
                    formal: f.clone(),
                    count: p.count,
                    contexts: p.contexts.iter().map(|((l, r), k)| (l.clone(), r.clone(), *k)).collect(),
                })
            })
            .collect();
        serde_json::to_writer(&mut w, &pairs)?;
        writeln!(w)?;
        Ok(())
    }

    pub fn read_snapshot<R: Read>(r: R) -> Result<Self, SnapshotError> {
        let mut r = BufReader::new(r);
        let mut header = String::new();
        r.read_line(&mut header)?;
        let version = header
            .trim_end()
            .strip_prefix(SNAPSHOT_HEADER)
            .and_then(|v| v.trim().parse::<u32>().ok())
            .ok_or(SnapshotError::Header)?;
        if version != SNAPSHOT_VERSION {
            return Err(SnapshotError::Version(version));
        }
        let pairs: Vec<SnapshotPair> = serde_json::from_reader(r)?;
        let mut h = Self::new();
        for p in pairs {
            let stats =
                PairStats { count: p.count, contexts: p.contexts.into_iter().map(|(l, r, k)| ((l, r), k)).collect() };
            h.pairs.entry(p.informal).or_default().insert(p.formal, stats);
        }
        Ok(h)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), SnapshotError> {
        let f = std::fs::File::create(path)?;
        let mut w = io::BufWriter::new(f);
        self.write_snapshot(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, SnapshotError> {
        Self::read_snapshot(std::fs::File::open(path)?)
    }
}

/// Aligns unclaimed tokens one-to-one by relative position, then grows those
/// links over adjacent leftovers. Leftovers with no neighbouring diagonal
/// link become insertions or deletions.
fn diagonal(claimed_i: &[bool], claimed_f: &[bool], fixed: &[AlignmentLink]) -> Vec<AlignmentLink> {
    let ui: Vec<usize> = (0..claimed_i.len()).filter(|&i| !claimed_i[i]).collect();
    let uf: Vec<usize> = (0..claimed_f.len()).filter(|&j| !claimed_f[j]).collect();
    let (a, b) = (ui.len(), uf.len());
    let mut links: Vec<AlignmentLink> = Vec::new();
    if a > 0 && b > 0 {
        if a <= b {
            links.extend((0..a).map(|k| AlignmentLink::one_to_one(ui[k], uf[k * b / a])));
        } else {
            links.extend((0..b).map(|k| AlignmentLink::one_to_one(ui[k * a / b], uf[k])));
        }
    }
    let paired_i: Vec<usize> = links.iter().map(|l| l.informal_span.start()).collect();
    let paired_f: Vec<usize> = links.iter().map(|l| l.formal_span.start()).collect();
    let left_i: Vec<usize> = ui.into_iter().filter(|i| !paired_i.contains(i)).collect();
    let left_f: Vec<usize> = uf.into_iter().filter(|j| !paired_f.contains(j)).collect();

    let rest_i = absorb(&mut links, &left_i, |l| &mut l.informal_span);
    let rest_f = absorb(&mut links, &left_f, |l| &mut l.formal_span);

    let all: Vec<AlignmentLink> = fixed.iter().chain(&links).copied().collect();
    for run in runs(&rest_i) {
        let anchor = run.start().checked_sub(1).and_then(|p| all.iter().find(|l| l.informal_span.contains(p)));
        let at = anchor.map_or(0, |l| l.formal_span.end());
        links.push(AlignmentLink::new(run, Span::empty_at(at)));
    }
    for run in runs(&rest_f) {
        let anchor = run.start().checked_sub(1).and_then(|p| all.iter().find(|l| l.formal_span.contains(p)));
        let at = anchor.map_or(0, |l| l.informal_span.end());
        links.push(AlignmentLink::new(Span::empty_at(at), run));
    }
    links
}

/// Extends diagonal links on one side over adjacent leftover positions and
/// returns the positions that could not be absorbed.
fn absorb(links: &mut [AlignmentLink], leftover: &[usize], side: fn(&mut AlignmentLink) -> &mut Span) -> Vec<usize> {
    let mut rest = Vec::new();
    for &p in leftover {
        match links.iter_mut().map(side).find(|s| s.end() == p) {
            Some(s) => s.1 += 1,
            None => rest.push(p),
        }
    }
    let mut unplaced = Vec::new();
    for &p in rest.iter().rev() {
        match links.iter_mut().map(side).find(|s| s.start() == p + 1) {
            Some(s) => s.0 -= 1,
            None => unplaced.push(p),
        }
    }
    unplaced.reverse();
    unplaced
}

/// Maximal runs of consecutive positions.
fn runs(positions: &[usize]) -> Vec<Span> {
    let mut out: Vec<Span> = Vec::new();
    for &p in positions {
        match out.last_mut() {
            Some(s) if s.end() == p => s.1 += 1,
            _ => out.push(Span(p, p + 1)),
        }
    }
    out
}
