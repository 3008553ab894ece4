//! Token-range alignment links between an informal sentence and its formal
//! counterpart.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Half-open token-index range, serialized as `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span(pub usize, pub usize);

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span(start, end)
    }

    pub fn empty_at(pos: usize) -> Self {
        Span(pos, pos)
    }

    pub fn start(self) -> usize {
        self.0
    }

    pub fn end(self) -> usize {
        self.1
    }

    pub fn len(self) -> usize {
        self.1.saturating_sub(self.0)
    }

    pub fn is_empty(self) -> bool {
        self.1 <= self.0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 <= i && i < self.1
    }

    pub fn overlaps(self, other: Span) -> bool {
        !self.is_empty() && !other.is_empty() && self.0 < other.1 && other.0 < self.1
    }

    pub fn range(self) -> std::ops::Range<usize> {
        self.0..self.1
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.0, self.1)
    }
}

/// An informal span aligned to a formal span. An empty informal span is an
/// insertion, an empty formal span a deletion; never both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AlignmentLink {
    pub informal_span: Span,
    pub formal_span: Span,
}

impl AlignmentLink {
    pub fn new(informal: Span, formal: Span) -> Self {
        AlignmentLink { informal_span: informal, formal_span: formal }
    }

    pub fn one_to_one(i: usize, f: usize) -> Self {
        Self::new(Span(i, i + 1), Span(f, f + 1))
    }

    pub fn has_empty_span(&self) -> bool {
        self.informal_span.is_empty() || self.formal_span.is_empty()
    }
}

impl fmt::Display for AlignmentLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.informal_span, self.formal_span)
    }
}

/// True if links that are non-empty on both sides keep their relative order.
pub fn is_monotonic(links: &[AlignmentLink]) -> bool {
    let mut full: Vec<&AlignmentLink> = links.iter().filter(|l| !l.has_empty_span()).collect();
    full.sort_by_key(|l| (l.informal_span.start(), l.formal_span.start()));
    full.windows(2).all(|w| w[0].formal_span.start() < w[1].formal_span.start())
}

/// Links are non-monotonic or contain an insertion/deletion.
pub fn has_syntactic_change(links: &[AlignmentLink]) -> bool {
    !is_monotonic(links) || links.iter().any(AlignmentLink::has_empty_span)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LinkProblem {
    BothSpansEmpty { link: usize },
    InvertedSpan { link: usize },
    OutOfBounds { link: usize },
    InformalOverlap { first: usize, second: usize },
    FormalOverlap { first: usize, second: usize },
    InformalUncovered { token: usize },
    FormalUncovered { token: usize },
}

impl LinkProblem {
    /// Uncovered tokens are warnings, everything else is an error.
    pub fn is_error(&self) -> bool {
        !matches!(self, LinkProblem::InformalUncovered { .. } | LinkProblem::FormalUncovered { .. })
    }
}

impl fmt::Display for LinkProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinkProblem::BothSpansEmpty { link } => write!(f, "link {link} has two empty spans"),
            LinkProblem::InvertedSpan { link } => write!(f, "link {link} has a span with end < start"),
            LinkProblem::OutOfBounds { link } => write!(f, "link {link} is out of bounds"),
            LinkProblem::InformalOverlap { first, second } => {
                write!(f, "links {first} and {second} overlap on the informal side")
            }
            LinkProblem::FormalOverlap { first, second } => {
                write!(f, "links {first} and {second} overlap on the formal side")
            }
            LinkProblem::InformalUncovered { token } => {
                write!(f, "informal token {token} is not covered by any link")
            }
            LinkProblem::FormalUncovered { token } => {
                write!(f, "formal token {token} is not covered by any link")
            }
        }
    }
}

/// Checks bounds, overlap and coverage of `links` against sentences of the
/// given token lengths.
pub fn check_links(links: &[AlignmentLink], informal_len: usize, formal_len: usize) -> Vec<LinkProblem> {
    let mut problems = Vec::new();
    for (i, l) in links.iter().enumerate() {
        let (inf, form) = (l.informal_span, l.formal_span);
        if inf.1 < inf.0 || form.1 < form.0 {
            problems.push(LinkProblem::InvertedSpan { link: i });
            continue;
        }
        if inf.is_empty() && form.is_empty() {
            problems.push(LinkProblem::BothSpansEmpty { link: i });
        }
        if inf.1 > informal_len || form.1 > formal_len {
            problems.push(LinkProblem::OutOfBounds { link: i });
        }
    }
    for i in 0..links.len() {
        for j in i + 1..links.len() {
            if links[i].informal_span.overlaps(links[j].informal_span) {
                problems.push(LinkProblem::InformalOverlap { first: i, second: j });
            }
            if links[i].formal_span.overlaps(links[j].formal_span) {
                problems.push(LinkProblem::FormalOverlap { first: i, second: j });
            }
        }
    }
    for t in 0..informal_len {
        if !links.iter().any(|l| l.informal_span.contains(t)) {
            problems.push(LinkProblem::InformalUncovered { token: t });
        }
    }
    for t in 0..formal_len {
        if !links.iter().any(|l| l.formal_span.contains(t)) {
            problems.push(LinkProblem::FormalUncovered { token: t });
        }
    }
    problems
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn span_serializes_as_pair() {
        let l = AlignmentLink::new(Span(0, 1), Span(2, 4));
        let json = serde_json::to_string(&l).unwrap();
        assert_eq!(json, r#"{"informal_span":[0,1],"formal_span":[2,4]}"#);
        let back: AlignmentLink = serde_json::from_str(&json).unwrap();
        assert_eq!(back, l);
    }

    #[test]
    fn monotonic_detection() {
        let mono = [AlignmentLink::one_to_one(0, 0), AlignmentLink::one_to_one(1, 1)];
        assert!(is_monotonic(&mono));
        assert!(!has_syntactic_change(&mono));
        let swapped = [AlignmentLink::one_to_one(0, 1), AlignmentLink::one_to_one(1, 0)];
        assert!(!is_monotonic(&swapped));
        assert!(has_syntactic_change(&swapped));
        let inserted = [AlignmentLink::one_to_one(0, 0), AlignmentLink::new(Span(1, 1), Span(1, 2))];
        assert!(is_monotonic(&inserted));
        assert!(has_syntactic_change(&inserted));
    }

    #[test]
    fn overlap_and_coverage_problems() {
        let links = [AlignmentLink::new(Span(0, 1), Span(0, 2)), AlignmentLink::new(Span(1, 2), Span(1, 2))];
        let p = check_links(&links, 3, 2);
        assert!(p.contains(&LinkProblem::FormalOverlap { first: 0, second: 1 }));
        assert!(p.contains(&LinkProblem::InformalUncovered { token: 2 }));
        assert!(check_links(&[AlignmentLink::one_to_one(0, 5)], 1, 1).contains(&LinkProblem::OutOfBounds { link: 0 }));
    }

    #[test]
    fn empty_spans_never_overlap() {
        assert!(!Span(1, 1).overlaps(Span(0, 3)));
        assert!(Span(0, 2).overlaps(Span(1, 3)));
        assert!(!Span(0, 1).overlaps(Span(1, 2)));
    }
}
