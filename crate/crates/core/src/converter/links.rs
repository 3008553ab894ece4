//! Builds alignment links from per-output-token provenance.

use crate::alignment::{AlignmentLink, Span};

#[derive(Debug, Clone, Copy)]
struct Cluster {
    inf: (usize, usize),
    form: (usize, usize),
}

fn overlaps(a: (usize, usize), b: (usize, usize)) -> bool {
    a.0 < b.1 && b.0 < a.1
}

fn hull(a: (usize, usize), b: (usize, usize)) -> (usize, usize) {
    (a.0.min(b.0), a.1.max(b.1))
}

/// `origins[j]` is the informal token range output token `j` came from, or
/// `None` for an inserted token. Returns links that cover both sides exactly
/// once and never overlap: groups that would overlap are merged into one
/// phrase link, inserted tokens outside every group become insertion links,
/// and informal tokens no output token came from become deletion links.
pub fn build_links(origins: &[Option<(usize, usize)>], informal_len: usize) -> Vec<AlignmentLink> {
    let mut clusters: Vec<Cluster> = Vec::new();
    for (j, o) in origins.iter().enumerate() {
        let Some(r) = *o else { continue };
        let r = (r.0.min(informal_len), r.1.min(informal_len));
        if r.0 >= r.1 {
            continue;
        }
        match clusters.iter_mut().find(|c| c.inf == r) {
            Some(c) => c.form = hull(c.form, (j, j + 1)),
            None => clusters.push(Cluster { inf: r, form: (j, j + 1) }),
        }
    }

    loop {
        let mut merged = false;
        'outer: for i in 0..clusters.len() {
            for k in i + 1..clusters.len() {
                if overlaps(clusters[i].inf, clusters[k].inf) || overlaps(clusters[i].form, clusters[k].form) {
                    let other = clusters.remove(k);
                    clusters[i].inf = hull(clusters[i].inf, other.inf);
                    clusters[i].form = hull(clusters[i].form, other.form);
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            break;
        }
    }

    let mut links: Vec<AlignmentLink> =
        clusters.iter().map(|c| AlignmentLink::new(Span(c.inf.0, c.inf.1), Span(c.form.0, c.form.1))).collect();

    // insertions: runs of output tokens outside every cluster
    let mut j = 0;
    while j < origins.len() {
        if clusters.iter().any(|c| c.form.0 <= j && j < c.form.1) {
            j += 1;
            continue;
        }
        let start = j;
        while j < origins.len() && !clusters.iter().any(|c| c.form.0 <= j && j < c.form.1) {
            j += 1;
        }
        let anchor = clusters.iter().filter(|c| c.form.1 <= start).map(|c| c.inf.1).max().unwrap_or(0);
        links.push(AlignmentLink::new(Span::empty_at(anchor), Span(start, j)));
    }

    // deletions: runs of informal tokens outside every cluster
    let mut i = 0;
    while i < informal_len {
        if clusters.iter().any(|c| c.inf.0 <= i && i < c.inf.1) {
            i += 1;
            continue;
        }
        let start = i;
        while i < informal_len && !clusters.iter().any(|c| c.inf.0 <= i && i < c.inf.1) {
            i += 1;
        }
        let anchor = clusters.iter().filter(|c| c.inf.1 <= start).map(|c| c.form.1).max().unwrap_or(0);
        links.push(AlignmentLink::new(Span(start, i), Span::empty_at(anchor)));
    }

    links.sort_by_key(|l| (l.informal_span.start(), l.formal_span.start(), l.informal_span.end()));
    links
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alignment::check_links;
    use proptest::prelude::*;

    #[test]
    fn identity() {
        let links = build_links(&[Some((0, 1)), Some((1, 2))], 2);
        assert_eq!(links, [AlignmentLink::one_to_one(0, 0), AlignmentLink::one_to_one(1, 1)]);
    }

    #[test]
    fn expansion_insertion_deletion() {
        // informal: a b c ; formal: A1 A2 X C   (b deleted, X inserted)
        let links = build_links(&[Some((0, 1)), Some((0, 1)), None, Some((2, 3))], 3);
        assert_eq!(
            links,
            [
                AlignmentLink::new(Span(0, 1), Span(0, 2)),
                AlignmentLink::new(Span(1, 1), Span(2, 3)),
                AlignmentLink::new(Span(1, 2), Span(2, 2)),
                AlignmentLink::one_to_one(2, 3),
            ]
        );
        assert!(check_links(&links, 3, 4).is_empty());
    }

    #[test]
    fn interleaved_groups_merge() {
        // output tokens from 0, 1, 0: the two groups overlap on the formal side
        let links = build_links(&[Some((0, 1)), Some((1, 2)), Some((0, 1))], 2);
        assert_eq!(links, [AlignmentLink::new(Span(0, 2), Span(0, 3))]);
    }

    proptest! {
        #[test]
        fn links_are_always_valid_and_total(
            informal_len in 0usize..8,
            raw in proptest::collection::vec(proptest::option::of((0usize..8, 1usize..3)), 0..10),
        ) {
            let origins: Vec<Option<(usize, usize)>> = raw
                .into_iter()
                .map(|o| o.and_then(|(s, n)| {
                    (informal_len > 0).then(|| {
                        let s = s % informal_len;
                        (s, (s + n).min(informal_len))
                    })
                }))
                .collect();
            let links = build_links(&origins, informal_len);
            prop_assert!(check_links(&links, informal_len, origins.len()).is_empty(), "{:?}", links);
        }
    }
}
