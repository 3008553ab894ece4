use std::collections::BTreeMap;

use proptest::prelude::*;
use rasmi_core::corpus::{
    compute_stats, extract_dictionary, filter_candidates, load_corpus, read_corpus, save_corpus, synthetic_corpus,
    word_pairs, CorpusRecord, SynthConfig,
};
use rasmi_core::lexicon::{LexEntry, Lexicon};

fn shared(records: usize, seed: u64) -> Vec<CorpusRecord> {
    synthetic_corpus(&SynthConfig { shared_vocab: Some(6), ..SynthConfig::new(records, seed) })
}

/// Every link with two non-empty spans, enumerated directly.
fn oracle_pairs(records: &[CorpusRecord]) -> BTreeMap<(String, String), u64> {
    let mut out = BTreeMap::new();
    for r in records {
        let inf: Vec<&str> = r.informal.split(' ').collect();
        let form: Vec<&str> = r.formal.split(' ').collect();
        for l in &r.links {
            let (a, b) = (l.informal_span.0, l.informal_span.1);
            let (c, d) = (l.formal_span.0, l.formal_span.1);
            if a == b || c == d {
                continue;
            }
            *out.entry((inf[a..b].join(" "), form[c..d].join(" "))).or_insert(0) += 1;
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dictionary_matches_enumeration(seed in any::<u64>(), n in 0usize..25) {
        let recs = shared(n, seed);
        let oracle = oracle_pairs(&recs);
        let dict: BTreeMap<(String, String), u64> =
            extract_dictionary(&recs).iter().map(|e| ((e.informal.clone(), e.formal.clone()), e.frequency)).collect();
        let expected: BTreeMap<_, _> = oracle.iter().filter(|((i, f), _)| i != f).map(|(k, v)| (k.clone(), *v)).collect();
        prop_assert_eq!(dict, expected);
        prop_assert_eq!(word_pairs(&recs), oracle.clone());
        prop_assert_eq!(compute_stats(&recs).unique_word_pairs, oracle.len() as u64);
    }

    #[test]
    fn stats_are_linear_over_concatenation(seed in any::<u64>(), n in 0usize..20, m in 0usize..20) {
        let a = shared(n, seed);
        let b = shared(m, seed.wrapping_add(1));
        let (sa, sb) = (compute_stats(&a), compute_stats(&b));
        let all: Vec<CorpusRecord> = a.iter().chain(&b).cloned().collect();
        let s = compute_stats(&all);
        let (na, nb) = (sa.record_count as f64, sb.record_count as f64);
        prop_assert_eq!(s.record_count, sa.record_count + sb.record_count);
        prop_assert_eq!(s.alignment_count, sa.alignment_count + sb.alignment_count);
        if n + m > 0 {
            let w = |x: f64, y: f64| (x * na + y * nb) / (na + nb);
            prop_assert!((s.avg_formal_length - w(sa.avg_formal_length, sb.avg_formal_length)).abs() < 1e-9);
            prop_assert!((s.avg_informal_length - w(sa.avg_informal_length, sb.avg_informal_length)).abs() < 1e-9);
            prop_assert!((s.pct_syntactic_change - w(sa.pct_syntactic_change, sb.pct_syntactic_change)).abs() < 1e-9);
        }
        for (src, c) in &s.source_distribution {
            prop_assert_eq!(*c, sa.source_distribution[src] + sb.source_distribution[src]);
        }
        prop_assert!(s.dictionary_size <= s.unique_word_pairs);
        prop_assert!((0.0..=100.0).contains(&s.pct_syntactic_change));
    }

    #[test]
    fn filter_is_monotone_in_hits(len in 1usize..60, hits in 0usize..60, extra in 0usize..5) {
        let mut lex = Lexicon::new();
        lex.insert(LexEntry::new("hit0", "x", 1)).unwrap();
        let sentence: String = (0..len)
            .map(|i| if i < hits { format!("hit{}", i % (extra + 1)) } else { "w".to_string() })
            .collect::<Vec<_>>()
            .join(" ");
        let before = !filter_candidates(&[&sentence], &lex).is_empty();
        for k in 1..=extra {
            lex.insert(LexEntry::new(format!("hit{k}"), "x", 1)).unwrap();
        }
        let after = !filter_candidates(&[&sentence], &lex).is_empty();
        prop_assert!(!before || after);
        if !(26..=40).contains(&len) {
            prop_assert!(!after);
        }
    }
}

#[test]
fn save_load_round_trip() {
    let recs = synthetic_corpus(&SynthConfig::new(200, 5));
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("corpus.jsonl");
    save_corpus(&p, &recs).unwrap();
    let back = load_corpus(&p).unwrap();
    assert_eq!(back, recs);
    let q = dir.path().join("again.jsonl");
    save_corpus(&q, &back).unwrap();
    assert_eq!(std::fs::read(&p).unwrap(), std::fs::read(&q).unwrap());
}

#[test]
fn malformed_line_is_located() {
    let recs = synthetic_corpus(&SynthConfig::new(5, 5));
    let mut buf = Vec::new();
    rasmi_core::corpus::write_corpus(&mut buf, &recs).unwrap();
    let mut lines: Vec<String> = String::from_utf8(buf).unwrap().lines().map(str::to_string).collect();
    lines[3] = lines[3].replace("\"links\":[", "\"links\":7,\"x\":[");
    let err = read_corpus(lines.join("\n").as_bytes()).unwrap_err();
    assert_eq!(err.line(), Some(4));
    assert!(err.to_string().contains("syn-000003"), "{err}");
}
