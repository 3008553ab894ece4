use proptest::prelude::*;
use rasmi_core::alignment::check_links;
use rasmi_core::corpus::{synthetic_corpus, CorpusRecord, Status, SynthConfig};
use rasmi_core::suggest::{AlignmentHistory, Provenance};

fn unique(n: usize, seed: u64) -> Vec<CorpusRecord> {
    synthetic_corpus(&SynthConfig { empty_links: false, ..SynthConfig::new(n, seed) })
}

#[test]
fn reproduces_ingested_links() {
    let recs = unique(50, 11);
    let mut h = AlignmentHistory::new();
    for r in &recs {
        h.ingest(r).unwrap();
    }
    for r in &recs {
        let mut got: Vec<_> = h.suggest(&r.informal_tokens(), &r.formal_tokens()).into_iter().map(|s| s.link).collect();
        let mut want = r.links.clone();
        got.sort();
        want.sort();
        assert_eq!(got, want, "record {}", r.id);
    }
}

#[test]
fn ingesting_twice_doubles_counts() {
    let r = &unique(1, 3)[0];
    let mut h = AlignmentHistory::new();
    h.ingest(r).unwrap();
    h.ingest(r).unwrap();
    assert!(h.pair_counts().all(|(_, _, c)| c == 2));
    assert_eq!(h.len(), r.links.len());
}

#[test]
fn invalid_record_is_rejected() {
    let mut r = unique(1, 3)[0].clone();
    r.links[0].informal_span.1 = 99;
    let err = AlignmentHistory::new().ingest(&r).unwrap_err();
    assert!(err.issues.iter().any(|i| i.is_error()));
}

#[test]
fn rebuild_uses_reviewed_and_confirmed_only() {
    let recs = synthetic_corpus(&SynthConfig::new(80, 4));
    let mut expected = AlignmentHistory::new();
    for r in recs.iter().filter(|r| r.status != Status::Draft) {
        expected.ingest(r).unwrap();
    }
    let rebuilt = AlignmentHistory::rebuild(&recs);
    assert_eq!(rebuilt, expected);

    let mut buf = Vec::new();
    rebuilt.write_snapshot(&mut buf).unwrap();
    assert_eq!(AlignmentHistory::read_snapshot(buf.as_slice()).unwrap(), expected);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn suggestions_are_total_and_deterministic(seed in any::<u64>(), hist in 0usize..30, ni in 1usize..12, nf in 1usize..12) {
        let recs = synthetic_corpus(&SynthConfig { shared_vocab: Some(5), ..SynthConfig::new(hist, seed) });
        let h = AlignmentHistory::rebuild(&recs);
        let pool: Vec<String> = (0..5).flat_map(|k| [format!("i{k}"), format!("f{k}")]).collect();
        let pick = |n: usize, salt: u64| -> Vec<String> {
            (0..n).map(|i| pool[((seed ^ salt).wrapping_mul(31).wrapping_add(i as u64 * 7) % pool.len() as u64) as usize].clone()).collect()
        };
        let (inf, form) = (pick(ni, 1), pick(nf, 2));
        let s = h.suggest(&inf, &form);
        let links: Vec<_> = s.iter().map(|x| x.link).collect();
        prop_assert!(check_links(&links, ni, nf).is_empty(), "{:?}", links);
        prop_assert_eq!(&s, &h.suggest(&inf, &form));
        for x in &s {
            if x.provenance == Provenance::History {
                prop_assert!(x.score >= 1);
            }
        }
    }
}
