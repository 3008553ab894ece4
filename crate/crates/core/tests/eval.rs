use proptest::prelude::*;
use rasmi_core::eval::{bleu, evaluate_corpus, BleuConfig};

fn sentence() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(vec!["a", "b", "c", "d", "e"]), 1..12).prop_map(|v| v.join(" "))
}

proptest! {
    #[test]
    fn corpus_bleu_ignores_pair_order(pairs in prop::collection::vec((sentence(), sentence()), 1..10), rot in 0usize..10) {
        let (outs, refs): (Vec<String>, Vec<String>) = pairs.iter().cloned().unzip();
        let cfg = BleuConfig::default();
        let a = evaluate_corpus(&outs, &refs, &cfg).unwrap();
        let mut rotated = pairs.clone();
        rotated.rotate_left(rot % pairs.len());
        rotated.reverse();
        let (o2, r2): (Vec<String>, Vec<String>) = rotated.into_iter().unzip();
        let b = evaluate_corpus(&o2, &r2, &cfg).unwrap();
        prop_assert_eq!(a.corpus_bleu.to_bits(), b.corpus_bleu.to_bits());
    }

    #[test]
    fn bleu_is_bounded(c in sentence(), r in sentence()) {
        let cv: Vec<&str> = c.split(' ').collect();
        let rv: Vec<&str> = r.split(' ').collect();
        let s = bleu(&cv, &[rv], &BleuConfig::default());
        prop_assert!((0.0..=1.0).contains(&s));
        if cv.len() >= 4 {
            prop_assert!((bleu(&cv, std::slice::from_ref(&cv), &BleuConfig::default()) - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn three_pair_corpus_by_hand() {
    // pair 1: "a b c d" vs "a b c d": 4/4 3/3 2/2 1/1
    // pair 2: "a b x d" vs "a b c d": 3/4 1/3 0/2 0/1
    // pair 3: "c d e" vs "c d e f": 3/3 2/2 1/1 0/0
    let outs = ["a b c d", "a b x d", "c d e"];
    let refs = ["a b c d", "a b c d", "c d e f"];
    let r = evaluate_corpus(&outs, &refs, &BleuConfig::default()).unwrap();
    let p = [10.0 / 11.0, 6.0 / 8.0, 3.0 / 5.0, 1.0 / 2.0];
    let bp = (1.0f64 - 12.0 / 11.0).exp();
    let expected = bp * (p.iter().map(|x: &f64| x.ln()).sum::<f64>() / 4.0).exp();
    assert!((r.corpus_bleu - expected).abs() < 1e-12, "{} vs {expected}", r.corpus_bleu);
}
