use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rasmi_core::alignment::{check_links, AlignmentLink};
use rasmi_core::converter::default_converter;
use rasmi_core::data;

fn pool() -> Vec<String> {
    let c = default_converter();
    let mut words: Vec<String> = c.vocabulary().words().map(str::to_string).collect();
    words.extend(c.lexicon().informal_keys().flat_map(|k| k.split(' ').map(str::to_string).collect::<Vec<_>>()));
    for ex in data::examples() {
        words.extend(ex.informal.split(' ').map(str::to_string));
    }
    words.extend(["می", "نمی", "،", "!", "؟", "کتابو", "باباش", "قرمزا"].map(String::from));
    words.sort();
    words.dedup();
    words
}

fn random_sentences(n: usize, seed: u64) -> Vec<String> {
    let pool = pool();
    let letters: Vec<char> = "ابپتسجچخدرزسشفقکگلمنوهی".chars().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let len = rng.random_range(1..=10);
            (0..len)
                .map(|_| {
                    if rng.random_range(0..5) == 0 {
                        let l = rng.random_range(1..=5);
                        (0..l).map(|_| letters[rng.random_range(0..letters.len())]).collect()
                    } else {
                        pool[rng.random_range(0..pool.len())].clone()
                    }
                })
                .collect::<Vec<String>>()
                .join(" ")
        })
        .collect()
}

/// Brute-force reading of the flag definition: some pair of full links is
/// ordered differently on the two sides, or some link has an empty span.
fn flag_oracle(links: &[AlignmentLink]) -> bool {
    let full: Vec<&AlignmentLink> = links.iter().filter(|l| !l.has_empty_span()).collect();
    let crossing = full.iter().any(|a| {
        full.iter()
            .any(|b| a.informal_span.start() < b.informal_span.start() && a.formal_span.start() > b.formal_span.start())
    });
    crossing || links.iter().any(|l| l.informal_span.is_empty() || l.formal_span.is_empty())
}

fn inputs() -> Vec<String> {
    let mut v: Vec<String> = data::examples().into_iter().map(|e| e.informal).collect();
    v.extend(random_sentences(1000, 7));
    v
}

#[test]
fn fixed_point() {
    let c = default_converter();
    for s in inputs() {
        let once = c.convert(&s);
        let twice = c.convert(&once.formal_text);
        assert_eq!(twice.formal_text, once.formal_text, "input: {s}");
    }
}

#[test]
fn alignment_totality() {
    let c = default_converter();
    for s in inputs() {
        let r = c.convert(&s);
        let problems = check_links(&r.links, r.informal_tokens.len(), r.formal_tokens.len());
        assert!(problems.is_empty(), "input: {s}, problems: {problems:?}");
    }
}

#[test]
fn determinism() {
    let c = default_converter();
    let fresh = rasmi_core::Converter::default();
    for s in inputs() {
        assert_eq!(c.convert(&s), fresh.convert(&s), "input: {s}");
    }
}

#[test]
fn syntactic_change_flag() {
    let c = default_converter();
    for s in inputs() {
        let r = c.convert(&s);
        assert_eq!(r.syntactic_change, flag_oracle(&r.links), "input: {s}");
    }
}
