use std::path::Path;
use std::process::{Command, Output};

use rasmi_core::corpus::{save_corpus, synthetic_corpus, SynthConfig};

fn rasmi(args: &[&str], stdin: Option<&str>) -> Output {
    use std::io::Write;
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rasmi"));
    cmd.args(args)
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped());
    let mut child = cmd.spawn().unwrap();
    child.stdin.take().unwrap().write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn convert_text_and_stdin() {
    let out = stdout(&rasmi(&["convert", "یه هندونه وردار"], None));
    assert_eq!(out, "یک هندوانه بردار\n");
    let out = stdout(&rasmi(&["convert", "--emit-links"], Some("یه هندونه وردار\nچن تا\n")));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "یک هندوانه بردار");
    assert!(lines[1].starts_with("links: [0, 1) -> [0, 1)"));
    assert!(out.lines().any(|l| l.starts_with("چند")));
}

#[test]
fn convert_json_lines() {
    let out = stdout(&rasmi(&["convert", "--json"], Some("یه هندونه وردار\n")));
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["formal_text"], "یک هندوانه بردار");
    assert_eq!(v["links"].as_array().unwrap().len(), 3);
}

#[test]
fn rules_override_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let rules = dir.path().join("rules.txt");
    std::fs::write(&rules, "only.rule | phonological | 1 | ^قلف$ | قفل | - | -\n").unwrap();
    let out = stdout(&rasmi(&["--rules", arg(&rules), "convert", "قلف"], None));
    assert_eq!(out.trim(), "قفل");
    std::fs::write(&rules, "bad | nosuch | 1 | x | y | - | -\n").unwrap();
    let o = rasmi(&["--rules", arg(&rules), "convert", "قلف"], None);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
}

#[test]
fn filter_keeps_informal_mid_length_sentences() {
    let long_informal =
        std::iter::repeat_n("میخوام", 5).chain(std::iter::repeat_n("کتاب", 25)).collect::<Vec<_>>().join(" ");
    let short = std::iter::repeat_n("میخوام", 10).collect::<Vec<_>>().join(" ");
    let formal = std::iter::repeat_n("کتاب", 30).collect::<Vec<_>>().join(" ");
    let input = format!("{short}\n{long_informal}\n{formal}\n");
    let out = stdout(&rasmi(&["filter"], Some(&input)));
    assert_eq!(out, format!("{long_informal}\n"));
}

#[test]
fn corpus_commands() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c.jsonl");
    let recs = synthetic_corpus(&SynthConfig::new(40, 2));
    save_corpus(&corpus, &recs).unwrap();

    let out = stdout(&rasmi(&["check", "--input", arg(&corpus)], None));
    assert!(out.ends_with("40 records, 0 errors, 0 warnings\n"), "{out}");

    let out = stdout(&rasmi(&["stats", "--input", arg(&corpus), "--json"], None));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["record_count"], 40);
    let expected = serde_json::to_value(rasmi_core::corpus::compute_stats(&recs)).unwrap();
    assert_eq!(v, expected);
    assert!(stdout(&rasmi(&["stats", "--input", arg(&corpus)], None)).contains("records:                  40"));

    let dict = dir.path().join("d.tsv");
    stdout(&rasmi(&["extract-dict", "--input", arg(&corpus), "--output", arg(&dict)], None));
    let lex = rasmi_core::Lexicon::load(&dict).unwrap();
    assert_eq!(lex, rasmi_core::corpus::extract_dictionary(&recs));

    let mut text = std::fs::read_to_string(&corpus).unwrap();
    text.push_str("{\"id\": \"broken\"}\n");
    std::fs::write(&corpus, text).unwrap();
    let o = rasmi(&["check", "--input", arg(&corpus)], None);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 41") && err.contains("broken"), "{err}");
}

#[test]
fn check_reports_link_errors() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c.jsonl");
    let mut recs = synthetic_corpus(&SynthConfig::new(3, 2));
    recs[1].links[0].formal_span.1 = 50;
    save_corpus(&corpus, &recs).unwrap();
    let o = rasmi(&["check", "--input", arg(&corpus)], None);
    assert_eq!(o.status.code(), Some(1));
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(out.contains("syn-000001: error"), "{out}");
}

#[test]
fn eval_reports() {
    let dir = tempfile::tempdir().unwrap();
    let hyp = dir.path().join("hyp.txt");
    let reference = dir.path().join("ref.txt");
    let report = dir.path().join("report.json");
    std::fs::write(&hyp, "a b c d\nx y\n").unwrap();
    std::fs::write(&reference, "a b c d e\nx y\n").unwrap();
    let out = stdout(&rasmi(
        &[
            "eval",
            "--hyp",
            arg(&hyp),
            "--ref",
            arg(&reference),
            "--min-len",
            "3",
            "--max-len",
            "25",
            "--report",
            arg(&report),
        ],
        None,
    ));
    assert!(out.starts_with("BLEU: 77.8801%"), "{out}");
    assert!(out.contains("1 scored, 1 filtered out"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["corpus_bleu_percent"], 77.8801);

    let informal = dir.path().join("inf.txt");
    std::fs::write(&informal, "یه هندونه وردار\n").unwrap();
    std::fs::write(&reference, "یک هندوانه بردار\n").unwrap();
    let out = stdout(&rasmi(&["eval", "--informal", arg(&informal), "--ref", arg(&reference), "--json"], None));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["scored_pairs"], 1);
    assert!(v["corpus_bleu"].as_f64().unwrap() > 0.0);
}

#[test]
fn serve_rejects_bad_sessions() {
    let o = rasmi(&["serve", "--addr", "127.0.0.1:0", "--session", "nope"], None);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad --session"));
}
