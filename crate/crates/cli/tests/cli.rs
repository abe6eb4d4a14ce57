use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_verseforge"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = run(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/czech_verse_mini.jsonl")
}

const SHIP: [&str; 4] = [
    "Tvá loď jde po vysokém moři,",
    "a bok svůj pěnné do peřeje.",
    "Na stožár mraky hnaly hoři,",
    "co po pěně se tiše chvěje.",
];

fn poem(scheme: [u32; 4], year: u32) -> String {
    let verses: Vec<Value> = SHIP
        .iter()
        .zip(scheme)
        .map(|(t, r)| serde_json::json!({"text": t, "rhyme": r, "meter": "J"}))
        .collect();
    serde_json::json!({"year": year, "strophes": [verses]}).to_string()
}

/// Three ABAB strophes and one AABB strophe.
fn small_corpus(dir: &Path) -> PathBuf {
    let lines = [
        poem([1, 2, 1, 2], 1900),
        poem([5, 6, 5, 6], 1893),
        poem([1, 1, 2, 2], 1910),
        poem([3, 4, 3, 4], 1850),
    ];
    let p = dir.join("small.jsonl");
    fs::write(&p, lines.join("\n") + "\n").unwrap();
    p
}

fn assert_fails(out: &Output, code: i32, class: &str) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    assert_eq!(err.lines().count(), 1, "stderr should be one line: {err:?}");
    assert!(err.starts_with(&format!("error[{class}]: ")), "{err:?}");
}

#[test]
fn help_documents_schema_and_formats() {
    let out = bin().arg("--help").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for needle in [
        "CORPUS SCHEMA",
        "\"strophes\"",
        "basic",
        "verse_par",
        "meter_verse",
        "J # 9 # oři # ",
        "EXIT CODES",
    ] {
        assert!(text.contains(needle), "help lacks {needle:?}");
    }
    for sub in [
        "ingest",
        "stats",
        "train-tokenizer",
        "train-lm",
        "generate",
        "evaluate",
        "significance",
    ] {
        assert!(text.contains(sub), "help lacks {sub}");
    }
}

#[test]
fn error_classes_have_distinct_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();

    assert_fails(&run(d, &["stats", "--corpus", "x.jsonl", "--bogus"]), 2, "usage");
    assert_fails(&run(d, &["frobnicate"]), 2, "usage");
    assert_fails(&run(d, &["stats", "--corpus", "nope.jsonl"]), 3, "missing-file");

    fs::write(
        d.join("bad.jsonl"),
        "{\"year\": 1900, \"strophes\": [[{\"text\": \"a\"}]]}\n",
    )
    .unwrap();
    assert_fails(&run(d, &["stats", "--corpus", "bad.jsonl"]), 4, "schema");

    let corpus = small_corpus(d);
    let c = corpus.to_str().unwrap();
    ok(
        d,
        &[
            "train-tokenizer",
            "--corpus",
            c,
            "--kind",
            "unicode",
            "--out",
            "u.vocab",
            "--test-fraction",
            "0.25",
        ],
    );
    ok(
        d,
        &[
            "train-tokenizer",
            "--corpus",
            c,
            "--kind",
            "syllable",
            "--out",
            "s.vocab",
            "--test-fraction",
            "0.25",
        ],
    );
    ok(
        d,
        &[
            "train-lm",
            "--corpus",
            c,
            "--vocab",
            "u.vocab",
            "--out",
            "u.lm",
            "--test-fraction",
            "0.25",
        ],
    );
    // A model paired with the wrong vocabulary is a schema mismatch.
    let out = run(
        d,
        &[
            "generate", "--model", "u.lm", "--vocab", "s.vocab", "--scheme", "ABAB", "--meters", "J,J,J,J",
        ],
    );
    assert_fails(&out, 4, "schema");
    let out = run(
        d,
        &["generate", "--model", "u.lm", "--vocab", "u.vocab", "--scheme", "ABC"],
    );
    assert_fails(&out, 2, "usage");
}

#[test]
fn stats_top_scheme_matches_hand_count() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = small_corpus(dir.path());
    let text = ok(dir.path(), &["stats", "--corpus", corpus.to_str().unwrap()]);
    assert!(text.contains("poems 4  strophes 4  verses 16"), "{text}");
    let rows: Vec<&str> = text
        .lines()
        .skip_while(|l| !l.starts_with("scheme"))
        .skip(1)
        .take(2)
        .collect();
    assert!(rows[0].starts_with("ABAB") && rows[0].contains(" 3 "), "{rows:?}");
    assert!(rows[1].starts_with("AABB") && rows[1].contains(" 1 "), "{rows:?}");
    assert!(text.lines().any(|l| l.starts_with("1880") && l.contains(" 1 ")));

    ok(
        dir.path(),
        &[
            "ingest",
            "--corpus",
            corpus.to_str().unwrap(),
            "--stats-out",
            "stats.json",
        ],
    );
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("stats.json")).unwrap()).unwrap();
    assert_eq!(v["stats"]["scheme_counts"]["ABAB"], 3);
    assert_eq!(v["stats"]["meter_counts"]["J"], 16);
    assert_eq!(v["config"]["subcommand"], "ingest");
}

#[test]
fn pipeline_on_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let f = fixture();
    let f = f.to_str().unwrap();

    ok(
        d,
        &[
            "train-tokenizer",
            "--corpus",
            f,
            "--kind",
            "unicode",
            "--out",
            "u.vocab",
            "--seed",
            "7",
        ],
    );
    ok(
        d,
        &[
            "train-lm", "--corpus", f, "--vocab", "u.vocab", "--out", "u.lm", "--seed", "7",
        ],
    );
    let model = fs::read_to_string(d.join("u.lm")).unwrap();
    assert!(model
        .lines()
        .any(|l| l.starts_with("config {") && l.contains("\"subcommand\":\"train-lm\"")));
    let vocab = fs::read_to_string(d.join("u.vocab")).unwrap();
    assert!(vocab.lines().any(|l| l.starts_with("#config {")));

    let gen = [
        "generate",
        "--model",
        "u.lm",
        "--vocab",
        "u.vocab",
        "--format",
        "meter_verse",
        "--scheme",
        "ABAB",
        "--year",
        "1900",
        "--meters",
        "J,J,J,J",
        "--decoding",
        "forced",
        "--temperature",
        "0.8",
        "--seed",
        "7",
    ];
    let first = ok(d, &gen);
    let second = ok(d, &gen);
    assert_eq!(first, second);
    assert!(first.starts_with("# machine-generated\n# ABAB # 1900\nJ # "), "{first}");

    let out = ok(
        d,
        &[
            "generate",
            "--model",
            "u.lm",
            "--vocab",
            "u.vocab",
            "--from-corpus",
            f,
            "--count",
            "20",
            "--seed",
            "7",
            "--out",
            "forced.jsonl",
        ],
    );
    assert!(out.starts_with("# machine-generated\n"));
    let batch = fs::read_to_string(d.join("forced.jsonl")).unwrap();
    assert_eq!(batch.lines().count(), 21);
    let cfg: Value = serde_json::from_str(batch.lines().next().unwrap()).unwrap();
    assert_eq!(cfg["config"]["decoding"], "forced");
    assert_eq!(cfg["config"]["seed"], 7);

    let report = ok(
        d,
        &[
            "evaluate",
            "--input",
            "forced.jsonl",
            "--scores-out",
            "forced.scores",
            "--out",
            "forced.report.json",
        ],
    );
    assert!(report.contains("strophes: 20"), "{report}");
    let r: Value = serde_json::from_str(&fs::read_to_string(d.join("forced.report.json")).unwrap()).unwrap();
    assert_eq!(r["report"]["strophes"], 20);

    let p = ok(
        d,
        &[
            "significance",
            "--a",
            "forced.scores",
            "--b",
            "forced.scores",
            "--metric",
            "end",
            "--exact",
        ],
    );
    let p: Value = serde_json::from_str(&p).unwrap();
    assert_eq!(p["p"], 1.0);
    assert_eq!(p["p_exact"], 1.0);

    // Nothing was written besides the declared outputs.
    let mut files: Vec<String> = fs::read_dir(d)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    files.sort();
    assert_eq!(
        files,
        ["forced.jsonl", "forced.report.json", "forced.scores", "u.lm", "u.vocab"]
    );
}

#[test]
fn evaluate_gold_is_self_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = small_corpus(dir.path());
    for format in ["verse_par", "meter_verse"] {
        let text = ok(
            dir.path(),
            &["evaluate", "--gold", corpus.to_str().unwrap(), "--format", format],
        );
        assert!(text.contains("num_syl: 100.00%"), "{text}");
        assert!(text.contains("end_acc: 100.00%"), "{text}");
        assert!(text.contains("parse_failures: 0"), "{text}");
    }
}
