use std::fs;
use std::path::Path;
use std::process::Command;

use verseforge::corpus;
use verseforge::phonology::Phonology;
use verseforge::validation::{classify_meter, predict_scheme, DEFAULT_METER_THRESHOLD};

fn generate(out: &Path, args: &[&str]) {
    let status = Command::new(env!("CARGO_BIN_EXE_corpusgen"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
}

#[test]
fn small_run_ingests_and_agrees_with_validators() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.jsonl"), dir.path().join("b.jsonl"));
    generate(&a, &["--poems", "25", "--seed", "3"]);
    generate(&b, &["--poems", "25", "--seed", "3"]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let strophes = corpus::ingest(&a).unwrap();
    assert_eq!(corpus::stats(&strophes).poems, 25);
    let ph = Phonology::new();
    for s in &strophes {
        let texts: Vec<&str> = s.verses.iter().map(|v| v.text.as_str()).collect();
        assert_eq!(predict_scheme(&texts, &ph).unwrap(), s.scheme);
        for v in &s.verses {
            let m = classify_meter(&ph.stress_pattern(&v.text), DEFAULT_METER_THRESHOLD);
            // Hexameter lines are scored against their template only and
            // may classify as the more general X family.
            if v.meter != verseforge::corpus::MeterLabel::Hexameter {
                assert_eq!(m, v.meter, "{}", v.text);
            }
        }
    }
}

#[test]
fn default_run_reproduces_bundled_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fixture.jsonl");
    generate(&out, &[]);
    let bundled = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/czech_verse_mini.jsonl");
    assert!(
        fs::read(&out).unwrap() == fs::read(bundled).unwrap(),
        "fixture drifted from the generator"
    );
}
