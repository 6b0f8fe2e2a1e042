use std::fs;
use std::path::{Path, PathBuf};

use cl15::harness::{run_corpus, CorpusOptions};

fn shipped() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn quick() -> CorpusOptions {
    CorpusOptions { seeds: 4, budget: 64 }
}

fn copy_corpus(to: &Path) {
    for entry in fs::read_dir(shipped()).unwrap() {
        let from = entry.unwrap().path();
        let dest = to.join(from.file_name().unwrap());
        fs::create_dir(&dest).unwrap();
        for file in fs::read_dir(&from).unwrap() {
            let file = file.unwrap().path();
            fs::copy(&file, dest.join(file.file_name().unwrap())).unwrap();
        }
    }
}

#[test]
fn shipped_corpus_passes() {
    let rep = run_corpus(&shipped(), &quick()).unwrap();
    let names: Vec<&str> = rep.cases.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(names, ["blass", "ex51", "ex52", "ex53", "ex54", "ex55", "ex56"]);
    assert!(rep.all_pass(), "{}", rep.to_text());
    for c in &rep.cases {
        assert!(c.checked);
        assert_eq!(c.inconclusive, 0);
        assert!(c.rollouts > 0);
    }
}

#[test]
fn one_mutated_proof_fails_exactly_its_case() {
    let dir = tempfile::tempdir().unwrap();
    copy_corpus(dir.path());
    let proof = dir.path().join("ex53/proof.cl15");
    let text = fs::read_to_string(&proof).unwrap();
    let mutated = text.replacen("rule: conj_intro;", "rule: disj_intro;", 1);
    assert_ne!(mutated, text);
    fs::write(&proof, mutated).unwrap();

    let rep = run_corpus(dir.path(), &quick()).unwrap();
    let failed: Vec<&str> = rep.cases.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    assert_eq!(failed, ["ex53"]);
    let case = rep.cases.iter().find(|c| c.name == "ex53").unwrap();
    assert!(!case.checked);
    assert_eq!(case.rollouts, 0);
    assert!(case.error.as_deref().unwrap().contains("step"));
}

#[test]
fn expected_failures_pass_when_the_proof_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let case = dir.path().join("broken");
    fs::create_dir(&case).unwrap();
    fs::copy(shipped().join("ex51/atoms.game"), case.join("atoms.game")).unwrap();
    fs::write(
        case.join("proof.cl15"),
        "step 1 { rule: axiom; params: { formulas: [F] }; cirquent: { oformulas: [F, ~F]; under: [[1, 2]]; over: [[1, 2]] }; }\n",
    )
    .unwrap();
    fs::write(case.join("expect.json"), r#"{ "formula": "~F | F", "valid": false }"#).unwrap();
    let rep = run_corpus(dir.path(), &quick()).unwrap();
    assert!(rep.all_pass(), "{}", rep.to_text());
    assert!(!rep.cases[0].checked);
}

#[test]
fn wrong_expected_formula_fails() {
    let dir = tempfile::tempdir().unwrap();
    copy_corpus(dir.path());
    fs::write(dir.path().join("ex52/expect.json"), r#"{ "formula": "F | F", "valid": true }"#).unwrap();
    let rep = run_corpus(dir.path(), &quick()).unwrap();
    let failed: Vec<&str> = rep.cases.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    assert_eq!(failed, ["ex52"]);
}

#[test]
fn empty_directory_gives_an_empty_report() {
    let dir = tempfile::tempdir().unwrap();
    let rep = run_corpus(dir.path(), &quick()).unwrap();
    assert!(rep.cases.is_empty());
    assert!(rep.all_pass());
    assert_eq!(rep.to_text(), "");
}

#[test]
fn missing_directory_is_an_error() {
    assert!(run_corpus(Path::new("/nonexistent/corpus"), &quick()).is_err());
}

#[test]
fn reports_are_deterministic() {
    let a = run_corpus(&shipped(), &quick()).unwrap();
    let b = run_corpus(&shipped(), &quick()).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}
