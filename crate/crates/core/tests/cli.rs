use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn case(name: &str, file: &str) -> String {
    root().join("corpus").join(name).join(file).to_string_lossy().into_owned()
}

fn cl15(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cl15"))
        .args(args)
        .env_remove("CL15_CORPUS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

/// Parses stdout as JSON and validates it against a shipped schema.
fn valid_json(o: &Output, schema: &str) -> Value {
    let path = root().join("docs/schemas").join(schema);
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
    let value: Value = serde_json::from_str(&stdout(o)).expect("stdout is JSON");
    if let Err(errors) = compiled.validate(&value) {
        let msgs: Vec<String> = errors.map(|e| format!("{e} at {}", e.instance_path)).collect();
        panic!("{value} violates {schema}: {msgs:?}");
    }
    value
}

#[test]
fn check_accepts_a_corpus_proof() {
    let o = cl15(&["check", &case("ex51", "proof.cl15")]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "ok: ?~F | F (3 steps)\n");
}

#[test]
fn check_rejects_a_mutated_proof() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(case("ex52", "proof.cl15")).unwrap();
    let bad = dir.path().join("bad.cl15");
    std::fs::write(&bad, text.replacen("over: [[1, 2]]", "over: [[1]]", 1)).unwrap();
    let o = cl15(&["check", bad.to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 1);
    let v = valid_json(&o, "check.schema.json");
    assert_eq!(v["valid"], false);
    assert!(v["error"]["step"].as_u64().is_some());
}

#[test]
fn check_json_for_every_corpus_case() {
    for name in ["ex51", "ex52", "ex53", "ex54", "ex55", "ex56", "blass"] {
        let o = cl15(&["--json", "check", &case(name, "proof.cl15")]);
        assert_eq!(code(&o), 0, "{name}");
        assert_eq!(valid_json(&o, "check.schema.json")["valid"], true);
    }
}

#[test]
fn compile_bundle_matches_schema_and_file_output() {
    let o = cl15(&["compile", &case("blass", "proof.cl15")]);
    assert_eq!(code(&o), 0);
    let v = valid_json(&o, "strategy.schema.json");
    assert_eq!(v["format"], "cl15-strategy/1");
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.json");
    let o2 = cl15(&["compile", &case("blass", "proof.cl15"), "-o", out.to_str().unwrap()]);
    assert_eq!(code(&o2), 0);
    assert_eq!(std::fs::read_to_string(out).unwrap(), stdout(&o));
}

#[test]
fn defuse_three_ways() {
    let o = cl15(&["defuse", "01011010", "--n", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "011 110 00\n");
    let o = cl15(&["defuse", "01011010", "--json"]);
    let v = valid_json(&o, "defuse.schema.json");
    assert_eq!(v["components"], serde_json::json!(["0011", "1100"]));
}

#[test]
fn fuse_lists_every_fusion() {
    let o = cl15(&["fuse", "11", "00", "111"]);
    assert_eq!(stdout(&o), "101101001\n101101011\n101101101\n101101111\n");
    let o = cl15(&["fuse", "000", "1111", "--json"]);
    assert_eq!(valid_json(&o, "fuse.schema.json")["fusions"], serde_json::json!(["01010101", "01010111"]));
}

#[test]
fn fuse_beyond_the_cap_exits_3() {
    let o = cl15(&["fuse", "", "1111111111111111111111"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn eval_reports_legality_and_winner() {
    let o = cl15(&["eval", "--game", "P|~P", "--run", "B:1.m", "--default-game", "claim", "--json"]);
    assert_eq!(code(&o), 0);
    let v = valid_json(&o, "eval.schema.json");
    assert_eq!((v["legal"].clone(), v["winner"].clone()), (Value::Bool(true), Value::from("B")));
    let o = cl15(&["eval", "--game", "P|~P", "--run", "B:1.m, T:0.m", "--default-game", "claim"]);
    assert_eq!(stdout(&o), "legal: true\noffender: none\nwinner: T\n");
    let o = cl15(&["eval", "--game", "P|~P", "--run", "T:1.zz", "--default-game", "claim"]);
    assert_eq!(stdout(&o), "legal: false\noffender: T\nwinner: B\n");
}

#[test]
fn eval_over_a_cirquent_respects_the_class_cap() {
    let c = "{ oformulas: [F, F]; under: [[1, 2]]; over: [[1, 2], [1, 2]] }";
    let run = "B:1;0,1.m, B:1;00,11.m, B:2;010,1.m";
    let ok = cl15(&["eval", "--cirquent", c, "--run", run, "--default-game", "claim"]);
    assert_eq!(code(&ok), 0);
    let capped = cl15(&["eval", "--cirquent", c, "--run", run, "--default-game", "claim", "--class-cap", "2"]);
    assert_eq!(code(&capped), 3);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&cl15(&["frobnicate"])), 2);
    assert_eq!(code(&cl15(&["defuse"])), 2);
    assert_eq!(code(&cl15(&["play", "x.cl15", "--env", "psychic"])), 2);
}

#[test]
fn missing_files_fail_with_1() {
    assert_eq!(code(&cl15(&["check", "/nonexistent/proof.cl15"])), 1);
}

#[test]
fn play_is_reproducible_and_schema_valid() {
    for env in ["random", "spoiler"] {
        let args = [
            "play",
            &case("ex55", "proof.cl15"),
            "--atoms",
            &case("ex55", "atoms.game"),
            "--env",
            env,
            "--seed",
            "7",
            "--budget",
            "64",
            "--json",
        ];
        let (a, b) = (cl15(&args), cl15(&args));
        assert_eq!(code(&a), 0, "{env}");
        assert_eq!(a.stdout, b.stdout);
        let v = valid_json(&a, "play.schema.json");
        assert_eq!(v["verdict"], "T");
        assert_eq!(v["inconclusive"], false);
    }
}

fn run_corpus_cli(dir: Option<&Path>, env: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cl15"));
    cmd.env_remove("CL15_CORPUS").args(["corpus", "--seeds", "2", "--json"]);
    if let Some(d) = dir {
        cmd.arg(d);
    }
    if let Some(e) = env {
        cmd.env("CL15_CORPUS", e);
    }
    cmd.output().unwrap()
}

#[test]
fn corpus_defaults_to_the_environment_variable() {
    let o = run_corpus_cli(None, Some(&root().join("corpus")));
    assert_eq!(code(&o), 0);
    let v = valid_json(&o, "corpus.schema.json");
    assert_eq!(v["cases"].as_array().unwrap().len(), 7);
}

#[test]
fn corpus_on_an_empty_directory() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_corpus_cli(Some(dir.path()), None);
    assert_eq!(code(&o), 0);
    assert_eq!(valid_json(&o, "corpus.schema.json")["cases"], serde_json::json!([]));
}

#[test]
fn repl_rejects_ill_formed_moves_and_plays_on() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_cl15"))
        .args(["repl", &case("ex51", "proof.cl15"), "--atoms", &case("ex51", "atoms.game")])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"zzz\n1.qa\n1.ra\nquit\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("rejected \"zzz\": B would be the first offender at labmove 1"), "{text}");
    assert!(text.contains("T:0..qa"), "{text}");
    assert!(text.contains("winner: T"), "{text}");
}
