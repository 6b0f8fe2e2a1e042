use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use cl15_ffi::*;

fn corpus(case: &str, file: &str) -> CString {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(case).join(file);
    CString::new(std::fs::read_to_string(path).unwrap()).unwrap()
}

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

/// Takes ownership of a library string.
fn take(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { cl15_string_free(p) };
    s
}

fn last_error() -> String {
    let p = cl15_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn parse(text: &CString) -> *mut Cl15Proof {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { cl15_proof_parse(text.as_ptr(), &mut p) }, Cl15Status::Ok);
    p
}

#[test]
fn parse_check_and_free() {
    let p = parse(&corpus("ex52", "proof.cl15"));
    unsafe {
        assert_eq!(cl15_proof_check(p), Cl15Status::Ok);
        assert_eq!(cl15_proof_steps(p), 4);
        cl15_proof_free(p);
    }
    assert!(cl15_last_error().is_null());
}

#[test]
fn parse_errors_are_reported() {
    let mut p = ptr::null_mut();
    let status = unsafe { cl15_proof_parse(c("step 2 {").as_ptr(), &mut p) };
    assert_eq!(status, Cl15Status::ParseError);
    assert!(p.is_null());
    assert!(last_error().contains("step 2"));
}

#[test]
fn check_failures_carry_a_diagnosis() {
    let text = corpus("ex52", "proof.cl15").into_string().unwrap().replacen("rule: disj_intro;", "rule: conj_intro;", 1);
    let p = parse(&c(&text));
    unsafe {
        assert_eq!(cl15_proof_check(p), Cl15Status::CheckFailed);
        assert!(last_error().starts_with("step "));
        let mut s = ptr::null_mut();
        assert_eq!(cl15_strategy_compile(p, &mut s), Cl15Status::CheckFailed);
        assert!(s.is_null());
        cl15_proof_free(p);
    }
}

#[test]
fn null_arguments_are_rejected() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(cl15_proof_parse(ptr::null(), &mut p), Cl15Status::NullArgument);
        assert_eq!(cl15_proof_check(ptr::null()), Cl15Status::NullArgument);
        assert_eq!(cl15_proof_parse(c("").as_ptr(), ptr::null_mut()), Cl15Status::NullArgument);
        cl15_proof_free(ptr::null_mut());
        cl15_strategy_free(ptr::null_mut());
        cl15_string_free(ptr::null_mut());
    }
}

#[test]
fn invalid_utf8_is_rejected() {
    let bad = [0xffu8, 0xfe, 0];
    let mut p = ptr::null_mut();
    let status = unsafe { cl15_proof_parse(bad.as_ptr().cast(), &mut p) };
    assert_eq!(status, Cl15Status::InvalidUtf8);
}

#[test]
fn compiled_strategy_steps_like_a_copycat() {
    let p = parse(&corpus("ex51", "proof.cl15"));
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(cl15_strategy_compile(p, &mut s), Cl15Status::Ok);
        cl15_proof_free(p);

        let mut f = ptr::null_mut();
        assert_eq!(cl15_strategy_formula(s, &mut f), Cl15Status::Ok);
        assert_eq!(take(f), "?~F | F");

        let mut out = ptr::null_mut();
        assert_eq!(cl15_strategy_step(s, c("B:1.qa").as_ptr(), &mut out), Cl15Status::Ok);
        assert_eq!(take(out), r#"["0..qa"]"#);
        assert_eq!(cl15_strategy_step(s, c("B:1.qa, T:0..qa").as_ptr(), &mut out), Cl15Status::Ok);
        assert_eq!(take(out), "[]");

        assert_eq!(cl15_strategy_reset(s), Cl15Status::Ok);
        assert_eq!(cl15_strategy_step(s, c("B:1.qa").as_ptr(), &mut out), Cl15Status::Ok);
        assert_eq!(take(out), r#"["0..qa"]"#);

        assert_eq!(cl15_strategy_step(s, c("not a run").as_ptr(), &mut out), Cl15Status::ParseError);
        cl15_strategy_free(s);
    }
}

#[test]
fn json_round_trip_and_play() {
    let p = parse(&corpus("blass", "proof.cl15"));
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(cl15_strategy_compile(p, &mut s), Cl15Status::Ok);
        cl15_proof_free(p);
        let mut json = ptr::null_mut();
        assert_eq!(cl15_strategy_to_json(s, &mut json), Cl15Status::Ok);
        let json = take(json);
        cl15_strategy_free(s);

        let mut s2 = ptr::null_mut();
        assert_eq!(cl15_strategy_from_json(c(&json).as_ptr(), &mut s2), Cl15Status::Ok);
        let atoms = corpus("blass", "atoms.game");
        for seed in 0..5 {
            let mut rep = ptr::null_mut();
            assert_eq!(cl15_strategy_play(s2, atoms.as_ptr(), seed, 64, &mut rep), Cl15Status::Ok);
            let v: serde_json::Value = serde_json::from_str(&take(rep)).unwrap();
            assert_eq!(v["verdict"], "T");
            assert_eq!(v["inconclusive"], false);
        }
        cl15_strategy_free(s2);

        let mut bad = ptr::null_mut();
        let tampered = json.replace("cl15-strategy/1", "cl15-strategy/0");
        assert_eq!(cl15_strategy_from_json(c(&tampered).as_ptr(), &mut bad), Cl15Status::ParseError);
    }
}

#[test]
fn eval_with_an_atom_file() {
    let mut legal = false;
    let mut winner = Cl15Player::Top;
    let atoms = c("game claim = node winner=B { T\"m\" -> node winner=T {} }\natom P = claim\n");
    unsafe {
        let st = cl15_eval(c("P | ~P").as_ptr(), atoms.as_ptr(), c("B:1.m").as_ptr(), &mut legal, &mut winner);
        assert_eq!(st, Cl15Status::Ok);
        assert!(legal);
        assert_eq!(winner, Cl15Player::Bot);
        let st = cl15_eval(c("P | ~P").as_ptr(), atoms.as_ptr(), c("B:1.m, T:0.m").as_ptr(), &mut legal, &mut winner);
        assert_eq!(st, Cl15Status::Ok);
        assert_eq!(winner, Cl15Player::Top);
        let st = cl15_eval(c("Unbound").as_ptr(), ptr::null(), c("").as_ptr(), &mut legal, &mut winner);
        assert_eq!(st, Cl15Status::EvalError);
        let st = cl15_eval(c("P |").as_ptr(), ptr::null(), c("").as_ptr(), ptr::null_mut(), ptr::null_mut());
        assert_eq!(st, Cl15Status::ParseError);
    }
}

#[test]
fn fuse_and_defuse() {
    let parts = [c("11"), c("00"), c("111")];
    let ptrs: Vec<*const c_char> = parts.iter().map(|p| p.as_ptr()).collect();
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(cl15_fuse(ptrs.as_ptr(), 3, &mut out), Cl15Status::Ok);
        assert_eq!(take(out), "101101001\n101101011\n101101101\n101101111");
        assert_eq!(cl15_defuse(c("01011010").as_ptr(), 3, &mut out), Cl15Status::Ok);
        assert_eq!(take(out), "011\n110\n00");
        assert_eq!(cl15_defuse(c("01").as_ptr(), 0, &mut out), Cl15Status::InvalidArgument);
        assert_eq!(cl15_fuse(ptrs.as_ptr(), 0, &mut out), Cl15Status::InvalidArgument);
        assert_eq!(cl15_defuse(c("012").as_ptr(), 2, &mut out), Cl15Status::ParseError);

        let big = [c(""), c(&"1".repeat(30))];
        let ptrs: Vec<*const c_char> = big.iter().map(|p| p.as_ptr()).collect();
        assert_eq!(cl15_fuse(ptrs.as_ptr(), 2, &mut out), Cl15Status::CapExceeded);
    }
}

#[test]
fn errors_are_per_thread() {
    let mut p = ptr::null_mut();
    unsafe { cl15_proof_parse(c("junk").as_ptr(), &mut p) };
    assert!(!cl15_last_error().is_null());
    std::thread::spawn(|| assert!(cl15_last_error().is_null())).join().unwrap();
}

#[test]
fn header_is_generated_and_compiles() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/cl15.h")).unwrap();
    for name in [
        "cl15_proof_parse",
        "cl15_proof_check",
        "cl15_proof_free",
        "cl15_strategy_compile",
        "cl15_strategy_step",
        "cl15_strategy_play",
        "cl15_strategy_free",
        "cl15_eval",
        "cl15_fuse",
        "cl15_defuse",
        "cl15_last_error",
        "cl15_string_free",
        "CL15_STATUS_CAP_EXCEEDED",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
    for (compiler, lang) in [("cc", "c"), ("c++", "c++")] {
        let status = Command::new(compiler)
            .args(["-x", lang, "-Wall", "-Werror", "-fsyntax-only"])
            .arg(dir.join("tests/c/smoke.c"))
            .arg("-I")
            .arg(dir.join("include"))
            .status();
        match status {
            Ok(s) => assert!(s.success(), "{compiler} rejected the header"),
            Err(e) => eprintln!("skipping {compiler}: {e}"),
        }
    }
}

#[test]
fn c_program_links_and_runs() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // the static library built alongside this test binary
    let deps = std::env::current_exe().unwrap().parent().unwrap().to_path_buf();
    let lib = deps.join("libcl15_ffi.a");
    if !lib.exists() {
        eprintln!("skipping: {} not built", lib.display());
        return;
    }
    let exe = std::env::temp_dir().join(format!("cl15-ffi-smoke-{}", std::process::id()));
    let status = Command::new("cc")
        .arg(dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status();
    match status {
        Ok(s) => assert!(s.success(), "linking against {} failed", lib.display()),
        Err(e) => {
            eprintln!("skipping: no C compiler: {e}");
            return;
        }
    }
    let out = Command::new(&exe)
        .arg(dir.join("../../corpus/ex51/proof.cl15"))
        .output()
        .unwrap();
    let _ = std::fs::remove_file(&exe);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "[\"0..qa\"]\n01010101\n01010111\n");
}
