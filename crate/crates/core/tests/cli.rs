mod common;

use std::process::{Command, Output};

use common::fixture_path;
use serde_json::Value;

fn d0l(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_d0l")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let out = d0l(&all);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn path(name: &str) -> String {
    fixture_path(name).to_string_lossy().into_owned()
}

#[test]
fn g1_is_not_circular() {
    let v = json(&["circular", &path("g1")]);
    assert_eq!(v["status"], "not_circular");
    let family = v["witness"]["family"].as_array().unwrap();
    let pairs: Vec<(&str, &str)> = family.iter().map(|s| (s["u"].as_str().unwrap(), s["v"].as_str().unwrap())).collect();
    assert_eq!(pairs, [("bc", "cb"), ("bcbc", "cbcb"), ("bcbcbcbc", "cbcbcbcb")]);
    assert_eq!(v["caps"]["corpus"], 24);
    assert_eq!(v["caps"]["prefix"], 4096);
}

#[test]
fn thue_morse_reports_caps() {
    let out = d0l(&["circular", &path("thue-morse")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("status: circular"));
    assert!(text.contains("mode: bound_conditional"));
    assert!(text.contains("prefix: 4096"));
}

#[test]
fn interpret_lists_cuts() {
    let v = json(&["interpret", &path("g1"), "bcbc"]);
    for i in v["interpretations"].as_array().unwrap() {
        assert_eq!(i["cuts"], serde_json::json!([0, 2, 4]));
    }
    assert_eq!(v["sync_positions"], serde_json::json!([0, 2, 4]));
}

#[test]
fn text_and_json_carry_the_same_fields() {
    for verb in ["classify", "circular", "simplify", "delay", "repetitive"] {
        let v = json(&[verb, &path("g1")]);
        let out = d0l(&[verb, &path("g1")]);
        let text = String::from_utf8(out.stdout).unwrap();
        for key in v.as_object().unwrap().keys() {
            assert!(text.contains(&format!("{key}:")), "{verb}: {key} missing from text output");
        }
    }
}

#[test]
fn json_is_byte_deterministic() {
    for verb in ["classify", "circular", "factors", "delay", "repetitive", "simplify"] {
        let a = d0l(&[verb, &path("g1"), "--json"]).stdout;
        let b = d0l(&[verb, &path("g1"), "--json"]).stdout;
        assert_eq!(a, b, "{verb}");
    }
}

#[test]
fn factors_dump_is_sorted() {
    let out = d0l(&["factors", &path("thue-morse"), "--max-corpus-len", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let factors: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(factors, ["a", "b", "aa", "ab", "ba", "bb", "aab", "aba", "abb", "baa", "bab", "bba"]);
}

#[test]
fn delay_modes() {
    assert_eq!(json(&["delay", &path("thue-morse"), "--mode", "strong"])["delay"], 1);
    assert_eq!(json(&["delay", &path("g1")])["delay"], 3);
    let v = json(&["delay", &path("doubling"), "--max-corpus-len", "16"]);
    assert_eq!(v["status"], "failure");
}

#[test]
fn exit_statuses() {
    assert_eq!(d0l(&["circular"]).status.code(), Some(1));
    assert_eq!(d0l(&["circular", "/nonexistent.d0l"]).status.code(), Some(1));
    assert_eq!(d0l(&["interpret", &path("abc"), "cc"]).status.code(), Some(1));
    assert_eq!(d0l(&["interpret", &path("abc"), "z"]).status.code(), Some(1));
    assert_eq!(d0l(&["circular", &path("erasing")]).status.code(), Some(2));
    assert_eq!(d0l(&["circular", &path("g1"), "--prefix-cap", "0"]).status.code(), Some(1));
    assert_eq!(d0l(&["--version"]).status.code(), Some(0));
}

#[test]
fn trimmed_letters_are_reported() {
    let out = d0l(&["classify", &path("unreachable")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stderr).unwrap().contains("dropped: d"));
}
