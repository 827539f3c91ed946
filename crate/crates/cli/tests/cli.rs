use std::path::Path;
use std::process::{Command, Output};

fn hcm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hcm")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn alphabet_key(dir: &Path) -> String {
    write(dir, "f.key", "letters\n12345678901234567890123456\n")
}

#[test]
fn keygen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.key");
    let b = dir.path().join("b.key");
    let o = hcm(&["keygen", "--seed", "9", "--out", a.to_str().unwrap(), "--format", "json"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("\"chunks_written\":52"));
    hcm(&["keygen", "--seed", "9", "--out", b.to_str().unwrap()]);
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "letters");
    assert_eq!(lines[1].len(), 26);
}

#[test]
fn run_worked_examples() {
    let dir = tempfile::tempdir().unwrap();
    let key = alphabet_key(dir.path());
    let o = hcm(&["run", "--key", &key, "--schema", "stml", "--challenge", "GMAIL"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("GMAIL\t2324\tproc="));
    let o = hcm(&["run", "--key", &key, "--schema", "letter-sub", "--challenge", "GMAIL", "--format", "json"]);
    assert!(stdout(&o).contains("\"password\":\"73192\""));
    assert!(stdout(&o).contains("\"proc_total\":15"));
    let o = hcm(&["run", "--key", &key, "--pipeline", "start:two-past-first-vowel | stml", "--challenge", "AMEX", "--format", "json"]);
    assert!(stdout(&o).contains("\"schema_input\":\"EXAM\""));
}

#[test]
fn trace_matches_ledger() {
    let dir = tempfile::tempdir().unwrap();
    let key = alphabet_key(dir.path());
    let o = hcm(&["run", "--key", &key, "--schema", "stml", "--challenge", "GMAIL", "--trace", "--format", "json"]);
    let record: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let trace = record["trace"].as_array().unwrap();
    let costs: u64 = trace.iter().map(|l| l.as_str().unwrap().split('\t').nth(3).unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(costs, record["ledger"]["proc_total"].as_u64().unwrap());
    let lib = humancomp::schemas::stml("GMAIL", &humancomp::KeyMap::alphabet_position(), None).unwrap();
    assert_eq!(costs, lib.result.proc_total());
}

#[test]
fn domain_errors_continue_and_set_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let key = alphabet_key(dir.path());
    let file = write(dir.path(), "c.txt", "GMAIL\ngmail\nAPPLE\n");
    let o = hcm(&["run", "--key", &key, "--schema", "letter-sub", "--challenges-file", &file]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].contains("error"));
    assert!(lines[2].starts_with("APPLE\t16625"));
    let o = hcm(&["run", "--key", &key, "--schema", "letter-sub", "--challenge", "gmail", "--normalize"]);
    assert!(o.status.success());
}

#[test]
fn generators() {
    let dir = tempfile::tempdir().unwrap();
    let key = write(dir.path(), "k.key", "digits\n0369258147\n");
    let o = hcm(&["prg", "--key", &key, "--challenge", "31415926", "--any-digits"]);
    assert_eq!(stdout(&o).lines().last(), Some("142202330"));
    let o = hcm(&["prg", "--key", &key, "--challenge", "31415926"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn attacks() {
    let o = hcm(&["attack", "guess-solve", "--n", "6", "--seed", "5", "--format", "json"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("\"recovered\":true"));
    let o = hcm(&["attack", "exhaust", "--n", "12"]);
    assert_eq!(o.status.code(), Some(3));
    let o = hcm(&["attack", "guess-solve", "--project", "10", "--format", "json"]);
    assert!(stdout(&o).contains("\"within_bound\":true"));
    let o = hcm(&["attack", "learn", "--observe", "GMAIL=73192", "--observe", "GAS=111"]);
    assert_eq!(o.status.code(), Some(4));
    let o = hcm(&["attack", "learn", "--observe", "GMAIL=73192", "--predict", "MAIL"]);
    assert!(stdout(&o).contains("prediction 3192"));
}

#[test]
fn singleton_lexicon_q_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let lex = write(dir.path(), "lex.txt", "GMAIL 1.0\n");
    let o = hcm(&["attack", "qsec", "--lexicon", &lex, "--schema", "stml", "--trials", "200", "--max-observations", "2", "--format", "json"]);
    let report: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(report["q"], 1);
}

#[test]
fn machine_records_are_stable() {
    let run = || stdout(&hcm(&["attack", "frequency", "--seed", "3", "--count", "100", "--format", "json"]));
    assert_eq!(run(), run());
    let run = || stdout(&hcm(&["attack", "qsec", "--seed", "3", "--trials", "300", "--format", "json"]));
    assert_eq!(run(), run());
}

#[test]
fn owf_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("i.json");
    assert!(hcm(&["owf", "make", "--n", "4", "--out", inst.to_str().unwrap()]).status.success());
    let key = write(dir.path(), "o.key", "letters4\n3141\n");
    let y = stdout(&hcm(&["owf", "eval", "--instance", inst.to_str().unwrap(), "--key", &key])).trim().to_string();
    let o = hcm(&["owf", "invert", "--instance", inst.to_str().unwrap(), "--output", &y]);
    assert!(stdout(&o).lines().any(|l| l == "3141"));
}
