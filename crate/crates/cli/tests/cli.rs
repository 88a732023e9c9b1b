use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    root.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_datawords")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn running_example_formula_is_false_on_aab() {
    let o = run(&["eval", "--word", "a a b ; 0 2 | 1", "--ltl", &data("nonce.ltl")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "false");
}

#[test]
fn running_example_automaton_rejects_aab() {
    let o = run(&["accepts", "--ra", &data("fig3.ra"), "--word", "a a b ; 0 2 | 1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "false");
    let o = run(&["accepts", "--ra", &data("fig3.ra"), "--word", "a b ; 0 1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn circle_verdicts_agree() {
    let o = run(&["--format", "json-lines", "circle", "--ltl", &data("nonce.ltl"), "--max-len", "4"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["agree"], true);
    assert_eq!(v["formula"], "b ; 0");
    let o = run(&["circle", "--ltl", "a & !a", "--max-len", "3"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["eval", "--word", "a ; 0", "--ltl", "F ("]).status.code(), Some(3));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["empty", "nra", &data("fig3.ra")]).status.code(), Some(2));
    let o = run(&["empty", "ca", &data("two_step.ca"), "--semantics", "minsky", "--words", "infinite", "--budget", "100"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn counter_automaton_commands() {
    let o = run(&["empty", "ca", &data("every_a_has_b.ca")]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(1), "nonempty: b"));
    let o = run(&["accepts", "--ca", &data("every_a_has_b.ca"), "--word", "b a"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["accepts", "--ca", &data("every_a_has_b.ca"), "--word", "a a b b"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["reduce", "minsky2ltl", &data("two_step.ca"), "--variant", "2reg"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("hi1"));
}

#[test]
fn ra2ca_writes_report() {
    let dir = std::env::temp_dir().join(format!("datawords-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("nonce.ca");
    let o = run(&["translate", "ra2ca", &data("fig3.ra"), "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let report = std::fs::read_to_string(dir.join("nonce.ca.report")).unwrap();
    assert!(report.contains("locations:"));
    let o = run(&["empty", "ca", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_is_deterministic() {
    let args = ["translate", "ltl2ra", "G (a -> store1 X F (b & up1))"];
    let first = stdout(&run(&args));
    assert!(first.starts_with("alphabet: a b"));
    assert_eq!(first, stdout(&run(&args)));
    let dot = stdout(&run(&["export-dot", "game", &data("fig3.ra"), "--word", "a b ; 0 1"]));
    assert!(dot.starts_with("digraph"));
}
