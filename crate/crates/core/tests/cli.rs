//! End-to-end runs of the command-line tool.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_revbisim")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["equiv", "--kind", "FB", "a.0 + a.0", "a.0"]).status.code(), Some(0));
    assert_eq!(run(&["equiv", "--kind", "FRB", "a!.0 + c.0", "a!.0"]).status.code(), Some(1));
    assert_eq!(run(&["mc", "a.0", "<a>tt"]).status.code(), Some(0));
    assert_eq!(run(&["mc", "a!.0", "<a>tt"]).status.code(), Some(1));
    assert_eq!(run(&["mc", "a.(", "tt"]).status.code(), Some(2));
    assert_eq!(run(&["equiv", "--kind", "XB", "0", "0"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let unreachable = run(&["equiv", "--kind", "FB", "b.a!.0", "0"]);
    assert_eq!(unreachable.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&unreachable.stderr).contains("b.a!.0"));
}

#[test]
fn equiv_report() {
    let o = run(&["equiv", "--kind", "FRB", "a!.0 + c.0", "a!.0"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["equivalent"], false);
    assert_eq!(v["distinguishing"], "<a!><c>tt");
    assert!(v["witness"].is_null());
}

#[test]
fn output_is_byte_stable() {
    for args in [
        &["equiv", "--kind", "wFRB", "tau.a.0 + a.0", "tau.a.0"][..],
        &["corpus", "--alphabet", "a,tau", "--max", "3", "--decorated"],
        &["golden"],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
}

#[test]
fn subcommands() {
    let parsed = stdout(&run(&["parse", "a!.(b.0 + c.0)"]));
    assert_eq!(parsed, "a!.(b.0 + c.0)\ninitial: false\nfinal: false\nreachable: true\n");
    assert_eq!(stdout(&run(&["trace", "c!.tau!.a!.0"])), "a tau c\n");
    assert_eq!(stdout(&run(&["trace", "--weak", "c!.tau!.a!.0"])), "a c\n");
    assert_eq!(stdout(&run(&["corpus", "--alphabet", "a", "--max", "1", "--decorated"])), "0\na.0\na!.0\n");
    let d = run(&["distinguish", "--kind", "FBps", "a!.b.0", "b.0"]);
    assert_eq!(stdout(&d), "~init\n");
    assert_eq!(run(&["distinguish", "--kind", "FB", "a!.b.0", "b.0"]).status.code(), Some(1));
    assert_eq!(run(&["golden"]).status.code(), Some(0));
}

#[test]
fn files() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus.txt");
    let report = dir.path().join("report.json");
    let dot = dir.path().join("lts.dot");

    let o = run(&["corpus", "--alphabet", "a,b,tau", "--max", "2", "--decorated", "--out", corpus.to_str().unwrap()]);
    assert!(o.status.success() && o.stdout.is_empty());
    let o = run(&[
        "verify", "--kind", "wFRB", "--corpus", corpus.to_str().unwrap(), "--depth", "3",
        "--out", report.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["mismatches"].as_array().unwrap().len(), 0);

    let o = run(&["lts", "a.0 + a.0", "--dot", dot.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("digraph"));

    std::fs::write(&corpus, "a.0\nb.a!.0\n").unwrap();
    assert_eq!(run(&["verify", "--kind", "FB", "--corpus", corpus.to_str().unwrap()]).status.code(), Some(3));
}
