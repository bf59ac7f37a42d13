use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn evc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evc"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

const YES: &str = r#"{"reds":["r1","r2","r3"],"blues":["b1","b2"],"edges":[["r1","b1"],["r1","b2"],["r2","b2"],["r3","b1"]],"k":1}"#;
const NO: &str = r#"{"reds":["r1","r2"],"blues":["b1","b2"],"edges":[["r1","b1"],["r2","b2"]],"k":1}"#;

#[test]
fn evc_exact_on_p3() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "p3.graph", "graph 3\ne a b\ne b c\n");
    let o = evc(dir.path(), &["evc", "exact", "p3.graph"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("evc=2\n"), "{text}");
    assert!(text.contains("k=1 lose") && text.contains("k=2 win"));

    let o = evc(dir.path(), &["--json", "evc", "exact", "p3.graph"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["evc"], 2);
    assert_eq!(v["mvc"], 1);
    assert_eq!(v["win_profile"]["1"], false);
    assert_eq!(v["win_profile"]["2"], true);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(evc(dir.path(), &["evc", "exact"]).status.code(), Some(2));
    assert_eq!(evc(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(evc(dir.path(), &["mvc", "missing.graph"]).status.code(), Some(1));
    write(dir.path(), "bad.graph", "graph 2\ne a\n");
    assert_eq!(evc(dir.path(), &["mvc", "bad.graph"]).status.code(), Some(1));
    write(dir.path(), "c5.graph", "graph 5\ne a b\ne b c\ne c d\ne d e\ne e a\n");
    let o = evc(dir.path(), &["evc", "cobip", "c5.graph"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not cobipartite"));
}

#[test]
fn no_answers_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "no.json", NO);
    let o = evc(dir.path(), &["reduce", "rbds", "no.json", "--out", "art"]);
    assert!(o.status.success());
    let o = evc(
        dir.path(),
        &["--json", "extract-domset", "art/no.bipartite.graph", "art/no.bipartite.json"],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["answer"], false);
}

#[test]
fn gen_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["gen", "graph", "--n", "9", "--density", "0.4", "--seed", "11", "--count", "3"][..],
        &["gen", "rbds", "--reds", "4", "--blues", "3", "--k", "2", "--seed", "5"][..],
        &["gen", "cobip", "--p", "3", "--q", "4", "--seed", "2", "--count", "2"][..],
    ] {
        let a = evc(dir.path(), args);
        let b = evc(dir.path(), args);
        assert!(a.status.success());
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout);
    }
    let a = evc(dir.path(), &["gen", "graph", "--n", "9", "--seed", "1"]);
    let b = evc(dir.path(), &["gen", "graph", "--n", "9", "--seed", "2"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn cobip_value_and_branch() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "k4.graph", "graph 4\ne a b\ne a c\ne a d\ne b c\ne b d\ne c d\n");
    let o = evc(dir.path(), &["evc", "cobip", "k4.graph"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("evc=3\nbranch=clique\n"), "{}", stdout(&o));

    write(
        dir.path(),
        "g.graph",
        "graph 6\ne a0 a1\ne a0 a2\ne a1 a2\ne b0 b1\ne b0 b2\ne b1 b2\n",
    );
    write(dir.path(), "g.sides", "side a0 A\nside a1 A\nside a2 A\nside b0 B\nside b1 B\nside b2 B\n");
    let o = evc(dir.path(), &["--json", "evc", "cobip", "g.graph", "--sides", "g.sides", "--rounds", "20"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["evc"], 4);
    assert_eq!(v["branch"], "big-no-cross");
    assert_eq!(v["trace"].as_array().unwrap().len(), 20);
}

#[test]
fn reduce_verify_extract() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "yes.json", YES);
    let o = evc(dir.path(), &["reduce", "rbds", "yes.json", "--variant", "split", "--out", "art"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("PASS split"), "{text}");
    assert!(!text.contains("FAIL"));
    let o = evc(
        dir.path(),
        &["--json", "verify", "reduction", "art/yes.split.graph", "art/yes.split.json"],
    );
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["ell"], 5);

    let o = evc(dir.path(), &["reduce", "rbds", "yes.json", "--out", "art"]);
    assert!(o.status.success());
    let o = evc(
        dir.path(),
        &["extract-domset", "art/yes.bipartite.graph", "art/yes.bipartite.json", "--config", "dagger star u1 u2 v1"],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), "answer=YES\ndominating set: r1\n");
}

#[test]
fn strategy_checks() {
    let dir = tempfile::tempdir().unwrap();
    let o = evc(dir.path(), &["strategy", "check", "cobip", "--max-n", "5"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("all closed"));
    write(dir.path(), "yes.json", YES);
    let o = evc(dir.path(), &["--json", "strategy", "check", "nice", "yes.json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["pairs"].as_u64().unwrap() > 0);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn classify_and_approx() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "p4.graph", "graph 4\ne a b\ne b c\ne c d\n");
    let o = evc(dir.path(), &["--json", "classify", "p4.graph"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["bipartite"], true);
    assert_eq!(v["diameter"], "3");
    let o = evc(dir.path(), &["--json", "approx2", "p4.graph"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["guards"], 4);
    let o = evc(dir.path(), &["--json", "mvc", "p4.graph"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["mvc"], 2);
}

#[test]
fn play_repl_writes_trace() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "yes.json", YES);
    let mut child = Command::new(env!("CARGO_BIN_EXE_evc"))
        .args(["play", "--rbds", "yes.json", "--source", "reduction-nice", "--trace", "t.trace"])
        .current_dir(dir.path())
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"attack star dagger\nattack a b\nquit\n")
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("[Backup]"), "{text}");
    assert!(text.contains("error [not_an_edge]"));
    let trace = std::fs::read_to_string(dir.path().join("t.trace")).unwrap();
    assert_eq!(trace.lines().filter(|l| !l.starts_with('#')).count(), 1);
}
