use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const TREFOIL: &str = "grid 5\n+ 3 4 5 1 2\n- 1 2 3 4 5\n";
const FLIP: &str = "grid 5\n+ 1 2 3 4 5\n- 3 4 5 1 2\n";

fn gridcal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gridcal")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn file(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn canon_is_shift_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let a = file(dir.path(), "a.grid", TREFOIL);
    let b = file(dir.path(), "b.grid", "grid 5\n+ 4 5 1 2 3\n- 2 3 4 5 1\n");
    let (x, y) = (gridcal(&["canon", s(&a)]), gridcal(&["canon", s(&b)]));
    assert!(x.status.success());
    assert_eq!(stdout(&x), stdout(&y));
    assert_eq!(stdout(&x).trim(), "05000102030403040001020000000000");
}

#[test]
fn invariants_as_json() {
    let dir = tempfile::tempdir().unwrap();
    let a = file(dir.path(), "a.grid", TREFOIL);
    let o = gridcal(&["--json", "invariants", s(&a)]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["tb_plus"], -6);
    assert_eq!(v["rot_plus"], serde_json::json!([1]));
    assert_eq!(v["determinant"], 3);
}

#[test]
fn parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = file(dir.path(), "bad.grid", "grid 2\n+ 1 1\n- 2 2\n");
    let o = gridcal(&["validate", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    let o = gridcal(&["--json", "validate", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["error"]["kind"], "parse");
    assert_eq!(v["error"]["exit_code"], 2);
    let good = file(dir.path(), "t.grid", TREFOIL);
    assert_eq!(gridcal(&["--caps", "9:x:1", "canon", s(&good)]).status.code(), Some(2));
}

#[test]
fn equivalence_certificate_replays_and_tampering_fails() {
    let dir = tempfile::tempdir().unwrap();
    let a = file(dir.path(), "a.grid", TREFOIL);
    let b = file(dir.path(), "b.grid", "grid 5\n+ 4 5 1 2 3\n- 2 3 4 5 1\n");
    let cert = dir.path().join("c.cert");
    let o = gridcal(&["equiv", s(&a), s(&b), "--cert", s(&cert)]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("verdict: equivalent"));
    assert!(gridcal(&["replay", s(&cert)]).status.success());
    let flip_key = stdout(&gridcal(&["canon", s(&file(dir.path(), "f.grid", FLIP))])).trim().to_string();
    let text = std::fs::read_to_string(&cert).unwrap();
    let tampered: String = text
        .lines()
        .map(|l| if l.starts_with("to ") { format!("to {flip_key}\n") } else { format!("{l}\n") })
        .collect();
    std::fs::write(&cert, tampered).unwrap();
    assert_eq!(gridcal(&["replay", s(&cert)]).status.code(), Some(4));
}

#[test]
fn flipped_trefoil_is_distinct() {
    let dir = tempfile::tempdir().unwrap();
    let a = file(dir.path(), "a.grid", TREFOIL);
    let b = file(dir.path(), "b.grid", FLIP);
    let o = gridcal(&["--json", "equiv", s(&a), s(&b)]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "distinct");
}

#[test]
fn exhausted_caps_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let a = file(dir.path(), "a.grid", TREFOIL);
    let b = file(dir.path(), "b.grid", "grid 6\n+ 4 5 6 2 1 3\n- 1 2 3 4 5 6\n");
    let o = gridcal(&["--caps", "6:1:10", "equiv", s(&a), s(&b)]);
    let out = stdout(&o);
    if !out.contains("distinct") {
        assert_eq!(o.status.code(), Some(3), "{out}");
    }
}

#[test]
fn trefoil_census_at_five() {
    let o = gridcal(&["census", "--n", "5", "--knot", "det=3", "--nonsimplifiable"]);
    assert!(o.status.success());
    let recs: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(recs.len(), 4);
    let count = |b: &str| recs.iter().filter(|r| r["bucket"] == b).count();
    assert_eq!(count("trefoil"), 2);
    assert_eq!(count("trefoil-mirror"), 2);
    let summary = String::from_utf8_lossy(&o.stderr);
    assert!(summary.contains("verified up to n=5"));
}

#[test]
fn plain_census_counts_types() {
    let o = gridcal(&["--json", "census", "--n", "5"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let types: Vec<u64> = v["per_size"].as_array().unwrap().iter().map(|x| x["types"].as_u64().unwrap()).collect();
    assert_eq!(types, [1, 4, 19, 224]);
}

#[test]
fn census_writes_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.jsonl");
    let o = gridcal(&["census", "--n", "4", "--out", s(&out)]);
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 1 + 4 + 19);
}

#[test]
fn seeded_walks_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = file(dir.path(), "a.grid", TREFOIL);
    let run = |seed: &str| stdout(&gridcal(&["--seed", seed, "neighbors", s(&a), "--walk", "12"]));
    assert_eq!(run("7"), run("7"));
    assert!(!run("7").is_empty());
}

#[test]
fn find_middle_writes_its_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let a = file(dir.path(), "a.grid", TREFOIL);
    let out = dir.path().join("m");
    let o = gridcal(&["find-middle", s(&a), s(&a), "--out-dir", s(&out)]);
    assert!(o.status.success(), "{}", stdout(&o));
    for f in ["middle.grid", "first.cert", "second.cert"] {
        assert!(out.join(f).exists(), "{f}");
    }
    assert!(gridcal(&["replay", s(&out.join("first.cert"))]).status.success());
    assert!(gridcal(&["validate", s(&out.join("middle.grid"))]).status.success());
}

#[test]
fn atlas_contradiction_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    file(dir.path(), "a.grid", TREFOIL);
    file(dir.path(), "b.grid", FLIP);
    let table = file(
        dir.path(),
        "atlas.json",
        r#"{"sym_order":1,"rows":["r"],"cols":["c"],"cells":{"1,1":["a.grid","b.grid"]}}"#,
    );
    let o = gridcal(&["--caps", "6:20000:30", "atlas-verify", s(&table)]);
    assert_eq!(o.status.code(), Some(4), "{}", stdout(&o));
}

#[test]
fn render_emits_svg() {
    let dir = tempfile::tempdir().unwrap();
    let a = file(dir.path(), "a.grid", TREFOIL);
    let out = stdout(&gridcal(&["render", s(&a)]));
    assert!(out.starts_with("<svg"));
    assert_eq!(out.matches("<circle").count(), 10);
}
