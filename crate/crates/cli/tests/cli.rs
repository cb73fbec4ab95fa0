use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn catbench(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catbench")).args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn fixtures() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let w = |name: &str, text: &str| std::fs::write(dir.path().join(name), text).unwrap();
    w("l2.json", r#"{"domain":["0","1"],"rels":{"<":[["0","1"]]}}"#);
    w("l3.json", r#"{"domain":["0","1","2"],"rels":{"<":[["0","1"],["0","2"],["1","2"]]}}"#);
    w("succ.voc", "(fun S 1)\n(const 0)\n");
    w("cycle.json", r#"{"domain":["a","b","c"],"funs":{"S":{"a":"b","b":"c","c":"a"}},"consts":{"0":"a"}}"#);
    dir
}

#[test]
fn ef_solve_l2_l3_two_rounds() {
    let dir = fixtures();
    let o = catbench(&["ef", "solve", "--left", "l2.json", "--right", "l3.json", "--rounds", "2", "--format", "json"], dir.path());
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["winner"], "spoiler");
    assert_eq!(v["certificate_verified"], true);
    assert!(v["transcript"]["moves"].as_array().is_some_and(|m| !m.is_empty()));
}

#[test]
fn ef_solve_one_round_duplicator() {
    let dir = fixtures();
    let o = catbench(&["ef", "solve", "--left", "l2.json", "--right", "l3.json", "--rounds", "1"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("winner: duplicator"));
}

#[test]
fn hf_build_rank_four() {
    let dir = fixtures();
    let o = catbench(&["hf", "build", "--rank", "4"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "stage sizes 0,1,2,4,16");
    let o = catbench(&["hf", "build", "--rank", "4", "--format", "json"], dir.path());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["stage_sizes"], serde_json::json!([0, 1, 2, 4, 16]));
}

#[test]
fn hf_build_over_limit_is_budget() {
    let dir = fixtures();
    let o = catbench(&["hf", "build", "--urelements", "a,b", "--rank", "3"], dir.path());
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn parse_error_reports_position() {
    let dir = fixtures();
    let o = catbench(&["fmla", "parse", "--vocab", "succ.voc", "bad(("], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("at byte"), "{err}");
    assert!(err.contains('^'));
}

#[test]
fn parse_and_relativize() {
    let dir = fixtures();
    let o = catbench(&["fmla", "parse", "--vocab", "succ.voc", "(forall x (not (= (S x) 0)))"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "(forall x (not (= (S x) 0)))");
    let o = catbench(
        &["fmla", "xform", "--vocab", "succ.voc", "(forall x (not (= (S x) 0)))", "--relativize", "U", "--copy", "1"],
        dir.path(),
    );
    assert_eq!(stdout(&o).trim(), "(forall x (-> (U x) (not (= (S1 x) 0_1))))");
}

#[test]
fn eval_exit_codes() {
    let dir = fixtures();
    let holds = catbench(&["eval", "fo", "--structure", "cycle.json", "(forall x (not (= (S x) x)))"], dir.path());
    assert_eq!(holds.status.code(), Some(0));
    let fails = catbench(&["eval", "fo", "--structure", "cycle.json", "(forall x (not (= (S x) 0)))"], dir.path());
    assert_eq!(fails.status.code(), Some(1));
    assert!(stdout(&fails).contains("counterexample x=c"));
}

#[test]
fn audit_succ_core_on_cycle() {
    let dir = fixtures();
    let o = catbench(&["audit", "--structure", "cycle.json", "--theory", "succ-core"], dir.path());
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

#[test]
fn dedekind_commands() {
    let dir = fixtures();
    let o = catbench(&["dedekind", "simply-infinite", "--structure", "cycle.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let o = catbench(&["dedekind", "closure", "--phi", "1,2,2,0", "--base", "0"], dir.path());
    assert_eq!(stdout(&o).trim(), "{0,1,2}");
    let o = catbench(&["dedekind", "iso", "--n", "10"], dir.path());
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn coding_commands() {
    let dir = fixtures();
    assert_eq!(stdout(&catbench(&["code", "pair", "3", "4"], dir.path())).trim(), "32");
    assert_eq!(stdout(&catbench(&["code", "pair", "--unpair", "32"], dir.path())).trim(), "3 4");
    let code = stdout(&catbench(&["code", "seq", "5,0,7"], dir.path()));
    let back = catbench(&["code", "seq", "--decode", code.trim()], dir.path());
    assert_eq!(stdout(&back).trim(), "5,0,7");
    let o = catbench(&["code", "psi", "--u", "6"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("psi(x, 6, 12) = true"));
    let o = catbench(&["code", "psi", "--u", "6", "--v", "13", "--x", "0"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn find_commands() {
    let dir = fixtures();
    let o = catbench(&["find", "model", "--theory", "linear-order", "--min", "3", "--max", "3", "--out", "m.json"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(dir.path().join("m.json").exists());
    let o = catbench(&["find", "unsat", "--theory", "succ-core", "--max", "4"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let o = catbench(&["--budget-nodes", "5", "find", "unsat", "--theory", "succ-core", "--max", "6"], dir.path());
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_two() {
    let dir = fixtures();
    assert_eq!(catbench(&["hf", "frobnicate"], dir.path()).status.code(), Some(2));
    assert_eq!(catbench(&["--budget-ms", "0", "hf", "build", "--rank", "1"], dir.path()).status.code(), Some(2));
    assert_eq!(catbench(&["eval", "fo", "--structure", "missing.json", "(= 0 0)"], dir.path()).status.code(), Some(2));
}

#[test]
fn interactive_spoiler_reads_stdin() {
    use std::io::Write;
    use std::process::Stdio;
    let dir = fixtures();
    let mut child = Command::new(env!("CARGO_BIN_EXE_catbench"))
        .args(["ef", "play", "--left", "l2.json", "--right", "l3.json", "--rounds", "1", "--spoiler", "human"])
        .current_dir(dir.path())
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"move B 1\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("spoiler>"));
    assert!(stdout(&o).starts_with("winner: duplicator"));
}

#[test]
fn json_and_text_share_exit_codes() {
    let dir = fixtures();
    let cases: [&[&str]; 6] = [
        &["ef", "solve", "--left", "l2.json", "--right", "l3.json", "--rounds", "2"],
        &["ef", "solve", "--left", "l2.json", "--right", "l3.json", "--rounds", "1"],
        &["eval", "fo", "--structure", "cycle.json", "(forall x (not (= (S x) 0)))"],
        &["dedekind", "simply-infinite", "--structure", "cycle.json"],
        &["hf", "build", "--urelements", "a,b", "--rank", "3"],
        &["fmla", "parse", "--vocab", "succ.voc", "bad(("],
    ];
    for args in cases {
        let text = catbench(args, dir.path());
        let json = catbench(&[&["--format", "json"], args].concat(), dir.path());
        assert_eq!(text.status.code(), json.status.code(), "{args:?}");
        if json.status.code() != Some(2) && json.status.code() != Some(3) {
            serde_json::from_str::<Value>(&stdout(&json)).unwrap_or_else(|e| panic!("{args:?}: {e}"));
        }
    }
}
