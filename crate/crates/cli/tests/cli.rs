use std::path::PathBuf;
use std::process::{Command, Output};

use qalink_core::MontesinosLink;
use serde_json::Value;

fn qalink(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qalink"))
        .args(args)
        .env_remove("QALINK_JOBS")
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = qalink(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn jsonl(args: &[&str]) -> Vec<Value> {
    let mut args = args.to_vec();
    args.extend(["--format", "jsonl"]);
    stdout(&args)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn graph_file(name: &str, text: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn classify_condition_one() {
    let r = &jsonl(&["classify", "M(0; 5/2, 7/3)"])[0];
    assert_eq!(r["status"], "QA");
    assert_eq!(r["reason"], "Condition1");
    assert_eq!(r["det"], 29);
    assert_eq!(r["epsilon"], "-29/35");
}

#[test]
fn classify_det_zero_with_verify() {
    let r = &jsonl(&["classify", "M(1; 3/2, 3)", "--verify"])[0];
    assert_eq!(r["status"], "NotQA");
    assert_eq!(r["reason"], "DetZero");
    assert_eq!(r["evidence"]["branch"], "DetZero");
    assert_eq!(r["canonical"], "M(1; 3/1, 3/2)");
}

#[test]
fn tsv_has_header_and_one_row_per_link() {
    let out = stdout(&["classify", "M(0; 2)", "M(2; 3, 3, 3)"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("link\tcanonical\te\tp\tdet\tepsilon\tstatus"));
    assert!(lines[2].contains("\tQA\tCondition4\t"));
}

#[test]
fn invalid_links_exit_two_naming_the_token() {
    let out = qalink(&["classify", "M(1; 1/2)"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1/2"));
    let out = qalink(&["classify", "M(0; 5/x)"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`x`"));
}

#[test]
fn explain_prints_the_determinant_computation() {
    let out = stdout(&["classify", "M(1; 3/2, 3)", "--explain"]);
    assert!(out.contains("|9(1 \u{2212} 2/3 \u{2212} 1/3)| = 0"), "{out}");
    let r = &jsonl(&["classify", "M(0; 2)", "--explain"])[0];
    let trace: Vec<&str> = r["explain"].as_array().unwrap().iter().map(|l| l.as_str().unwrap()).collect();
    assert!(trace.iter().any(|l| l.contains("no obstruction run needed")));
}

#[test]
fn enumerate_three_twos() {
    let rs = jsonl(&[
        "enumerate", "--p", "3", "--alpha-max", "2", "--e-min", "0", "--e-max", "2", "--verify",
    ]);
    let summary: Vec<(i64, &str, &str)> = rs
        .iter()
        .map(|r| {
            (
                r["e"].as_i64().unwrap(),
                r["status"].as_str().unwrap(),
                r["evidence"]["branch"].as_str().unwrap(),
            )
        })
        .collect();
    // M(2; 2, 2, 2) is the mirror of M(1; 2, 2, 2)
    assert_eq!(
        summary,
        vec![
            (0, "QA", "PositiveCheck"),
            (1, "NotQA", "LatticeObstructed"),
            (2, "NotQA", "LatticeObstructed"),
        ]
    );
}

#[test]
fn enumerate_single_tangles_are_qa() {
    let rs = jsonl(&["enumerate", "--p", "1", "--alpha-max", "3", "--e-min", "0", "--e-max", "0"]);
    assert_eq!(rs.len(), 3);
    assert!(rs.iter().all(|r| r["status"] == "QA"));
}

#[test]
fn enumerate_two_tangles_not_qa_exactly_at_det_zero() {
    let rs = jsonl(&["enumerate", "--p", "2", "--alpha-max", "3", "--e-min", "1", "--e-max", "1"]);
    assert!(rs.iter().any(|r| r["canonical"] == "M(1; 3/1, 3/2)" && r["status"] == "NotQA"));
    for r in &rs {
        assert_eq!(r["status"] == "NotQA", r["det"] == 0, "{r}");
    }
}

#[test]
fn enumerate_p_max_covers_every_arity() {
    let rs = jsonl(&["enumerate", "--p-max", "2", "--alpha-max", "2", "--e-min", "0", "--e-max", "0"]);
    let ps: Vec<i64> = rs.iter().map(|r| r["p"].as_i64().unwrap()).collect();
    assert_eq!(ps, vec![1, 2]);
}

#[test]
fn invalid_bounds_exit_two() {
    for args in [
        ["enumerate", "--p", "2", "--alpha-max", "1", "--e-min", "0", "--e-max", "0"],
        ["enumerate", "--p", "2", "--alpha-max", "3", "--e-min", "2", "--e-max", "0"],
        ["enumerate", "--p", "0", "--alpha-max", "3", "--e-min", "0", "--e-max", "0"],
    ] {
        assert_eq!(qalink(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn enumeration_is_deterministic_across_runs_and_workers() {
    let args = ["enumerate", "--p-max", "3", "--alpha-max", "3", "--e-min", "-1", "--e-max", "3", "--verify"];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    let mut jobs = args.to_vec();
    jobs.extend(["--jobs", "3"]);
    assert_eq!(a, stdout(&jobs));
    let env = Command::new(env!("CARGO_BIN_EXE_qalink"))
        .args(args)
        .env("QALINK_JOBS", "2")
        .output()
        .unwrap();
    assert_eq!(a.as_bytes(), &env.stdout[..]);
}

#[test]
fn printed_canonical_forms_reparse() {
    for r in jsonl(&["enumerate", "--p-max", "3", "--alpha-max", "4", "--e-min", "-1", "--e-max", "2"]) {
        let text = r["canonical"].as_str().unwrap();
        let l: MontesinosLink = text.parse().unwrap();
        assert_eq!(l.canonical_form().to_string(), text);
    }
}

#[test]
fn laufer_anchors() {
    let e8 = graph_file("e8.graph", "central: -2\nleg: -2\nleg: -2 -2\nleg: -2 -2 -2 -2\n");
    let out = stdout(&["laufer", &e8]);
    assert!(out.starts_with("Rational\nsteps: 21\ncycle: 6 3 4 2 5 4 3 2\n"), "{out}");
    for policy in ["highest", "random"] {
        assert!(stdout(&["laufer", &e8, "--policy", policy, "--seed", "5"]).contains("cycle: 6 3 4 2 5 4 3 2"));
    }
    let b237 = graph_file("237.graph", "# Brieskorn sphere\ncentral: -1\nleg: -2\nleg: -3\nleg: -7\n");
    let out = stdout(&["laufer", &b237]);
    assert!(out.starts_with("NotRational\nsteps: 0\n"), "{out}");
    assert!(out.contains("witness: central pairing 2"), "{out}");
}

#[test]
fn graph_errors_map_to_exit_codes() {
    let indefinite = graph_file("indef.graph", "central: 0\nleg: -2\nleg: -2\nleg: -2\nleg: -2\n");
    assert_eq!(qalink(&["laufer", &indefinite]).status.code(), Some(3));
    assert_eq!(qalink(&["embed", &indefinite]).status.code(), Some(3));
    let malformed = graph_file("bad.graph", "leg: -2\ncentral: -2\n");
    assert_eq!(qalink(&["laufer", &malformed]).status.code(), Some(2));
    assert_eq!(qalink(&["laufer", "/nonexistent/x.graph"]).status.code(), Some(2));
    let e8 = graph_file("e8-guard.graph", "central: -2\nleg: -2\nleg: -2 -2\nleg: -2 -2 -2 -2\n");
    assert_eq!(qalink(&["laufer", &e8, "--step-guard", "3"]).status.code(), Some(4));
}

#[test]
fn embed_d4_is_obstructed() {
    let d4 = graph_file("d4.graph", "central: -2\nleg: -2\nleg: -2\nleg: -2\n");
    let out = stdout(&["embed", &d4, "--first-surjective"]);
    assert!(out.contains("Obstructed (no surjective-transpose embedding for n <= 8)"), "{out}");
    let all = stdout(&["embed", &d4, "--all", "--n-max", "5"]);
    assert!(all.lines().filter(|l| l.starts_with("n = 4")).count() >= 1);
    assert!(all.lines().all(|l| !l.contains("surjective true")));
}

#[test]
fn embed_single_vertex_finds_a_witness() {
    let g = graph_file("m4.graph", "central: -4\n");
    let out = stdout(&["embed", &g]);
    assert!(out.contains("NotObstructed n = 4"), "{out}");
    assert!(out.ends_with("1\n1\n1\n1\n"), "{out}");
}
