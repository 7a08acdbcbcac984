use std::path::PathBuf;

use aspforge::cli::{execute, EXIT_CAP, EXIT_FALSE, EXIT_OK, EXIT_USAGE};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv: Vec<&str> = std::iter::once("aspforge").chain(args.iter().copied()).collect();
    let code = execute(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn file(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p: PathBuf = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn solve_sample_prints_four_answer_sets() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("pisamp.lp");
    let (code, _, _) = run(&["corpus", "pisamp", "-o", out_path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let (code, out, _) = run(&["solve", out_path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("answer set 1: {a, b}"));
    assert!(out.ends_with("4 answer sets\n"));
    let (_, json, _) = run(&["solve", out_path.to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["count"], 4);
    assert_eq!(v["answer_sets"][3][0], "e(1)");
}

#[test]
fn strong_equivalence_of_the_aggregate_and_the_denial() {
    let dir = tempfile::tempdir().unwrap();
    let a = file(&dir, "a.lp", ":- 2 <= #count{A : o(A,I)}, step(I), not goal(I), I != 1.\n");
    let b = file(&dir, "b.lp", ":- o(A,I), o(A2,I), step(I), not goal(I), I != 1, A != A2.\n");
    assert_eq!(run(&["eq", "--mode", "strong", &a, &b, "--depth", "0"]).0, EXIT_OK);
    assert_eq!(run(&["eq", "--mode", "strong", &a, &b, "--depth", "0", "--const", "c,d"]).0, EXIT_OK);
    let weak = file(&dir, "w.lp", ":- o(A,I), o(A2,I), step(I), not goal(I), I != 1.\n");
    let (code, out, _) = run(&["eq", &a, &weak, "--const", "c"]);
    assert_eq!(code, EXIT_FALSE);
    assert!(out.contains("witness"));
}

#[test]
fn not_strongly_equivalent_but_same_answer_sets() {
    let dir = tempfile::tempdir().unwrap();
    let l = file(&dir, "l.lp", "p :- not q.\nq :- not p.\n");
    let r = file(&dir, "r.lp", "p | q.\n");
    let (code, out, _) = run(&["eq", &l, &r]);
    assert_eq!(code, EXIT_FALSE);
    assert!(out.starts_with("not equivalent"));
    assert_eq!(run(&["eq", "--mode", "answer-sets", &l, &r]).0, EXIT_OK);
}

#[test]
fn proof_checking() {
    let dir = tempfile::tempdir().unwrap();
    let good = file(&dir, "d.ndp", aspforge::ndproof::DEMORGAN_PROOF);
    let (code, out, _) = run(&["nd", "check", &good]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "valid: => ~(F & G) -> ~F | ~G\n");
    let bad = file(&dir, "bad.ndp", &aspforge::ndproof::DEMORGAN_PROOF.replace("OrE 1,11,13", "OrE 1,11,12"));
    let (code, out, _) = run(&["nd", "check", &bad]);
    assert_eq!(code, EXIT_FALSE);
    assert!(out.starts_with("invalid at line 14"));
    let dangling = file(&dir, "x.ndp", "1. p => p axiom\n2. p => p W 3\n");
    assert_eq!(run(&["nd", "check", &dangling]).0, EXIT_USAGE);
    let one = file(&dir, "one.ndp", "1. p => p axiom\n");
    assert_eq!(run(&["nd", "check", &one]).0, EXIT_OK);
}

#[test]
fn action_descriptions() {
    let dir = tempfile::tempdir().unwrap();
    let w = file(&dir, "water.act", aspforge::corpus::WATER_SOURCE);
    let (code, out, _) = run(&["c", "trans", &w]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("states: 3"));
    assert!(out.contains("transitions: 6"));
    for mode in ["lp", "simp"] {
        let (code, out, _) = run(&["c", "translate", &w, "--mode", mode, "--horizon", "2", "--check"]);
        assert_eq!(code, EXIT_OK, "{out}");
        assert!(out.contains("% 12 answer sets, 12 paths: one to one"));
    }
}

#[test]
fn rewrites_from_the_command_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = file(&dir, "p.lp", "a | b | c | d | e(1).\na :- b.\nb :- a.\n");
    let (code, out, _) = run(&["rewrite", "--pass", "shift", "--partition", "a,b;c,d,e", &p, "--verify"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("a | b :- not c, not d, not e(1).\nc | d | e(1) :- not a, not b.\n"));
    assert!(out.contains("holds"));
    let (code, _, err) = run(&["rewrite", "--pass", "shift", "--partition", "a;b;c,d,e", &p]);
    assert_eq!(code, EXIT_FALSE);
    assert!(err.contains("{a, b}"));
    let s = file(&dir, "s.lp", "s(X,Z) :- p(Z), q(X,Y), r(X,Y), t(X).\np(1). q(1,1). r(1,1). t(1). q(1,2). r(2,2).\n");
    let (code, out, _) = run(&["rewrite", "--pass", "project", &s, "--vars", "Y", "--alpha", "q(X,Y), r(X,Y)", "--aux", "u", "--verify"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.starts_with("s(X,Z) :- u(X), p(Z), t(X).\nu(X) :- q(X,Y), r(X,Y).\n"));
    let g = file(&dir, "g.lp", ":- 2 <= #count{A : o(A,I)}, step(I).\n");
    let (code, out, _) = run(&["rewrite", "--pass", "eliminate-aggregate", &g, "--verify", "--const", "c"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.starts_with(":- o(A__1,I), o(A__2,I), A__1 != A__2, step(I).\n"));
}

#[test]
fn graph_and_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let p = file(&dir, "p.lp", "a | b | c | d | e(1).\na :- b.\nb :- a.\n");
    let (_, out, _) = run(&["graph", &p, "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["sccs"][0], serde_json::json!(["a", "b"]));
    let (_, dot, _) = run(&["graph", &p, "--dot"]);
    assert!(dot.starts_with("digraph"));
    let (code, out, _) = run(&["corpus", "plan-disj", "--horizon", "2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("sthHpd(I) :- o(A,I).\n"));
    assert!(out.contains("I != 2"));
    let (_, out, _) = run(&["corpus", "instance", "--actions", "1"]);
    assert_eq!(out, "action(a1).\nstep(0).\nstep(1).\ngoal(1) :- step(1).\n");
}

#[test]
fn usage_and_cap_errors() {
    assert_eq!(run(&["solve", "/nonexistent/file.lp"]).0, EXIT_USAGE);
    assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(run(&["solve", "x.lp", "--cap", "0"]).0, EXIT_USAGE);
    assert_eq!(run(&["--help"]).0, EXIT_OK);
    let dir = tempfile::tempdir().unwrap();
    let bad = file(&dir, "bad.lp", "p :- q(\n");
    let (code, _, err) = run(&["fmt", &bad]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("bad.lp"));
    let wide = file(&dir, "wide.lp", "{a1}. {a2}. {a3}. {a4}. {a5}. {a6}.\n");
    assert_eq!(run(&["solve", &wide, "--cap", "4"]).0, EXIT_CAP);
    assert_eq!(run(&["solve", &wide, "--cap", "6"]).0, EXIT_OK);
}

#[test]
fn json_is_deterministic() {
    let a = run(&["verify-claims", "--json", "--cases", "20"]);
    let b = run(&["verify-claims", "--json", "--cases", "20"]);
    assert_eq!(a.0, EXIT_OK, "{}", a.1);
    assert_eq!(a.1, b.1);
    let v: serde_json::Value = serde_json::from_str(&a.1).unwrap();
    assert_eq!(v["ok"], true);
    assert_eq!(v["translations"][1]["lp"]["paths"], 12);
}
