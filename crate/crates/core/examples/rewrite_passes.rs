//! Each rewriting pass applied to a small program and verified by the oracle.

use aspforge::ground::GroundOptions;
use aspforge::parser::{parse_body, parse_program};
use aspforge::rewrite::{
    choice_to_defining, eliminate_aggregate, project_rule, shift_rule, subsumption_simplify, verify_rewrite,
    Projection, RewriteError, RewriteReport, VerifyMode,
};
use aspforge::semantics::SolveOptions;

fn show(
    title: &str,
    src: &str,
    mode: VerifyMode,
    ground: &GroundOptions,
    pass: impl Fn(&aspforge::ast::Program) -> Result<(aspforge::ast::Program, RewriteReport), RewriteError>,
) {
    let before = parse_program(src).unwrap();
    println!("== {title}");
    match pass(&before) {
        Err(e) => println!("  rejected: {e}"),
        Ok((after, _)) => {
            for r in &after.rules {
                println!("  {r}");
            }
            let v = verify_rewrite(&before, &after, &mode, ground, &SolveOptions::default()).expect("within cap");
            println!("  {:?}: {}", v.mode, if v.holds { "holds" } else { "fails" });
        }
    }
}

fn main() {
    let g = GroundOptions::default();
    show("subsumption", "p :- q.\np :- q, r.\n{q}.\n{r}.\n", VerifyMode::Strong, &g, |p| Ok(subsumption_simplify(p)));
    let pi = "a | b | c | d | e(1).\na :- b.\nb :- a.\n";
    let legal = vec![vec!["a".into(), "b".into()], vec!["c".into(), "d".into(), "e".into()]];
    show("shift", pi, VerifyMode::AnswerSets, &g, |p| shift_rule(p, 0, &legal));
    let illegal = vec![vec!["a".into()], vec!["b".into()], vec!["c".into(), "d".into(), "e".into()]];
    show("shift across a cycle", pi, VerifyMode::AnswerSets, &g, |p| shift_rule(p, 0, &illegal));
    let proj = Projection {
        x: vec!["Y".into()],
        alpha: parse_body("q(X,Y), r(X,Y)").unwrap(),
        alpha_prime: Vec::new(),
        u: "u".into(),
    };
    show(
        "projection",
        "s(X,Z) :- p(Z), q(X,Y), r(X,Y), t(X).\np(1). q(1,1). r(1,1). t(1). q(1,2). r(2,2).\n",
        VerifyMode::Conservative(vec!["u".into()]),
        &g,
        |p| project_rule(p, 0, &proj),
    );
    let consts = GroundOptions { extra_constants: vec!["c".into(), "d".into()], ..GroundOptions::with_depth(0) };
    show("aggregate elimination", ":- 2 <= #count{A : o(A,I)}, step(I).\n", VerifyMode::Strong, &consts, |p| {
        eliminate_aggregate(p, 0)
    });
    show(
        "choice to defining rule",
        "{o(A,I)} :- action(A), step(I).\nnon_o(A,I) :- not o(A,I), action(A), step(I).\n:- o(A,I), non_o(A,I).\naction(c). step(0).\n",
        VerifyMode::Strong,
        &g,
        |p| choice_to_defining(p, "o", "non_o"),
    );
}
