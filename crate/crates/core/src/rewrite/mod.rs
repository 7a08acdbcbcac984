//! Program transformations that preserve answer sets, each paired with an
//! oracle check.

mod local;
mod structural;

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::ast::{Atom, Program, Rule};
use crate::fol::fol_of_rule;
use crate::ground::{ground_formulas_with, GroundOptions};
use crate::semantics::{
    answer_sets, projection_bijection, same_answer_sets, satisfies, show_set, strongly_equivalent, OracleError,
    SolveOptions,
};

pub use local::{
    add_subsumed, choice_to_defining, defining_to_choice, eliminate_aggregate, subsumption_simplify,
    unwrap_singleton_count, wrap_singleton_count,
};
pub use structural::{introduce_definition, project_rule, shift_rule, shifted_rules, Projection};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("partition is illegal: strongly connected component {{{}}} meets two members", .scc.join(", "))]
    IllegalPartition { scc: Vec<String> },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("symbol `{0}` is not fresh")]
    FreshnessViolation(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no rule with index {0}")]
    NoSuchRule(usize),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RewriteReport {
    pub pass: String,
    pub removed: Vec<String>,
    pub added: Vec<String>,
    pub fresh: Vec<String>,
    pub verdict: Option<Verdict>,
}

impl RewriteReport {
    pub(crate) fn new(pass: &str) -> Self {
        RewriteReport { pass: pass.into(), removed: Vec::new(), added: Vec::new(), fresh: Vec::new(), verdict: None }
    }

    pub(crate) fn replaced(pass: &str, old: &[&Rule], new: &[&Rule]) -> Self {
        let mut r = Self::new(pass);
        r.removed = old.iter().map(|x| x.to_string()).collect();
        r.added = new.iter().map(|x| x.to_string()).collect();
        r
    }
}

/// How a rewrite is checked by the oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum VerifyMode {
    /// Same here-and-there models after grounding.
    Strong,
    /// Same answer sets.
    AnswerSets,
    /// Answer sets correspond one to one after dropping these predicates.
    Conservative(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub mode: VerifyMode,
    pub holds: bool,
    pub detail: Option<String>,
    pub universe: Vec<String>,
    pub depth: usize,
}

pub fn verify_rewrite(
    before: &Program,
    after: &Program,
    mode: &VerifyMode,
    ground: &GroundOptions,
    opts: &SolveOptions,
) -> Result<Verdict, RewriteError> {
    let show_universe = |u: &[crate::ast::Term]| u.iter().map(|t| t.to_string()).collect::<Vec<_>>();
    Ok(match mode {
        VerifyMode::Strong => {
            let v = strongly_equivalent(before, after, ground, opts.cap)?;
            let detail = v.witness.map(|(side, w)| {
                format!("{side:?} side alone is satisfied by ({}, {})", show_set(&w.here), show_set(&w.there))
            });
            Verdict { mode: mode.clone(), holds: v.equivalent, detail, universe: show_universe(&v.universe), depth: v.depth }
        }
        VerifyMode::AnswerSets => {
            let v = same_answer_sets(before, after, ground, opts)?;
            let detail = v.witness.map(|(side, x)| format!("{} is an answer set only on the {side:?} side", show_set(&x)));
            Verdict { mode: mode.clone(), holds: v.same, detail, universe: show_universe(&v.universe), depth: v.depth }
        }
        VerifyMode::Conservative(dropped) => {
            let dropped: BTreeSet<String> = dropped.iter().cloned().collect();
            let keep = |a: &Atom| a.predicate().map_or(true, |p| !dropped.contains(p));
            let v = projection_bijection(after, before, &keep, ground, opts)?;
            Verdict { mode: mode.clone(), holds: v.holds, detail: v.problem, universe: show_universe(&v.universe), depth: v.depth }
        }
    })
}

/// Whether two denials agree on every answer set of `program`.
pub fn denials_interchangeable(
    program: &Program,
    r1: &Rule,
    r2: &Rule,
    ground: &GroundOptions,
    opts: &SolveOptions,
) -> Result<Verdict, RewriteError> {
    for r in [r1, r2] {
        if !r.head.atoms().is_empty() {
            return Err(RewriteError::Precondition(format!("`{r}` is not a denial")));
        }
    }
    let mut sig = program.signature();
    sig.merge(&Program::new(vec![r1.clone(), r2.clone()]).signature());
    let base = ground_formulas_with(&[crate::fol::fol_of_program(program)], &sig, ground).map_err(OracleError::from)?;
    let g1 = ground_formulas_with(&[fol_of_rule(r1)], &sig, ground).map_err(OracleError::from)?;
    let g2 = ground_formulas_with(&[fol_of_rule(r2)], &sig, ground).map_err(OracleError::from)?;
    let mut detail = None;
    for x in answer_sets(&base, opts)? {
        let a = g1.formulas.iter().all(|f| satisfies(f, &x));
        let b = g2.formulas.iter().all(|f| satisfies(f, &x));
        if a != b {
            detail = Some(format!("answer set {} satisfies only the {} denial", show_set(&x), if a { "first" } else { "second" }));
            break;
        }
    }
    Ok(Verdict {
        mode: VerifyMode::AnswerSets,
        holds: detail.is_none(),
        detail,
        universe: base.universe.iter().map(|t| t.to_string()).collect(),
        depth: ground.depth,
    })
}

/// `base__aux<k>` for the smallest `k` not used as a symbol of `program`.
pub fn fresh_predicate(program: &Program, base: &str) -> String {
    let sig = program.signature();
    (1..).map(|k| format!("{base}__aux{k}")).find(|s| !sig.mentions(s)).unwrap()
}

pub(crate) fn rule_at(program: &Program, idx: usize) -> Result<&Rule, RewriteError> {
    program.rules.get(idx).ok_or(RewriteError::NoSuchRule(idx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_program;

    fn prog(src: &str) -> Program {
        parse_program(src).unwrap()
    }

    fn check(before: &str, after: &str, mode: VerifyMode) -> Verdict {
        verify_rewrite(&prog(before), &prog(after), &mode, &GroundOptions::default(), &SolveOptions::default()).unwrap()
    }

    #[test]
    fn shifted_sample_keeps_answer_sets() {
        let v = check(
            "a | b | c | d | e(1). a :- b. b :- a.",
            "a | b :- not c, not d, not e(1). c | d | e(1) :- not a, not b. a :- b. b :- a.",
            VerifyMode::AnswerSets,
        );
        assert!(v.holds);
        assert_eq!(v.universe, vec!["1"]);
    }

    #[test]
    fn different_facts_fail_with_witness() {
        let v = check("p.", "q.", VerifyMode::AnswerSets);
        assert!(!v.holds);
        assert!(v.detail.unwrap().contains("{p}"));
        assert!(!check("p.", "q.", VerifyMode::Strong).holds);
    }

    #[test]
    fn projection_is_conservative() {
        let facts = "p(1). q(1,1). r(1,1). t(1). q(1,2). r(2,2).";
        let v = check(
            &format!("s(X,Z) :- p(Z), q(X,Y), r(X,Y), t(X). {facts}"),
            &format!("s(X,Z) :- u(X), p(Z), t(X). u(X) :- q(X,Y), r(X,Y). {facts}"),
            VerifyMode::Conservative(vec!["u".into()]),
        );
        assert!(v.holds, "{v:?}");
    }

    #[test]
    fn denial_pairs() {
        let g = GroundOptions::default();
        let o = SolveOptions::default();
        let d = |s: &str| prog(s).rules[0].clone();
        assert!(denials_interchangeable(&prog("{p}."), &d(":- p."), &d(":- p, p."), &g, &o).unwrap().holds);
        let v = denials_interchangeable(&prog("p."), &d(":- p."), &d(":- q."), &g, &o).unwrap();
        assert!(!v.holds);
        assert!(v.detail.unwrap().contains("{p}"));
        assert!(denials_interchangeable(&prog("p."), &d("p."), &d(":- q."), &g, &o).is_err());
    }

    #[test]
    fn fresh_names_avoid_signature() {
        let p = prog("u__aux1 :- q.");
        assert_eq!(fresh_predicate(&p, "u"), "u__aux2");
    }
}
