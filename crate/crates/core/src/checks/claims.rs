//! The planning-module claims, each as a rewrite pipeline plus an oracle.

use std::time::Instant;

use serde::Serialize;

use crate::ast::{Atom, BodyElem, Program, Rule};
use crate::corpus::{build_plan_choice, build_plan_instance, InstanceParams, PlanRule};
use crate::ground::GroundOptions;
use crate::parser::{parse_atom, parse_body};
use crate::rewrite::{
    add_subsumed, choice_to_defining, denials_interchangeable, eliminate_aggregate, introduce_definition, shift_rule,
    unwrap_singleton_count, verify_rewrite, RewriteError, VerifyMode,
};
use crate::semantics::{strongly_equivalent, SolveOptions};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ClaimStatus {
    Holds,
    Fails,
    /// Stated in a withdrawn form; `Fails` of the oracle is the expected outcome.
    Withdrawn { counterexample: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimResult {
    pub claim: usize,
    pub title: String,
    pub instance: InstanceParams,
    pub status: ClaimStatus,
    pub checks: Vec<(String, bool)>,
    pub detail: Option<String>,
    #[serde(skip)]
    pub millis: u128,
}

impl ClaimResult {
    pub fn passed(&self) -> bool {
        match self.status {
            ClaimStatus::Holds => true,
            ClaimStatus::Fails => false,
            ClaimStatus::Withdrawn { counterexample } => counterexample,
        }
    }
}

/// Instances with one or two actions and horizon one or two.
pub fn default_instances() -> Vec<InstanceParams> {
    let mut out = Vec::new();
    for k in 1..=2 {
        for n in 1..=2 {
            out.push(InstanceParams::new(k, n));
        }
    }
    out
}

struct Ctx {
    params: InstanceParams,
    inst: Program,
    ground: GroundOptions,
    /// Universe of a rule group standing alone: its constants and one more.
    schematic: GroundOptions,
    opts: SolveOptions,
    checks: Vec<(String, bool)>,
    detail: Option<String>,
}

impl Ctx {
    fn record(&mut self, what: &str, ok: bool, detail: Option<String>) {
        if !ok && self.detail.is_none() {
            self.detail = Some(detail.unwrap_or_else(|| format!("{what} failed")));
        }
        self.checks.push((what.to_string(), ok));
    }

    fn n(&self) -> usize {
        self.params.horizon
    }

    fn with_instance(&self, module: &Program) -> Program {
        self.inst.union(module)
    }

    fn same(&mut self, what: &str, before: &Program, after: &Program) -> Result<(), RewriteError> {
        let v = verify_rewrite(before, after, &VerifyMode::AnswerSets, &self.ground, &self.opts)?;
        self.record(what, v.holds, v.detail);
        Ok(())
    }

    fn strong(&mut self, what: &str, before: &Program, after: &Program) -> Result<(), RewriteError> {
        let v = strongly_equivalent(before, after, &self.schematic, self.opts.cap)?;
        let detail = v.witness.map(|(side, w)| format!("{what}: {side:?} side alone holds at {w:?}"));
        self.record(what, v.equivalent, detail);
        Ok(())
    }
}

fn rules(list: &[PlanRule], n: usize) -> Program {
    crate::corpus::module(list, n)
}

fn replace(program: &Program, old: &Rule, new: &[Rule]) -> Program {
    let mut out = Vec::new();
    for r in &program.rules {
        if r == old {
            out.extend(new.iter().cloned());
        } else {
            out.push(r.clone());
        }
    }
    Program::new(out)
}

fn index_of(program: &Program, rule: &Rule) -> usize {
    program.rules.iter().position(|r| r == rule).expect("rule present")
}

/// Rules as strings with body elements in sorted order, sorted.
fn sorted(p: &Program) -> Vec<String> {
    let mut v: Vec<String> = p
        .rules
        .iter()
        .map(|r| {
            let mut body = r.body.clone();
            body.sort_by_key(|e| e.to_string());
            Rule::new(r.head.clone(), body).to_string()
        })
        .collect();
    v.sort();
    v
}

pub const CLAIM_TITLES: [&str; 7] = [
    "adding the guarded non-occurrence rule",
    "pairwise denial for the at-most-one aggregate",
    "literal denial for the at-least-one aggregate",
    "defining rule for the choice rule",
    "disjunctive rule for the choice rule",
    "action-typed pairwise denial",
    "sthHpd for the at-least-one aggregate",
];

fn claim1(c: &mut Ctx) -> Result<(), RewriteError> {
    let n = c.n();
    let base = c.with_instance(&build_plan_choice(&c.params));
    let (after, _) = add_subsumed(&base, PlanRule::GuardedNonOccurrence.rule(n))?;
    c.same("same answer sets", &base, &after)?;
    let alone = rules(&[PlanRule::NonOccurrence], n);
    let both = rules(&[PlanRule::NonOccurrence, PlanRule::GuardedNonOccurrence], n);
    c.strong("strongly equivalent in any program", &alone, &both)
}

fn claim2(c: &mut Ctx) -> Result<(), RewriteError> {
    let n = c.n();
    let agg = rules(&[PlanRule::AtMostOne], n);
    let (pass, _) = eliminate_aggregate(&agg, 0)?;
    let target = rules(&[PlanRule::PairwiseStepDenial], n);
    c.strong("aggregate elimination is strongly equivalent", &agg, &pass)?;
    c.strong("strongly equivalent to the pairwise denial", &agg, &target)?;
    let base = c.with_instance(&build_plan_choice(&c.params));
    let after = replace(&base, &PlanRule::AtMostOne.rule(n), &[PlanRule::PairwiseStepDenial.rule(n)]);
    c.same("same answer sets", &base, &after)
}

fn claim3(c: &mut Ctx) -> Result<(), RewriteError> {
    let n = c.n();
    let base = c.with_instance(&build_plan_choice(&c.params));
    let literal = crate::parser::parse_program(&format!(":- not o(A,I), step(I), not goal(I), I != {n}."))
        .map_err(|e| RewriteError::Precondition(e.to_string()))?;
    let after = replace(&base, &PlanRule::AtLeastOne.rule(n), &literal.rules);
    c.same("same answer sets", &base, &after)
}

fn claim4(c: &mut Ctx) -> Result<(), RewriteError> {
    let n = c.n();
    let group = rules(&[PlanRule::Exclusion, PlanRule::NonOccurrence, PlanRule::ChoiceOccurrence], n);
    let (out, _) = choice_to_defining(&group, "o", "non_o")?;
    let expected = rules(&[PlanRule::Exclusion, PlanRule::NonOccurrence, PlanRule::DefiningOccurrence], n);
    c.record("pass yields the defining rule", sorted(&out) == sorted(&expected), Some(format!("pass produced {out}")));
    c.strong("strongly equivalent in any program", &group, &out)?;
    let base = c.with_instance(&build_plan_choice(&c.params));
    let after = replace(&base, &PlanRule::ChoiceOccurrence.rule(n), &[PlanRule::DefiningOccurrence.rule(n)]);
    c.same("same answer sets", &base, &after)
}

fn claim5(c: &mut Ctx) -> Result<(), RewriteError> {
    let n = c.n();
    let base = c.with_instance(&build_plan_choice(&c.params));
    let disj = PlanRule::DisjunctiveOccurrence.rule(n);
    let after = replace(&base, &PlanRule::ChoiceOccurrence.rule(n), &[disj.clone()]);
    c.same("same answer sets", &base, &after)?;
    let partition = vec![vec!["o".to_string()], vec!["non_o".to_string()]];
    let (shifted, _) = shift_rule(&after, index_of(&after, &disj), &partition)?;
    c.record("shifting is legal", true, None);
    c.same("shifted program has the same answer sets", &after, &shifted)?;
    let mut chain = base.clone();
    chain = add_subsumed(&chain, PlanRule::GuardedNonOccurrence.rule(n))?.0;
    chain = replace(&chain, &PlanRule::ChoiceOccurrence.rule(n), &[PlanRule::DefiningOccurrence.rule(n)]);
    c.record("shift equals the defining and guarded rules", sorted(&chain) == sorted(&shifted), None);
    Ok(())
}

fn claim6(c: &mut Ctx) -> Result<(), RewriteError> {
    let n = c.n();
    let base = c.with_instance(&build_plan_choice(&c.params));
    let without = replace(&base, &PlanRule::AtMostOne.rule(n), &[]);
    let v = denials_interchangeable(
        &without,
        &PlanRule::PairwiseStepDenial.rule(n),
        &PlanRule::PairwiseActionDenial.rule(n),
        &c.ground,
        &c.opts,
    )?;
    c.record("denials agree on every answer set", v.holds, v.detail);
    let after = replace(&base, &PlanRule::AtMostOne.rule(n), &[PlanRule::PairwiseActionDenial.rule(n)]);
    c.same("same answer sets", &base, &after)
}

fn sth_definition() -> (Atom, Vec<BodyElem>) {
    let q = parse_atom("sthHpd(I)").expect("atom");
    let def = parse_body("1 <= #count{A : o(A,I)}").expect("body");
    (q, def)
}

fn claim7(c: &mut Ctx) -> Result<(), RewriteError> {
    let n = c.n();
    let base = c.with_instance(&build_plan_choice(&c.params));
    let (q, def) = sth_definition();
    let (defined, _) = introduce_definition(&base, &q, &def)?;
    let last = defined.rules.len() - 1;
    let (after, _) = unwrap_singleton_count(&defined, last)?;
    let expected = replace(
        &base,
        &PlanRule::AtLeastOne.rule(n),
        &[PlanRule::SthHpdDenial.rule(n), PlanRule::SthHpdDefinition.rule(n)],
    );
    c.record("pipeline yields the sthHpd rules", sorted(&after) == sorted(&expected), Some(format!("pipeline produced {after}")));
    let v = verify_rewrite(&base, &after, &VerifyMode::Conservative(vec!["sthHpd".into()]), &c.ground, &c.opts)?;
    c.record("answer sets correspond after dropping sthHpd", v.holds, v.detail);
    Ok(())
}

fn final_correspondence(c: &mut Ctx) -> Result<(), RewriteError> {
    let n = c.n();
    let choice = c.with_instance(&build_plan_choice(&c.params));
    let disj = c.with_instance(&crate::corpus::build_plan_disj(&c.params));
    let mut composed = replace(&choice, &PlanRule::ChoiceOccurrence.rule(n), &[PlanRule::DisjunctiveOccurrence.rule(n)]);
    composed = replace(&composed, &PlanRule::AtMostOne.rule(n), &[PlanRule::PairwiseActionDenial.rule(n)]);
    composed = replace(
        &composed,
        &PlanRule::AtLeastOne.rule(n),
        &[PlanRule::SthHpdDefinition.rule(n), PlanRule::SthHpdDenial.rule(n)],
    );
    c.record("composed replacements give the disjunctive module", sorted(&composed) == sorted(&disj), None);
    let v = verify_rewrite(&choice, &disj, &VerifyMode::Conservative(vec!["sthHpd".into()]), &c.ground, &c.opts)?;
    c.record("one-to-one correspondence dropping sthHpd", v.holds, v.detail);
    Ok(())
}

type ClaimFn = fn(&mut Ctx) -> Result<(), RewriteError>;

const CLAIMS: [ClaimFn; 7] = [claim1, claim2, claim3, claim4, claim5, claim6, claim7];

/// The withdrawn claim: its replacement is not sound.
pub const WITHDRAWN_CLAIM: usize = 3;

fn run_one(number: usize, title: &str, f: ClaimFn, params: &InstanceParams, opts: &SolveOptions) -> ClaimResult {
    let t = Instant::now();
    let inst = build_plan_instance(params);
    let mut ground = GroundOptions::default();
    ground.extra_constants = inst.signature().object_constants().into_iter().collect();
    let schematic = GroundOptions { extra_constants: vec!["c1".into()], ..GroundOptions::default() };
    let mut c = Ctx { params: params.clone(), inst, ground, schematic, opts: opts.clone(), checks: Vec::new(), detail: None };
    let outcome = f(&mut c);
    if let Err(e) = outcome {
        c.record("pipeline", false, Some(e.to_string()));
    }
    let all = c.checks.iter().all(|(_, ok)| *ok);
    let status = if number == WITHDRAWN_CLAIM {
        ClaimStatus::Withdrawn { counterexample: !all && c.checks.iter().all(|(w, _)| w != "pipeline") }
    } else if all {
        ClaimStatus::Holds
    } else {
        ClaimStatus::Fails
    };
    ClaimResult {
        claim: number,
        title: title.to_string(),
        instance: params.clone(),
        status,
        checks: c.checks,
        detail: c.detail,
        millis: t.elapsed().as_millis(),
    }
}

/// Runs every claim on every instance, followed by the final
/// correspondence between the two modules (numbered 0).
pub fn verify_claims(instances: &[InstanceParams], opts: &SolveOptions) -> Vec<ClaimResult> {
    let mut out = Vec::new();
    for params in instances {
        for (k, f) in CLAIMS.iter().enumerate() {
            out.push(run_one(k + 1, CLAIM_TITLES[k], *f, params, opts));
        }
        out.push(run_one(0, "plan-choice and plan-disj correspond", final_correspondence, params, opts));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_instance() {
        let results = verify_claims(&[InstanceParams::new(1, 1)], &SolveOptions { cap: 20, workers: 1 });
        for r in &results {
            assert!(r.passed(), "claim {} failed: {:?} {:?}", r.claim, r.checks, r.detail);
        }
        assert!(matches!(results[2].status, ClaimStatus::Withdrawn { counterexample: true }));
    }

    #[test]
    fn two_actions() {
        let results = verify_claims(&[InstanceParams::new(2, 1)], &SolveOptions { cap: 20, workers: 1 });
        for r in &results {
            assert!(r.passed(), "claim {} failed: {:?} {:?}", r.claim, r.checks, r.detail);
        }
    }
}
