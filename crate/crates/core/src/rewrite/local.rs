//! Rewrites that touch a single rule or a fixed group of rules.

use std::collections::{BTreeMap, BTreeSet};

use crate::ast::{is_submultiset, subsumes, Aggregate, Atom, BodyElem, Head, Literal, Polarity, Program, Rule, Term};
use crate::fol::fresh_block;

use super::{rule_at, RewriteError, RewriteReport};

/// Drops every rule subsumed by another remaining rule; among identical
/// rules the first is kept.
pub fn subsumption_simplify(program: &Program) -> (Program, RewriteReport) {
    let rules = &program.rules;
    let mut removed = vec![false; rules.len()];
    for i in 0..rules.len() {
        for j in 0..rules.len() {
            if i != j && !removed[j] && subsumes(&rules[j], &rules[i]) && (!subsumes(&rules[i], &rules[j]) || j < i) {
                removed[i] = true;
                break;
            }
        }
    }
    let mut report = RewriteReport::new("subsumption");
    let mut kept = Vec::new();
    for (r, gone) in rules.iter().zip(&removed) {
        if *gone {
            report.removed.push(r.to_string());
        } else {
            kept.push(r.clone());
        }
    }
    (Program::new(kept), report)
}

/// Appends `rule` provided some rule of the program subsumes it.
pub fn add_subsumed(program: &Program, rule: Rule) -> Result<(Program, RewriteReport), RewriteError> {
    if !program.rules.iter().any(|r| subsumes(r, &rule)) {
        return Err(RewriteError::NotApplicable(format!("no rule subsumes `{rule}`")));
    }
    let mut out = program.clone();
    let mut report = RewriteReport::new("add-subsumed");
    report.added.push(rule.to_string());
    out.rules.push(rule);
    Ok((out, report))
}

fn replace_rule(program: &Program, idx: usize, new: Vec<Rule>) -> Program {
    let mut rules = program.rules[..idx].to_vec();
    rules.extend(new);
    rules.extend(program.rules[idx + 1..].iter().cloned());
    Program::new(rules)
}

/// Global variables of the head and of all body elements except `skip`.
fn vars_outside(rule: &Rule, skip: usize) -> BTreeSet<String> {
    let mut out = Vec::new();
    for a in rule.head.atoms() {
        a.collect_vars(&mut out);
    }
    for (k, e) in rule.body.iter().enumerate() {
        if k != skip {
            e.collect_vars(&mut out);
        }
    }
    out.into_iter().collect()
}

fn find_positive_aggregate(rule: &Rule, bound: Option<usize>) -> Option<(usize, &Aggregate)> {
    rule.body.iter().enumerate().find_map(|(k, e)| match e {
        BodyElem::Agg { negated: false, agg } if bound.map_or(true, |b| agg.bound == b) => Some((k, agg)),
        _ => None,
    })
}

/// Replaces the first nonnegated aggregate of rule `idx` by `b` renamed
/// copies of its conditions and pairwise inequalities.
pub fn eliminate_aggregate(program: &Program, idx: usize) -> Result<(Program, RewriteReport), RewriteError> {
    let rule = rule_at(program, idx)?;
    let (k, agg) = find_positive_aggregate(rule, None)
        .ok_or_else(|| RewriteError::NotApplicable(format!("`{rule}` has no nonnegated aggregate")))?;
    let outside = vars_outside(rule, k);
    if let Some(v) = agg.vars.iter().find(|v| outside.contains(*v)) {
        return Err(RewriteError::NotApplicable(format!("aggregate variable {v} also occurs outside the aggregate")));
    }
    if agg.bound >= 2 && agg.vars.len() > 1 {
        return Err(RewriteError::NotApplicable("distinctness of variable tuples has no body-literal form".into()));
    }
    let b = agg.bound;
    let copies: Vec<Vec<String>> = if b <= 1 {
        vec![agg.vars.clone(); b]
    } else {
        let mut used = rule.all_var_names();
        let mut per_var = Vec::new();
        for v in &agg.vars {
            let names = fresh_block(v, b, &used);
            used.extend(names.iter().cloned());
            per_var.push(names);
        }
        (0..b).map(|i| per_var.iter().map(|names| names[i].clone()).collect()).collect()
    };
    let mut elems = Vec::new();
    for copy in &copies {
        let env: BTreeMap<String, Term> =
            agg.vars.iter().cloned().zip(copy.iter().map(|n| Term::Var(n.clone()))).collect();
        elems.extend(agg.conditions.iter().map(|c| BodyElem::Lit(c.substitute(&env))));
    }
    for i in 0..b {
        for j in i + 1..b {
            let eq = Atom::Eq(Term::Var(copies[i][0].clone()), Term::Var(copies[j][0].clone()));
            elems.push(BodyElem::Lit(Literal::neg(eq)));
        }
    }
    let mut body = rule.body[..k].to_vec();
    body.extend(elems);
    body.extend(rule.body[k + 1..].iter().cloned());
    let new = Rule::new(rule.head.clone(), body);
    let report = RewriteReport::replaced("eliminate-aggregate", &[rule], &[&new]);
    Ok((replace_rule(program, idx, vec![new]), report))
}

/// `1 <= #count{x : L}` in a body becomes `L` with `x` as ordinary variables.
pub fn unwrap_singleton_count(program: &Program, idx: usize) -> Result<(Program, RewriteReport), RewriteError> {
    let rule = rule_at(program, idx)?;
    let (k, agg) = find_positive_aggregate(rule, Some(1))
        .ok_or_else(|| RewriteError::NotApplicable(format!("`{rule}` has no nonnegated count with bound 1")))?;
    let outside = vars_outside(rule, k);
    if let Some(v) = agg.vars.iter().find(|v| outside.contains(*v)) {
        return Err(RewriteError::NotApplicable(format!("aggregate variable {v} also occurs outside the aggregate")));
    }
    let mut body = rule.body[..k].to_vec();
    body.extend(agg.conditions.iter().cloned().map(BodyElem::Lit));
    body.extend(rule.body[k + 1..].iter().cloned());
    let new = Rule::new(rule.head.clone(), body);
    let report = RewriteReport::replaced("unwrap-count", &[rule], &[&new]);
    Ok((replace_rule(program, idx, vec![new]), report))
}

/// Collects the body literals mentioning `vars` into `1 <= #count{vars : ...}`.
pub fn wrap_singleton_count(program: &Program, idx: usize, vars: &[String]) -> Result<(Program, RewriteReport), RewriteError> {
    let rule = rule_at(program, idx)?;
    if vars.is_empty() {
        return Err(RewriteError::Precondition("no variables to wrap".into()));
    }
    let mut head_vars = Vec::new();
    rule.head.atoms().iter().for_each(|a| a.collect_vars(&mut head_vars));
    if let Some(v) = vars.iter().find(|v| head_vars.contains(v)) {
        return Err(RewriteError::NotApplicable(format!("variable {v} occurs in the head")));
    }
    let mentions = |e: &BodyElem| {
        let mut vs = Vec::new();
        e.collect_vars(&mut vs);
        vs.iter().any(|v| vars.contains(v))
    };
    let mut conditions = Vec::new();
    let mut first = None;
    let mut rest = Vec::new();
    for (k, e) in rule.body.iter().enumerate() {
        if mentions(e) {
            match e {
                BodyElem::Lit(l) => conditions.push(l.clone()),
                BodyElem::Agg { .. } => {
                    return Err(RewriteError::NotApplicable(format!("aggregate `{e}` mentions a wrapped variable")))
                }
            }
            first.get_or_insert(k);
        } else {
            rest.push((k, e.clone()));
        }
    }
    let first = first.ok_or_else(|| RewriteError::NotApplicable("no body literal mentions the variables".into()))?;
    let agg = BodyElem::Agg { negated: false, agg: Aggregate { bound: 1, vars: vars.to_vec(), conditions } };
    let mut body: Vec<BodyElem> = rest.iter().filter(|(k, _)| *k < first).map(|(_, e)| e.clone()).collect();
    body.push(agg);
    body.extend(rest.iter().filter(|(k, _)| *k > first).map(|(_, e)| e.clone()));
    let new = Rule::new(rule.head.clone(), body);
    let report = RewriteReport::replaced("wrap-count", &[rule], &[&new]);
    Ok((replace_rule(program, idx, vec![new]), report))
}

fn distinct_vars(args: &[Term]) -> Option<Vec<String>> {
    let names: Vec<String> = args.iter().filter_map(|t| if let Term::Var(v) = t { Some(v.clone()) } else { None }).collect();
    (names.len() == args.len() && names.iter().collect::<BTreeSet<_>>().len() == names.len()).then_some(names)
}

/// Renaming that maps `from` onto `to`, when both are tuples of distinct
/// variables or syntactically equal.
fn align(from: &[Term], to: &[Term]) -> Option<BTreeMap<String, Term>> {
    if from.len() != to.len() {
        return None;
    }
    if from == to {
        return Some(BTreeMap::new());
    }
    let (f, _) = (distinct_vars(from)?, distinct_vars(to)?);
    Some(f.into_iter().zip(to.iter().cloned()).collect())
}

fn pred_atom(name: &str, args: &[Term]) -> Atom {
    Atom::pred(name, args.to_vec())
}

/// The denial `:- p(y), q(y)` for some tuple matching `args`.
fn has_exclusion(program: &Program, p: &str, q: &str, args: &[Term]) -> bool {
    program.rules.iter().any(|r| {
        if !r.head.atoms().is_empty() || r.body.len() != 2 {
            return false;
        }
        let lits: Vec<&Literal> = r.body.iter().filter_map(BodyElem::as_literal).collect();
        if lits.len() != 2 || lits.iter().any(|l| l.polarity != Polarity::Pos) {
            return false;
        }
        let (a, b) = (&lits[0].atom, &lits[1].atom);
        let pair = |x: &Atom, y: &Atom| {
            x.predicate() == Some(p) && y.predicate() == Some(q) && x.args() == y.args() && align(x.args(), args).is_some()
        };
        pair(a, b) || pair(b, a)
    })
}

/// Body `F1` of a rule `q(x) :- not p(x), F1`, renamed onto `args`.
fn complement_bodies(program: &Program, p: &str, q: &str, args: &[Term]) -> Vec<Vec<BodyElem>> {
    let mut out = Vec::new();
    for r in &program.rules {
        let Head::Disjunction(h) = &r.head else { continue };
        if h.len() != 1 || h[0].predicate() != Some(q) {
            continue;
        }
        let Some(env) = align(h[0].args(), args) else { continue };
        let r = r.substitute(&env);
        let neg_p = BodyElem::neg(pred_atom(p, args));
        if let Some(pos) = r.body.iter().position(|e| *e == neg_p) {
            let mut f1 = r.body.clone();
            f1.remove(pos);
            out.push(f1);
        }
    }
    out
}

/// Replaces `{p(x)} :- F1, F2` by `p(x) :- not q(x), F1, F2` in the presence
/// of `:- p(x), q(x)` and `q(x) :- not p(x), F1`.
pub fn choice_to_defining(program: &Program, p: &str, q: &str) -> Result<(Program, RewriteReport), RewriteError> {
    for (idx, r) in program.rules.iter().enumerate() {
        let Head::Choice(a) = &r.head else { continue };
        if a.predicate() != Some(p) {
            continue;
        }
        let args = a.args();
        if !has_exclusion(program, p, q, args) {
            continue;
        }
        if complement_bodies(program, p, q, args).iter().any(|f1| is_submultiset(f1, &r.body)) {
            let mut body = vec![BodyElem::neg(pred_atom(q, args))];
            body.extend(r.body.iter().cloned());
            let new = Rule::new(Head::Disjunction(vec![a.clone()]), body);
            let report = RewriteReport::replaced("choice-to-defining", &[r], &[&new]);
            return Ok((replace_rule(program, idx, vec![new]), report));
        }
    }
    Err(RewriteError::NotApplicable(format!("no choice rule for `{p}` with matching `{q}` rules")))
}

/// Inverse of [`choice_to_defining`].
pub fn defining_to_choice(program: &Program, p: &str, q: &str) -> Result<(Program, RewriteReport), RewriteError> {
    for (idx, r) in program.rules.iter().enumerate() {
        let Head::Disjunction(h) = &r.head else { continue };
        if h.len() != 1 || h[0].predicate() != Some(p) {
            continue;
        }
        let args = h[0].args();
        let neg_q = BodyElem::neg(pred_atom(q, args));
        let Some(pos) = r.body.iter().position(|e| *e == neg_q) else { continue };
        let mut rest = r.body.clone();
        rest.remove(pos);
        if !has_exclusion(program, p, q, args) {
            continue;
        }
        if complement_bodies(program, p, q, args).iter().any(|f1| is_submultiset(f1, &rest)) {
            let new = Rule::new(Head::Choice(h[0].clone()), rest);
            let report = RewriteReport::replaced("defining-to-choice", &[r], &[&new]);
            return Ok((replace_rule(program, idx, vec![new]), report));
        }
    }
    Err(RewriteError::NotApplicable(format!("no defining rule for `{p}` with matching `{q}` rules")))
}
