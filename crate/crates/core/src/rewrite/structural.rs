//! Shifting, projection and explicit definitions.

use std::collections::BTreeSet;

use crate::ast::{is_submultiset, Atom, BodyElem, Head, Literal, Polarity, Program, Rule, Term};
use crate::depgraph::program_graph;

use super::{rule_at, RewriteError, RewriteReport};

fn replace_rule(program: &Program, idx: usize, new: Vec<Rule>) -> Program {
    let mut rules = program.rules[..idx].to_vec();
    rules.extend(new);
    rules.extend(program.rules[idx + 1..].iter().cloned());
    Program::new(rules)
}

/// The rules replacing a disjunctive rule: one per partition member, keeping
/// the disjuncts whose predicate is in the member and moving the rest into
/// the body under `not`.
pub fn shifted_rules(rule: &Rule, partition: &[Vec<String>]) -> Result<Vec<Rule>, RewriteError> {
    let Head::Disjunction(head) = &rule.head else {
        return Err(RewriteError::NotApplicable(format!("`{rule}` is not disjunctive")));
    };
    if head.len() < 2 {
        return Err(RewriteError::NotApplicable(format!("`{rule}` has fewer than two disjuncts")));
    }
    let head_preds: BTreeSet<&str> = head.iter().filter_map(Atom::predicate).collect();
    if head_preds.len() != head.len() && head.iter().any(|a| a.predicate().is_none()) {
        return Err(RewriteError::NotApplicable("head contains a non-predicate atom".into()));
    }
    let mut seen = BTreeSet::new();
    for member in partition {
        if member.is_empty() {
            return Err(RewriteError::InvalidPartition("empty member".into()));
        }
        for p in member {
            if !head_preds.contains(p.as_str()) {
                return Err(RewriteError::InvalidPartition(format!("`{p}` is not a head predicate")));
            }
            if !seen.insert(p.as_str()) {
                return Err(RewriteError::InvalidPartition(format!("`{p}` occurs in two members")));
            }
        }
    }
    if let Some(p) = head_preds.iter().find(|p| !seen.contains(*p)) {
        return Err(RewriteError::InvalidPartition(format!("`{p}` is not covered")));
    }
    Ok(partition
        .iter()
        .map(|member| {
            let inside = |a: &Atom| a.predicate().map_or(false, |p| member.iter().any(|m| m == p));
            let kept: Vec<Atom> = head.iter().filter(|a| inside(a)).cloned().collect();
            let mut body = rule.body.clone();
            body.extend(head.iter().filter(|a| !inside(a)).cloned().map(BodyElem::neg));
            Rule::new(Head::Disjunction(kept), body)
        })
        .collect())
}

/// Replaces rule `idx` by its shifted rules after checking that no strongly
/// connected component of the dependency graph meets two partition members.
pub fn shift_rule(program: &Program, idx: usize, partition: &[Vec<String>]) -> Result<(Program, RewriteReport), RewriteError> {
    let rule = rule_at(program, idx)?;
    if !matches!(&rule.head, Head::Disjunction(h) if h.len() > 1) {
        return Err(RewriteError::NotApplicable(format!("`{rule}` is not disjunctive")));
    }
    for scc in program_graph(program).sccs() {
        let hit = partition.iter().filter(|m| m.iter().any(|p| scc.contains(p))).count();
        if hit > 1 {
            return Err(RewriteError::IllegalPartition { scc });
        }
    }
    let new = shifted_rules(rule, partition)?;
    let report = RewriteReport::replaced("shift", &[rule], &new.iter().collect::<Vec<_>>());
    Ok((replace_rule(program, idx, new), report))
}

/// Parameters of a projection: variables `x` are projected out of the
/// literals `alpha`; `alpha_prime` are kept in the main rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    pub x: Vec<String>,
    pub alpha: Vec<BodyElem>,
    pub alpha_prime: Vec<BodyElem>,
    pub u: String,
}

fn elem_vars(e: &BodyElem) -> Vec<String> {
    let mut vs = Vec::new();
    e.collect_vars(&mut vs);
    vs
}

/// Replaces rule `idx` by `H :- u(y), Body \ alpha, alpha'` and
/// `u(y) :- alpha`.
pub fn project_rule(program: &Program, idx: usize, proj: &Projection) -> Result<(Program, RewriteReport), RewriteError> {
    let rule = rule_at(program, idx)?;
    if proj.x.is_empty() {
        return Err(RewriteError::Precondition("no variables to project".into()));
    }
    if program.signature().mentions(&proj.u) {
        return Err(RewriteError::FreshnessViolation(proj.u.clone()));
    }
    let mut head_vars = Vec::new();
    rule.head.atoms().iter().for_each(|a| a.collect_vars(&mut head_vars));
    for v in &proj.x {
        if head_vars.contains(v) {
            return Err(RewriteError::Precondition(format!("{v} occurs in the head")));
        }
        let mut found = false;
        for e in &rule.body {
            let here = elem_vars(e).contains(v);
            match e {
                BodyElem::Agg { agg, .. } if here || agg.vars.contains(v) => {
                    return Err(RewriteError::Precondition(format!("{v} occurs in an aggregate")))
                }
                _ => found |= here,
            }
        }
        if !found {
            return Err(RewriteError::Precondition(format!("{v} does not occur in the body")));
        }
    }
    if proj.alpha.iter().any(|e| e.as_literal().is_none()) {
        return Err(RewriteError::Precondition("alpha must consist of literals".into()));
    }
    if !is_submultiset(&proj.alpha, &rule.body) {
        return Err(RewriteError::Precondition("alpha is not part of the body".into()));
    }
    let mentions_x = |e: &BodyElem| elem_vars(e).iter().any(|v| proj.x.contains(v));
    if rule.body.iter().any(|e| mentions_x(e) && !proj.alpha.contains(e)) {
        return Err(RewriteError::Precondition("alpha misses a literal containing a projected variable".into()));
    }
    if !is_submultiset(&proj.alpha_prime, &proj.alpha) || proj.alpha_prime.iter().any(|e| mentions_x(e)) {
        return Err(RewriteError::Precondition("alpha' must be a part of alpha free of projected variables".into()));
    }
    let mut y: Vec<String> = Vec::new();
    for e in &proj.alpha {
        for v in elem_vars(e) {
            if !proj.x.contains(&v) && !y.contains(&v) {
                y.push(v);
            }
        }
    }
    let u_atom = Atom::pred(proj.u.clone(), y.into_iter().map(Term::Var).collect());
    let mut rest = rule.body.clone();
    for e in &proj.alpha {
        let pos = rest.iter().position(|b| b == e).expect("checked sub-multiset");
        rest.remove(pos);
    }
    let mut body = vec![BodyElem::pos(u_atom.clone())];
    body.extend(rest);
    body.extend(proj.alpha_prime.iter().cloned());
    let main = Rule::new(rule.head.clone(), body);
    let def = Rule::new(Head::Disjunction(vec![u_atom]), proj.alpha.clone());
    let mut report = RewriteReport::replaced("project", &[rule], &[&main, &def]);
    report.fresh.push(proj.u.clone());
    Ok((replace_rule(program, idx, vec![main, def]), report))
}

/// Replaces body occurrences of `def` by the fresh atom `q` and appends
/// `q :- def`.
pub fn introduce_definition(program: &Program, q: &Atom, def: &[BodyElem]) -> Result<(Program, RewriteReport), RewriteError> {
    let Some(name) = q.predicate() else {
        return Err(RewriteError::Precondition(format!("`{q}` is not a predicate atom")));
    };
    if program.signature().mentions(name) {
        return Err(RewriteError::FreshnessViolation(name.to_string()));
    }
    if def.is_empty() {
        return Err(RewriteError::Precondition("empty definition".into()));
    }
    let mut qvars = Vec::new();
    for t in q.args() {
        match t {
            Term::Var(v) if !qvars.contains(v) => qvars.push(v.clone()),
            _ => return Err(RewriteError::Precondition(format!("arguments of `{q}` must be distinct variables"))),
        }
    }
    for e in def {
        let mut vs = Vec::new();
        match e {
            BodyElem::Agg { agg, .. } => agg.global_vars(&mut vs),
            _ => e.collect_vars(&mut vs),
        }
        if let Some(v) = vs.iter().find(|v| !qvars.contains(v)) {
            return Err(RewriteError::Precondition(format!("{v} occurs in the definition but not in `{q}`")));
        }
    }
    // A single-element definition also covers its negated occurrences.
    let single = match def {
        [d] => Some(d),
        _ => None,
    };
    let mut report = RewriteReport::new("introduce-definition");
    report.fresh.push(name.to_string());
    let mut rules = Vec::new();
    for r in &program.rules {
        let mut body = r.body.clone();
        if is_submultiset(def, &body) {
            let first = body.iter().position(|b| def.contains(b)).unwrap();
            let mut out = Vec::new();
            let mut pending = def.to_vec();
            for (k, b) in body.into_iter().enumerate() {
                if let Some(i) = pending.iter().position(|d| *d == b) {
                    pending.remove(i);
                    if k == first {
                        out.push(BodyElem::pos(q.clone()));
                    }
                } else {
                    out.push(b);
                }
            }
            body = out;
        }
        for b in body.iter_mut() {
            match (b, single) {
                (BodyElem::Lit(l), Some(BodyElem::Lit(Literal { polarity: Polarity::Pos, atom })))
                    if l.polarity != Polarity::Pos && l.atom == *atom =>
                {
                    l.atom = q.clone()
                }
                (b @ BodyElem::Agg { negated: true, .. }, Some(BodyElem::Agg { negated: false, agg: d })) => {
                    if matches!(b, BodyElem::Agg { agg, .. } if agg == d) {
                        *b = BodyElem::neg(q.clone());
                    }
                }
                _ => {}
            }
        }
        let new = Rule::new(r.head.clone(), body);
        if new != *r {
            report.removed.push(r.to_string());
            report.added.push(new.to_string());
        }
        rules.push(new);
    }
    let def_rule = Rule::new(Head::Disjunction(vec![q.clone()]), def.to_vec());
    report.added.push(def_rule.to_string());
    rules.push(def_rule);
    Ok((Program::new(rules), report))
}
