//! First-order formulas and the translation of programs into them.
//!
//! Negation is `F -> bot`, truth is `bot -> bot` and `F <-> G` is the pair
//! of implications.

mod syntax;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::ast::{Aggregate, Atom, BodyElem, Head, Literal, Polarity, Program, Rule, Term};

pub use syntax::{parse_formula, parse_propositional, FormulaParseError};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Formula {
    Bottom,
    Atom(Atom),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(Vec<String>, Box<Formula>),
    Exists(Vec<String>, Box<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FolError {
    #[error("predicate `{0}` has a disjunctive defining rule")]
    Disjunctive(String),
    #[error("conjunct is not of the form forall x (G -> p(x)): {0}")]
    NotClarkForm(String),
}

impl Formula {
    pub fn top() -> Formula {
        Formula::Implies(Box::new(Formula::Bottom), Box::new(Formula::Bottom))
    }

    pub fn neg(f: Formula) -> Formula {
        Formula::Implies(Box::new(f), Box::new(Formula::Bottom))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::And(vec![Formula::implies(a.clone(), b.clone()), Formula::implies(b, a)])
    }

    pub fn atom(a: Atom) -> Formula {
        match a {
            Atom::Top => Formula::top(),
            a => Formula::Atom(a),
        }
    }

    /// Conjunction, collapsing the empty and singleton cases.
    pub fn conj(mut fs: Vec<Formula>) -> Formula {
        match fs.len() {
            0 => Formula::top(),
            1 => fs.pop().unwrap(),
            _ => Formula::And(fs),
        }
    }

    /// Disjunction, collapsing the empty and singleton cases.
    pub fn disj(mut fs: Vec<Formula>) -> Formula {
        match fs.len() {
            0 => Formula::Bottom,
            1 => fs.pop().unwrap(),
            _ => Formula::Or(fs),
        }
    }

    pub fn forall(vars: Vec<String>, f: Formula) -> Formula {
        if vars.is_empty() {
            f
        } else {
            Formula::Forall(vars, Box::new(f))
        }
    }

    pub fn exists(vars: Vec<String>, f: Formula) -> Formula {
        if vars.is_empty() {
            f
        } else {
            Formula::Exists(vars, Box::new(f))
        }
    }

    pub fn is_top(&self) -> bool {
        match self {
            Formula::Implies(a, _) => **a == Formula::Bottom,
            Formula::And(fs) => fs.is_empty(),
            _ => false,
        }
    }

    pub fn is_bottom(&self) -> bool {
        match self {
            Formula::Bottom => true,
            Formula::Or(fs) => fs.is_empty(),
            _ => false,
        }
    }

    /// The negated formula when this is `F -> bot`.
    pub fn as_negation(&self) -> Option<&Formula> {
        match self {
            Formula::Implies(a, b) if **b == Formula::Bottom && **a != Formula::Bottom => Some(a),
            _ => None,
        }
    }

    /// Top-level conjuncts; a non-conjunction is its own single conjunct.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        match self {
            Formula::And(fs) => fs.iter().collect(),
            f => vec![f],
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        fn go(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            match f {
                Formula::Bottom => {}
                Formula::Atom(a) => {
                    let mut vs = Vec::new();
                    a.collect_vars(&mut vs);
                    out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
                }
                Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|g| go(g, bound, out)),
                Formula::Implies(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Formula::Forall(vs, g) | Formula::Exists(vs, g) => {
                    let n = bound.len();
                    bound.extend(vs.iter().cloned());
                    go(g, bound, out);
                    bound.truncate(n);
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Every variable name, bound or free.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom(a) => {
                let mut vs = Vec::new();
                a.collect_vars(&mut vs);
                out.extend(vs);
            }
            Formula::Forall(vs, _) | Formula::Exists(vs, _) => out.extend(vs.iter().cloned()),
            _ => {}
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|g| g.visit(f)),
            Formula::Implies(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Formula::Forall(_, g) | Formula::Exists(_, g) => g.visit(f),
            _ => {}
        }
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom(a) = f {
                out.insert(a.clone());
            }
        });
        out
    }

    pub fn predicates(&self) -> BTreeSet<String> {
        self.atoms().iter().filter_map(|a| a.predicate().map(str::to_string)).collect()
    }

    /// Capture-avoiding only in the sense that bound variables shadow `env`;
    /// callers supply terms whose variables are not bound inside `self`.
    pub fn substitute(&self, env: &BTreeMap<String, Term>) -> Formula {
        match self {
            Formula::Bottom => Formula::Bottom,
            Formula::Atom(a) => Formula::Atom(a.substitute(env)),
            Formula::And(fs) => Formula::And(fs.iter().map(|g| g.substitute(env)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|g| g.substitute(env)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.substitute(env), b.substitute(env)),
            Formula::Forall(vs, g) | Formula::Exists(vs, g) => {
                let mut inner = env.clone();
                vs.iter().for_each(|v| {
                    inner.remove(v);
                });
                let body = Box::new(g.substitute(&inner));
                match self {
                    Formula::Forall(..) => Formula::Forall(vs.clone(), body),
                    _ => Formula::Exists(vs.clone(), body),
                }
            }
        }
    }

    /// Constant propagation for `top` and `bot`; preserves strong equivalence.
    pub fn simplify(&self) -> Formula {
        match self {
            Formula::Bottom | Formula::Atom(_) => self.clone(),
            Formula::And(fs) => {
                let mut out = Vec::new();
                for g in fs {
                    let g = g.simplify();
                    if g.is_bottom() {
                        return Formula::Bottom;
                    }
                    if !g.is_top() {
                        out.push(g);
                    }
                }
                Formula::conj(out)
            }
            Formula::Or(fs) => {
                let mut out = Vec::new();
                for g in fs {
                    let g = g.simplify();
                    if g.is_top() {
                        return Formula::top();
                    }
                    if !g.is_bottom() {
                        out.push(g);
                    }
                }
                Formula::disj(out)
            }
            Formula::Implies(a, b) => {
                let a = a.simplify();
                let b = b.simplify();
                if a.is_bottom() || b.is_top() {
                    Formula::top()
                } else if a.is_top() {
                    b
                } else {
                    Formula::implies(a, if b.is_bottom() { Formula::Bottom } else { b })
                }
            }
            Formula::Forall(vs, g) => Formula::forall(vs.clone(), g.simplify()),
            Formula::Exists(vs, g) => Formula::exists(vs.clone(), g.simplify()),
        }
    }
}

/// Picks `base__{k+1} .. base__{k+n}` with the smallest `k` avoiding `used`.
pub(crate) fn fresh_block(base: &str, n: usize, used: &BTreeSet<String>) -> Vec<String> {
    let mut k = 0;
    loop {
        let names: Vec<String> = (1..=n).map(|i| format!("{base}__{}", k + i)).collect();
        if names.iter().all(|v| !used.contains(v)) {
            return names;
        }
        k += 1;
    }
}

fn literal_formula(l: &Literal) -> Formula {
    let a = Formula::atom(l.atom.clone());
    match l.polarity {
        Polarity::Pos => a,
        Polarity::Neg => Formula::neg(a),
        Polarity::NegNeg => Formula::neg(Formula::neg(a)),
    }
}

/// `b <= #count{x : L}` as `exists x1..xb (L(x1) & .. & L(xb) & pairwise distinct)`.
///
/// With bound 1 the aggregate variables keep their names; with larger bounds
/// the copies get `__i` suffixes that avoid `used`.
pub fn fol_of_aggregate(agg: &Aggregate, used: &BTreeSet<String>) -> Formula {
    let b = agg.bound;
    if b == 0 {
        return Formula::top();
    }
    if b == 1 {
        let body = Formula::conj(agg.conditions.iter().map(literal_formula).collect());
        return Formula::exists(agg.vars.clone(), body);
    }
    let mut used = used.clone();
    used.extend(agg.vars.iter().cloned());
    let mut copies: Vec<Vec<String>> = vec![Vec::new(); b];
    for v in &agg.vars {
        let names = fresh_block(v, b, &used);
        used.extend(names.iter().cloned());
        for (i, n) in names.into_iter().enumerate() {
            copies[i].push(n);
        }
    }
    let mut parts = Vec::new();
    for copy in &copies {
        let env: BTreeMap<String, Term> =
            agg.vars.iter().cloned().zip(copy.iter().map(|n| Term::Var(n.clone()))).collect();
        parts.extend(agg.conditions.iter().map(|c| literal_formula(&c.substitute(&env))));
    }
    for i in 0..b {
        for j in i + 1..b {
            let eqs: Vec<Formula> = copies[i]
                .iter()
                .zip(&copies[j])
                .map(|(x, y)| Formula::Atom(Atom::Eq(Term::Var(x.clone()), Term::Var(y.clone()))))
                .collect();
            parts.push(Formula::neg(Formula::conj(eqs)));
        }
    }
    Formula::exists(copies.concat(), Formula::conj(parts))
}

fn body_formulas(rule: &Rule) -> Vec<Formula> {
    let used = rule.all_var_names();
    rule.body
        .iter()
        .map(|e| match e {
            BodyElem::Lit(l) => literal_formula(l),
            BodyElem::Agg { negated, agg } => {
                let f = fol_of_aggregate(agg, &used);
                if *negated {
                    Formula::neg(f)
                } else {
                    f
                }
            }
        })
        .collect()
}

/// Open formula of a rule, before universal closure.
fn rule_matrix(rule: &Rule) -> Formula {
    let mut body = body_formulas(rule);
    let head = match &rule.head {
        Head::Disjunction(atoms) => Formula::disj(atoms.iter().cloned().map(Formula::atom).collect()),
        Head::Choice(a) => {
            let a = Formula::atom(a.clone());
            body.insert(0, Formula::neg(Formula::neg(a.clone())));
            a
        }
    };
    if body.is_empty() {
        head
    } else {
        Formula::implies(Formula::conj(body), head)
    }
}

/// Universal closure of `Body -> Head`.
pub fn fol_of_rule(rule: &Rule) -> Formula {
    Formula::forall(rule.vars(), rule_matrix(rule))
}

/// Conjunction of the rule formulas, one conjunct per rule.
pub fn fol_of_program(program: &Program) -> Formula {
    Formula::And(program.rules.iter().map(fol_of_rule).collect())
}

/// Clark normal form relative to `preds`: one conjunct `forall x (G -> p(x))`
/// per predicate, in the given order.
pub fn clark_normal_form(program: &Program, preds: &[String]) -> Result<Formula, FolError> {
    let sig = program.signature();
    let mut conjuncts = Vec::new();
    for p in preds {
        let rules: Vec<&Rule> =
            program.rules.iter().filter(|r| r.head_predicates().contains(&p.as_str())).collect();
        if rules.iter().any(|r| r.head.atoms().len() > 1) {
            return Err(FolError::Disjunctive(p.clone()));
        }
        let arity = sig.arity(p).unwrap_or(0);
        let head_args = |r: &Rule| r.head.atoms()[0].args().to_vec();
        let distinct_vars = |args: &[Term]| {
            let names: Vec<&String> = args.iter().filter_map(|t| if let Term::Var(v) = t { Some(v) } else { None }).collect();
            names.len() == args.len() && names.iter().collect::<BTreeSet<_>>().len() == names.len()
        };
        if rules.len() == 1 && distinct_vars(&head_args(rules[0])) {
            let r = rules[0];
            let xs: Vec<String> = head_args(r).iter().map(|t| t.to_string()).collect();
            let atom = r.head.atoms()[0].clone();
            let rest: Vec<String> = r.vars().into_iter().filter(|v| !xs.contains(v)).collect();
            let g = Formula::exists(rest, rule_body_conj(r));
            conjuncts.push(Formula::forall(xs, Formula::implies(g, Formula::Atom(atom))));
            continue;
        }
        let mut used = BTreeSet::new();
        for r in &rules {
            used.extend(r.all_var_names());
            used.extend(fol_of_rule(r).all_vars());
        }
        let xs = fresh_block("V", arity, &used);
        let xterms: Vec<Term> = xs.iter().map(|v| Term::Var(v.clone())).collect();
        let mut disjuncts = Vec::new();
        for r in &rules {
            let mut env: BTreeMap<String, Term> = BTreeMap::new();
            let mut eqs = Vec::new();
            for (k, t) in head_args(r).iter().enumerate() {
                match t {
                    Term::Var(v) if !env.contains_key(v) => {
                        env.insert(v.clone(), xterms[k].clone());
                    }
                    _ => eqs.push(Formula::Atom(Atom::Eq(xterms[k].clone(), t.substitute(&env)))),
                }
            }
            let rest: Vec<String> = r.vars().into_iter().filter(|v| !env.contains_key(v)).collect();
            let mut parts = match rule_body_conj(r) {
                f if f.is_top() && r.body.is_empty() && !matches!(r.head, Head::Choice(_)) => Vec::new(),
                Formula::And(fs) => fs,
                f => vec![f],
            };
            parts.extend(eqs);
            let body = Formula::conj(parts).substitute(&env);
            disjuncts.push(Formula::exists(rest, body));
        }
        let atom = Formula::Atom(Atom::pred(p.clone(), xterms));
        conjuncts.push(Formula::forall(xs, Formula::implies(Formula::disj(disjuncts), atom)));
    }
    Ok(Formula::And(conjuncts))
}

/// Antecedent of the rule formula; `top` for facts.
fn rule_body_conj(r: &Rule) -> Formula {
    match rule_matrix(r) {
        Formula::Implies(b, _) if !r.body.is_empty() || matches!(r.head, Head::Choice(_)) => *b,
        _ => Formula::top(),
    }
}

/// Replaces every `forall x (G -> p(x))` conjunct by `forall x (G <-> p(x))`.
pub fn completion(cnf: &Formula) -> Result<Formula, FolError> {
    let mut out = Vec::new();
    for c in cnf.conjuncts() {
        let (vars, inner) = match c {
            Formula::Forall(vs, g) => (vs.clone(), g.as_ref()),
            g => (Vec::new(), g),
        };
        match inner {
            Formula::Implies(g, a) if matches!(**a, Formula::Atom(Atom::Pred { .. })) => {
                out.push(Formula::forall(vars, Formula::iff((**g).clone(), (**a).clone())));
            }
            _ => return Err(FolError::NotClarkForm(c.to_string())),
        }
    }
    Ok(Formula::And(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_program;

    fn rule(src: &str) -> Rule {
        parse_program(src).unwrap().rules.remove(0)
    }

    fn f(src: &str) -> Formula {
        parse_formula(src).unwrap()
    }

    #[test]
    fn singleton_count_is_existential() {
        let r = rule("p(I) :- 1 <= #count{A : o(A,I)}.");
        assert_eq!(fol_of_rule(&r), f("forall I ((exists A (o(A,I))) -> p(I))"));
    }

    #[test]
    fn bound_two_count() {
        let r = rule(":- 2 <= #count{A : o(A,I)}, step(I).");
        assert_eq!(
            fol_of_rule(&r),
            f("forall I ((exists A__1 A__2 (o(A__1,I) & o(A__2,I) & ~(A__1 = A__2))) & step(I) -> bot)")
        );
    }

    #[test]
    fn multi_variable_count() {
        let r = rule(":- 2 <= #count{X,Y : e(X,Y)}.");
        assert_eq!(
            fol_of_rule(&r),
            f("(exists X__1 Y__1 X__2 Y__2 (e(X__1,Y__1) & e(X__2,Y__2) & ~(X__1 = X__2 & Y__1 = Y__2))) -> bot")
        );
    }

    #[test]
    fn rule_shapes() {
        assert_eq!(fol_of_rule(&rule("a | b :- c.")), f("c -> a | b"));
        assert_eq!(fol_of_rule(&rule("{a} :- c.")), f("~~a & c -> a"));
        assert_eq!(fol_of_rule(&rule(":- c, not d.")), f("c & ~d -> bot"));
        assert_eq!(fol_of_rule(&rule("p(a).")), f("p(a)"));
        assert_eq!(fol_of_rule(&rule("q(X) :- p(X).")), f("forall X (p(X) -> q(X))"));
        assert_eq!(fol_of_rule(&rule("q :- #true.")), f("top -> q"));
    }

    #[test]
    fn clark_of_choice_rule() {
        let p = parse_program("{o(A,I)} :- action(A), step(I), not goal(I), I != 2.").unwrap();
        let cnf = clark_normal_form(&p, &["o".into()]).unwrap();
        let expected = f("forall A I (~~o(A,I) & action(A) & step(I) & ~goal(I) & ~(I = 2) -> o(A,I))");
        assert_eq!(cnf, Formula::And(vec![expected]));
        let comp = completion(&cnf).unwrap();
        assert_eq!(
            comp,
            Formula::And(vec![f("forall A I (~~o(A,I) & action(A) & step(I) & ~goal(I) & ~(I = 2) <-> o(A,I))")])
        );
    }

    #[test]
    fn clark_with_equalities() {
        let p = parse_program("q(a). q(X) :- r(X).").unwrap();
        let cnf = clark_normal_form(&p, &["q".into(), "r".into()]).unwrap();
        assert_eq!(
            cnf,
            Formula::And(vec![f("forall V__1 (V__1 = a | r(V__1) -> q(V__1))"), f("forall V__1 (bot -> r(V__1))")])
        );
    }

    #[test]
    fn clark_rejects_disjunction() {
        let p = parse_program("a | b.").unwrap();
        assert!(matches!(clark_normal_form(&p, &["a".into()]), Err(FolError::Disjunctive(_))));
    }

    #[test]
    fn completion_rejects_other_shapes() {
        assert!(completion(&f("p | q")).is_err());
    }

    #[test]
    fn simplify_constants() {
        assert_eq!(f("top -> p").simplify(), f("p"));
        assert_eq!(f("p & bot").simplify(), Formula::Bottom);
        assert_eq!(f("~top").simplify(), Formula::Bottom);
        assert!(f("bot -> p").simplify().is_top());
        assert_eq!(f("p | bot | q").simplify(), f("p | q"));
    }
}
