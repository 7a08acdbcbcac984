//! Abstract syntax of RASPL-1 programs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

/// A term: object constant, variable, or function application.
///
/// Integer literals are plain object constants.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Term {
    Const(String),
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn constant(name: impl Into<String>) -> Self {
        Term::Const(name.into())
    }

    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Const(_) => true,
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Const(_) => {}
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Simultaneous substitution of variables.
    pub fn substitute(&self, env: &BTreeMap<String, Term>) -> Term {
        match self {
            Term::Const(_) => self.clone(),
            Term::Var(v) => env.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.substitute(env)).collect()),
        }
    }

    /// Nesting depth: constants and variables have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
            _ => 0,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) => write!(f, "{c}"),
            Term::Var(v) => write!(f, "{v}"),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                write_joined(f, args, ",")?;
                write!(f, ")")
            }
        }
    }
}

/// An atomic formula. `Top` is the truth literal usable in bodies.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Atom {
    Pred { name: String, args: Vec<Term> },
    Eq(Term, Term),
    Top,
}

impl Atom {
    pub fn pred(name: impl Into<String>, args: Vec<Term>) -> Self {
        Atom::Pred { name: name.into(), args }
    }

    /// Zero-ary predicate atom.
    pub fn prop(name: impl Into<String>) -> Self {
        Atom::Pred { name: name.into(), args: Vec::new() }
    }

    pub fn predicate(&self) -> Option<&str> {
        match self {
            Atom::Pred { name, .. } => Some(name),
            _ => None,
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Atom::Pred { args, .. } => args,
            _ => &[],
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Atom::Pred { args, .. } => args.iter().all(Term::is_ground),
            Atom::Eq(l, r) => l.is_ground() && r.is_ground(),
            Atom::Top => true,
        }
    }

    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Atom::Pred { args, .. } => args.iter().for_each(|a| a.collect_vars(out)),
            Atom::Eq(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            Atom::Top => {}
        }
    }

    pub fn substitute(&self, env: &BTreeMap<String, Term>) -> Atom {
        match self {
            Atom::Pred { name, args } => Atom::Pred {
                name: name.clone(),
                args: args.iter().map(|a| a.substitute(env)).collect(),
            },
            Atom::Eq(l, r) => Atom::Eq(l.substitute(env), r.substitute(env)),
            Atom::Top => Atom::Top,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Pred { name, args } if args.is_empty() => write!(f, "{name}"),
            Atom::Pred { name, args } => {
                write!(f, "{name}(")?;
                write_joined(f, args, ",")?;
                write!(f, ")")
            }
            Atom::Eq(l, r) => write!(f, "{l} = {r}"),
            Atom::Top => write!(f, "#true"),
        }
    }
}

/// Number of `not` applications in front of an atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Polarity {
    Pos,
    Neg,
    NegNeg,
}

impl Polarity {
    pub fn negate(self) -> Option<Polarity> {
        match self {
            Polarity::Pos => Some(Polarity::Neg),
            Polarity::Neg => Some(Polarity::NegNeg),
            Polarity::NegNeg => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Literal {
    pub polarity: Polarity,
    pub atom: Atom,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal { polarity: Polarity::Pos, atom }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal { polarity: Polarity::Neg, atom }
    }

    pub fn negneg(atom: Atom) -> Self {
        Literal { polarity: Polarity::NegNeg, atom }
    }

    pub fn collect_vars(&self, out: &mut Vec<String>) {
        self.atom.collect_vars(out)
    }

    pub fn substitute(&self, env: &BTreeMap<String, Term>) -> Literal {
        Literal { polarity: self.polarity, atom: self.atom.substitute(env) }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.atom, self.polarity) {
            (Atom::Eq(l, r), Polarity::Neg) => write!(f, "{l} != {r}"),
            (Atom::Eq(l, r), Polarity::NegNeg) => write!(f, "not {l} != {r}"),
            (atom, Polarity::Pos) => write!(f, "{atom}"),
            (atom, Polarity::Neg) => write!(f, "not {atom}"),
            (atom, Polarity::NegNeg) => write!(f, "not not {atom}"),
        }
    }
}

/// `bound <= #count{vars : conditions}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Aggregate {
    pub bound: usize,
    pub vars: Vec<String>,
    pub conditions: Vec<Literal>,
}

impl Aggregate {
    /// Variables of the conditions that are not bound by the aggregate.
    pub fn global_vars(&self, out: &mut Vec<String>) {
        let mut inner = Vec::new();
        for c in &self.conditions {
            c.collect_vars(&mut inner);
        }
        for v in inner {
            if !self.vars.contains(&v) && !out.contains(&v) {
                out.push(v);
            }
        }
    }

    /// Substitution that leaves the bound variables alone.
    pub fn substitute(&self, env: &BTreeMap<String, Term>) -> Aggregate {
        let mut env = env.clone();
        for v in &self.vars {
            env.remove(v);
        }
        Aggregate {
            bound: self.bound,
            vars: self.vars.clone(),
            conditions: self.conditions.iter().map(|c| c.substitute(&env)).collect(),
        }
    }
}

impl fmt::Display for Aggregate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <= #count{{", self.bound)?;
        write_joined(f, &self.vars, ",")?;
        write!(f, " : ")?;
        write_joined(f, &self.conditions, ", ")?;
        write!(f, "}}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum BodyElem {
    Lit(Literal),
    Agg { negated: bool, agg: Aggregate },
}

impl BodyElem {
    pub fn pos(atom: Atom) -> Self {
        BodyElem::Lit(Literal::pos(atom))
    }

    pub fn neg(atom: Atom) -> Self {
        BodyElem::Lit(Literal::neg(atom))
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            BodyElem::Lit(l) => Some(l),
            BodyElem::Agg { .. } => None,
        }
    }

    /// Free (global) variables in order of first occurrence.
    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            BodyElem::Lit(l) => l.collect_vars(out),
            BodyElem::Agg { agg, .. } => agg.global_vars(out),
        }
    }

    pub fn substitute(&self, env: &BTreeMap<String, Term>) -> BodyElem {
        match self {
            BodyElem::Lit(l) => BodyElem::Lit(l.substitute(env)),
            BodyElem::Agg { negated, agg } => BodyElem::Agg { negated: *negated, agg: agg.substitute(env) },
        }
    }
}

impl fmt::Display for BodyElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BodyElem::Lit(l) => write!(f, "{l}"),
            BodyElem::Agg { negated: true, agg } => write!(f, "not {agg}"),
            BodyElem::Agg { negated: false, agg } => write!(f, "{agg}"),
        }
    }
}

/// Rule head. An empty disjunction is a denial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Head {
    Disjunction(Vec<Atom>),
    Choice(Atom),
}

impl Head {
    pub fn atoms(&self) -> &[Atom] {
        match self {
            Head::Disjunction(atoms) => atoms,
            Head::Choice(a) => std::slice::from_ref(a),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Rule {
    pub head: Head,
    pub body: Vec<BodyElem>,
}

/// Shape of a rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RuleKind {
    /// Single head atom.
    Defining,
    /// More than one head atom.
    Disjunctive,
    Choice,
    Denial,
}

impl Rule {
    pub fn new(head: Head, body: Vec<BodyElem>) -> Self {
        Rule { head, body }
    }

    pub fn fact(atom: Atom) -> Self {
        Rule { head: Head::Disjunction(vec![atom]), body: Vec::new() }
    }

    pub fn denial(body: Vec<BodyElem>) -> Self {
        Rule { head: Head::Disjunction(Vec::new()), body }
    }

    pub fn kind(&self) -> RuleKind {
        match &self.head {
            Head::Choice(_) => RuleKind::Choice,
            Head::Disjunction(a) if a.is_empty() => RuleKind::Denial,
            Head::Disjunction(a) if a.len() == 1 => RuleKind::Defining,
            Head::Disjunction(_) => RuleKind::Disjunctive,
        }
    }

    /// Free variables in order of first occurrence (head first).
    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        for a in self.head.atoms() {
            a.collect_vars(&mut out);
        }
        for e in &self.body {
            e.collect_vars(&mut out);
        }
        out
    }

    /// Every variable name used anywhere, including aggregate-local ones.
    pub fn all_var_names(&self) -> BTreeSet<String> {
        let mut out = Vec::new();
        for a in self.head.atoms() {
            a.collect_vars(&mut out);
        }
        for e in &self.body {
            match e {
                BodyElem::Lit(l) => l.collect_vars(&mut out),
                BodyElem::Agg { agg, .. } => {
                    out.extend(agg.vars.iter().cloned());
                    agg.conditions.iter().for_each(|c| c.collect_vars(&mut out));
                }
            }
        }
        out.into_iter().collect()
    }

    pub fn substitute(&self, env: &BTreeMap<String, Term>) -> Rule {
        let head = match &self.head {
            Head::Disjunction(atoms) => Head::Disjunction(atoms.iter().map(|a| a.substitute(env)).collect()),
            Head::Choice(a) => Head::Choice(a.substitute(env)),
        };
        Rule { head, body: self.body.iter().map(|e| e.substitute(env)).collect() }
    }

    /// Simple rules have no aggregates and no double negation in the body.
    pub fn is_simple(&self) -> bool {
        self.body.iter().all(|e| matches!(e, BodyElem::Lit(l) if l.polarity != Polarity::NegNeg))
    }

    /// Predicates occurring positively (outside `not`) in the body.
    pub fn positive_body_predicates(&self) -> Vec<&str> {
        let mut out = Vec::new();
        for e in &self.body {
            match e {
                BodyElem::Lit(Literal { polarity: Polarity::Pos, atom }) => out.extend(atom.predicate()),
                BodyElem::Agg { negated: false, agg } => {
                    for c in &agg.conditions {
                        if c.polarity == Polarity::Pos {
                            out.extend(c.atom.predicate());
                        }
                    }
                }
                _ => {}
            }
        }
        out
    }

    /// All predicates occurring in the body.
    pub fn body_predicates(&self) -> Vec<&str> {
        let mut out = Vec::new();
        for e in &self.body {
            match e {
                BodyElem::Lit(l) => out.extend(l.atom.predicate()),
                BodyElem::Agg { agg, .. } => out.extend(agg.conditions.iter().filter_map(|c| c.atom.predicate())),
            }
        }
        out
    }

    pub fn head_predicates(&self) -> Vec<&str> {
        self.head.atoms().iter().filter_map(Atom::predicate).collect()
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.head {
            Head::Choice(a) => write!(f, "{{{a}}}")?,
            Head::Disjunction(atoms) => write_joined(f, atoms, " | ")?,
        }
        let denial = matches!(&self.head, Head::Disjunction(a) if a.is_empty());
        if self.body.is_empty() {
            if denial {
                write!(f, ":-")?;
            }
        } else {
            if !denial {
                write!(f, " ")?;
            }
            write!(f, ":- ")?;
            write_joined(f, &self.body, ", ")?;
        }
        write!(f, ".")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Program {
    pub rules: Vec<Rule>,
}

impl Program {
    pub fn new(rules: Vec<Rule>) -> Self {
        Program { rules }
    }

    /// Concatenation; rules of `other` follow.
    pub fn union(&self, other: &Program) -> Program {
        let mut rules = self.rules.clone();
        rules.extend(other.rules.iter().cloned());
        Program { rules }
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        for r in &self.rules {
            for a in r.head.atoms() {
                sig.add_atom(a);
            }
            for e in &r.body {
                match e {
                    BodyElem::Lit(l) => sig.add_atom(&l.atom),
                    BodyElem::Agg { agg, .. } => agg.conditions.iter().for_each(|c| sig.add_atom(&c.atom)),
                }
            }
        }
        sig
    }

    /// Predicate names in order of first occurrence.
    pub fn predicates(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        let mut push = |p: &str| {
            if !out.iter().any(|q| q == p) {
                out.push(p.to_string());
            }
        };
        for r in &self.rules {
            r.head_predicates().into_iter().for_each(&mut push);
            r.body_predicates().into_iter().for_each(&mut push);
        }
        out
    }

    pub fn has_variables(&self) -> bool {
        self.rules.iter().any(|r| !r.all_var_names().is_empty())
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Function symbols (object constants have arity 0) and predicate symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub functions: BTreeSet<(String, usize)>,
    pub predicates: BTreeSet<(String, usize)>,
}

impl Signature {
    fn add_term(&mut self, t: &Term) {
        match t {
            Term::Const(c) => {
                self.functions.insert((c.clone(), 0));
            }
            Term::Var(_) => {}
            Term::App(f, args) => {
                self.functions.insert((f.clone(), args.len()));
                args.iter().for_each(|a| self.add_term(a));
            }
        }
    }

    fn add_atom(&mut self, a: &Atom) {
        match a {
            Atom::Pred { name, args } => {
                self.predicates.insert((name.clone(), args.len()));
                args.iter().for_each(|t| self.add_term(t));
            }
            Atom::Eq(l, r) => {
                self.add_term(l);
                self.add_term(r);
            }
            Atom::Top => {}
        }
    }

    pub fn object_constants(&self) -> Vec<String> {
        self.functions.iter().filter(|(_, n)| *n == 0).map(|(c, _)| c.clone()).collect()
    }

    pub fn merge(&mut self, other: &Signature) {
        self.functions.extend(other.functions.iter().cloned());
        self.predicates.extend(other.predicates.iter().cloned());
    }

    pub fn predicate_names(&self) -> BTreeSet<String> {
        self.predicates.iter().map(|(p, _)| p.clone()).collect()
    }

    pub fn arity(&self, pred: &str) -> Option<usize> {
        self.predicates.iter().find(|(p, _)| p == pred).map(|(_, n)| *n)
    }

    /// Whether a symbol is used either as a predicate or as a function.
    pub fn mentions(&self, symbol: &str) -> bool {
        self.predicates.iter().any(|(p, _)| p == symbol) || self.functions.iter().any(|(f, _)| f == symbol)
    }
}

/// Whether `r` subsumes `r2`: equal heads and `body(r)` is a sub-multiset of `body(r2)`.
pub fn subsumes(r: &Rule, r2: &Rule) -> bool {
    heads_equal(&r.head, &r2.head) && is_submultiset(&r.body, &r2.body)
}

fn heads_equal(h1: &Head, h2: &Head) -> bool {
    match (h1, h2) {
        (Head::Choice(a), Head::Choice(b)) => a == b,
        (Head::Disjunction(a), Head::Disjunction(b)) => {
            let mut a = a.clone();
            let mut b = b.clone();
            a.sort();
            b.sort();
            a == b
        }
        _ => false,
    }
}

pub(crate) fn is_submultiset<T: PartialEq>(small: &[T], big: &[T]) -> bool {
    let mut used = vec![false; big.len()];
    small.iter().all(|x| match (0..big.len()).find(|&i| !used[i] && big[i] == *x) {
        Some(i) => {
            used[i] = true;
            true
        }
        None => false,
    })
}

/// Terminal rank of a predicate, `None` when it is not terminal.
///
/// Rank 0: every rule with the predicate in its head has an empty body.
/// Rank i+1: it heads only simple rules whose positive body predicates have
/// rank at most i, with at least one of rank exactly i.
pub fn terminal_rank(program: &Program, pred: &str) -> Option<usize> {
    terminal_ranks(program).get(pred).copied()
}

pub fn terminal_ranks(program: &Program) -> BTreeMap<String, usize> {
    let preds = program.predicates();
    let defining = |p: &str| -> Vec<&Rule> {
        program.rules.iter().filter(|r| r.head_predicates().contains(&p)).collect()
    };
    let mut ranks: BTreeMap<String, usize> = BTreeMap::new();
    for p in &preds {
        if defining(p).iter().all(|r| r.body.is_empty()) {
            ranks.insert(p.clone(), 0);
        }
    }
    for i in 0..preds.len() {
        let mut next = Vec::new();
        for p in &preds {
            if ranks.contains_key(p) {
                continue;
            }
            let rules = defining(p);
            if !rules.iter().all(|r| r.is_simple()) {
                continue;
            }
            let mut hits_i = false;
            let mut ok = true;
            for r in &rules {
                for q in r.positive_body_predicates() {
                    match ranks.get(q) {
                        Some(&k) if k <= i => hits_i |= k == i,
                        _ => ok = false,
                    }
                }
            }
            if ok && hits_i {
                next.push(p.clone());
            }
        }
        if next.is_empty() && !ranks.values().any(|&k| k > i) {
            break;
        }
        for p in next {
            ranks.insert(p, i + 1);
        }
    }
    ranks
}

pub(crate) fn write_joined<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T], sep: &str) -> fmt::Result {
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            write!(f, "{sep}")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_program;

    fn rule(src: &str) -> Rule {
        parse_program(src).unwrap().rules.remove(0)
    }

    #[test]
    fn classify() {
        assert_eq!(rule("{p}.").kind(), RuleKind::Choice);
        assert_eq!(rule("p | q.").kind(), RuleKind::Disjunctive);
        assert_eq!(rule(":- p.").kind(), RuleKind::Denial);
        assert_eq!(rule("p :- q.").kind(), RuleKind::Defining);
    }

    #[test]
    fn subsumption_multiset() {
        let r = rule("non_o(A,I) :- action(A), step(I), not o(A,I).");
        let r2 = rule("non_o(A,I) :- not o(A,I), action(A), step(I), not goal(I), I != 2.");
        assert!(subsumes(&r, &r2));
        assert!(!subsumes(&r2, &r));
        assert!(subsumes(&rule(":- p."), &rule(":- p, p.")));
        assert!(!subsumes(&rule(":- p, p."), &rule(":- p.")));
    }

    #[test]
    fn terminal_blocks() {
        let p = parse_program("block(b0). block(b1). loc(table). loc(X) :- block(X).").unwrap();
        assert_eq!(terminal_rank(&p, "block"), Some(0));
        assert_eq!(terminal_rank(&p, "loc"), Some(1));
        let p = parse_program("p :- p.").unwrap();
        assert_eq!(terminal_rank(&p, "p"), None);
        let p = parse_program("p :- not q. q.").unwrap();
        assert_eq!(terminal_rank(&p, "p"), None);
    }

    #[test]
    fn terminal_chain() {
        let p = parse_program("a. b :- a. c :- b, a. d :- c, not d.").unwrap();
        assert_eq!(terminal_rank(&p, "a"), Some(0));
        assert_eq!(terminal_rank(&p, "b"), Some(1));
        assert_eq!(terminal_rank(&p, "c"), Some(2));
        assert_eq!(terminal_rank(&p, "d"), Some(3));
    }

    #[test]
    fn display_forms() {
        assert_eq!(rule("{o(A,I)} :- action(A).").to_string(), "{o(A,I)} :- action(A).");
        assert_eq!(rule(":- .").to_string(), ":-.");
        assert_eq!(rule("p :- not X = Y, not not q.").to_string(), "p :- X != Y, not not q.");
        assert_eq!(
            rule(":- not 1 <= #count{A : o(A,I)}, step(I).").to_string(),
            ":- not 1 <= #count{A : o(A,I)}, step(I)."
        );
    }
}
