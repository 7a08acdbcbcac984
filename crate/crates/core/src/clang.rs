//! Definite action descriptions in the language C, their transition systems
//! and the two logic-program translations.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::ast::{Atom, BodyElem, Head, Literal, Program, Rule, Term};
use crate::ground::GroundOptions;
use crate::semantics::{answer_sets_of, show_set, Interpretation, OracleError, SolveOptions};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClangError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("`{0}` is not declared")]
    Undeclared(String),
    #[error("`{0}` is declared twice")]
    Duplicate(String),
    #[error("`{0}` must be a fluent here")]
    FluentExpected(String),
    #[error("{count} symbols exceed the cap of {cap}")]
    CapExceeded { count: usize, cap: usize },
    #[error("horizon must be positive")]
    Horizon,
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CLiteral {
    pub name: String,
    pub positive: bool,
}

impl CLiteral {
    pub fn new(name: impl Into<String>, positive: bool) -> Self {
        CLiteral { name: name.into(), positive }
    }

    fn holds(&self, value: bool) -> bool {
        self.positive == value
    }
}

impl fmt::Display for CLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.name)
        } else {
            write!(f, "-{}", self.name)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum LawHead {
    Bottom,
    Lit(CLiteral),
}

impl fmt::Display for LawHead {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LawHead::Bottom => write!(f, "bot"),
            LawHead::Lit(l) => write!(f, "{l}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StaticLaw {
    pub head: LawHead,
    pub if_part: Vec<CLiteral>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DynamicLaw {
    pub head: LawHead,
    pub if_part: Vec<CLiteral>,
    pub after: Vec<CLiteral>,
}

fn write_conj(f: &mut fmt::Formatter<'_>, lits: &[CLiteral]) -> fmt::Result {
    if lits.is_empty() {
        return write!(f, "top");
    }
    for (i, l) in lits.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{l}")?;
    }
    Ok(())
}

impl fmt::Display for StaticLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "caused {} if ", self.head)?;
        write_conj(f, &self.if_part)?;
        write!(f, ".")
    }
}

impl fmt::Display for DynamicLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "caused {} if ", self.head)?;
        write_conj(f, &self.if_part)?;
        write!(f, " after ")?;
        write_conj(f, &self.after)?;
        write!(f, ".")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ActionDescription {
    /// In declaration order; the first fluent is the most significant bit
    /// of a state index.
    pub fluents: Vec<String>,
    pub actions: Vec<String>,
    pub statics: Vec<StaticLaw>,
    pub dynamics: Vec<DynamicLaw>,
}

impl fmt::Display for ActionDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "fluents: {}.", self.fluents.join(", "))?;
        if !self.actions.is_empty() {
            writeln!(f, "actions: {}.", self.actions.join(", "))?;
        }
        for l in &self.statics {
            writeln!(f, "{l}")?;
        }
        for l in &self.dynamics {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Minus,
    Comma,
    Colon,
    Dot,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ClangError> {
    let mut out = Vec::new();
    for (n, line) in src.lines().enumerate() {
        let line_no = n + 1;
        let code = line.split('%').next().unwrap_or("");
        let mut chars = code.char_indices().peekable();
        while let Some((i, c)) = chars.next() {
            let tok = match c {
                c if c.is_whitespace() => continue,
                '-' | '~' => Tok::Minus,
                ',' | '&' => Tok::Comma,
                ':' => Tok::Colon,
                '.' => Tok::Dot,
                c if c.is_alphanumeric() || c == '_' => {
                    let mut end = i + c.len_utf8();
                    while let Some(&(j, d)) = chars.peek() {
                        if d.is_alphanumeric() || d == '_' {
                            end = j + d.len_utf8();
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    Tok::Ident(code[i..end].to_string())
                }
                c => return Err(ClangError::Parse { line: line_no, message: format!("unexpected character `{c}`") }),
            };
            out.push((tok, line_no));
        }
    }
    Ok(out)
}

struct Statement {
    line: usize,
    toks: Vec<Tok>,
}

fn split_statements(toks: Vec<(Tok, usize)>) -> Result<Vec<Statement>, ClangError> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    let mut line = 0;
    for (t, l) in toks {
        if cur.is_empty() {
            line = l;
        }
        if t == Tok::Dot {
            out.push(Statement { line, toks: std::mem::take(&mut cur) });
        } else {
            cur.push(t);
        }
    }
    if !cur.is_empty() {
        return Err(ClangError::Parse { line, message: "missing `.` at end of statement".into() });
    }
    Ok(out)
}

/// Keyword-separated sections of a law.
fn sections<'a>(toks: &'a [Tok], keywords: &[&str]) -> Vec<(Option<String>, &'a [Tok])> {
    let mut out: Vec<(Option<String>, &[Tok])> = Vec::new();
    let mut start = 0;
    let mut key = None;
    for (i, t) in toks.iter().enumerate() {
        if let Tok::Ident(w) = t {
            if keywords.contains(&w.as_str()) {
                out.push((key.take(), &toks[start..i]));
                key = Some(w.clone());
                start = i + 1;
            }
        }
    }
    out.push((key, &toks[start..]));
    out
}

struct LawParser<'a> {
    d: &'a ActionDescription,
    line: usize,
}

impl LawParser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ClangError> {
        Err(ClangError::Parse { line: self.line, message: message.into() })
    }

    fn declared(&self, name: &str) -> Result<(), ClangError> {
        if self.d.fluents.iter().chain(&self.d.actions).any(|n| n == name) {
            Ok(())
        } else {
            Err(ClangError::Undeclared(name.into()))
        }
    }

    fn literal(&self, toks: &[Tok]) -> Result<CLiteral, ClangError> {
        match toks {
            [Tok::Ident(n)] => {
                self.declared(n)?;
                Ok(CLiteral::new(n.clone(), true))
            }
            [Tok::Minus, Tok::Ident(n)] => {
                self.declared(n)?;
                Ok(CLiteral::new(n.clone(), false))
            }
            _ => self.err("expected a literal"),
        }
    }

    fn head(&self, toks: &[Tok]) -> Result<LawHead, ClangError> {
        if let [Tok::Ident(w)] = toks {
            if w == "bot" || w == "false" {
                return Ok(LawHead::Bottom);
            }
        }
        let l = self.literal(toks)?;
        self.fluent(&l)?;
        Ok(LawHead::Lit(l))
    }

    fn conj(&self, toks: &[Tok]) -> Result<Vec<CLiteral>, ClangError> {
        if let [Tok::Ident(w)] = toks {
            if w == "top" || w == "true" {
                return Ok(Vec::new());
            }
        }
        if toks.is_empty() {
            return self.err("empty condition");
        }
        toks.split(|t| *t == Tok::Comma).map(|part| self.literal(part)).collect()
    }

    fn fluent(&self, l: &CLiteral) -> Result<(), ClangError> {
        if self.d.fluents.contains(&l.name) {
            Ok(())
        } else {
            Err(ClangError::FluentExpected(l.name.clone()))
        }
    }

    fn fluents(&self, ls: &[CLiteral]) -> Result<(), ClangError> {
        ls.iter().try_for_each(|l| self.fluent(l))
    }
}

pub fn parse_action_description(src: &str) -> Result<ActionDescription, ClangError> {
    let mut d = ActionDescription::default();
    for st in split_statements(lex(src)?)? {
        let line = st.line;
        let toks = st.toks;
        match toks.as_slice() {
            [Tok::Ident(k), Tok::Colon, rest @ ..] if k == "fluents" || k == "actions" => {
                for part in rest.split(|t| *t == Tok::Comma) {
                    let [Tok::Ident(n)] = part else {
                        return Err(ClangError::Parse { line, message: "expected a symbol name".into() });
                    };
                    if d.fluents.contains(n) || d.actions.contains(n) {
                        return Err(ClangError::Duplicate(n.clone()));
                    }
                    if k == "fluents" { &mut d.fluents } else { &mut d.actions }.push(n.clone());
                }
            }
            [Tok::Ident(k), rest @ ..] if k == "caused" => {
                let p = LawParser { d: &d, line };
                let mut head = None;
                let mut if_part = Vec::new();
                let mut after = None;
                for (key, part) in sections(rest, &["if", "after"]) {
                    match key.as_deref() {
                        None => head = Some(p.head(part)?),
                        Some("if") => if_part = p.conj(part)?,
                        _ => after = Some(p.conj(part)?),
                    }
                }
                let head = head.unwrap();
                p.fluents(&if_part)?;
                match after {
                    None => d.statics.push(StaticLaw { head, if_part }),
                    Some(after) => d.dynamics.push(DynamicLaw { head, if_part, after }),
                }
            }
            [Tok::Ident(k), rest @ ..] if k == "inertial" => {
                let p = LawParser { d: &d, line };
                let lits = p.conj(rest)?;
                p.fluents(&lits)?;
                for l in lits {
                    d.dynamics.push(DynamicLaw { head: LawHead::Lit(l.clone()), if_part: vec![l.clone()], after: vec![l] });
                }
            }
            _ if toks.iter().any(|t| *t == Tok::Ident("causes".into())) => {
                let p = LawParser { d: &d, line };
                let secs = sections(&toks, &["causes", "if"]);
                let mut after = Vec::new();
                let mut head = None;
                for (key, part) in secs {
                    match key.as_deref() {
                        None => after.extend(p.conj(part)?),
                        Some("causes") => head = Some(p.head(part)?),
                        _ => after.extend(p.conj(part)?),
                    }
                }
                let Some(head) = head else {
                    return Err(ClangError::Parse { line, message: "missing effect".into() });
                };
                d.dynamics.push(DynamicLaw { head, if_part: Vec::new(), after });
            }
            _ => return Err(ClangError::Parse { line, message: "unknown statement".into() }),
        }
    }
    Ok(d)
}

/// Truth values of the fluents (or actions) in declaration order.
pub type Assignment = Vec<bool>;

fn assignments(n: usize) -> Vec<Assignment> {
    (0..1u64 << n).map(|m| (0..n).map(|i| m >> (n - 1 - i) & 1 == 1).collect()).collect()
}

fn lookup(names: &[String], values: &[bool], name: &str) -> Option<bool> {
    names.iter().position(|n| n == name).map(|i| values[i])
}

impl ActionDescription {
    fn check_cap(&self, cap: usize) -> Result<(), ClangError> {
        let count = self.fluents.len().max(self.actions.len());
        if count > cap {
            return Err(ClangError::CapExceeded { count, cap });
        }
        Ok(())
    }

    fn fluent_holds(&self, s: &[bool], l: &CLiteral) -> bool {
        l.holds(lookup(&self.fluents, s, &l.name).expect("fluent literal"))
    }

    fn holds_in(&self, s: &[bool], a: &[bool], l: &CLiteral) -> bool {
        let v = lookup(&self.fluents, s, &l.name).or_else(|| lookup(&self.actions, a, &l.name));
        l.holds(v.expect("declared symbol"))
    }

    /// Fluent interpretations satisfying every static law.
    pub fn states(&self, cap: usize) -> Result<Vec<Assignment>, ClangError> {
        self.check_cap(cap)?;
        Ok(assignments(self.fluents.len())
            .into_iter()
            .filter(|s| {
                self.statics.iter().all(|law| {
                    !law.if_part.iter().all(|l| self.fluent_holds(s, l))
                        || matches!(&law.head, LawHead::Lit(h) if self.fluent_holds(s, h))
                })
            })
            .collect())
    }

    /// Heads of laws whose conditions hold in the transition.
    pub fn caused_literals(&self, s: &[bool], a: &[bool], s2: &[bool]) -> BTreeSet<LawHead> {
        let mut out = BTreeSet::new();
        for law in &self.statics {
            if law.if_part.iter().all(|l| self.fluent_holds(s2, l)) {
                out.insert(law.head.clone());
            }
        }
        for law in &self.dynamics {
            if law.if_part.iter().all(|l| self.fluent_holds(s2, l)) && law.after.iter().all(|l| self.holds_in(s, a, l)) {
                out.insert(law.head.clone());
            }
        }
        out
    }

    pub fn state_literals(&self, s: &[bool]) -> BTreeSet<LawHead> {
        self.fluents.iter().zip(s).map(|(n, &v)| LawHead::Lit(CLiteral::new(n.clone(), v))).collect()
    }

    pub fn causally_explained(&self, s: &[bool], a: &[bool], s2: &[bool]) -> bool {
        self.caused_literals(s, a, s2) == self.state_literals(s2)
    }

    pub fn transition_system(&self, cap: usize) -> Result<TransitionSystem, ClangError> {
        self.check_cap(cap)?;
        let states = self.states(cap)?;
        let actions = assignments(self.actions.len());
        let edges: Vec<Transition> = (0..states.len())
            .into_par_iter()
            .flat_map_iter(|from| {
                let mut out = Vec::new();
                for a in &actions {
                    for (to, s2) in states.iter().enumerate() {
                        if self.causally_explained(&states[from], a, s2) {
                            out.push(Transition { from, action: a.clone(), to });
                        }
                    }
                }
                out
            })
            .collect();
        Ok(TransitionSystem { fluents: self.fluents.clone(), actions: self.actions.clone(), states, edges })
    }

    pub fn show_state(&self, s: &[bool]) -> String {
        show_assignment(&self.fluents, s)
    }

    pub fn show_action(&self, a: &[bool]) -> String {
        show_assignment(&self.actions, a)
    }
}

fn show_assignment(names: &[String], values: &[bool]) -> String {
    let parts: Vec<String> = names.iter().zip(values).map(|(n, &v)| CLiteral::new(n.clone(), v).to_string()).collect();
    parts.join(" ")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transition {
    pub from: usize,
    pub action: Assignment,
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransitionSystem {
    pub fluents: Vec<String>,
    pub actions: Vec<String>,
    pub states: Vec<Assignment>,
    /// Ordered by initial state, action, resulting state.
    pub edges: Vec<Transition>,
}

/// A history `s0, a0, s1, ..., sT` as state indices and actions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Path {
    pub states: Vec<usize>,
    pub actions: Vec<Assignment>,
}

#[derive(Serialize)]
struct EdgeJson {
    from: Vec<String>,
    action: Vec<String>,
    to: Vec<String>,
}

#[derive(Serialize)]
struct SystemJson {
    fluents: Vec<String>,
    actions: Vec<String>,
    states: Vec<Vec<String>>,
    edges: Vec<EdgeJson>,
}

fn literal_array(names: &[String], values: &[bool]) -> Vec<String> {
    names.iter().zip(values).map(|(n, &v)| CLiteral::new(n.clone(), v).to_string()).collect()
}

impl TransitionSystem {
    pub fn paths(&self, horizon: usize) -> Vec<Path> {
        let mut out: Vec<Path> = (0..self.states.len()).map(|s| Path { states: vec![s], actions: Vec::new() }).collect();
        for _ in 0..horizon {
            out = out
                .into_iter()
                .flat_map(|p| {
                    let last = *p.states.last().unwrap();
                    self.edges.iter().filter(move |e| e.from == last).map(move |e| {
                        let mut q = p.clone();
                        q.states.push(e.to);
                        q.actions.push(e.action.clone());
                        q
                    })
                })
                .collect();
        }
        out
    }

    /// States as literal arrays and edges as triples.
    pub fn to_json(&self) -> serde_json::Value {
        let states = self.states.iter().map(|s| literal_array(&self.fluents, s)).collect();
        let edges = self
            .edges
            .iter()
            .map(|e| EdgeJson {
                from: literal_array(&self.fluents, &self.states[e.from]),
                action: literal_array(&self.actions, &e.action),
                to: literal_array(&self.fluents, &self.states[e.to]),
            })
            .collect();
        serde_json::to_value(SystemJson { fluents: self.fluents.clone(), actions: self.actions.clone(), states, edges })
            .expect("serializable")
    }
}

impl fmt::Display for TransitionSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "states: {}", self.states.len())?;
        for s in &self.states {
            writeln!(f, "  {}", show_assignment(&self.fluents, s))?;
        }
        writeln!(f, "transitions: {}", self.edges.len())?;
        for e in &self.edges {
            writeln!(
                f,
                "  <{}, {}, {}>",
                show_assignment(&self.fluents, &self.states[e.from]),
                show_assignment(&self.actions, &e.action),
                show_assignment(&self.fluents, &self.states[e.to])
            )?;
        }
        Ok(())
    }
}

/// Name of the complement atom of `name`.
pub fn bar(name: &str) -> String {
    format!("{name}__bar")
}

fn timed(name: &str, t: usize) -> Atom {
    Atom::pred(name, vec![Term::constant(t.to_string())])
}

/// The atom standing for literal `l` at time `t`.
fn hat(l: &CLiteral, t: usize) -> Atom {
    if l.positive {
        timed(&l.name, t)
    } else {
        timed(&bar(&l.name), t)
    }
}

/// The atom standing for the complement of `l` at time `t`.
fn over(l: &CLiteral, t: usize) -> Atom {
    hat(&CLiteral::new(l.name.clone(), !l.positive), t)
}

fn head_rule(head: &LawHead, t: usize, body: Vec<BodyElem>) -> Rule {
    match head {
        LawHead::Bottom => Rule::denial(body),
        LawHead::Lit(l) => Rule::new(Head::Disjunction(vec![hat(l, t)]), body),
    }
}

fn consistency(names: &[String], times: std::ops::Range<usize>, out: &mut Vec<Rule>) {
    for n in names {
        for t in times.clone() {
            let (a, b) = (timed(n, t), timed(&bar(n), t));
            out.push(Rule::denial(vec![BodyElem::pos(a.clone()), BodyElem::pos(b.clone())]));
            out.push(Rule::denial(vec![BodyElem::neg(a), BodyElem::neg(b)]));
        }
    }
}

fn check_horizon(horizon: usize) -> Result<(), ClangError> {
    if horizon == 0 {
        Err(ClangError::Horizon)
    } else {
        Ok(())
    }
}

/// Group 1 of the original translation; `with_actions` toggles the
/// action-atom part.
pub fn lp_consistency(d: &ActionDescription, horizon: usize, with_actions: bool) -> Program {
    let mut rules = Vec::new();
    consistency(&d.fluents, 0..horizon + 1, &mut rules);
    if with_actions {
        consistency(&d.actions, 0..horizon, &mut rules);
    }
    Program::new(rules)
}

/// The five rule groups of the original translation.
pub fn translate_lp_groups(d: &ActionDescription, horizon: usize) -> Result<Vec<Program>, ClangError> {
    check_horizon(horizon)?;
    let g1 = lp_consistency(d, horizon, true);
    let mut g2 = Vec::new();
    for law in &d.statics {
        for t in 0..=horizon {
            let body = law.if_part.iter().map(|l| BodyElem::neg(over(l, t))).collect();
            g2.push(head_rule(&law.head, t, body));
        }
    }
    let mut g3 = Vec::new();
    for law in &d.dynamics {
        for t in 0..horizon {
            let mut body: Vec<BodyElem> = law.if_part.iter().map(|l| BodyElem::neg(over(l, t + 1))).collect();
            body.extend(law.after.iter().map(|l| BodyElem::pos(hat(l, t))));
            g3.push(head_rule(&law.head, t + 1, body));
        }
    }
    let mut g4 = Vec::new();
    for f in &d.fluents {
        let (a, b) = (timed(f, 0), timed(&bar(f), 0));
        g4.push(Rule::new(Head::Disjunction(vec![b.clone()]), vec![BodyElem::neg(a.clone())]));
        g4.push(Rule::new(Head::Disjunction(vec![a]), vec![BodyElem::neg(b)]));
    }
    let mut g5 = Vec::new();
    for act in &d.actions {
        for t in 0..horizon {
            let (a, b) = (timed(act, t), timed(&bar(act), t));
            g5.push(Rule::new(Head::Disjunction(vec![b.clone()]), vec![BodyElem::neg(a.clone())]));
            g5.push(Rule::new(Head::Disjunction(vec![a]), vec![BodyElem::neg(b)]));
        }
    }
    Ok(vec![g1, Program::new(g2), Program::new(g3), Program::new(g4), Program::new(g5)])
}

/// Rule `h :- not not b1, ..., rest`, written as a choice rule when `h` is
/// itself among the doubly negated atoms.
fn simp_rule(head: &LawHead, t: usize, doubly: Vec<Atom>, rest: Vec<BodyElem>) -> Rule {
    let head_atom = match head {
        LawHead::Lit(l) => Some(hat(l, t)),
        LawHead::Bottom => None,
    };
    let mut doubly = doubly;
    let choice = head_atom.as_ref().and_then(|h| doubly.iter().position(|a| a == h));
    if let Some(i) = choice {
        doubly.remove(i);
    }
    let mut body: Vec<BodyElem> = doubly.into_iter().map(|a| BodyElem::Lit(Literal::negneg(a))).collect();
    body.extend(rest);
    match (choice, head_atom) {
        (Some(_), Some(h)) => Rule::new(Head::Choice(h), body),
        _ => head_rule(head, t, body),
    }
}

/// The five rule groups of the translation with choice rules.
pub fn translate_simp_groups(d: &ActionDescription, horizon: usize) -> Result<Vec<Program>, ClangError> {
    check_horizon(horizon)?;
    let g1 = lp_consistency(d, horizon, false);
    let mut g2 = Vec::new();
    for law in &d.statics {
        for t in 0..=horizon {
            g2.push(simp_rule(&law.head, t, law.if_part.iter().map(|l| hat(l, t)).collect(), Vec::new()));
        }
    }
    let mut g3 = Vec::new();
    for law in &d.dynamics {
        for t in 0..horizon {
            let rest = law
                .after
                .iter()
                .map(|l| {
                    if !l.positive && d.actions.contains(&l.name) {
                        BodyElem::neg(timed(&l.name, t))
                    } else {
                        BodyElem::pos(hat(l, t))
                    }
                })
                .collect();
            g3.push(simp_rule(&law.head, t + 1, law.if_part.iter().map(|l| hat(l, t + 1)).collect(), rest));
        }
    }
    let mut g4 = Vec::new();
    for f in &d.fluents {
        g4.push(Rule::new(Head::Choice(timed(&bar(f), 0)), Vec::new()));
        g4.push(Rule::new(Head::Choice(timed(f, 0)), Vec::new()));
    }
    let mut g5 = Vec::new();
    for act in &d.actions {
        for t in 0..horizon {
            g5.push(Rule::new(Head::Choice(timed(act, t)), Vec::new()));
        }
    }
    Ok(vec![g1, Program::new(g2), Program::new(g3), Program::new(g4), Program::new(g5)])
}

fn union_all(groups: Vec<Program>) -> Program {
    Program::new(groups.into_iter().flat_map(|g| g.rules).collect())
}

pub fn translate_lp(d: &ActionDescription, horizon: usize) -> Result<Program, ClangError> {
    Ok(union_all(translate_lp_groups(d, horizon)?))
}

pub fn translate_simp(d: &ActionDescription, horizon: usize) -> Result<Program, ClangError> {
    Ok(union_all(translate_simp_groups(d, horizon)?))
}

/// The atom set encoding a path.
pub fn path_encoding(d: &ActionDescription, ts: &TransitionSystem, path: &Path) -> Interpretation {
    let mut out = Interpretation::new();
    for (t, &s) in path.states.iter().enumerate() {
        for (n, &v) in d.fluents.iter().zip(&ts.states[s]) {
            out.insert(hat(&CLiteral::new(n.clone(), v), t));
        }
    }
    for (t, a) in path.actions.iter().enumerate() {
        for (n, &v) in d.actions.iter().zip(a) {
            out.insert(hat(&CLiteral::new(n.clone(), v), t));
        }
    }
    out
}

/// Adds `a__bar(t)` for every action atom `a(t)` missing from `x`.
pub fn complete_actions(d: &ActionDescription, horizon: usize, x: &Interpretation) -> Interpretation {
    let mut out = x.clone();
    for a in &d.actions {
        for t in 0..horizon {
            if !x.contains(&timed(a, t)) {
                out.insert(timed(&bar(a), t));
            }
        }
    }
    out
}

/// Reads a path back from an encoding, if it is one.
pub fn decode(d: &ActionDescription, ts: &TransitionSystem, horizon: usize, x: &Interpretation) -> Option<Path> {
    let value = |name: &str, t: usize| match (x.contains(&timed(name, t)), x.contains(&timed(&bar(name), t))) {
        (true, false) => Some(true),
        (false, true) => Some(false),
        _ => None,
    };
    let mut states = Vec::new();
    for t in 0..=horizon {
        let s: Option<Assignment> = d.fluents.iter().map(|f| value(f, t)).collect();
        states.push(ts.states.iter().position(|st| Some(st) == s.as_ref())?);
    }
    let mut actions = Vec::new();
    for t in 0..horizon {
        actions.push(d.actions.iter().map(|a| value(a, t)).collect::<Option<Assignment>>()?);
    }
    let p = Path { states, actions };
    (path_encoding(d, ts, &p) == *x).then_some(p)
}

/// Outcome of comparing the answer sets of a translation with the paths of
/// the transition system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathCorrespondence {
    pub holds: bool,
    pub answer_sets: usize,
    pub paths: usize,
    pub problem: Option<String>,
}

fn correspondence(
    answers: Vec<Interpretation>,
    encodings: BTreeSet<Interpretation>,
    map: impl Fn(&Interpretation) -> Interpretation,
) -> PathCorrespondence {
    let n = answers.len();
    let mapped: BTreeSet<Interpretation> = answers.iter().map(&map).collect();
    let mut problem = None;
    if let Some(x) = answers.iter().find(|x| !encodings.contains(&map(x))) {
        problem = Some(format!("answer set {} encodes no path", show_set(x)));
    } else if let Some(e) = encodings.iter().find(|e| !mapped.contains(*e)) {
        problem = Some(format!("path {} has no answer set", show_set(e)));
    } else if mapped.len() != n {
        problem = Some("two answer sets encode the same path".into());
    }
    PathCorrespondence { holds: problem.is_none(), answer_sets: n, paths: encodings.len(), problem }
}

fn encodings(d: &ActionDescription, horizon: usize, cap: usize) -> Result<BTreeSet<Interpretation>, ClangError> {
    let ts = d.transition_system(cap)?;
    Ok(ts.paths(horizon).iter().map(|p| path_encoding(d, &ts, p)).collect())
}

/// Answer sets of the original translation against path encodings.
pub fn check_lp_paths(d: &ActionDescription, horizon: usize, opts: &SolveOptions) -> Result<PathCorrespondence, ClangError> {
    let answers = answer_sets_of(&translate_lp(d, horizon)?, &GroundOptions::default(), opts)?;
    Ok(correspondence(answers, encodings(d, horizon, opts.cap)?, |x| x.clone()))
}

/// Answer sets of the choice translation, completed with action complements,
/// against path encodings.
pub fn check_simp_paths(d: &ActionDescription, horizon: usize, opts: &SolveOptions) -> Result<PathCorrespondence, ClangError> {
    let answers = answer_sets_of(&translate_simp(d, horizon)?, &GroundOptions::default(), opts)?;
    Ok(correspondence(answers, encodings(d, horizon, opts.cap)?, |x| complete_actions(d, horizon, x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_program;

    const WATER: &str = include_str!("../data/water.act");

    fn water() -> ActionDescription {
        parse_action_description(WATER).unwrap()
    }

    #[test]
    fn water_has_six_laws() {
        let d = water();
        assert_eq!(d.statics.len() + d.dynamics.len(), 6);
        let shown: Vec<String> = d.dynamics.iter().map(|l| l.to_string()).collect();
        assert_eq!(
            shown,
            vec![
                "caused inWater if top after putInWater.",
                "caused inWater if inWater after inWater.",
                "caused -inWater if -inWater after -inWater.",
                "caused wet if wet after wet.",
                "caused -wet if -wet after -wet.",
            ]
        );
        assert_eq!(d.statics[0].to_string(), "caused wet if inWater.");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_action_description("fluents: p, p."), Err(ClangError::Duplicate(_))));
        assert!(matches!(parse_action_description("fluents: p. actions: p."), Err(ClangError::Duplicate(_))));
        assert!(matches!(parse_action_description("fluents: p. caused q."), Err(ClangError::Undeclared(_))));
        assert!(matches!(
            parse_action_description("fluents: p. actions: a. caused a if p."),
            Err(ClangError::FluentExpected(_))
        ));
        assert!(matches!(parse_action_description("fluents: p.\ncaused p if"), Err(ClangError::Parse { line: 2, .. })));
        let d = parse_action_description("fluents: p. caused bot if p, -p.").unwrap();
        assert_eq!(d.statics[0].head, LawHead::Bottom);
        assert_eq!(d.statics[0].if_part.len(), 2);
    }

    #[test]
    fn water_states_and_edges() {
        let d = water();
        let ts = d.transition_system(16).unwrap();
        let shown: Vec<String> = ts.states.iter().map(|s| d.show_state(s)).collect();
        assert_eq!(shown, vec!["-inWater -wet", "-inWater wet", "inWater wet"]);
        let edges: Vec<(usize, bool, usize)> = ts.edges.iter().map(|e| (e.from, e.action[0], e.to)).collect();
        assert_eq!(edges, vec![(0, false, 0), (0, true, 2), (1, false, 1), (1, true, 2), (2, false, 2), (2, true, 2)]);
        assert_eq!(ts.paths(1).len(), 6);
    }

    #[test]
    fn caused_sets() {
        let d = water();
        let lit = |n: &str, v| LawHead::Lit(CLiteral::new(n, v));
        let (s0, s2) = ([false, false], [true, true]);
        assert_eq!(d.caused_literals(&s0, &[true], &s2), [lit("inWater", true), lit("wet", true)].into());
        assert_eq!(d.caused_literals(&s2, &[false], &s2), [lit("inWater", true), lit("wet", true)].into());
        assert_eq!(d.caused_literals(&s0, &[false], &s2), [lit("wet", true)].into());
        assert!(!d.causally_explained(&s0, &[false], &s2));
    }

    #[test]
    fn static_bottom_removes_states() {
        let d = parse_action_description("fluents: p, q. caused bot if p.").unwrap();
        let states = d.states(16).unwrap();
        assert_eq!(states.len(), 2);
        assert!(states.iter().all(|s| !s[0]));
        let one = parse_action_description("fluents: p.").unwrap();
        assert_eq!(one.states(16).unwrap().len(), 2);
        assert!(matches!(one.states(0), Err(ClangError::CapExceeded { .. })));
    }

    #[test]
    fn empty_action_set() {
        let d = parse_action_description("fluents: p. inertial p, -p.").unwrap();
        let ts = d.transition_system(16).unwrap();
        assert_eq!(ts.edges.len(), 2);
        assert!(ts.edges.iter().all(|e| e.from == e.to && e.action.is_empty()));
    }

    #[test]
    fn lp_listing() {
        let g = translate_lp_groups(&water(), 1).unwrap();
        assert_eq!(g[1].rules[0], parse_program("wet(0) :- not inWater__bar(0).").unwrap().rules[0]);
        assert!(g[2].rules.contains(&parse_program("inWater(1) :- not inWater__bar(1), inWater(0).").unwrap().rules[0]));
        assert!(g[2].rules.contains(&parse_program("inWater(1) :- putInWater(0).").unwrap().rules[0]));
        assert!(g[0].rules.contains(&parse_program(":- putInWater(0), putInWater__bar(0).").unwrap().rules[0]));
        assert_eq!(g[4], parse_program("putInWater__bar(0) :- not putInWater(0). putInWater(0) :- not putInWater__bar(0).").unwrap());
        let bare = translate_lp_groups(&parse_action_description("fluents: p.").unwrap(), 1).unwrap();
        let sizes: Vec<usize> = bare.iter().map(|p| p.rules.len()).collect();
        assert_eq!(sizes, vec![4, 0, 0, 2, 0]);
    }

    #[test]
    fn simp_listing() {
        let g = translate_simp_groups(&water(), 1).unwrap();
        assert_eq!(g[1].rules[0], parse_program("wet(0) :- not not inWater(0).").unwrap().rules[0]);
        assert_eq!(
            g[2],
            parse_program(
                "inWater(1) :- putInWater(0). {inWater(1)} :- inWater(0). {inWater__bar(1)} :- inWater__bar(0). \
                 {wet(1)} :- wet(0). {wet__bar(1)} :- wet__bar(0)."
            )
            .unwrap()
        );
        assert_eq!(g[3], parse_program("{inWater__bar(0)}. {inWater(0)}. {wet__bar(0)}. {wet(0)}.").unwrap());
        assert_eq!(g[4], parse_program("{putInWater(0)}.").unwrap());
        assert_eq!(translate_simp(&water(), 1).unwrap().rules.len(), 20);
        assert!(translate_simp(&water(), 0).is_err());
    }

    #[test]
    fn negative_action_in_after_part() {
        let d = parse_action_description("fluents: p. actions: a. caused p after -a.").unwrap();
        let g = translate_simp_groups(&d, 1).unwrap();
        assert_eq!(g[2].rules[0], parse_program("p(1) :- not a(0).").unwrap().rules[0]);
        let l = translate_lp_groups(&d, 1).unwrap();
        assert_eq!(l[2].rules[0], parse_program("p(1) :- a__bar(0).").unwrap().rules[0]);
    }

    #[test]
    fn water_translations_match_paths() {
        let d = water();
        let opts = SolveOptions::default();
        let lp = check_lp_paths(&d, 1, &opts).unwrap();
        assert!(lp.holds, "{lp:?}");
        assert_eq!(lp.answer_sets, 6);
        let simp = check_simp_paths(&d, 1, &opts).unwrap();
        assert!(simp.holds, "{simp:?}");
    }

    #[test]
    fn decoding_roundtrip() {
        let d = water();
        let ts = d.transition_system(16).unwrap();
        for p in ts.paths(2) {
            assert_eq!(decode(&d, &ts, 2, &path_encoding(&d, &ts, &p)), Some(p));
        }
    }

    #[test]
    fn json_dump() {
        let ts = water().transition_system(16).unwrap();
        let v = ts.to_json();
        assert_eq!(v["states"][0], serde_json::json!(["-inWater", "-wet"]));
        assert_eq!(v["edges"].as_array().unwrap().len(), 6);
    }
}
