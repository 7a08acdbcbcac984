//! Herbrand universes and grounding of first-order formulas.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::ast::{Atom, Program, Signature, Term};
use crate::fol::{fol_of_program, Formula};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundError {
    #[error("the signature has no object constant")]
    NoObjectConstant,
    #[error("grounding produced {count} atoms, above the limit of {cap}")]
    AtomCapExceeded { count: usize, cap: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HerbrandUniverse {
    pub terms: Vec<Term>,
    pub depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroundOptions {
    /// Maximal nesting depth of function applications.
    pub depth: usize,
    /// Explosion guard on the number of distinct ground atoms.
    pub max_atoms: usize,
    /// Object constants added to the universe besides those of the program.
    pub extra_constants: Vec<String>,
}

impl Default for GroundOptions {
    fn default() -> Self {
        GroundOptions { depth: 1, max_atoms: 20_000, extra_constants: Vec::new() }
    }
}

impl GroundOptions {
    pub fn with_depth(depth: usize) -> Self {
        GroundOptions { depth, ..Default::default() }
    }
}

/// Ground formulas over a sorted atom set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroundTheory {
    pub atoms: Vec<Atom>,
    pub formulas: Vec<Formula>,
    pub universe: Vec<Term>,
    pub depth: usize,
}

impl GroundTheory {
    pub fn from_formulas(formulas: Vec<Formula>) -> GroundTheory {
        let atoms: BTreeSet<Atom> = formulas.iter().flat_map(|f| f.atoms()).collect();
        GroundTheory { atoms: atoms.into_iter().collect(), formulas, universe: Vec::new(), depth: 0 }
    }

    pub fn conjunction(&self) -> Formula {
        Formula::conj(self.formulas.clone())
    }
}

/// All ground terms of nesting depth at most `depth`, constants first.
pub fn herbrand_universe(sig: &Signature, depth: usize) -> Result<HerbrandUniverse, GroundError> {
    let constants = sig.object_constants();
    if constants.is_empty() {
        return Err(GroundError::NoObjectConstant);
    }
    let functions: Vec<(String, usize)> = sig.functions.iter().filter(|(_, n)| *n > 0).cloned().collect();
    let mut terms: Vec<Term> = constants.into_iter().map(Term::Const).collect();
    let mut seen: BTreeSet<Term> = terms.iter().cloned().collect();
    for _ in 0..depth {
        let previous = terms.clone();
        for (f, n) in &functions {
            for args in tuples(&previous, *n) {
                let t = Term::App(f.clone(), args);
                if seen.insert(t.clone()) {
                    terms.push(t);
                }
            }
        }
    }
    Ok(HerbrandUniverse { terms, depth })
}

/// Cartesian power in lexicographic order.
pub(crate) fn tuples<T: Clone>(items: &[T], n: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * items.len());
        for prefix in &out {
            for x in items {
                let mut v = prefix.clone();
                v.push(x.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Instantiates quantifiers over `universe`, evaluates ground equalities and
/// propagates `top`/`bot`.
pub fn ground_formula(f: &Formula, universe: &[Term]) -> Formula {
    ground_in(f, &BTreeMap::new(), universe).simplify()
}

fn ground_in(f: &Formula, env: &BTreeMap<String, Term>, universe: &[Term]) -> Formula {
    match f {
        Formula::Bottom => Formula::Bottom,
        Formula::Atom(a) => match a.substitute(env) {
            Atom::Eq(l, r) if l.is_ground() && r.is_ground() => {
                if l == r {
                    Formula::top()
                } else {
                    Formula::Bottom
                }
            }
            a => Formula::Atom(a),
        },
        Formula::And(fs) => Formula::And(fs.iter().map(|g| ground_in(g, env, universe).simplify()).collect()).simplify(),
        Formula::Or(fs) => Formula::Or(fs.iter().map(|g| ground_in(g, env, universe).simplify()).collect()).simplify(),
        Formula::Implies(a, b) => Formula::implies(ground_in(a, env, universe), ground_in(b, env, universe)).simplify(),
        Formula::Forall(vs, g) | Formula::Exists(vs, g) => {
            let mut parts = Vec::new();
            for tuple in tuples(universe, vs.len()) {
                let mut inner = env.clone();
                inner.extend(vs.iter().cloned().zip(tuple));
                parts.push(ground_in(g, &inner, universe).simplify());
            }
            if matches!(f, Formula::Forall(..)) {
                Formula::And(parts).simplify()
            } else {
                Formula::Or(parts).simplify()
            }
        }
    }
}

fn flatten_into(f: Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::And(fs) => fs.into_iter().for_each(|g| flatten_into(g, out)),
        f if f.is_top() => {}
        f => out.push(f),
    }
}

/// Grounds a program; one formula per ground rule instance.
pub fn ground_theory(program: &Program, opts: &GroundOptions) -> Result<GroundTheory, GroundError> {
    let mut sig = program.signature();
    for c in &opts.extra_constants {
        sig.functions.insert((c.clone(), 0));
    }
    ground_formulas_with(&[fol_of_program(program)], &sig, opts)
}

/// Grounds several programs over the universe of their joint signature.
pub fn ground_jointly(programs: &[&Program], opts: &GroundOptions) -> Result<Vec<GroundTheory>, GroundError> {
    let mut sig = Signature::default();
    for p in programs {
        sig.merge(&p.signature());
    }
    for c in &opts.extra_constants {
        sig.functions.insert((c.clone(), 0));
    }
    programs.iter().map(|p| ground_formulas_with(&[fol_of_program(p)], &sig, opts)).collect()
}

/// Grounds sentences over the universe of `sig`. Quantifier-free input
/// needs no object constant.
pub fn ground_formulas_with(
    formulas: &[Formula],
    sig: &Signature,
    opts: &GroundOptions,
) -> Result<GroundTheory, GroundError> {
    let needs_universe = formulas.iter().any(|f| {
        let mut q = false;
        f.visit(&mut |g| q |= matches!(g, Formula::Forall(..) | Formula::Exists(..)));
        q
    });
    let universe = match herbrand_universe(sig, opts.depth) {
        Ok(u) => u.terms,
        Err(e) if needs_universe => return Err(e),
        Err(_) => Vec::new(),
    };
    let mut out = Vec::new();
    for f in formulas {
        flatten_into(ground_formula(f, &universe), &mut out);
    }
    let atoms: BTreeSet<Atom> = out.iter().flat_map(|f| f.atoms()).collect();
    if atoms.len() > opts.max_atoms {
        return Err(GroundError::AtomCapExceeded { count: atoms.len(), cap: opts.max_atoms });
    }
    Ok(GroundTheory { atoms: atoms.into_iter().collect(), formulas: out, universe, depth: opts.depth })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::parse_formula;
    use crate::parser::parse_program;

    #[test]
    fn universe_with_binary_function() {
        let p = parse_program("p(on(b0,table)).").unwrap();
        let u = herbrand_universe(&p.signature(), 1).unwrap();
        let shown: Vec<String> = u.terms.iter().map(|t| t.to_string()).collect();
        assert_eq!(
            shown,
            ["b0", "table", "on(b0,b0)", "on(b0,table)", "on(table,b0)", "on(table,table)"]
        );
    }

    #[test]
    fn no_constants() {
        let p = parse_program("p(X) :- q(X).").unwrap();
        assert_eq!(herbrand_universe(&p.signature(), 1), Err(GroundError::NoObjectConstant));
        assert_eq!(ground_theory(&p, &GroundOptions::default()), Err(GroundError::NoObjectConstant));
        let prop = parse_program("p :- not q.").unwrap();
        assert_eq!(ground_theory(&prop, &GroundOptions::default()).unwrap().formulas.len(), 1);
    }

    #[test]
    fn facts_and_rules() {
        let p = parse_program("p(a). q(X) :- p(X).").unwrap();
        let g = ground_theory(&p, &GroundOptions::default()).unwrap();
        assert_eq!(g.formulas, vec![parse_formula("p(a)").unwrap(), parse_formula("p(a) -> q(a)").unwrap()]);
    }

    #[test]
    fn single_element_universe_kills_pair_count() {
        let p = parse_program(":- 2 <= #count{A : o(A)}, step(a1).").unwrap();
        let g = ground_theory(&p, &GroundOptions::default()).unwrap();
        assert!(g.formulas.is_empty());
    }

    #[test]
    fn atom_cap() {
        let p = parse_program("p(a). p(b). p(c). q(X,Y) :- p(X), p(Y).").unwrap();
        let opts = GroundOptions { max_atoms: 5, ..Default::default() };
        assert_eq!(ground_theory(&p, &opts), Err(GroundError::AtomCapExceeded { count: 12, cap: 5 }));
    }
}
