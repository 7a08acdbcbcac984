//! Answer sets, reducts and here-and-there models of ground theories.
//!
//! The oracle grounds, bounds the search space by a sound possible/certain
//! atom analysis, enumerates classical models inside the bounds and keeps
//! those that are minimal models of their own reduct.

mod engine;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::ast::{Atom, BodyElem, Head, Polarity, Program, Term};
use crate::fol::Formula;
use crate::ground::{ground_jointly, GroundError, GroundOptions, GroundTheory};

use engine::{Node, Tri};

pub type Interpretation = BTreeSet<Atom>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct HtInterpretation {
    pub here: Interpretation,
    pub there: Interpretation,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{free} undetermined atoms exceed the cap of {cap}")]
    CapExceeded { free: usize, cap: usize },
    #[error(transparent)]
    Ground(#[from] GroundError),
    #[error("not a traditional ground program: {0}")]
    NotTraditional(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveOptions {
    /// Maximal number of atoms left undetermined by the bounds analysis.
    pub cap: usize,
    /// Worker threads for candidate enumeration; 1 runs inline.
    pub workers: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { cap: 16, workers: 1 }
    }
}

struct Compiled {
    atoms: Vec<Atom>,
    nodes: Vec<Node>,
}

fn compile_all(atoms: &[Atom], formulas: &[Formula]) -> Compiled {
    let index: HashMap<Atom, usize> = atoms.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
    Compiled { atoms: atoms.to_vec(), nodes: formulas.iter().map(|f| engine::compile(f, &index)).collect() }
}

fn to_set(atoms: &[Atom], x: &[bool]) -> Interpretation {
    atoms.iter().zip(x).filter(|(_, &b)| b).map(|(a, _)| a.clone()).collect()
}

fn to_mask(atoms: &[Atom], x: &Interpretation) -> Vec<bool> {
    atoms.iter().map(|a| x.contains(a)).collect()
}

/// Answer sets of a ground theory, ordered by atom-set bitmask.
pub fn answer_sets(theory: &GroundTheory, opts: &SolveOptions) -> Result<Vec<Interpretation>, OracleError> {
    let c = compile_all(&theory.atoms, &theory.formulas);
    let n = c.atoms.len();
    let b = engine::bounds(&c.nodes, n);
    if b.inconsistent {
        return Ok(Vec::new());
    }
    let free: Vec<usize> = (0..n).filter(|&i| b.possible[i] && !b.certain[i]).collect();
    if free.len() > opts.cap {
        return Err(OracleError::CapExceeded { free: free.len(), cap: opts.cap });
    }
    let base: Vec<Tri> = (0..n)
        .map(|i| if b.certain[i] { Tri::T } else if b.possible[i] { Tri::U } else { Tri::F })
        .collect();
    // Formulas already decided by the bounds never prune the classical search.
    let mut classical = Vec::new();
    for f in &c.nodes {
        match f.kleene(&base) {
            Tri::F => return Ok(Vec::new()),
            Tri::T => {}
            Tri::U => classical.push(f.clone()),
        }
    }
    let cwatch = engine::watch_lists(&classical, n);
    let swatch = engine::watch_lists(&c.nodes, n);
    let split = if opts.workers > 1 { free.len().min((opts.workers * 4).ilog2() as usize + 1) } else { 0 };
    let run = |prefix: u64| -> Vec<Vec<bool>> {
        let mut v = base.clone();
        for (k, &a) in free[..split].iter().enumerate() {
            v[a] = engine::tri(prefix >> k & 1 == 1);
        }
        if classical.iter().any(|f| f.kleene(&v) == Tri::F) {
            return Vec::new();
        }
        let mut found = Vec::new();
        engine::enumerate_models(&classical, &cwatch, &free[split..], &mut v, &mut |x| {
            if !engine::has_smaller_model(&c.nodes, x, &swatch) {
                found.push(x.to_vec());
            }
        });
        found
    };
    let mut sets: Vec<Vec<bool>> = if split == 0 {
        run(0)
    } else {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.workers).build().expect("thread pool");
        pool.install(|| (0..1u64 << split).into_par_iter().flat_map_iter(run).collect())
    };
    sets.sort_by(|a, b| engine::mask_cmp(a, b));
    Ok(sets.iter().map(|x| to_set(&c.atoms, x)).collect())
}

/// Grounds and solves a program.
pub fn answer_sets_of(program: &Program, ground: &GroundOptions, opts: &SolveOptions) -> Result<Vec<Interpretation>, OracleError> {
    let theory = crate::ground::ground_theory(program, ground)?;
    answer_sets(&theory, opts)
}

/// Classical satisfaction of a ground formula.
pub fn satisfies(f: &Formula, x: &Interpretation) -> bool {
    match f {
        Formula::Bottom => false,
        Formula::Atom(Atom::Eq(l, r)) => l == r,
        Formula::Atom(Atom::Top) => true,
        Formula::Atom(a) => x.contains(a),
        Formula::And(fs) => fs.iter().all(|g| satisfies(g, x)),
        Formula::Or(fs) => fs.iter().any(|g| satisfies(g, x)),
        Formula::Implies(a, b) => !satisfies(a, x) || satisfies(b, x),
        Formula::Forall(..) | Formula::Exists(..) => panic!("satisfies expects a ground formula: {f}"),
    }
}

/// Here-and-there satisfaction of a ground formula; `here` must be a subset of `there`.
pub fn ht_satisfies(f: &Formula, here: &Interpretation, there: &Interpretation) -> bool {
    match f {
        Formula::Atom(a @ Atom::Pred { .. }) => here.contains(a),
        Formula::And(fs) => fs.iter().all(|g| ht_satisfies(g, here, there)),
        Formula::Or(fs) => fs.iter().any(|g| ht_satisfies(g, here, there)),
        Formula::Implies(a, b) => {
            (!ht_satisfies(a, here, there) || ht_satisfies(b, here, there)) && satisfies(f, there)
        }
        _ => satisfies(f, there),
    }
}

/// Replaces every maximal subformula not satisfied by `x` with `bot`.
pub fn reduct_general(f: &Formula, x: &Interpretation) -> Formula {
    if !satisfies(f, x) {
        return Formula::Bottom;
    }
    match f {
        Formula::And(fs) => Formula::And(fs.iter().map(|g| reduct_general(g, x)).collect()),
        Formula::Or(fs) => Formula::Or(fs.iter().map(|g| reduct_general(g, x)).collect()),
        Formula::Implies(a, b) => Formula::implies(reduct_general(a, x), reduct_general(b, x)),
        g => g.clone(),
    }
}

/// Whether `x` is a minimal model of its reduct, checked by enumerating subsets.
pub fn is_answer_set_by_reduct(f: &Formula, x: &Interpretation) -> bool {
    let red = reduct_general(f, x);
    if !satisfies(&red, x) {
        return false;
    }
    let members: Vec<&Atom> = x.iter().collect();
    for mask in 0u64..(1u64 << members.len()) - 1 {
        let y: Interpretation = members.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, a)| (*a).clone()).collect();
        if satisfies(&red, &y) {
            return false;
        }
    }
    true
}

/// Element of a basic rule body after the traditional reduct.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum BasicElem {
    Atom(Atom),
    Top,
    Bottom,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasicRule {
    pub head: Option<Atom>,
    pub body: Vec<BasicElem>,
}

/// Traditional reduct: `not a` and `not not a` become constants according to `x`.
pub fn reduct_traditional(program: &Program, x: &Interpretation) -> Result<Vec<BasicRule>, OracleError> {
    let mut out = Vec::new();
    for r in &program.rules {
        let head = match &r.head {
            Head::Disjunction(atoms) if atoms.len() <= 1 => atoms.first().cloned(),
            _ => return Err(OracleError::NotTraditional(r.to_string())),
        };
        let mut body = Vec::new();
        for e in &r.body {
            let l = match e {
                BodyElem::Lit(l) if matches!(l.atom, Atom::Pred { .. } | Atom::Top) && l.atom.is_ground() => l,
                _ => return Err(OracleError::NotTraditional(r.to_string())),
            };
            let holds = l.atom == Atom::Top || x.contains(&l.atom);
            let c = |b: bool| if b { BasicElem::Top } else { BasicElem::Bottom };
            body.push(match l.polarity {
                Polarity::Pos if l.atom == Atom::Top => BasicElem::Top,
                Polarity::Pos => BasicElem::Atom(l.atom.clone()),
                Polarity::Neg => c(!holds),
                Polarity::NegNeg => c(holds),
            });
        }
        if head.as_ref().is_some_and(|h| !h.is_ground()) {
            return Err(OracleError::NotTraditional(r.to_string()));
        }
        out.push(BasicRule { head, body });
    }
    Ok(out)
}

/// Least model of a basic program, `None` when a constraint fires.
pub fn least_model(rules: &[BasicRule]) -> Option<Interpretation> {
    let mut m = Interpretation::new();
    loop {
        let mut changed = false;
        for r in rules {
            let fires = r.body.iter().all(|e| match e {
                BasicElem::Atom(a) => m.contains(a),
                BasicElem::Top => true,
                BasicElem::Bottom => false,
            });
            if fires {
                match &r.head {
                    None => return None,
                    Some(h) => changed |= m.insert(h.clone()),
                }
            }
        }
        if !changed {
            return Some(m);
        }
    }
}

/// Answer sets of a ground traditional program via the traditional reduct.
pub fn answer_sets_traditional(program: &Program, cap: usize) -> Result<Vec<Interpretation>, OracleError> {
    let mut atoms = BTreeSet::new();
    for r in &program.rules {
        atoms.extend(r.head.atoms().iter().cloned());
        for e in &r.body {
            if let BodyElem::Lit(l) = e {
                if l.atom != Atom::Top {
                    atoms.insert(l.atom.clone());
                }
            }
        }
    }
    let atoms: Vec<Atom> = atoms.into_iter().collect();
    if atoms.len() > cap {
        return Err(OracleError::CapExceeded { free: atoms.len(), cap });
    }
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << atoms.len()) {
        let x: Interpretation = atoms.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, a)| a.clone()).collect();
        if least_model(&reduct_traditional(program, &x)?).as_ref() == Some(&x) {
            out.push(x);
        }
    }
    Ok(out)
}

/// All here-and-there models of a ground formula over its own atoms.
pub fn ht_models(f: &Formula, cap: usize) -> Result<Vec<HtInterpretation>, OracleError> {
    let atoms: Vec<Atom> = f.atoms().into_iter().collect();
    if atoms.len() > cap {
        return Err(OracleError::CapExceeded { free: atoms.len(), cap });
    }
    let c = compile_all(&atoms, std::slice::from_ref(f));
    Ok(engine::ht_pairs(&c.nodes, atoms.len())
        .into_iter()
        .map(|(h, t)| HtInterpretation { here: to_set(&atoms, &h), there: to_set(&atoms, &t) })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrongEquivalence {
    pub equivalent: bool,
    /// A pair satisfying exactly one side, and that side.
    pub witness: Option<(Side, HtInterpretation)>,
    pub universe: Vec<Term>,
    pub depth: usize,
}

/// Compares the here-and-there models of two ground conjunct lists,
/// component by component of the shared-atom graph.
pub fn strongly_equivalent_ground(f: &[Formula], g: &[Formula], cap: usize) -> Result<StrongEquivalence, OracleError> {
    let atoms: Vec<Atom> = f.iter().chain(g).flat_map(|x| x.atoms()).collect::<BTreeSet<_>>().into_iter().collect();
    let c = compile_all(&atoms, &[f, g].concat());
    let n = atoms.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    let mut node_atoms = Vec::new();
    for node in &c.nodes {
        let mut a = Vec::new();
        node.atoms(&mut a);
        for w in a.windows(2) {
            let (x, y) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[x] = y;
        }
        node_atoms.push(a);
    }
    let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        comps.entry(r).or_default().push(i);
    }
    let comp_of: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    let mut unsat = [false, false];
    for (side, range) in [(0, 0..f.len()), (1, f.len()..f.len() + g.len())] {
        for k in range {
            if node_atoms[k].is_empty() && !c.nodes[k].eval(&[]) {
                unsat[side] = true;
            }
        }
    }
    // Per component: local formulas of each side and one model of each.
    let mut per = Vec::new();
    for (root, members) in &comps {
        if members.len() > cap {
            return Err(OracleError::CapExceeded { free: members.len(), cap });
        }
        let local: HashMap<usize, usize> = members.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let mut sides = [Vec::new(), Vec::new()];
        for (k, node) in c.nodes.iter().enumerate() {
            if node_atoms[k].first().is_some_and(|&a| comp_of[a] == *root) {
                sides[usize::from(k >= f.len())].push(relabel(node, &local));
            }
        }
        let mf = engine::first_model(&sides[0], members.len());
        let mg = engine::first_model(&sides[1], members.len());
        unsat[0] |= mf.is_none();
        unsat[1] |= mg.is_none();
        per.push((members.clone(), sides, [mf, mg]));
    }
    let lift = |choice: &[(&Vec<usize>, Vec<bool>, Vec<bool>)]| {
        let mut h = Interpretation::new();
        let mut t = Interpretation::new();
        for (members, hl, tl) in choice {
            for (k, &i) in members.iter().enumerate() {
                if hl[k] {
                    h.insert(atoms[i].clone());
                }
                if tl[k] {
                    t.insert(atoms[i].clone());
                }
            }
        }
        HtInterpretation { here: h, there: t }
    };
    let verdict = |equivalent, witness| StrongEquivalence { equivalent, witness, universe: Vec::new(), depth: 0 };
    // Total models (T, T) of one side in every component but `skip`.
    let fill = |side: usize, skip: Option<(usize, Vec<bool>, Vec<bool>)>| {
        let choice: Vec<_> = per
            .iter()
            .enumerate()
            .map(|(j, (m, _, models))| match &skip {
                Some((idx, h, t)) if *idx == j => (m, h.clone(), t.clone()),
                _ => {
                    let t = models[side].clone().expect("component model");
                    (m, t.clone(), t)
                }
            })
            .collect();
        lift(&choice)
    };
    match unsat {
        [true, true] => return Ok(verdict(true, None)),
        [false, true] => return Ok(verdict(false, Some((Side::Left, fill(0, None))))),
        [true, false] => return Ok(verdict(false, Some((Side::Right, fill(1, None))))),
        _ => {}
    }
    for (idx, (members, sides, _)) in per.iter().enumerate() {
        if let Some((is_left, h, t)) = engine::ht_difference(&sides[0], &sides[1], members.len()) {
            let side = usize::from(!is_left);
            let s = if is_left { Side::Left } else { Side::Right };
            return Ok(verdict(false, Some((s, fill(side, Some((idx, h, t)))))));
        }
    }
    Ok(verdict(true, None))
}

fn relabel(n: &Node, map: &HashMap<usize, usize>) -> Node {
    match n {
        Node::Atom(i) => Node::Atom(map[i]),
        Node::And(ns) => Node::And(ns.iter().map(|m| relabel(m, map)).collect()),
        Node::Or(ns) => Node::Or(ns.iter().map(|m| relabel(m, map)).collect()),
        Node::Imp(a, b) => Node::Imp(Box::new(relabel(a, map)), Box::new(relabel(b, map))),
        Node::Bot => Node::Bot,
        Node::Top => Node::Top,
    }
}

/// Strong equivalence of two programs after grounding over their joint universe.
pub fn strongly_equivalent(p1: &Program, p2: &Program, ground: &GroundOptions, cap: usize) -> Result<StrongEquivalence, OracleError> {
    let ts = ground_jointly(&[p1, p2], ground)?;
    let mut v = strongly_equivalent_ground(&ts[0].formulas, &ts[1].formulas, cap)?;
    v.universe = ts[0].universe.clone();
    v.depth = ground.depth;
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnswerSetComparison {
    pub same: bool,
    /// An answer set of exactly one side, and that side.
    pub witness: Option<(Side, Interpretation)>,
    pub left: Vec<Interpretation>,
    pub right: Vec<Interpretation>,
    pub universe: Vec<Term>,
    pub depth: usize,
}

/// Compares answer sets of two programs grounded over their joint universe.
pub fn same_answer_sets(p1: &Program, p2: &Program, ground: &GroundOptions, opts: &SolveOptions) -> Result<AnswerSetComparison, OracleError> {
    let ts = ground_jointly(&[p1, p2], ground)?;
    let left = answer_sets(&ts[0], opts)?;
    let right = answer_sets(&ts[1], opts)?;
    let l: BTreeSet<_> = left.iter().collect();
    let r: BTreeSet<_> = right.iter().collect();
    let witness = match (l.difference(&r).next(), r.difference(&l).next()) {
        (Some(x), _) => Some((Side::Left, (*x).clone())),
        (None, Some(x)) => Some((Side::Right, (*x).clone())),
        _ => None,
    };
    Ok(AnswerSetComparison { same: witness.is_none(), witness, left, right, universe: ts[0].universe.clone(), depth: ground.depth })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConservativeReport {
    pub holds: bool,
    /// Pairs of an extended answer set and its projection.
    pub mapping: Vec<(Interpretation, Interpretation)>,
    pub problem: Option<String>,
    pub universe: Vec<Term>,
    pub depth: usize,
}

/// Whether projecting answer sets of `ext` through `keep` is a bijection
/// onto the answer sets of `base`.
pub fn projection_bijection(
    ext: &Program,
    base: &Program,
    keep: &dyn Fn(&Atom) -> bool,
    ground: &GroundOptions,
    opts: &SolveOptions,
) -> Result<ConservativeReport, OracleError> {
    let cmp = same_answer_sets_sets(ext, base, ground, opts)?;
    let (ext_sets, base_sets, universe) = cmp;
    let mut mapping = Vec::new();
    let mut images = BTreeSet::new();
    let mut problem = None;
    for x in &ext_sets {
        let y: Interpretation = x.iter().filter(|a| keep(a)).cloned().collect();
        if !images.insert(y.clone()) && problem.is_none() {
            problem = Some(format!("two answer sets project to {}", show_set(&y)));
        }
        mapping.push((x.clone(), y));
    }
    let base_set: BTreeSet<Interpretation> = base_sets.into_iter().collect();
    if problem.is_none() {
        if let Some(y) = images.difference(&base_set).next() {
            problem = Some(format!("projection {} is not an answer set of the original", show_set(y)));
        } else if let Some(y) = base_set.difference(&images).next() {
            problem = Some(format!("answer set {} of the original has no preimage", show_set(y)));
        }
    }
    Ok(ConservativeReport { holds: problem.is_none(), mapping, problem, universe, depth: ground.depth })
}

fn same_answer_sets_sets(
    p1: &Program,
    p2: &Program,
    ground: &GroundOptions,
    opts: &SolveOptions,
) -> Result<(Vec<Interpretation>, Vec<Interpretation>, Vec<Term>), OracleError> {
    let ts = ground_jointly(&[p1, p2], ground)?;
    Ok((answer_sets(&ts[0], opts)?, answer_sets(&ts[1], opts)?, ts[0].universe.clone()))
}

/// Conservative extension check: projection onto the predicates of `p`.
pub fn conservative_extension_check(
    pext: &Program,
    p: &Program,
    ground: &GroundOptions,
    opts: &SolveOptions,
) -> Result<ConservativeReport, OracleError> {
    let preds = p.signature().predicate_names();
    projection_bijection(pext, p, &|a: &Atom| a.predicate().is_some_and(|q| preds.contains(q)), ground, opts)
}

pub fn show_set(x: &Interpretation) -> String {
    let parts: Vec<String> = x.iter().map(|a| a.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Classical evaluation under a bitmask, used by tests of the engine.
pub fn satisfies_mask(theory: &GroundTheory, x: &Interpretation) -> bool {
    let c = compile_all(&theory.atoms, &theory.formulas);
    let m = to_mask(&c.atoms, x);
    c.nodes.iter().all(|n| n.eval(&m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::parse_formula;
    use crate::parser::parse_program;

    fn sets(src: &str) -> Vec<String> {
        let p = parse_program(src).unwrap();
        answer_sets_of(&p, &GroundOptions::default(), &SolveOptions::default())
            .unwrap()
            .iter()
            .map(show_set)
            .collect()
    }

    fn theory(src: &str) -> GroundTheory {
        GroundTheory::from_formulas(vec![parse_formula(src).unwrap()])
    }

    #[test]
    fn even_loop() {
        assert_eq!(sets("p :- not q. q :- not p."), ["{p}", "{q}"]);
    }

    #[test]
    fn choice() {
        assert_eq!(sets("{p}."), ["{}", "{p}"]);
    }

    #[test]
    fn double_negation_is_not_a_loop_breaker() {
        let t = theory("~~p -> p");
        let got = answer_sets(&t, &SolveOptions::default()).unwrap();
        assert_eq!(got.len(), 2);
        assert_eq!(answer_sets(&theory("p -> p"), &SolveOptions::default()).unwrap(), vec![Interpretation::new()]);
    }

    #[test]
    fn disjunction_minimality() {
        assert_eq!(sets("a | b | c | d | e(1). a :- b. b :- a."), ["{a, b}", "{c}", "{d}", "{e(1)}"]);
    }

    #[test]
    fn nested_implication_theory() {
        // {p} is not minimal for its reduct bot -> p, and the empty set is no model.
        assert!(answer_sets(&theory("(p -> q) -> p"), &SolveOptions::default()).unwrap().is_empty());
    }

    #[test]
    fn constraint_kills() {
        assert!(sets("p. :- p.").is_empty());
        assert_eq!(sets("p :- not q. :- q."), ["{p}"]);
    }

    #[test]
    fn reduct_matches_engine() {
        for src in ["~~p -> p", "(p -> q) -> p", "p | q", "(~p -> q) & (~q -> p)", "~p | p", "(p <-> q) & (~~p -> p)"] {
            let t = theory(src);
            let f = t.conjunction();
            let engine = answer_sets(&t, &SolveOptions::default()).unwrap();
            let mut brute = Vec::new();
            let atoms: Vec<Atom> = f.atoms().into_iter().collect();
            for mask in 0u64..(1 << atoms.len()) {
                let x: Interpretation = atoms.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, a)| a.clone()).collect();
                if is_answer_set_by_reduct(&f, &x) {
                    brute.push(x);
                }
            }
            let a: BTreeSet<_> = engine.into_iter().collect();
            let b: BTreeSet<_> = brute.into_iter().collect();
            assert_eq!(a, b, "{src}");
        }
    }

    #[test]
    fn reduct_of_double_negation() {
        let f = parse_formula("~~p -> p").unwrap();
        let x: Interpretation = [Atom::prop("p")].into_iter().collect();
        assert_eq!(reduct_general(&f, &x), parse_formula("top -> p").unwrap());
        assert_eq!(reduct_general(&f, &Interpretation::new()), parse_formula("top").unwrap());
    }

    #[test]
    fn traditional_route() {
        let p = parse_program("p :- not q. q :- not p. r :- p, not not r.").unwrap();
        let trad = answer_sets_traditional(&p, 16).unwrap();
        let general = answer_sets_of(&p, &GroundOptions::default(), &SolveOptions::default()).unwrap();
        assert_eq!(trad.into_iter().collect::<BTreeSet<_>>(), general.into_iter().collect::<BTreeSet<_>>());
        assert!(reduct_traditional(&parse_program("{p}.").unwrap(), &Interpretation::new()).is_err());
    }

    #[test]
    fn strong_equivalence_demorgan_variants() {
        let yes = strongly_equivalent_ground(
            &[parse_formula("~(p & q)").unwrap()],
            &[parse_formula("~~p -> ~q").unwrap()],
            16,
        )
        .unwrap();
        assert!(yes.equivalent);
        let f = parse_formula("p | q").unwrap();
        let g = parse_formula("(~p -> q) & (~q -> p)").unwrap();
        let no = strongly_equivalent_ground(&[f.clone()], &[g.clone()], 16).unwrap();
        assert!(!no.equivalent);
        let (side, w) = no.witness.unwrap();
        let sat = |x: &Formula| ht_satisfies(x, &w.here, &w.there);
        assert_eq!(side == Side::Left, sat(&f) && !sat(&g));
        assert!(sat(&f) != sat(&g));
    }

    #[test]
    fn strong_equivalence_unsat_sides() {
        let both = strongly_equivalent_ground(&[Formula::Bottom], &[parse_formula("p & ~p").unwrap()], 16).unwrap();
        assert!(both.equivalent);
        let one = strongly_equivalent_ground(&[Formula::Bottom], &[parse_formula("p").unwrap()], 16).unwrap();
        assert!(!one.equivalent);
    }

    #[test]
    fn ht_model_count() {
        let ms = ht_models(&parse_formula("p | ~p").unwrap(), 8).unwrap();
        assert_eq!(ms.len(), 2);
        let ms = ht_models(&parse_formula("~~p -> p").unwrap(), 8).unwrap();
        assert_eq!(ms.len(), 2);
        let ms = ht_models(&parse_formula("p -> p").unwrap(), 8).unwrap();
        assert_eq!(ms.len(), 3);
    }

    #[test]
    fn parallel_matches_sequential() {
        let p = parse_program("{a}. {b}. {c}. {d}. {e}. :- a, b. f :- c, not d. g | h :- e.").unwrap();
        let t = crate::ground::ground_theory(&p, &GroundOptions::default()).unwrap();
        let seq = answer_sets(&t, &SolveOptions { cap: 16, workers: 1 }).unwrap();
        let par = answer_sets(&t, &SolveOptions { cap: 16, workers: 4 }).unwrap();
        assert_eq!(seq, par);
        assert!(!seq.is_empty());
    }

    #[test]
    fn cap_counts_free_atoms_only() {
        let p = parse_program("a. b :- a. c :- b. {d}. {e}.").unwrap();
        let t = crate::ground::ground_theory(&p, &GroundOptions::default()).unwrap();
        assert_eq!(answer_sets(&t, &SolveOptions { cap: 2, workers: 1 }).unwrap().len(), 4);
        assert!(matches!(
            answer_sets(&t, &SolveOptions { cap: 1, workers: 1 }),
            Err(OracleError::CapExceeded { free: 2, cap: 1 })
        ));
    }
}
