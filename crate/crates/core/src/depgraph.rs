//! Predicate dependency graphs of first-order formulas.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use crate::ast::{Atom, Program};
use crate::fol::{fol_of_program, Formula};

/// One occurrence of a predicate atom.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Occurrence {
    pub predicate: String,
    pub atom: Atom,
    /// Child indices from the root.
    pub path: Vec<usize>,
    /// Even number of enclosing antecedents.
    pub positive: bool,
    /// No enclosing antecedent.
    pub strictly_positive: bool,
    /// Inside the antecedent of some `F -> bot`.
    pub negated: bool,
}

pub fn classify_occurrences(f: &Formula) -> Vec<Occurrence> {
    fn go(f: &Formula, path: &mut Vec<usize>, depth: usize, negated: bool, out: &mut Vec<Occurrence>) {
        match f {
            Formula::Atom(a @ Atom::Pred { name, .. }) => out.push(Occurrence {
                predicate: name.clone(),
                atom: a.clone(),
                path: path.clone(),
                positive: depth % 2 == 0,
                strictly_positive: depth == 0,
                negated,
            }),
            Formula::And(fs) | Formula::Or(fs) => {
                for (i, g) in fs.iter().enumerate() {
                    path.push(i);
                    go(g, path, depth, negated, out);
                    path.pop();
                }
            }
            Formula::Implies(a, b) => {
                path.push(0);
                go(a, path, depth + 1, negated || **b == Formula::Bottom, out);
                path.pop();
                path.push(1);
                go(b, path, depth, negated, out);
                path.pop();
            }
            Formula::Forall(_, g) | Formula::Exists(_, g) => {
                path.push(0);
                go(g, path, depth, negated, out);
                path.pop();
            }
            _ => {}
        }
    }
    let mut out = Vec::new();
    go(f, &mut Vec::new(), 0, false, &mut out);
    out
}

/// A strictly positive occurrence of an implication `G -> H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FolRule {
    pub path: Vec<usize>,
    pub antecedent: Formula,
    pub consequent: Formula,
}

pub fn fol_rules(f: &Formula) -> Vec<FolRule> {
    fn go(f: &Formula, path: &mut Vec<usize>, out: &mut Vec<FolRule>) {
        match f {
            Formula::And(fs) | Formula::Or(fs) => {
                for (i, g) in fs.iter().enumerate() {
                    path.push(i);
                    go(g, path, out);
                    path.pop();
                }
            }
            Formula::Implies(a, b) => {
                out.push(FolRule { path: path.clone(), antecedent: (**a).clone(), consequent: (**b).clone() });
                path.push(1);
                go(b, path, out);
                path.pop();
            }
            Formula::Forall(_, g) | Formula::Exists(_, g) => {
                path.push(0);
                go(g, path, out);
                path.pop();
            }
            _ => {}
        }
    }
    let mut out = Vec::new();
    go(f, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DepGraph {
    pub vertices: Vec<String>,
    pub edges: BTreeSet<(String, String)>,
}

/// Edge `p -> q` when some rule `G -> H` has `p` strictly positive in `H`
/// and `q` positive and nonnegated in `G`.
pub fn dependency_graph(f: &Formula, preds: &[String]) -> DepGraph {
    let mut edges = BTreeSet::new();
    for rule in fol_rules(f) {
        let heads: BTreeSet<String> = classify_occurrences(&rule.consequent)
            .into_iter()
            .filter(|o| o.strictly_positive)
            .map(|o| o.predicate)
            .collect();
        if heads.is_empty() {
            continue;
        }
        let bodies: BTreeSet<String> = classify_occurrences(&rule.antecedent)
            .into_iter()
            .filter(|o| o.positive && !o.negated)
            .map(|o| o.predicate)
            .collect();
        for p in &heads {
            for q in &bodies {
                if preds.contains(p) && preds.contains(q) {
                    edges.insert((p.clone(), q.clone()));
                }
            }
        }
    }
    let mut vertices = preds.to_vec();
    vertices.sort();
    vertices.dedup();
    DepGraph { vertices, edges }
}

/// Dependency graph of a program over all of its predicates.
pub fn program_graph(program: &Program) -> DepGraph {
    dependency_graph(&fol_of_program(program), &program.predicates())
}

impl DepGraph {
    /// Strongly connected components, members sorted, components ordered by
    /// their smallest member.
    pub fn sccs(&self) -> Vec<Vec<String>> {
        let mut g: DiGraph<&str, ()> = DiGraph::new();
        let idx: BTreeMap<&str, _> = self.vertices.iter().map(|v| (v.as_str(), g.add_node(v.as_str()))).collect();
        for (p, q) in &self.edges {
            g.add_edge(idx[p.as_str()], idx[q.as_str()], ());
        }
        let mut comps: Vec<Vec<String>> = tarjan_scc(&g)
            .into_iter()
            .map(|c| {
                let mut names: Vec<String> = c.into_iter().map(|n| g[n].to_string()).collect();
                names.sort();
                names
            })
            .collect();
        comps.sort();
        comps
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph dependencies {\n");
        for v in &self.vertices {
            let _ = writeln!(s, "  \"{v}\";");
        }
        for (p, q) in &self.edges {
            let _ = writeln!(s, "  \"{p}\" -> \"{q}\";");
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::parse_formula;
    use crate::parser::parse_program;

    #[test]
    fn occurrence_classes() {
        let occ = classify_occurrences(&parse_formula("(p -> q) -> r").unwrap());
        let get = |n: &str| occ.iter().find(|o| o.predicate == n).unwrap();
        assert!(get("p").positive && !get("p").strictly_positive);
        assert!(!get("q").positive);
        assert!(get("r").strictly_positive);
        let neg = classify_occurrences(&parse_formula("~p").unwrap());
        assert!(neg[0].negated && !neg[0].positive);
        let dn = classify_occurrences(&parse_formula("~~p").unwrap());
        assert!(dn[0].negated && dn[0].positive);
    }

    #[test]
    fn negated_implication_is_a_single_rule() {
        let rules = fol_rules(&parse_formula("~(a -> b)").unwrap());
        assert_eq!(rules.len(), 1);
        assert_eq!(rules[0].antecedent, parse_formula("a -> b").unwrap());
        assert_eq!(rules[0].consequent, Formula::Bottom);
    }

    #[test]
    fn nested_rules_in_consequents() {
        let rules = fol_rules(&parse_formula("a -> (b -> c)").unwrap());
        assert_eq!(rules.len(), 2);
        let g = dependency_graph(&parse_formula("a -> (b -> c)").unwrap(), &["a".into(), "b".into(), "c".into()]);
        assert_eq!(
            g.edges,
            [("c".to_string(), "a".to_string()), ("c".to_string(), "b".to_string())].into_iter().collect()
        );
    }

    #[test]
    fn pisamp_components() {
        let p = parse_program("a | b | c | d | e(1). a :- b. b :- a.").unwrap();
        let g = program_graph(&p);
        assert_eq!(g.sccs(), vec![vec!["a", "b"], vec!["c"], vec!["d"], vec!["e"]]);
    }

    #[test]
    fn negative_and_double_negative_bodies_add_no_edges() {
        let p = parse_program("p :- not q. r :- not not r. {s} :- t.").unwrap();
        let g = program_graph(&p);
        assert_eq!(g.edges, [("s".to_string(), "t".to_string())].into_iter().collect());
    }

    #[test]
    fn aggregate_bodies_are_positive() {
        let p = parse_program("p(I) :- 1 <= #count{A : o(A,I)}. o(A,I) :- p(I), q(A).").unwrap();
        let g = program_graph(&p);
        assert_eq!(g.sccs()[0], vec!["o", "p"]);
    }

    #[test]
    fn dot_output() {
        let p = parse_program("a :- b.").unwrap();
        let dot = program_graph(&p).to_dot();
        assert!(dot.contains("\"a\" -> \"b\";"));
    }
}
