//! Formula translation, Clark normal form, completion and the predicate
//! dependency graph of a program.

use aspforge::depgraph::program_graph;
use aspforge::fol::{clark_normal_form, completion, fol_of_program};
use aspforge::parser::parse_program;

fn main() {
    let p = parse_program("p(X) :- q(X), not r(X).\np(a).\nq(X) :- p(X).\nr(b).\n").unwrap();
    println!("formula:    {}", fol_of_program(&p));
    let preds = p.predicates();
    let cnf = clark_normal_form(&p, &preds).expect("non-disjunctive");
    println!("normal:     {cnf}");
    println!("completion: {}", completion(&cnf).unwrap());
    let g = program_graph(&p);
    println!("sccs: {:?}", g.sccs());
    print!("{}", g.to_dot());
}
