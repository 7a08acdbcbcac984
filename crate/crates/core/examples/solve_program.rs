//! Answer sets of the sample disjunctive program, checked against the
//! reduct definition one candidate at a time.

use aspforge::corpus::pisamp;
use aspforge::fol::fol_of_program;
use aspforge::ground::GroundOptions;
use aspforge::semantics::{answer_sets_of, is_answer_set_by_reduct, show_set, SolveOptions};

fn main() {
    let p = pisamp();
    print!("{p}");
    let sets = answer_sets_of(&p, &GroundOptions::default(), &SolveOptions::default()).expect("small program");
    let f = fol_of_program(&p);
    for x in &sets {
        println!("{} reduct check: {}", show_set(x), is_answer_set_by_reduct(&f, x));
    }
    println!("{} answer sets", sets.len());
}
