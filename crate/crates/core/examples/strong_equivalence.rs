//! Strong equivalence by here-and-there models, with a witness when it fails.

use aspforge::ground::GroundOptions;
use aspforge::parser::parse_program;
use aspforge::semantics::{same_answer_sets, show_set, strongly_equivalent, SolveOptions};

fn compare(left: &str, right: &str, ground: &GroundOptions) {
    let p1 = parse_program(left).unwrap();
    let p2 = parse_program(right).unwrap();
    let se = strongly_equivalent(&p1, &p2, ground, 16).expect("within cap");
    let same = same_answer_sets(&p1, &p2, ground, &SolveOptions::default()).expect("within cap");
    println!("{}  vs  {}", left.trim().replace('\n', " "), right.trim().replace('\n', " "));
    println!("  same answer sets: {}", same.same);
    match se.witness {
        None => println!("  strongly equivalent"),
        Some((side, w)) => {
            println!("  not strongly equivalent: ({}, {}) satisfies only the {side:?} side", show_set(&w.here), show_set(&w.there))
        }
    }
}

fn main() {
    let ground = GroundOptions::default();
    compare("p :- not q.\nq :- not p.\n", "p | q.\n", &ground);
    compare("p :- not not p.\n", "{p}.\n", &ground);
    let ground = GroundOptions { extra_constants: vec!["c".into(), "d".into()], ..GroundOptions::with_depth(0) };
    compare(
        ":- 2 <= #count{A : o(A,I)}, step(I).\n",
        ":- o(A,I), o(A2,I), step(I), A != A2.\n",
        &ground,
    );
}
