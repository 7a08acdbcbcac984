//! Transition system of the water domain and the path correspondence of
//! both logic-program translations.

use std::time::Instant;

use aspforge::clang::{check_lp_paths, check_simp_paths};
use aspforge::corpus::water;
use aspforge::semantics::SolveOptions;

fn main() {
    let d = water();
    let ts = d.transition_system(16).expect("small domain");
    print!("{ts}");
    let opts = SolveOptions { cap: 16, workers: 4 };
    for horizon in 1..=2 {
        let t = Instant::now();
        let lp = check_lp_paths(&d, horizon, &opts).expect("within cap");
        let simp = check_simp_paths(&d, horizon, &opts).expect("within cap");
        println!(
            "T={horizon}: {} paths, lp {} answer sets ({}), simp {} answer sets ({}) in {:.2?}",
            lp.paths,
            lp.answer_sets,
            if lp.holds { "match" } else { "mismatch" },
            simp.answer_sets,
            if simp.holds { "match" } else { "mismatch" },
            t.elapsed()
        );
    }
}
