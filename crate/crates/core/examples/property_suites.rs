//! Runs the randomized property suites with a fixed seed.

use aspforge::checks::{run_suite, Suite, DEFAULT_SEED};
use aspforge::semantics::SolveOptions;

fn main() {
    let cases: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200);
    let opts = SolveOptions::default();
    for suite in Suite::ALL {
        let r = run_suite(suite, cases, DEFAULT_SEED, &opts);
        println!("{:<18} {} cases, {} violations, {} ms", suite.name(), r.cases, r.violations, r.millis);
        if let Some(v) = r.first_violation {
            println!("  {v}");
        }
    }
}
