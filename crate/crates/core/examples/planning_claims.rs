//! The planning-module rewrite claims checked on small instances.

use aspforge::checks::{default_instances, verify_claims, ClaimStatus};
use aspforge::semantics::SolveOptions;

fn main() {
    let opts = SolveOptions { cap: 20, workers: 4 };
    for r in verify_claims(&default_instances(), &opts) {
        let status = match &r.status {
            ClaimStatus::Holds => "holds".to_string(),
            ClaimStatus::Fails => "FAILS".to_string(),
            ClaimStatus::Withdrawn { counterexample: true } => {
                format!("withdrawn, refuted: {}", r.detail.as_deref().unwrap_or("-"))
            }
            ClaimStatus::Withdrawn { counterexample: false } => "withdrawn, no counterexample found".to_string(),
        };
        println!("claim {} k={} n={}: {} ({} checks, {} ms)", r.claim, r.instance.actions.len(), r.instance.horizon, status, r.checks.len(), r.millis);
    }
}
