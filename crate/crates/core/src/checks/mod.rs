//! Reproducible check suites over the corpus: the planning claims, the
//! randomized property suites and the proof mutations.

pub mod claims;
pub mod mutations;
pub mod properties;

pub use claims::{default_instances, verify_claims, ClaimResult, ClaimStatus};
pub use mutations::{demorgan_mutations, run_mutations, Mutation, MutationOutcome};
pub use properties::{run_all, run_suite, Suite, SuiteReport, DEFAULT_CASES, DEFAULT_SEED};
