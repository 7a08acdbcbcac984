//! Checks the bundled natural deduction proofs and shows how single-line
//! mutations are rejected.

use aspforge::checks::run_mutations;
use aspforge::ndproof::{check_proof, parse_proof, sequent_formula, ht_valid, CheckOptions, DEMORGAN_PROOF, LEMMA_NEGNEG_PROOF};

fn main() {
    for (name, src) in [("De Morgan", DEMORGAN_PROOF), ("double negation lemma", LEMMA_NEGNEG_PROOF)] {
        let proof = parse_proof(src).unwrap();
        let last = proof.last().unwrap();
        let f = sequent_formula(last);
        println!("{name}: {} ({} lines), HT-valid: {}", check_proof(&proof, &CheckOptions::default()), proof.lines.len(), ht_valid(&f, 16).unwrap());
    }
    for m in run_mutations() {
        println!("{:<36} {}", m.description, m.status);
    }
}
