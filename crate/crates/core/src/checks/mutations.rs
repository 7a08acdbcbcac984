//! Single-line mutations of the bundled De Morgan proof. Each must be
//! rejected at the line it touches.

use serde::Serialize;

use crate::ndproof::{check_proof, parse_proof, CheckOptions, Proof, ProofStatus, RuleName, DEMORGAN_PROOF};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Change {
    Premises(Vec<usize>),
    Rule(RuleName),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mutation {
    pub label: usize,
    pub change: Change,
}

impl Mutation {
    pub fn apply(&self, proof: &Proof) -> Proof {
        let mut out = proof.clone();
        let line = out.line_mut(self.label).expect("mutated label exists");
        match &self.change {
            Change::Premises(p) => line.premises = p.clone(),
            Change::Rule(r) => line.rule = *r,
        }
        out
    }

    pub fn describe(&self, proof: &Proof) -> String {
        let line = proof.lines.iter().find(|l| l.label == self.label).expect("mutated label exists");
        let show = |p: &[usize]| p.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",");
        match &self.change {
            Change::Premises(p) => format!("line {}: premises {} -> {}", self.label, show(&line.premises), show(p)),
            Change::Rule(r) => format!("line {}: {} -> {}", self.label, line.rule.name(), r.name()),
        }
    }
}

/// Premise indices shifted by one, and rule names swapped for rules whose
/// premise shapes differ. `NegI`/`ImpI` and `NegE`/`ImpE` are not swapped:
/// with negation read as implication into `bot` the swapped lines stay valid.
pub fn demorgan_mutations() -> Vec<Mutation> {
    let p = |label, ps: &[usize]| Mutation { label, change: Change::Premises(ps.to_vec()) };
    let r = |label, rule| Mutation { label, change: Change::Rule(rule) };
    vec![
        p(5, &[2, 4]),
        p(6, &[2, 4]),
        p(7, &[5]),
        p(9, &[6, 8]),
        p(10, &[8]),
        p(11, &[9]),
        p(13, &[11]),
        p(14, &[1, 11, 12]),
        p(14, &[2, 11, 13]),
        p(15, &[13]),
        r(5, RuleName::OrI),
        r(7, RuleName::C),
        r(11, RuleName::AndE),
        r(14, RuleName::ImpE),
        r(15, RuleName::W),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MutationOutcome {
    pub description: String,
    pub expected_line: usize,
    pub status: ProofStatus,
}

impl MutationOutcome {
    pub fn caught(&self) -> bool {
        matches!(self.status, ProofStatus::Invalid { line, .. } if line == self.expected_line)
    }
}

pub fn run_mutations() -> Vec<MutationOutcome> {
    let proof = parse_proof(DEMORGAN_PROOF).expect("bundled proof parses");
    demorgan_mutations()
        .iter()
        .map(|m| MutationOutcome {
            description: m.describe(&proof),
            expected_line: m.label,
            status: check_proof(&m.apply(&proof), &CheckOptions::default()),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_mutation_is_caught_where_it_happens() {
        let outcomes = run_mutations();
        assert_eq!(outcomes.len(), 15);
        for o in &outcomes {
            assert!(o.caught(), "{} gave {}", o.description, o.status);
        }
    }

    #[test]
    fn negation_swaps_are_not_mutations() {
        let proof = parse_proof(DEMORGAN_PROOF).unwrap();
        let swap = Mutation { label: 7, change: Change::Rule(RuleName::ImpI) };
        assert!(check_proof(&swap.apply(&proof), &CheckOptions::default()).is_valid());
        assert_eq!(swap.describe(&proof), "line 7: NegI -> ImpI");
    }
}
