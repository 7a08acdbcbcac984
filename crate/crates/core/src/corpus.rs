//! The running examples: the two planning modules, small planning
//! instances, the shifting sample and the water domain.

use serde::Serialize;

use crate::ast::{Program, Rule};
use crate::clang::{parse_action_description, ActionDescription};
use crate::parser::parse_program;

pub const WATER_SOURCE: &str = include_str!("../data/water.act");

pub const PISAMP_SOURCE: &str = "a | b | c | d | e(1).\na :- b.\nb :- a.\n";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceParams {
    pub actions: Vec<String>,
    pub horizon: usize,
    /// Step of the goal; the horizon when absent.
    pub goal: Option<usize>,
}

impl InstanceParams {
    /// Actions `a1 .. ak` with horizon `n`.
    pub fn new(actions: usize, horizon: usize) -> Self {
        InstanceParams { actions: (1..=actions.max(1)).map(|i| format!("a{i}")).collect(), horizon: horizon.max(1), goal: None }
    }

    fn goal_step(&self) -> usize {
        self.goal.unwrap_or(self.horizon)
    }
}

/// Rules of the planning modules by role.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PlanRule {
    Success,
    RequireSuccess,
    Exclusion,
    NonOccurrence,
    ChoiceOccurrence,
    AtMostOne,
    AtLeastOne,
    DisjunctiveOccurrence,
    PairwiseActionDenial,
    SthHpdDefinition,
    SthHpdDenial,
    GuardedNonOccurrence,
    PairwiseStepDenial,
    DefiningOccurrence,
}

fn sg(n: usize) -> String {
    format!("step(I), not goal(I), I != {n}")
}

impl PlanRule {
    pub fn source(self, n: usize) -> String {
        let sg = sg(n);
        match self {
            PlanRule::Success => "success :- goal(I), step(I).".into(),
            PlanRule::RequireSuccess => ":- not success.".into(),
            PlanRule::Exclusion => ":- o(A,I), non_o(A,I).".into(),
            PlanRule::NonOccurrence => "non_o(A,I) :- action(A), step(I), not o(A,I).".into(),
            PlanRule::ChoiceOccurrence => format!("{{o(A,I)}} :- action(A), {sg}."),
            PlanRule::AtMostOne => format!(":- 2 <= #count{{A : o(A,I)}}, {sg}."),
            PlanRule::AtLeastOne => format!(":- not 1 <= #count{{A : o(A,I)}}, {sg}."),
            PlanRule::DisjunctiveOccurrence => format!("o(A,I) | non_o(A,I) :- action(A), {sg}."),
            PlanRule::PairwiseActionDenial => ":- o(A,I), o(A2,I), action(A), action(A2), A != A2.".into(),
            PlanRule::SthHpdDefinition => "sthHpd(I) :- o(A,I).".into(),
            PlanRule::SthHpdDenial => format!(":- not sthHpd(I), {sg}."),
            PlanRule::GuardedNonOccurrence => format!("non_o(A,I) :- not o(A,I), action(A), {sg}."),
            PlanRule::PairwiseStepDenial => format!(":- o(A,I), o(A2,I), {sg}, A != A2."),
            PlanRule::DefiningOccurrence => format!("o(A,I) :- not non_o(A,I), action(A), {sg}."),
        }
    }

    pub fn rule(self, n: usize) -> Rule {
        parse_program(&self.source(n)).expect("well-formed module rule").rules.remove(0)
    }
}

pub const PLAN_CHOICE: [PlanRule; 7] = [
    PlanRule::Success,
    PlanRule::RequireSuccess,
    PlanRule::Exclusion,
    PlanRule::NonOccurrence,
    PlanRule::ChoiceOccurrence,
    PlanRule::AtMostOne,
    PlanRule::AtLeastOne,
];

pub const PLAN_DISJ: [PlanRule; 8] = [
    PlanRule::Success,
    PlanRule::RequireSuccess,
    PlanRule::Exclusion,
    PlanRule::NonOccurrence,
    PlanRule::DisjunctiveOccurrence,
    PlanRule::PairwiseActionDenial,
    PlanRule::SthHpdDefinition,
    PlanRule::SthHpdDenial,
];

pub fn module(rules: &[PlanRule], n: usize) -> Program {
    Program::new(rules.iter().map(|r| r.rule(n)).collect())
}

pub fn build_plan_choice(params: &InstanceParams) -> Program {
    module(&PLAN_CHOICE, params.horizon)
}

pub fn build_plan_disj(params: &InstanceParams) -> Program {
    module(&PLAN_DISJ, params.horizon)
}

/// Action and step facts with the goal reached at the goal step.
pub fn build_plan_instance(params: &InstanceParams) -> Program {
    let mut src = String::new();
    for a in &params.actions {
        src.push_str(&format!("action({a}).\n"));
    }
    for t in 0..=params.horizon {
        src.push_str(&format!("step({t}).\n"));
    }
    let g = params.goal_step();
    src.push_str(&format!("goal({g}) :- step({g}).\n"));
    parse_program(&src).expect("well-formed instance")
}

pub fn pisamp() -> Program {
    parse_program(PISAMP_SOURCE).expect("well-formed sample")
}

pub fn water() -> ActionDescription {
    parse_action_description(WATER_SOURCE).expect("well-formed water domain")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::{terminal_rank, RuleKind};

    #[test]
    fn plan_choice_listing() {
        let p = build_plan_choice(&InstanceParams::new(2, 1));
        assert_eq!(p.rules.len(), 7);
        assert_eq!(p.rules[0].to_string(), "success :- goal(I), step(I).");
        assert_eq!(p.rules[1].to_string(), ":- not success.");
        assert_eq!(p.rules[4].kind(), RuleKind::Choice);
        assert_eq!(p.rules[5].to_string(), ":- 2 <= #count{A : o(A,I)}, step(I), not goal(I), I != 1.");
    }

    #[test]
    fn plan_disj_listing() {
        let p = build_plan_disj(&InstanceParams::new(2, 1));
        let shown: Vec<String> = p.rules.iter().map(|r| r.to_string()).collect();
        assert!(shown.contains(&"o(A,I) | non_o(A,I) :- action(A), step(I), not goal(I), I != 1.".to_string()));
        assert!(shown.contains(&"sthHpd(I) :- o(A,I).".to_string()));
        let uses = p.rules.iter().filter(|r| r.body_predicates().contains(&"sthHpd") || r.head_predicates().contains(&"sthHpd"));
        assert_eq!(uses.count(), 2);
    }

    #[test]
    fn instance_facts() {
        let params = InstanceParams::new(2, 1);
        let inst = build_plan_instance(&params);
        assert_eq!(inst.to_string(), "action(a1).\naction(a2).\nstep(0).\nstep(1).\ngoal(1) :- step(1).\n");
        assert!(inst.rules.iter().all(|r| !r.head_predicates().contains(&"o") && !r.head_predicates().contains(&"sthHpd")));
        for module in [build_plan_choice(&params), build_plan_disj(&params)] {
            let all = inst.union(&module);
            assert_eq!(terminal_rank(&all, "step"), Some(0));
            assert_eq!(terminal_rank(&all, "action"), Some(0));
            assert!(terminal_rank(&all, "o").is_some());
        }
    }

    #[test]
    fn one_action_per_step_before_the_horizon() {
        use crate::ground::GroundOptions;
        use crate::semantics::{answer_sets_of, SolveOptions};
        for (k, n) in [(1, 1), (2, 1), (2, 2)] {
            let params = InstanceParams::new(k, n);
            let inst = build_plan_instance(&params);
            let opts = SolveOptions { cap: 20, workers: 1 };
            let choice = answer_sets_of(&inst.union(&build_plan_choice(&params)), &GroundOptions::default(), &opts).unwrap();
            let disj = answer_sets_of(&inst.union(&build_plan_disj(&params)), &GroundOptions::default(), &opts).unwrap();
            assert_eq!(choice.len(), k.pow(n as u32));
            assert_eq!(disj.len(), k.pow(n as u32));
            for x in &choice {
                let occurs = x.iter().filter(|a| a.predicate() == Some("o")).count();
                assert_eq!(occurs, n);
            }
        }
    }

    #[test]
    fn samples_parse() {
        assert_eq!(pisamp().rules.len(), 3);
        assert_eq!(water().fluents, vec!["inWater", "wet"]);
    }
}
