use proptest::prelude::*;

use aspforge::clang::{check_lp_paths, check_simp_paths, parse_action_description};
use aspforge::fol::fol_of_program;
use aspforge::ground::{ground_theory, GroundOptions};
use aspforge::parser::{format_program, parse_program};
use aspforge::rewrite::{shift_rule, subsumption_simplify, verify_rewrite, VerifyMode};
use aspforge::semantics::{answer_sets, satisfies, strongly_equivalent, SolveOptions};
use aspforge::ast::{Head, Program};
use aspforge::depgraph::program_graph;

const ATOMS: [&str; 5] = ["p", "q", "r", "s(1)", "s(2)"];

fn literal() -> impl Strategy<Value = String> {
    (0..ATOMS.len(), 0..3usize).prop_map(|(a, pol)| match pol {
        0 => ATOMS[a].to_string(),
        1 => format!("not {}", ATOMS[a]),
        _ => format!("not not {}", ATOMS[a]),
    })
}

fn rule() -> impl Strategy<Value = String> {
    let head = prop_oneof![
        Just(String::new()),
        (0..ATOMS.len()).prop_map(|a| ATOMS[a].to_string()),
        (0..ATOMS.len()).prop_map(|a| format!("{{{}}}", ATOMS[a])),
        prop::collection::btree_set(0..ATOMS.len(), 2..4)
            .prop_map(|s| s.into_iter().map(|a| ATOMS[a]).collect::<Vec<_>>().join(" | ")),
    ];
    (head, prop::collection::vec(literal(), 0..4)).prop_map(|(h, b)| match (h.is_empty(), b.is_empty()) {
        (true, true) => ":- p, not p.".to_string(),
        (_, true) => format!("{h}."),
        (true, _) => format!(":- {}.", b.join(", ")),
        _ => format!("{h} :- {}.", b.join(", ")),
    })
}

fn program() -> impl Strategy<Value = Program> {
    prop::collection::vec(rule(), 1..6).prop_map(|rs| parse_program(&rs.join("\n")).unwrap())
}

fn solve(p: &Program) -> Vec<aspforge::semantics::Interpretation> {
    let t = ground_theory(p, &GroundOptions::default()).unwrap();
    answer_sets(&t, &SolveOptions::default()).unwrap()
}

const LAWS: [&str; 8] = [
    "caused f if g.",
    "caused -f if -g.",
    "a causes f.",
    "a causes -g if f.",
    "caused bot if f, -g.",
    "inertial f, -f.",
    "inertial g, -g.",
    "caused g if g after a.",
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printing_then_parsing_is_identity(p in program()) {
        let text = format_program(&p);
        prop_assert_eq!(parse_program(&text).unwrap(), p);
    }

    #[test]
    fn answer_sets_are_models(p in program()) {
        let f = fol_of_program(&p);
        let t = ground_theory(&p, &GroundOptions::default()).unwrap();
        for x in answer_sets(&t, &SolveOptions::default()).unwrap() {
            prop_assert!(t.formulas.iter().all(|g| satisfies(g, &x)), "{} not a model of {}", aspforge::semantics::show_set(&x), f);
        }
    }

    #[test]
    fn parallel_search_agrees(p in program()) {
        let t = ground_theory(&p, &GroundOptions::default()).unwrap();
        let one = answer_sets(&t, &SolveOptions { cap: 16, workers: 1 }).unwrap();
        let four = answer_sets(&t, &SolveOptions { cap: 16, workers: 4 }).unwrap();
        prop_assert_eq!(one, four);
    }

    #[test]
    fn subsumption_is_strongly_equivalent(p in program()) {
        let (q, _) = subsumption_simplify(&p);
        prop_assert!(q.rules.len() <= p.rules.len());
        prop_assert!(strongly_equivalent(&p, &q, &GroundOptions::default(), 16).unwrap().equivalent);
    }

    #[test]
    fn strong_equivalence_is_reflexive(p in program()) {
        prop_assert!(strongly_equivalent(&p, &p.clone(), &GroundOptions::default(), 16).unwrap().equivalent);
    }

    #[test]
    fn legal_singleton_shifts_keep_answer_sets(p in program()) {
        let sccs = program_graph(&p).sccs();
        for (i, r) in p.rules.iter().enumerate() {
            let Head::Disjunction(atoms) = &r.head else { continue };
            if atoms.len() < 2 {
                continue;
            }
            let preds: Vec<String> = atoms.iter().filter_map(|a| a.predicate().map(String::from)).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
            let partition: Vec<Vec<String>> = preds.iter().map(|q| vec![q.clone()]).collect();
            let legal = !sccs.iter().any(|c| preds.iter().filter(|q| c.contains(q)).count() > 1);
            match shift_rule(&p, i, &partition) {
                Ok((shifted, _)) => {
                    prop_assert!(legal);
                    prop_assert_eq!(solve(&p), solve(&shifted));
                }
                Err(_) => prop_assert!(!legal || preds.len() < 2),
            }
        }
    }

    #[test]
    fn translations_match_paths(laws in prop::sample::subsequence(LAWS.to_vec(), 0..=LAWS.len())) {
        let src = format!("fluents: f, g. actions: a.\n{}", laws.join("\n"));
        let d = parse_action_description(&src).unwrap();
        let opts = SolveOptions::default();
        let lp = check_lp_paths(&d, 1, &opts).unwrap();
        prop_assert!(lp.holds, "{}: {:?}", src, lp.problem);
        let simp = check_simp_paths(&d, 1, &opts).unwrap();
        prop_assert!(simp.holds, "{}: {:?}", src, simp.problem);
    }

    #[test]
    fn verify_detects_dropped_facts(p in program()) {
        let mut q = p.clone();
        q.rules.push(parse_program("zz.").unwrap().rules.remove(0));
        let v = verify_rewrite(&p, &q, &VerifyMode::AnswerSets, &GroundOptions::default(), &SolveOptions::default()).unwrap();
        prop_assert_eq!(v.holds, solve(&p).is_empty());
    }
}
