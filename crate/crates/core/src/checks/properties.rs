//! Randomized property suites. Every case is generated from a seeded
//! ChaCha stream, so a failing case is reproduced by its seed and index.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ast::{Atom, Program};
use crate::fol::{clark_normal_form, completion, fol_of_program};
use crate::ground::{ground_formulas_with, ground_theory, GroundOptions};
use crate::parser::{parse_atom, parse_program};
use crate::rewrite::{choice_to_defining, eliminate_aggregate, fresh_predicate, introduce_definition, verify_rewrite, VerifyMode};
use crate::semantics::{
    answer_sets, answer_sets_of, is_answer_set_by_reduct, least_model, reduct_traditional, satisfies, show_set,
    strongly_equivalent, SolveOptions,
};

pub const DEFAULT_SEED: u64 = 0x5eed_a5b1;
pub const DEFAULT_CASES: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Suite {
    /// Traditional and general reducts select the same answer sets.
    Reducts,
    /// Adding a denial filters the answer sets.
    DenialSplitting,
    /// A fresh definition of a body part is conservative.
    Definitions,
    /// Answer sets satisfy the completion.
    Completion,
    /// Aggregate elimination and choice replacement are strongly equivalent.
    StrongRewrites,
}

impl Suite {
    pub const ALL: [Suite; 5] =
        [Suite::Reducts, Suite::DenialSplitting, Suite::Definitions, Suite::Completion, Suite::StrongRewrites];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Reducts => "reducts",
            Suite::DenialSplitting => "denial-splitting",
            Suite::Definitions => "definitions",
            Suite::Completion => "completion",
            Suite::StrongRewrites => "strong-rewrites",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub cases: usize,
    pub violations: usize,
    pub first_violation: Option<String>,
    #[serde(skip)]
    pub millis: u128,
}

const ATOMS: [&str; 6] = ["p", "q", "r", "s", "t(1)", "t(2)"];

#[derive(Clone, Copy)]
struct Shape {
    disjunction: bool,
    choice: bool,
    denial: bool,
    negneg: bool,
}

fn literal(rng: &mut ChaCha8Rng, atoms: &[&str], negneg: bool) -> String {
    let a = atoms.choose(rng).unwrap();
    match rng.gen_range(0..if negneg { 5 } else { 4 }) {
        0 | 1 => a.to_string(),
        2 | 3 => format!("not {a}"),
        _ => format!("not not {a}"),
    }
}

fn body(rng: &mut ChaCha8Rng, atoms: &[&str], negneg: bool, max: usize) -> Vec<String> {
    (0..rng.gen_range(0..=max)).map(|_| literal(rng, atoms, negneg)).collect()
}

fn rule_text(head: &str, body: &[String]) -> String {
    match (head.is_empty(), body.is_empty()) {
        (_, true) if !head.is_empty() => format!("{head}."),
        (true, _) => format!(":- {}.", body.join(", ")),
        _ => format!("{head} :- {}.", body.join(", ")),
    }
}

/// A ground program over a prefix of the atom pool.
fn random_program(rng: &mut ChaCha8Rng, shape: Shape) -> Program {
    let k = rng.gen_range(2..=ATOMS.len());
    let atoms = &ATOMS[..k];
    let mut rules = Vec::new();
    for _ in 0..rng.gen_range(1..=6) {
        let b = body(rng, atoms, shape.negneg, 3);
        let head = match rng.gen_range(0..10) {
            0 if shape.denial && !b.is_empty() => String::new(),
            1 | 2 if shape.disjunction => {
                let mut hs: Vec<&str> = atoms.choose_multiple(rng, 2).copied().collect();
                hs.sort();
                hs.join(" | ")
            }
            3 | 4 if shape.choice => format!("{{{}}}", atoms.choose(rng).unwrap()),
            _ => atoms.choose(rng).unwrap().to_string(),
        };
        rules.push(rule_text(&head, &b));
    }
    parse_program(&rules.join("\n")).expect("generated program parses")
}

fn prop_ground() -> GroundOptions {
    GroundOptions::default()
}

fn reducts_case(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let shape = Shape { disjunction: false, choice: false, denial: true, negneg: true };
    let program = random_program(rng, shape);
    let theory = ground_theory(&program, &prop_ground()).map_err(|e| e.to_string())?;
    let f = theory.conjunction();
    let atoms: Vec<Atom> = program
        .rules
        .iter()
        .flat_map(|r| {
            let mut v: Vec<Atom> = r.head.atoms().to_vec();
            v.extend(r.body.iter().filter_map(|e| e.as_literal().map(|l| l.atom.clone())));
            v
        })
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    for mask in 0u64..1 << atoms.len() {
        let x: BTreeSet<Atom> = atoms.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, a)| a.clone()).collect();
        let traditional = least_model(&reduct_traditional(&program, &x).map_err(|e| e.to_string())?).as_ref() == Some(&x);
        let general = is_answer_set_by_reduct(&f, &x);
        if traditional != general {
            return Err(format!("{} on `{}`: traditional {traditional}, general {general}", show_set(&x), program.to_string().trim()));
        }
    }
    Ok(())
}

fn denial_case(rng: &mut ChaCha8Rng, opts: &SolveOptions) -> Result<(), String> {
    let shape = Shape { disjunction: true, choice: true, denial: true, negneg: true };
    let f = random_program(rng, shape);
    let mut b = body(rng, &ATOMS, true, 3);
    if b.is_empty() {
        b.push(literal(rng, &ATOMS, true));
    }
    let g = parse_program(&rule_text("", &b)).map_err(|e| e.to_string())?;
    let both = f.union(&g);
    let sig = both.signature();
    let ground = prop_ground();
    let tf = ground_formulas_with(&[fol_of_program(&f)], &sig, &ground).map_err(|e| e.to_string())?;
    let tg = ground_formulas_with(&[fol_of_program(&g)], &sig, &ground).map_err(|e| e.to_string())?;
    let tb = ground_formulas_with(&[fol_of_program(&both)], &sig, &ground).map_err(|e| e.to_string())?;
    let filtered: Vec<_> = answer_sets(&tf, opts)
        .map_err(|e| e.to_string())?
        .into_iter()
        .filter(|x| tg.formulas.iter().all(|h| satisfies(h, x)))
        .collect();
    let direct = answer_sets(&tb, opts).map_err(|e| e.to_string())?;
    let l: BTreeSet<_> = filtered.iter().collect();
    let r: BTreeSet<_> = direct.iter().collect();
    if l != r {
        return Err(format!("`{}` with `{}`", f.to_string().trim(), g.to_string().trim()));
    }
    Ok(())
}

fn definition_case(rng: &mut ChaCha8Rng, opts: &SolveOptions) -> Result<(), String> {
    let shape = Shape { disjunction: true, choice: true, denial: true, negneg: true };
    let mut program = random_program(rng, shape);
    if program.rules.iter().all(|r| r.body.is_empty()) {
        program = program.union(&parse_program("p :- not q.").unwrap());
    }
    let candidates: Vec<usize> = (0..program.rules.len()).filter(|&i| !program.rules[i].body.is_empty()).collect();
    let rule = &program.rules[*candidates.choose(rng).unwrap()];
    let size = rng.gen_range(1..=rule.body.len().min(2));
    let def: Vec<_> = rule.body.choose_multiple(rng, size).cloned().collect();
    let name = fresh_predicate(&program, "def");
    let q = parse_atom(&name).map_err(|e| e.to_string())?;
    let (after, _) = introduce_definition(&program, &q, &def).map_err(|e| e.to_string())?;
    let v = verify_rewrite(&program, &after, &VerifyMode::Conservative(vec![name]), &prop_ground(), opts)
        .map_err(|e| e.to_string())?;
    if !v.holds {
        return Err(format!("`{}` became `{}`: {}", program.to_string().trim(), after.to_string().trim(), v.detail.unwrap_or_default()));
    }
    Ok(())
}

fn completion_case(rng: &mut ChaCha8Rng, opts: &SolveOptions) -> Result<(), String> {
    let shape = Shape { disjunction: false, choice: true, denial: true, negneg: true };
    let program = random_program(rng, shape);
    let preds: Vec<String> = program
        .rules
        .iter()
        .flat_map(|r| r.head_predicates().into_iter().map(String::from))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let comp = completion(&clark_normal_form(&program, &preds).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let ground = prop_ground();
    let gc = ground_formulas_with(&[comp], &program.signature(), &ground).map_err(|e| e.to_string())?;
    for x in answer_sets_of(&program, &ground, opts).map_err(|e| e.to_string())? {
        if !gc.formulas.iter().all(|f| satisfies(f, &x)) {
            return Err(format!("answer set {} of `{}` violates the completion", show_set(&x), program.to_string().trim()));
        }
    }
    Ok(())
}

fn pick<'a>(rng: &mut ChaCha8Rng, pool: &[&'a str], max: usize) -> Vec<&'a str> {
    let k = rng.gen_range(0..=max);
    (0..k).map(|_| *pool.choose(rng).unwrap()).collect()
}

fn aggregate_rule(rng: &mut ChaCha8Rng) -> String {
    let outer = rng.gen_bool(0.5);
    let mut conds: Vec<&str> = vec![if outer { "r(X,Y)" } else { "p(X)" }];
    conds.extend(pick(rng, &["p(X)", "not q(X)", "not not q(X)"], 1));
    conds.shuffle(rng);
    let bound = rng.gen_range(1..=3);
    let mut body = vec![format!("{bound} <= #count{{X : {}}}", conds.join(", "))];
    body.extend(pick(rng, &["u", "not v", "not not u"], 2).into_iter().map(String::from));
    if outer {
        body.push("w(Y)".into());
    }
    body.shuffle(rng);
    let head = match (rng.gen_range(0..3), outer) {
        (0, _) => "",
        (_, true) => "h(Y)",
        _ => "h",
    };
    rule_text(head, &body)
}

fn choice_group(rng: &mut ChaCha8Rng) -> String {
    let x = if rng.gen_bool(0.5) { "(X)" } else { "" };
    let pool: Vec<String> = if x.is_empty() {
        vec!["u".into(), "not v".into(), "not not w".into()]
    } else {
        vec!["r(X)".into(), "not s(X)".into(), "not not r(X)".into(), "u".into()]
    };
    let pool: Vec<&str> = pool.iter().map(String::as_str).collect();
    let mut f1 = pick(rng, &pool, 2);
    if !x.is_empty() && !f1.contains(&"r(X)") {
        f1.push("r(X)");
    }
    let f2 = pick(rng, &pool, 2);
    let mut choice_body: Vec<String> = f1.iter().chain(&f2).map(|s| s.to_string()).collect();
    choice_body.shuffle(rng);
    let mut q_body = vec![format!("not p{x}")];
    q_body.extend(f1.iter().map(|s| s.to_string()));
    format!(
        "{}\n{}\n{}",
        rule_text("", &[format!("p{x}"), format!("q{x}")]),
        rule_text(&format!("q{x}"), &q_body),
        rule_text(&format!("{{p{x}}}"), &choice_body)
    )
}

fn strong_case(rng: &mut ChaCha8Rng, opts: &SolveOptions) -> Result<(), String> {
    let mut constants: Vec<String> = vec!["1".into(), "2".into(), "3".into()];
    let (before, after) = if rng.gen_bool(0.5) {
        let before = parse_program(&aggregate_rule(rng)).map_err(|e| e.to_string())?;
        if before.signature().mentions("r") {
            constants.pop();
        }
        let (after, _) = eliminate_aggregate(&before, 0).map_err(|e| format!("`{}`: {e}", before.to_string().trim()))?;
        (before, after)
    } else {
        let before = parse_program(&choice_group(rng)).map_err(|e| e.to_string())?;
        let (after, _) = choice_to_defining(&before, "p", "q").map_err(|e| format!("`{}`: {e}", before.to_string().trim()))?;
        (before, after)
    };
    let ground = GroundOptions { extra_constants: constants, ..GroundOptions::default() };
    let v = strongly_equivalent(&before, &after, &ground, opts.cap.max(16)).map_err(|e| e.to_string())?;
    if !v.equivalent {
        return Err(format!("`{}` vs `{}`: {:?}", before.to_string().trim(), after.to_string().trim(), v.witness));
    }
    Ok(())
}

fn suite_seed(seed: u64, suite: Suite) -> u64 {
    seed ^ (Suite::ALL.iter().position(|s| *s == suite).unwrap() as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

pub fn run_suite(suite: Suite, cases: usize, seed: u64, opts: &SolveOptions) -> SuiteReport {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(suite_seed(seed, suite));
    let mut violations = 0;
    let mut first_violation = None;
    for k in 0..cases {
        let outcome = match suite {
            Suite::Reducts => reducts_case(&mut rng),
            Suite::DenialSplitting => denial_case(&mut rng, opts),
            Suite::Definitions => definition_case(&mut rng, opts),
            Suite::Completion => completion_case(&mut rng, opts),
            Suite::StrongRewrites => strong_case(&mut rng, opts),
        };
        if let Err(e) = outcome {
            violations += 1;
            if first_violation.is_none() {
                first_violation = Some(format!("case {k}: {e}"));
            }
        }
    }
    SuiteReport { suite, seed, cases, violations, first_violation, millis: t.elapsed().as_millis() }
}

pub fn run_all(cases: usize, seed: u64, opts: &SolveOptions) -> Vec<SuiteReport> {
    Suite::ALL.iter().map(|s| run_suite(*s, cases, seed, opts)).collect()
}
