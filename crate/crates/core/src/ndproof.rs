//! Proof checking for natural deduction with the weak law of the excluded
//! middle `~F | ~~F` in place of `F | ~F`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::fol::{parse_propositional, Formula};
use crate::semantics::{ht_models, OracleError};

/// Proof of `=> ~(F & G) -> ~F | ~G`.
pub const DEMORGAN_PROOF: &str = include_str!("../data/demorgan.ndp");
/// Proof of `~(F & G) => ~~F -> ~G` citing De Morgan.
pub const LEMMA_NEGNEG_PROOF: &str = include_str!("../data/lemma_negneg.ndp");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ProofParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sequent {
    pub assumptions: BTreeSet<Formula>,
    pub conclusion: Formula,
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.assumptions.iter().map(|g| g.to_string()).collect();
        if a.is_empty() {
            write!(f, "=> {}", self.conclusion)
        } else {
            write!(f, "{} => {}", a.join(", "), self.conclusion)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RuleName {
    Axiom,
    AndI,
    AndE1,
    AndE2,
    AndE,
    OrI1,
    OrI2,
    OrI,
    OrE,
    ImpI,
    ImpE,
    NegI,
    NegE,
    C,
    W,
    DeMorgan,
}

impl RuleName {
    pub const ALL: [RuleName; 16] = [
        RuleName::Axiom,
        RuleName::AndI,
        RuleName::AndE1,
        RuleName::AndE2,
        RuleName::AndE,
        RuleName::OrI1,
        RuleName::OrI2,
        RuleName::OrI,
        RuleName::OrE,
        RuleName::ImpI,
        RuleName::ImpE,
        RuleName::NegI,
        RuleName::NegE,
        RuleName::C,
        RuleName::W,
        RuleName::DeMorgan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleName::Axiom => "axiom",
            RuleName::AndI => "AndI",
            RuleName::AndE1 => "AndE1",
            RuleName::AndE2 => "AndE2",
            RuleName::AndE => "AndE",
            RuleName::OrI1 => "OrI1",
            RuleName::OrI2 => "OrI2",
            RuleName::OrI => "OrI",
            RuleName::OrE => "OrE",
            RuleName::ImpI => "ImpI",
            RuleName::ImpE => "ImpE",
            RuleName::NegI => "NegI",
            RuleName::NegE => "NegE",
            RuleName::C => "C",
            RuleName::W => "W",
            RuleName::DeMorgan => "DeMorgan",
        }
    }

    pub fn from_name(s: &str) -> Option<RuleName> {
        RuleName::ALL.into_iter().find(|r| r.name().eq_ignore_ascii_case(s))
    }

    fn arity(self) -> usize {
        match self {
            RuleName::Axiom => 0,
            RuleName::AndI | RuleName::ImpE | RuleName::NegE => 2,
            RuleName::OrE => 3,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProofLine {
    pub label: usize,
    /// Line number in the script.
    pub source_line: usize,
    pub sequent: Sequent,
    pub rule: RuleName,
    pub premises: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Proof {
    pub abbreviations: BTreeMap<String, Formula>,
    pub lines: Vec<ProofLine>,
    /// Set by an `admit demorgan` directive.
    pub admit_demorgan: bool,
}

impl Proof {
    pub fn last(&self) -> Option<&Sequent> {
        self.lines.last().map(|l| &l.sequent)
    }

    pub fn line_mut(&mut self, label: usize) -> Option<&mut ProofLine> {
        self.lines.iter_mut().find(|l| l.label == label)
    }
}

/// Commas outside parentheses.
fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

pub fn parse_proof(src: &str) -> Result<Proof, ProofParseError> {
    let mut proof = Proof::default();
    let mut labels = BTreeSet::new();
    for (n, raw) in src.lines().enumerate() {
        let line = n + 1;
        let err = |message: String| ProofParseError { line, message };
        let text = raw.split('%').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        if text.eq_ignore_ascii_case("admit demorgan") {
            proof.admit_demorgan = true;
            continue;
        }
        let formula = |s: &str| {
            let s = s.trim();
            if let Some(f) = proof.abbreviations.get(s) {
                return Ok(f.clone());
            }
            parse_propositional(s).map_err(|e| err(format!("bad formula `{s}`: {e}")))
        };
        if let Some((name, rest)) = text.split_once(':') {
            let name = name.trim();
            if !name.is_empty() && name.chars().all(|c| c.is_alphanumeric() || c == '_') && !name.chars().all(|c| c.is_ascii_digit()) {
                let f = formula(rest)?;
                proof.abbreviations.insert(name.to_string(), f);
                continue;
            }
        }
        let (label, rest) = text.split_once('.').ok_or_else(|| err("expected `k.` at the start of a proof line".into()))?;
        let label: usize = label.trim().parse().map_err(|_| err(format!("bad label `{}`", label.trim())))?;
        if labels.contains(&label) || labels.last().map_or(false, |&l| l > label) {
            return Err(err(format!("label {label} is not increasing")));
        }
        let (left, right) = rest.split_once("=>").ok_or_else(|| err("expected `=>`".into()))?;
        let mut toks: Vec<&str> = right.split_whitespace().collect();
        let mut premise_toks = Vec::new();
        while let Some(t) = toks.last() {
            if !t.is_empty() && t.chars().all(|c| c.is_ascii_digit() || c == ',') {
                premise_toks.push(toks.pop().unwrap());
            } else {
                break;
            }
        }
        premise_toks.reverse();
        let rule_tok = toks.pop().ok_or_else(|| err("missing justification".into()))?;
        let rule = RuleName::from_name(rule_tok).ok_or_else(|| err(format!("unknown rule `{rule_tok}`")))?;
        let premises: Vec<usize> = premise_toks
            .join(",")
            .split(',')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().map_err(|_| err(format!("bad premise `{s}`"))))
            .collect::<Result<_, _>>()?;
        if let Some(p) = premises.iter().find(|p| !labels.contains(*p)) {
            return Err(err(format!("premise {p} does not refer to an earlier line")));
        }
        let conclusion = formula(&toks.join(" "))?;
        let assumptions = if left.trim().is_empty() {
            BTreeSet::new()
        } else {
            split_top(left).into_iter().map(formula).collect::<Result<_, _>>()?
        };
        labels.insert(label);
        proof.lines.push(ProofLine { label, source_line: line, sequent: Sequent { assumptions, conclusion }, rule, premises });
    }
    Ok(proof)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ProofStatus {
    Valid,
    Invalid { line: usize, reason: String },
}

impl ProofStatus {
    pub fn is_valid(&self) -> bool {
        *self == ProofStatus::Valid
    }
}

impl fmt::Display for ProofStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProofStatus::Valid => write!(f, "valid"),
            ProofStatus::Invalid { line, reason } => write!(f, "invalid at line {line}: {reason}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckOptions {
    pub admit_demorgan: bool,
}

type Set = BTreeSet<Formula>;

fn union(sets: &[&Set]) -> Set {
    sets.iter().flat_map(|s| s.iter().cloned()).collect()
}

/// Whether `premise` is `conclusion` with `f` added, i.e. `f` is discharged.
fn discharges(premise: &Set, conclusion: &Set, f: &Formula) -> bool {
    let mut c = conclusion.clone();
    c.insert(f.clone());
    *premise == c
}

fn binary(f: &Formula, or: bool) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::And(fs) if !or && fs.len() == 2 => Some((&fs[0], &fs[1])),
        Formula::Or(fs) if or && fs.len() == 2 => Some((&fs[0], &fs[1])),
        _ => None,
    }
}

fn is_wem(f: &Formula) -> bool {
    match binary(f, true) {
        Some((a, b)) => match (a.as_negation(), b.as_negation().and_then(Formula::as_negation)) {
            (Some(x), Some(y)) => x == y,
            _ => false,
        },
        None => false,
    }
}

fn demorgan_pair(from: &Formula, to: &Formula) -> bool {
    let negs = |fs: &[Formula]| fs.iter().cloned().map(Formula::neg).collect::<Vec<_>>();
    let forward = |x: &Formula, y: &Formula| match x.as_negation() {
        Some(Formula::And(fs)) => *y == Formula::Or(negs(fs)),
        Some(Formula::Or(fs)) => *y == Formula::And(negs(fs)),
        _ => false,
    };
    forward(from, to) || forward(to, from)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    match n {
        0 => vec![vec![]],
        _ => {
            let mut out = Vec::new();
            for p in permutations(n - 1) {
                for i in 0..n {
                    let mut q = p.clone();
                    q.insert(i, n - 1);
                    out.push(q);
                }
            }
            out
        }
    }
}

fn check_line(line: &ProofLine, prem: &[&Sequent], opts: &CheckOptions) -> Result<(), String> {
    let Sequent { assumptions: c, conclusion: f } = &line.sequent;
    if prem.len() != line.rule.arity() {
        return Err(format!("{} takes {} premises, {} given", line.rule.name(), line.rule.arity(), prem.len()));
    }
    let ok = match line.rule {
        RuleName::Axiom => {
            (c.len() == 1 && c.contains(f)) || (c.is_empty() && (f.is_top() || is_wem(f)))
        }
        RuleName::AndI => permutations(2).iter().any(|p| {
            let (a, b) = (prem[p[0]], prem[p[1]]);
            binary(f, false) == Some((&a.conclusion, &b.conclusion)) && *c == union(&[&a.assumptions, &b.assumptions])
        }),
        RuleName::AndE1 | RuleName::AndE2 | RuleName::AndE => {
            let p = prem[0];
            p.assumptions == *c
                && binary(&p.conclusion, false).map_or(false, |(x, y)| match line.rule {
                    RuleName::AndE1 => x == f,
                    RuleName::AndE2 => y == f,
                    _ => x == f || y == f,
                })
        }
        RuleName::OrI1 | RuleName::OrI2 | RuleName::OrI => {
            let p = prem[0];
            p.assumptions == *c
                && binary(f, true).map_or(false, |(x, y)| match line.rule {
                    RuleName::OrI1 => *x == p.conclusion,
                    RuleName::OrI2 => *y == p.conclusion,
                    _ => *x == p.conclusion || *y == p.conclusion,
                })
        }
        RuleName::OrE => permutations(3).iter().any(|p| {
            let (d, l, r) = (prem[p[0]], prem[p[1]], prem[p[2]]);
            let Some((x, y)) = binary(&d.conclusion, true) else { return false };
            if l.conclusion != *f || r.conclusion != *f {
                return false;
            }
            // The side assumptions may or may not keep the discharged formula.
            let options = |s: &Set, g: &Formula| {
                if !s.contains(g) {
                    return vec![];
                }
                let mut without = s.clone();
                without.remove(g);
                vec![without, s.clone()]
            };
            options(&l.assumptions, x).iter().any(|delta| {
                options(&r.assumptions, y).iter().any(|sigma| *c == union(&[&d.assumptions, delta, sigma]))
            })
        }),
        RuleName::ImpI => match f {
            Formula::Implies(a, b) => prem[0].conclusion == **b && discharges(&prem[0].assumptions, c, a),
            _ => false,
        },
        RuleName::ImpE => permutations(2).iter().any(|p| {
            let (a, imp) = (prem[p[0]], prem[p[1]]);
            imp.conclusion == Formula::implies(a.conclusion.clone(), f.clone())
                && *c == union(&[&a.assumptions, &imp.assumptions])
        }),
        RuleName::NegI => match f.as_negation() {
            Some(a) => prem[0].conclusion == Formula::Bottom && discharges(&prem[0].assumptions, c, a),
            None => false,
        },
        RuleName::NegE => {
            *f == Formula::Bottom
                && permutations(2).iter().any(|p| {
                    let (a, n) = (prem[p[0]], prem[p[1]]);
                    n.conclusion.as_negation() == Some(&a.conclusion) && *c == union(&[&a.assumptions, &n.assumptions])
                })
        }
        RuleName::C => prem[0].conclusion == Formula::Bottom && prem[0].assumptions == *c,
        RuleName::W => prem[0].conclusion == *f && prem[0].assumptions.is_subset(c),
        RuleName::DeMorgan => {
            if !opts.admit_demorgan {
                return Err("De Morgan steps are not admitted".into());
            }
            prem[0].assumptions == *c && demorgan_pair(&prem[0].conclusion, f)
        }
    };
    if ok {
        Ok(())
    } else {
        Err(format!("`{}` does not follow by {}", line.sequent, line.rule.name()))
    }
}

/// Checks every line; the first failing line is reported.
pub fn check_proof(proof: &Proof, opts: &CheckOptions) -> ProofStatus {
    let admit = opts.admit_demorgan || proof.admit_demorgan;
    if admit {
        let base = parse_proof(DEMORGAN_PROOF).expect("bundled proof parses");
        if let ProofStatus::Invalid { reason, .. } = check_proof(&base, &CheckOptions::default()) {
            let line = proof.lines.first().map_or(0, |l| l.label);
            return ProofStatus::Invalid { line, reason: format!("bundled De Morgan proof fails: {reason}") };
        }
    }
    let opts = CheckOptions { admit_demorgan: admit };
    let mut seen: BTreeMap<usize, &Sequent> = BTreeMap::new();
    for line in &proof.lines {
        let prem: Option<Vec<&Sequent>> = line.premises.iter().map(|p| seen.get(p).copied()).collect();
        let Some(prem) = prem else {
            return ProofStatus::Invalid { line: line.label, reason: "premise does not refer to an earlier line".into() };
        };
        if let Err(reason) = check_line(line, &prem, &opts) {
            return ProofStatus::Invalid { line: line.label, reason };
        }
        seen.insert(line.label, &line.sequent);
    }
    ProofStatus::Valid
}

/// The formula a sequent stands for: `G1 & ... & Gn -> F`.
pub fn sequent_formula(s: &Sequent) -> Formula {
    if s.assumptions.is_empty() {
        s.conclusion.clone()
    } else {
        Formula::implies(Formula::conj(s.assumptions.iter().cloned().collect()), s.conclusion.clone())
    }
}

/// Whether `f` holds in every here-and-there interpretation of its atoms.
pub fn ht_valid(f: &Formula, cap: usize) -> Result<bool, OracleError> {
    let n = f.atoms().len();
    Ok(ht_models(f, cap)?.len() == 3usize.pow(n as u32))
}
