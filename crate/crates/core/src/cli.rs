//! Command-line front end. `execute` is the whole program; the binary only
//! forwards its arguments and exit code.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::ast::Program;
use crate::checks::{self, default_instances, verify_claims, ClaimStatus, DEFAULT_CASES, DEFAULT_SEED};
use crate::clang::{self, parse_action_description, ClangError};
use crate::corpus::{self, InstanceParams};
use crate::depgraph::program_graph;
use crate::ground::{ground_theory, GroundError, GroundOptions};
use crate::ndproof::{check_proof, parse_proof, CheckOptions};
use crate::parser::{format_program, parse_atom, parse_body, parse_program};
use crate::rewrite::{self, Projection, RewriteError, RewriteReport, VerifyMode};
use crate::semantics::{answer_sets, show_set, OracleError, SolveOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "aspforge", version, about = "Rewrite, ground and check answer set programs")]
struct Cli {
    /// Nesting depth of function symbols in the Herbrand universe.
    #[arg(long, global = true, env = "ASPFORGE_DEPTH", default_value_t = 1)]
    depth: usize,
    /// Maximal number of undetermined atoms the oracle enumerates.
    #[arg(long, global = true, env = "ASPFORGE_CAP", default_value_t = 16)]
    cap: usize,
    /// Machine-readable output.
    #[arg(long, global = true, env = "ASPFORGE_JSON")]
    json: bool,
    /// Seed of the randomized suites.
    #[arg(long, global = true, env = "ASPFORGE_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Extra object constants for grounding, comma separated.
    #[arg(long = "const", global = true, env = "ASPFORGE_CONST", value_delimiter = ',')]
    constants: Vec<String>,
    /// Worker threads of the oracle.
    #[arg(long, global = true, env = "ASPFORGE_WORKERS", default_value_t = 1)]
    workers: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and pretty-print a program.
    Fmt { file: PathBuf },
    /// Print the ground formulas of a program.
    Ground { file: PathBuf },
    /// Print all answer sets.
    Solve { file: PathBuf },
    /// Compare two programs.
    Eq {
        #[arg(long, value_enum, default_value_t = EqMode::Strong)]
        mode: EqMode,
        /// Predicates dropped by the conservative comparison.
        #[arg(long, value_delimiter = ',')]
        drop: Vec<String>,
        left: PathBuf,
        right: PathBuf,
    },
    /// Apply one rewrite pass.
    Rewrite(RewriteArgs),
    /// Predicate dependency graph and its strongly connected components.
    Graph {
        file: PathBuf,
        #[arg(long)]
        dot: bool,
    },
    /// Action descriptions in language C.
    #[command(subcommand)]
    C(CCommand),
    /// Natural deduction proofs.
    #[command(subcommand)]
    Nd(NdCommand),
    /// Write a corpus program.
    Corpus {
        #[arg(value_enum)]
        item: CorpusItem,
        #[arg(long, default_value_t = 2)]
        actions: usize,
        #[arg(long, default_value_t = 1)]
        horizon: usize,
        /// Output file; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the planning claims, the translation check and the property suites.
    VerifyClaims {
        #[arg(long, default_value_t = DEFAULT_CASES)]
        cases: usize,
        #[arg(long)]
        skip_properties: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EqMode {
    Strong,
    AnswerSets,
    Conservative,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Pass {
    Subsumption,
    AddSubsumed,
    EliminateAggregate,
    UnwrapCount,
    WrapCount,
    ChoiceToDefining,
    DefiningToChoice,
    Shift,
    Project,
    Define,
}

#[derive(Args, Debug)]
struct RewriteArgs {
    #[arg(long, value_enum)]
    pass: Pass,
    file: PathBuf,
    /// Index of the rewritten rule, from 0.
    #[arg(long, default_value_t = 0)]
    rule: usize,
    /// Rule added by `add-subsumed`.
    #[arg(long)]
    add: Option<String>,
    /// Variables for `wrap-count` and `project`, comma separated.
    #[arg(long, value_delimiter = ',')]
    vars: Vec<String>,
    /// Predicates of the choice and the complement.
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    q: Option<String>,
    /// Shifting partition: groups separated by `;`, predicates by `,`.
    #[arg(long)]
    partition: Option<String>,
    /// Projected literals, kept literals and the auxiliary predicate.
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    alpha_prime: Option<String>,
    #[arg(long)]
    aux: Option<String>,
    /// Defined atom and its definition for `define`.
    #[arg(long)]
    atom: Option<String>,
    #[arg(long)]
    def: Option<String>,
    /// Check the result against the input with the oracle.
    #[arg(long)]
    verify: bool,
}

#[derive(Subcommand, Debug)]
enum CCommand {
    /// Print the transition system.
    Trans { file: PathBuf },
    /// Translate into a logic program.
    Translate {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Translation::Simp)]
        mode: Translation,
        #[arg(long, default_value_t = 1)]
        horizon: usize,
        /// Compare the answer sets with the paths of the transition system.
        #[arg(long)]
        check: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Translation {
    Lp,
    Simp,
}

#[derive(Subcommand, Debug)]
enum NdCommand {
    /// Check a proof script.
    Check {
        file: PathBuf,
        /// Admit De Morgan steps justified by the bundled proof.
        #[arg(long, value_parser = ["demorgan"])]
        admit: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CorpusItem {
    PlanChoice,
    PlanDisj,
    Instance,
    Pisamp,
    Water,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(m: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: m.into() }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        let code = match e {
            OracleError::CapExceeded { .. } | OracleError::Ground(GroundError::AtomCapExceeded { .. }) => EXIT_CAP,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<GroundError> for Failure {
    fn from(e: GroundError) -> Self {
        OracleError::Ground(e).into()
    }
}

impl From<RewriteError> for Failure {
    fn from(e: RewriteError) -> Self {
        match e {
            RewriteError::Oracle(o) => o.into(),
            e => Failure { code: EXIT_FALSE, message: e.to_string() },
        }
    }
}

impl From<ClangError> for Failure {
    fn from(e: ClangError) -> Self {
        match e {
            ClangError::Oracle(o) => o.into(),
            ClangError::CapExceeded { .. } => Failure { code: EXIT_CAP, message: e.to_string() },
            e => Failure::usage(e.to_string()),
        }
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn ground(&self) -> GroundOptions {
        GroundOptions { depth: self.cli.depth, extra_constants: self.cli.constants.clone(), ..GroundOptions::default() }
    }

    fn solve(&self) -> SolveOptions {
        SolveOptions { cap: self.cli.cap, workers: self.cli.workers.max(1) }
    }

    fn emit(&mut self, text: &str, value: Value) -> Result<(), Failure> {
        let r = if self.cli.json {
            writeln!(self.out, "{}", serde_json::to_string_pretty(&value).expect("json"))
        } else {
            write!(self.out, "{text}")
        };
        r.map_err(|e| Failure::usage(e.to_string()))
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_program(path: &Path) -> Result<Program, Failure> {
    parse_program(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn strings<T: ToString>(xs: impl IntoIterator<Item = T>) -> Vec<String> {
    xs.into_iter().map(|x| x.to_string()).collect()
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn execute<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    if cli.cap == 0 {
        let _ = writeln!(err, "error: --cap must be positive");
        return EXIT_USAGE;
    }
    let mut ctx = Ctx { cli: &cli, out };
    match run(&mut ctx) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn run(ctx: &mut Ctx) -> Result<i32, Failure> {
    match &ctx.cli.command {
        Command::Fmt { file } => {
            let p = load_program(file)?;
            ctx.emit(&format_program(&p), json!({ "rules": strings(&p.rules) }))?;
            Ok(EXIT_OK)
        }
        Command::Ground { file } => {
            let p = load_program(file)?;
            let t = ground_theory(&p, &ctx.ground())?;
            let mut text = String::new();
            for f in &t.formulas {
                text.push_str(&format!("{f}\n"));
            }
            text.push_str(&format!("% {} ground atoms, universe {{{}}}\n", t.atoms.len(), strings(&t.universe).join(", ")));
            ctx.emit(&text, json!({ "formulas": strings(&t.formulas), "atoms": strings(&t.atoms), "universe": strings(&t.universe) }))?;
            Ok(EXIT_OK)
        }
        Command::Solve { file } => {
            let p = load_program(file)?;
            let t = ground_theory(&p, &ctx.ground())?;
            let sets = answer_sets(&t, &ctx.solve())?;
            let mut text = String::new();
            for (k, x) in sets.iter().enumerate() {
                text.push_str(&format!("answer set {}: {}\n", k + 1, show_set(x)));
            }
            text.push_str(&format!("{} answer set{}\n", sets.len(), if sets.len() == 1 { "" } else { "s" }));
            let value = json!({
                "answer_sets": sets.iter().map(|x| strings(x)).collect::<Vec<_>>(),
                "count": sets.len(),
                "universe": strings(&t.universe),
                "depth": ctx.cli.depth,
            });
            ctx.emit(&text, value)?;
            Ok(EXIT_OK)
        }
        Command::Eq { mode, drop, left, right } => {
            let (l, r) = (load_program(left)?, load_program(right)?);
            let mode = match mode {
                EqMode::Strong => VerifyMode::Strong,
                EqMode::AnswerSets => VerifyMode::AnswerSets,
                EqMode::Conservative => VerifyMode::Conservative(drop.clone()),
            };
            let v = rewrite::verify_rewrite(&l, &r, &mode, &ctx.ground(), &ctx.solve())?;
            let mut text = format!("{}\n", if v.holds { "equivalent" } else { "not equivalent" });
            if let Some(d) = &v.detail {
                text.push_str(&format!("witness: {d}\n"));
            }
            ctx.emit(&text, serde_json::to_value(&v).expect("json"))?;
            Ok(if v.holds { EXIT_OK } else { EXIT_FALSE })
        }
        Command::Rewrite(args) => run_rewrite(ctx, args),
        Command::Graph { file, dot } => {
            let p = load_program(file)?;
            let g = program_graph(&p);
            let sccs = g.sccs();
            let text = if *dot {
                g.to_dot()
            } else {
                let mut s = String::new();
                for (a, b) in &g.edges {
                    s.push_str(&format!("{a} -> {b}\n"));
                }
                for c in &sccs {
                    s.push_str(&format!("scc {{{}}}\n", c.join(", ")));
                }
                s
            };
            ctx.emit(&text, json!({ "vertices": g.vertices, "edges": g.edges, "sccs": sccs }))?;
            Ok(EXIT_OK)
        }
        Command::C(c) => run_c(ctx, c),
        Command::Nd(NdCommand::Check { file, admit }) => {
            let src = read(file)?;
            let proof = parse_proof(&src).map_err(|e| Failure::usage(format!("{}: {e}", file.display())))?;
            let status = check_proof(&proof, &CheckOptions { admit_demorgan: admit.is_some() });
            let mut text = format!("{status}\n");
            if status.is_valid() {
                if let Some(s) = proof.last() {
                    text = format!("valid: {s}\n");
                }
            }
            ctx.emit(&text, serde_json::to_value(&status).expect("json"))?;
            Ok(if status.is_valid() { EXIT_OK } else { EXIT_FALSE })
        }
        Command::Corpus { item, actions, horizon, output } => {
            let params = InstanceParams::new(*actions, *horizon);
            let text = match item {
                CorpusItem::PlanChoice => format_program(&corpus::build_plan_choice(&params)),
                CorpusItem::PlanDisj => format_program(&corpus::build_plan_disj(&params)),
                CorpusItem::Instance => format_program(&corpus::build_plan_instance(&params)),
                CorpusItem::Pisamp => format_program(&corpus::pisamp()),
                CorpusItem::Water => corpus::WATER_SOURCE.to_string(),
            };
            match output {
                Some(path) => {
                    std::fs::write(path, &text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
                    ctx.emit(&format!("wrote {}\n", path.display()), json!({ "written": path }))?;
                }
                None => ctx.emit(&text, json!({ "source": text }))?,
            }
            Ok(EXIT_OK)
        }
        Command::VerifyClaims { cases, skip_properties } => run_verify_claims(ctx, *cases, *skip_properties),
    }
}

fn need<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str, Failure> {
    v.as_deref().ok_or_else(|| Failure::usage(format!("this pass needs --{flag}")))
}

fn run_rewrite(ctx: &mut Ctx, a: &RewriteArgs) -> Result<i32, Failure> {
    let p = load_program(&a.file)?;
    let parse_err = |e: crate::parser::ParseError| Failure::usage(e.to_string());
    let (out, report, mode): (Program, RewriteReport, VerifyMode) = match a.pass {
        Pass::Subsumption => {
            let (o, r) = rewrite::subsumption_simplify(&p);
            (o, r, VerifyMode::Strong)
        }
        Pass::AddSubsumed => {
            let mut add = parse_program(need(&a.add, "add")?).map_err(parse_err)?;
            if add.rules.len() != 1 {
                return Err(Failure::usage("--add takes exactly one rule"));
            }
            let (o, r) = rewrite::add_subsumed(&p, add.rules.remove(0))?;
            (o, r, VerifyMode::Strong)
        }
        Pass::EliminateAggregate => {
            let (o, r) = rewrite::eliminate_aggregate(&p, a.rule)?;
            (o, r, VerifyMode::Strong)
        }
        Pass::UnwrapCount => {
            let (o, r) = rewrite::unwrap_singleton_count(&p, a.rule)?;
            (o, r, VerifyMode::Strong)
        }
        Pass::WrapCount => {
            let (o, r) = rewrite::wrap_singleton_count(&p, a.rule, &a.vars)?;
            (o, r, VerifyMode::Strong)
        }
        Pass::ChoiceToDefining => {
            let (o, r) = rewrite::choice_to_defining(&p, need(&a.p, "p")?, need(&a.q, "q")?)?;
            (o, r, VerifyMode::Strong)
        }
        Pass::DefiningToChoice => {
            let (o, r) = rewrite::defining_to_choice(&p, need(&a.p, "p")?, need(&a.q, "q")?)?;
            (o, r, VerifyMode::Strong)
        }
        Pass::Shift => {
            let partition: Vec<Vec<String>> = need(&a.partition, "partition")?
                .split(';')
                .map(|g| g.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect())
                .collect();
            let (o, r) = rewrite::shift_rule(&p, a.rule, &partition)?;
            (o, r, VerifyMode::AnswerSets)
        }
        Pass::Project => {
            let alpha = parse_body(need(&a.alpha, "alpha")?).map_err(parse_err)?;
            let alpha_prime = match &a.alpha_prime {
                Some(s) => parse_body(s).map_err(parse_err)?,
                None => Vec::new(),
            };
            let u = match &a.aux {
                Some(u) => u.clone(),
                None => rewrite::fresh_predicate(&p, "u"),
            };
            let proj = Projection { x: a.vars.clone(), alpha, alpha_prime, u: u.clone() };
            let (o, r) = rewrite::project_rule(&p, a.rule, &proj)?;
            (o, r, VerifyMode::Conservative(vec![u]))
        }
        Pass::Define => {
            let q = parse_atom(need(&a.atom, "atom")?).map_err(parse_err)?;
            let def = parse_body(need(&a.def, "def")?).map_err(parse_err)?;
            let name = q.predicate().unwrap_or_default().to_string();
            let (o, r) = rewrite::introduce_definition(&p, &q, &def)?;
            (o, r, VerifyMode::Conservative(vec![name]))
        }
    };
    let verdict = if a.verify { Some(rewrite::verify_rewrite(&p, &out, &mode, &ctx.ground(), &ctx.solve())?) } else { None };
    let mut text = format_program(&out);
    if let Some(v) = &verdict {
        text.push_str(&format!("% verified ({:?}): {}\n", v.mode, if v.holds { "holds" } else { "fails" }));
        if let Some(d) = &v.detail {
            text.push_str(&format!("% {d}\n"));
        }
    }
    let holds = verdict.as_ref().map_or(true, |v| v.holds);
    let mut report = report;
    report.verdict = verdict;
    ctx.emit(&text, json!({ "program": strings(&out.rules), "report": report }))?;
    Ok(if holds { EXIT_OK } else { EXIT_FALSE })
}

fn run_c(ctx: &mut Ctx, c: &CCommand) -> Result<i32, Failure> {
    match c {
        CCommand::Trans { file } => {
            let d = parse_action_description(&read(file)?)?;
            let ts = d.transition_system(ctx.cli.cap)?;
            ctx.emit(&ts.to_string(), ts.to_json())?;
            Ok(EXIT_OK)
        }
        CCommand::Translate { file, mode, horizon, check } => {
            let d = parse_action_description(&read(file)?)?;
            let p = match mode {
                Translation::Lp => clang::translate_lp(&d, *horizon)?,
                Translation::Simp => clang::translate_simp(&d, *horizon)?,
            };
            let mut text = format_program(&p);
            let mut value = json!({ "rules": strings(&p.rules) });
            let mut code = EXIT_OK;
            if *check {
                let c = match mode {
                    Translation::Lp => clang::check_lp_paths(&d, *horizon, &ctx.solve())?,
                    Translation::Simp => clang::check_simp_paths(&d, *horizon, &ctx.solve())?,
                };
                text.push_str(&format!(
                    "% {} answer sets, {} paths: {}\n",
                    c.answer_sets,
                    c.paths,
                    c.problem.as_deref().unwrap_or("one to one")
                ));
                value["check"] = serde_json::to_value(&c).expect("json");
                if !c.holds {
                    code = EXIT_FALSE;
                }
            }
            ctx.emit(&text, value)?;
            Ok(code)
        }
    }
}

fn run_verify_claims(ctx: &mut Ctx, cases: usize, skip_properties: bool) -> Result<i32, Failure> {
    let opts = SolveOptions { cap: ctx.cli.cap.max(20), workers: ctx.cli.workers.max(1) };
    let t = Instant::now();
    let mut ok = true;
    let mut text = String::new();
    let claims = verify_claims(&default_instances(), &opts);
    for r in &claims {
        ok &= r.passed();
        let label = if r.claim == 0 { "correspondence".to_string() } else { format!("claim {}", r.claim) };
        let status = match r.status {
            ClaimStatus::Holds => "holds".to_string(),
            ClaimStatus::Fails => "FAILS".to_string(),
            ClaimStatus::Withdrawn { counterexample: true } => "withdrawn, counterexample found".to_string(),
            ClaimStatus::Withdrawn { counterexample: false } => "withdrawn, NO counterexample".to_string(),
        };
        text.push_str(&format!(
            "{label:<15} {} actions, n={}: {status} ({} ms) {}\n",
            r.instance.actions.len(),
            r.instance.horizon,
            r.millis,
            r.title
        ));
        if let (false, Some(d)) = (r.passed(), &r.detail) {
            text.push_str(&format!("  {d}\n"));
        }
    }
    let water = corpus::water();
    let mut translations = Vec::new();
    for horizon in 1..=2 {
        let lp = clang::check_lp_paths(&water, horizon, &opts)?;
        let simp = clang::check_simp_paths(&water, horizon, &opts)?;
        ok &= lp.holds && simp.holds;
        text.push_str(&format!(
            "water T={horizon}: lp {} and simp {} answer sets for {} paths: {}\n",
            lp.answer_sets,
            simp.answer_sets,
            lp.paths,
            if lp.holds && simp.holds { "one to one" } else { "MISMATCH" }
        ));
        translations.push(json!({ "horizon": horizon, "lp": lp, "simp": simp }));
    }
    let mut suites = Vec::new();
    if !skip_properties {
        for r in checks::run_all(cases, ctx.cli.seed, &ctx.solve()) {
            ok &= r.violations == 0;
            text.push_str(&format!("property {:<17} {} cases, {} violations ({} ms)\n", r.suite.name(), r.cases, r.violations, r.millis));
            if let Some(v) = &r.first_violation {
                text.push_str(&format!("  {v}\n"));
            }
            suites.push(r);
        }
    }
    text.push_str(&format!("{} in {:.1?}\n", if ok { "all checks pass" } else { "SOME CHECKS FAIL" }, t.elapsed()));
    let value = json!({ "ok": ok, "claims": claims, "translations": translations, "properties": suites, "seed": ctx.cli.seed });
    ctx.emit(&text, value)?;
    Ok(if ok { EXIT_OK } else { EXIT_FALSE })
}
