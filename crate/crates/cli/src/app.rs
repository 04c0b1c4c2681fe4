use std::cmp::Ordering;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ordrefl_core::checks::{self, SuiteReport, WormTable};
use ordrefl_core::formula::{Decider, Level, RcFormula};
use ordrefl_core::oracle::{decide_oracle, CounterModel, OracleError, ProofObject, Verdict};
use ordrefl_core::ordinal::{add, compare, eps, omega_pow, omega_tower, OrdinalTerm};
use ordrefl_core::theory::{
    interpret_worm, parse_class, parse_theory, proof_theoretic_ordinal, reduce, reflection_rank, InterpFlavor,
    NoRuleApplies, RankBase, RankResult, TheoryError, TraceStep,
};
use ordrefl_core::worm::{as_formula, parse_formula_or_worm, worm_ordinal, Worm};
use ordrefl_core::ParseError;
use serde_json::{json, Value};
use thiserror::Error;

use crate::cache::{self, CacheError};
use crate::config::{ConfigError, Overrides, RunConfig};

pub const EXIT_TRUE: u8 = 0;
pub const EXIT_FALSE: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_UNRESOLVED: u8 = 3;
pub const EXIT_INVARIANT: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "ordrefl", version, about = "Reflection calculus, worms and iterated-reflection ordinals")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    /// key=value configuration file
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// File-backed cache of decided sequents
    #[arg(long, global = true, value_name = "FILE")]
    cache: Option<PathBuf>,
    #[arg(long, global = true, value_name = "N")]
    proof_depth: Option<usize>,
    #[arg(long, global = true, value_name = "N")]
    max_formula_size: Option<usize>,
    #[arg(long, global = true, value_name = "N")]
    max_worlds: Option<usize>,
    /// Largest worm letter enumerated by `check`
    #[arg(long, global = true, value_name = "N")]
    max_letter: Option<Level>,
    /// Longest worm enumerated by `check`
    #[arg(long, global = true, value_name = "N")]
    max_len: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Derivability of sequents
    #[command(subcommand)]
    Rc(RcCmd),
    /// Worm ordinals and comparison
    #[command(subcommand)]
    Worm(WormCmd),
    /// Ordinal arithmetic on Cantor normal forms
    #[command(subcommand)]
    Ord(OrdCmd),
    /// Iterated-reflection theories
    #[command(subcommand)]
    Theory(TheoryCmd),
    /// Run property suites and print a pass/fail table
    Check(CheckArgs),
}

#[derive(Subcommand, Debug)]
enum RcCmd {
    /// Decide `A ⊢ B`; formulas or worm literals
    Prove {
        a: String,
        b: String,
        /// Attach a proof or countermodel from the oracle
        #[arg(long)]
        certify: bool,
    },
}

#[derive(Subcommand, Debug)]
enum WormCmd {
    /// Ordinal of a worm
    Ord { worm: String },
    /// Compare two worms under `<_0`: LT, GT or EQ
    Compare { a: String, b: String },
}

#[derive(Subcommand, Debug)]
enum OrdCmd {
    Compare { a: String, b: String },
    Add { a: String, b: String },
    /// w^a
    Omega { a: String },
    /// e(a)
    Eps { a: String },
    /// w^(w^(...(a))) with m exponentials
    Tower {
        m: usize,
        #[arg(default_value = "1")]
        a: String,
    },
}

#[derive(Subcommand, Debug)]
enum TheoryCmd {
    /// Rewrite towards an iteration of the target class
    Reduce {
        expr: String,
        #[arg(long)]
        target: String,
    },
    /// Reflection rank over a base theory
    Rank {
        expr: String,
        #[arg(long, value_enum, default_value = "ACA0")]
        base: BaseArg,
    },
    /// Proof-theoretic ordinal
    Wo { expr: String },
    /// Read a worm as a theory
    Interp {
        worm: String,
        #[arg(long, value_enum, default_value = "aca0")]
        flavor: FlavorArg,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BaseArg {
    #[value(name = "ACA0", alias = "aca0")]
    Aca0,
    #[value(name = "RCA0", alias = "rca0")]
    Rca0,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FlavorArg {
    /// (<n>A)* = ACA0 + RFN[Pi1_(n+1)](A*)
    Aca0,
    /// (<0>A)* = RCA0 + RFN[Pi11Pi03](A*)
    Rca0,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
enum Suite {
    Axioms,
    Trichotomy,
    Acyclic,
    Iso,
    OracleAgreement,
    Schmerl,
    OrdinalAlgebra,
    WormNormalization,
    All,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long, value_enum, required = true)]
    suite: Vec<Suite>,
    /// Formula size bound for `axioms` and `worm-normalization`
    #[arg(long, default_value_t = 3)]
    max_size: usize,
    /// Level bound for `axioms` and `worm-normalization`
    #[arg(long, default_value_t = 2)]
    max_level: Level,
    /// Worm length bound for `worm-normalization`
    #[arg(long, default_value_t = 8)]
    worm_len: usize,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 4)]
    depth: usize,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error("invariant violation: {0}")]
    Invariant(String),
}

impl CliError {
    fn code(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "PARSE_ERROR",
            CliError::Theory(e) => e.code(),
            CliError::Config(_) => "CONFIG_ERROR",
            CliError::Cache(_) => "CACHE_ERROR",
            CliError::Invariant(_) => "INVARIANT_VIOLATION",
        }
    }

    fn exit(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Config(_) => EXIT_PARSE,
            CliError::Theory(TheoryError::NoRuleApplies(_) | TheoryError::Unsupported(_)) => EXIT_UNRESOLVED,
            CliError::Theory(_) => EXIT_PARSE,
            CliError::Cache(_) | CliError::Invariant(_) => EXIT_INVARIANT,
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        CliError::Invariant(e.to_string())
    }
}

/// What a command produced. A non-zero exit with a diagnostic still prints
/// its output.
struct Outcome {
    text: String,
    json: Value,
    exit: u8,
    diagnostic: Option<(&'static str, String)>,
}

impl Outcome {
    fn ok(text: impl Into<String>, json: Value) -> Self {
        Outcome {
            text: text.into(),
            json,
            exit: EXIT_TRUE,
            diagnostic: None,
        }
    }
}

fn diagnostic(code: &str, exit: u8, message: &str) {
    eprintln!("{}", json!({ "code": code, "exit": exit, "message": message }));
}

/// Parses `argv` (program name first), runs the command, prints its output
/// and returns the exit code.
pub fn run<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return EXIT_TRUE;
            }
            eprint!("{}", e.render());
            let first = e.to_string();
            let first = first.lines().next().unwrap_or("").trim_start_matches("error: ");
            diagnostic("USAGE_ERROR", EXIT_PARSE, first);
            return EXIT_PARSE;
        }
    };
    let g = &cli.global;
    let flags = Overrides {
        proof_depth: g.proof_depth,
        max_formula_size: g.max_formula_size,
        max_worlds: g.max_worlds,
        max_letter: g.max_letter,
        max_len: g.max_len,
        json: g.json,
        cache: g.cache.clone(),
    };
    let cfg = match RunConfig::resolve(g.config.as_deref(), &flags) {
        Ok(cfg) => cfg,
        Err(e) => {
            let e = CliError::from(e);
            diagnostic(e.code(), e.exit(), &e.to_string());
            return e.exit();
        }
    };
    match execute(&cli.command, &cfg) {
        Ok(out) => {
            if cfg.json() {
                println!("{}", out.json);
            } else {
                print!("{}", out.text);
                if !out.text.ends_with('\n') {
                    println!();
                }
            }
            if let Some((code, message)) = &out.diagnostic {
                diagnostic(code, out.exit, message);
            }
            out.exit
        }
        Err(e) => {
            diagnostic(e.code(), e.exit(), &e.to_string());
            e.exit()
        }
    }
}

fn execute(cmd: &Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cmd {
        Command::Rc(RcCmd::Prove { a, b, certify }) => with_decider(cfg, |dec| rc_prove(dec, cfg, a, b, *certify)),
        Command::Worm(WormCmd::Ord { worm }) => {
            let w: Worm = worm.parse()?;
            let o = worm_ordinal(&w);
            Ok(Outcome::ok(o.to_string(), json!({ "worm": w.to_string(), "ordinal": o })))
        }
        Command::Worm(WormCmd::Compare { a, b }) => with_decider(cfg, |dec| worm_compare(dec, a, b)),
        Command::Ord(op) => ord(op),
        Command::Theory(op) => theory(op),
        Command::Check(args) => with_decider(cfg, |dec| check(dec, cfg, args)),
    }
}

// Runs `f` with a decider seeded from the configured cache, saving the cache
// afterwards when the command succeeded.
fn with_decider(
    cfg: &RunConfig,
    f: impl FnOnce(&mut Decider) -> Result<Outcome, CliError>,
) -> Result<Outcome, CliError> {
    let mut dec = Decider::new();
    if let Some(path) = &cfg.cache {
        cache::load(path, &mut dec)?;
    }
    let out = f(&mut dec)?;
    if let Some(path) = &cfg.cache {
        cache::save(path, &dec)?;
    }
    Ok(out)
}

fn order_name(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "LT",
        Ordering::Equal => "EQ",
        Ordering::Greater => "GT",
    }
}

fn rc_prove(dec: &mut Decider, cfg: &RunConfig, a: &str, b: &str, certify: bool) -> Result<Outcome, CliError> {
    let (fa, fb) = (parse_formula_or_worm(a)?, parse_formula_or_worm(b)?);
    let derivable = dec.derives(&fa, &fb);
    let mut text = format!("{derivable}\n");
    let mut js = json!({ "lhs": fa, "rhs": fb, "derivable": derivable });
    let mut exit = if derivable { EXIT_TRUE } else { EXIT_FALSE };
    let mut diag = None;
    if certify {
        let verdict = decide_oracle(&fa, &fb, &cfg.budget)?;
        match verdict.as_bool() {
            Some(v) if v != derivable => {
                return Err(CliError::Invariant(format!(
                    "oracle certifies {v} but the decision procedure gives {derivable} for {fa} |- {fb}"
                )))
            }
            Some(_) => {}
            None => {
                exit = EXIT_UNRESOLVED;
                diag = Some(("UNRESOLVED", format!("no certificate for {fa} |- {fb} within budget")));
            }
        }
        match &verdict {
            Verdict::Derivable(p) => {
                let _ = writeln!(text, "certificate: proof with {} nodes", p.node_count());
                render_proof(p, 1, &mut text);
            }
            Verdict::NotDerivable(m) => render_model(m, &mut text),
            Verdict::Unresolved => text.push_str("certificate: UNRESOLVED\n"),
        }
        js["certificate"] = serde_json::to_value(&verdict).map_err(|e| CliError::Invariant(e.to_string()))?;
    }
    Ok(Outcome {
        text,
        json: js,
        exit,
        diagnostic: diag,
    })
}

fn render_proof(p: &ProofObject, indent: usize, out: &mut String) {
    let _ = writeln!(out, "{:width$}{:<10} {}", "", p.rule.name(), p.sequent, width = 2 * indent);
    for c in &p.children {
        render_proof(c, indent + 1, out);
    }
}

fn render_model(m: &CounterModel, out: &mut String) {
    let _ = writeln!(out, "certificate: countermodel with {} worlds, witness {}", m.worlds, m.witness);
    for (n, pairs) in m.relations.iter().enumerate() {
        let edges: Vec<String> = pairs.iter().map(|(i, j)| format!("{i}->{j}")).collect();
        let edges = if edges.is_empty() { "none".to_string() } else { edges.join(" ") };
        let _ = writeln!(out, "  R{n}: {edges}");
    }
}

fn worm_compare(dec: &mut Decider, a: &str, b: &str) -> Result<Outcome, CliError> {
    let (wa, wb): (Worm, Worm) = (a.parse()?, b.parse()?);
    let (fa, fb): (RcFormula, RcFormula) = (as_formula(&wa), as_formula(&wb));
    let by_calculus = if dec.less_n(0, &fa, &fb) {
        Ordering::Less
    } else if dec.less_n(0, &fb, &fa) {
        Ordering::Greater
    } else {
        Ordering::Equal
    };
    let by_ordinal = compare(&worm_ordinal(&wa), &worm_ordinal(&wb));
    if by_calculus != by_ordinal || (by_calculus == Ordering::Equal && !dec.equivalent(&fa, &fb)) {
        return Err(CliError::Invariant(format!(
            "{wa} vs {wb}: calculus gives {}, ordinals give {}",
            order_name(by_calculus),
            order_name(by_ordinal)
        )));
    }
    let name = order_name(by_calculus);
    Ok(Outcome::ok(name, json!({ "a": wa.to_string(), "b": wb.to_string(), "order": name })))
}

fn ordinal(text: &str) -> Result<OrdinalTerm, ParseError> {
    text.parse()
}

fn ord(op: &OrdCmd) -> Result<Outcome, CliError> {
    let (name, result) = match op {
        OrdCmd::Compare { a, b } => {
            let o = order_name(compare(&ordinal(a)?, &ordinal(b)?));
            return Ok(Outcome::ok(o, json!({ "op": "compare", "order": o })));
        }
        OrdCmd::Add { a, b } => ("add", add(&ordinal(a)?, &ordinal(b)?)),
        OrdCmd::Omega { a } => ("omega", omega_pow(&ordinal(a)?)),
        OrdCmd::Eps { a } => ("eps", eps(&ordinal(a)?)),
        OrdCmd::Tower { m, a } => ("tower", omega_tower(*m, &ordinal(a)?)),
    };
    Ok(Outcome::ok(result.to_string(), json!({ "op": name, "result": result })))
}

fn render_trace(trace: &[TraceStep], out: &mut String) {
    for (i, step) in trace.iter().enumerate() {
        let _ = writeln!(out, "  {}. {step}", i + 1);
        let _ = writeln!(out, "     {}", step.citation);
    }
}

fn rank_outcome(r: RankResult) -> Outcome {
    let mut text = format!("{}\n", r.value);
    render_trace(&r.trace, &mut text);
    Outcome::ok(text, json!(r))
}

fn no_rule(info: &NoRuleApplies) -> Outcome {
    let mut text = format!("NO_RULE_APPLIES at {}\n", info.partial);
    render_trace(&info.trace, &mut text);
    let mut js = json!(info);
    js["status"] = json!("NO_RULE_APPLIES");
    Outcome {
        text,
        json: js,
        exit: EXIT_UNRESOLVED,
        diagnostic: Some((
            "NO_RULE_APPLIES",
            format!("no rule reaches {} from ({}, {})", info.target, info.base, info.class),
        )),
    }
}

fn theory(op: &TheoryCmd) -> Result<Outcome, CliError> {
    let result = match op {
        TheoryCmd::Reduce { expr, target } => {
            let e = parse_theory(expr)?;
            let target = parse_class(target)?;
            reduce(&e, target).map(|r| {
                let mut text = format!("{}\n", r.result);
                render_trace(&r.trace, &mut text);
                let mut js = json!(r);
                js["target"] = json!(target);
                Outcome::ok(text, js)
            })
        }
        TheoryCmd::Rank { expr, base } => {
            let base = match base {
                BaseArg::Aca0 => RankBase::ACA0,
                BaseArg::Rca0 => RankBase::RCA0,
            };
            reflection_rank(&parse_theory(expr)?, base).map(rank_outcome)
        }
        TheoryCmd::Wo { expr } => proof_theoretic_ordinal(&parse_theory(expr)?).map(rank_outcome),
        TheoryCmd::Interp { worm, flavor } => {
            let w: Worm = worm.parse()?;
            let fl = match flavor {
                FlavorArg::Aca0 => InterpFlavor::Aca0Pi1n,
                FlavorArg::Rca0 => InterpFlavor::Rca0Pi11Pi03,
            };
            interpret_worm(&w, fl).map(|t| {
                Outcome::ok(
                    t.to_string(),
                    json!({ "worm": w.to_string(), "flavor": fl, "theory": t }),
                )
            })
        }
    };
    match result {
        Ok(out) => Ok(out),
        Err(TheoryError::NoRuleApplies(info)) => Ok(no_rule(&info)),
        Err(e) => Err(e.into()),
    }
}

fn check(dec: &mut Decider, cfg: &RunConfig, args: &CheckArgs) -> Result<Outcome, CliError> {
    let mut suites = args.suite.clone();
    if suites.contains(&Suite::All) {
        suites = Suite::value_variants().iter().copied().filter(|s| *s != Suite::All).collect();
    }
    suites.sort();
    suites.dedup();
    let needs_table = suites.iter().any(|s| matches!(s, Suite::Trichotomy | Suite::Acyclic | Suite::Iso));
    let table = needs_table.then(|| WormTable::build_with(dec, cfg.max_letter, cfg.max_len));
    let mut reports: Vec<SuiteReport> = Vec::new();
    for suite in suites {
        match suite {
            Suite::Axioms => reports.push(checks::axioms_with(dec, args.max_size, args.max_level)),
            Suite::Trichotomy => reports.push(checks::trichotomy(table.as_ref().expect("table built"))),
            Suite::Acyclic => reports.push(checks::acyclic(table.as_ref().expect("table built"))),
            Suite::Iso => reports.push(checks::iso(table.as_ref().expect("table built"))),
            Suite::OracleAgreement => {
                let c = checks::oracle_agreement_with(dec, cfg.max_letter, cfg.max_len, &cfg.budget);
                reports.push(c.agreement);
                reports.push(c.certificates);
            }
            Suite::Schmerl => reports.push(checks::schmerl()),
            Suite::OrdinalAlgebra => reports.push(checks::ordinal_algebra(args.samples, args.depth, args.seed)),
            Suite::WormNormalization => reports.push(checks::worm_normalization_with(
                dec,
                args.max_size,
                args.max_level,
                args.worm_len,
            )),
            Suite::All => unreachable!("expanded above"),
        }
    }
    let passed = reports.iter().all(|r| r.passed);
    let mut text = String::new();
    for r in &reports {
        let _ = writeln!(text, "{r}");
        for f in &r.failures {
            let _ = writeln!(text, "    {f}");
        }
    }
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.suite.as_str()).collect();
    Ok(Outcome {
        text,
        json: json!({ "passed": passed, "config": cfg, "suites": reports }),
        exit: if passed { EXIT_TRUE } else { EXIT_INVARIANT },
        diagnostic: (!passed).then(|| ("SUITE_FAILED", format!("failing suites: {}", failed.join(", ")))),
    })
}
