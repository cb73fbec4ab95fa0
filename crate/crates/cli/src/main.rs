//! Command-line front end. Exit codes: 0 the property holds (or the
//! requested model exists), 1 it fails, 2 usage or input error, 3 a budget
//! ran out before a verdict.

use std::collections::BTreeMap;
use std::io::{self, BufReader};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use catbench::coding::{self, Coder, CodingError};
use catbench::dedekind::{self, ChainProblem, DedekindError};
use catbench::ef::{self, EfError, Game, Interactive, Player};
use catbench::finder::{self, FinderError, Outcome, SearchProblem, SizeStatus, UnsatVerdict};
use catbench::formula::{self, parse_formula, Formula, FormulaError, Theory, Vocabulary};
use catbench::hf::{self, HFSet, HfError, MembershipDigraph};
use catbench::mocheck::{self, Limits, MocheckError, VerdictJson};
use catbench::structures::{preset, FiniteStructure, PresentedStructure, StructureError};
use catbench::DEFAULT_STEP_BUDGET;
use clap::{Args, Parser, Subcommand, ValueEnum};
use dashu_int::UBig;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "catbench", version, about = "Categoricity constructions at desk scale")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized strategies.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Node or step budget for searches and evaluations
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    budget_nodes: Option<u64>,
    /// Wall-clock limit for model search, in milliseconds
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    budget_ms: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and transform formulas.
    #[command(subcommand)]
    Fmla(FmlaCmd),
    /// Evaluate a sentence on a finite structure.
    #[command(subcommand)]
    Eval(EvalCmd),
    /// Check each axiom of a theory on a finite structure.
    Audit(AuditArgs),
    /// Ehrenfeucht-Fraisse games.
    #[command(subcommand)]
    Ef(EfCmd),
    /// Chains, simply infinite systems and recursion maps.
    #[command(subcommand)]
    Dedekind(DedekindCmd),
    /// Hereditarily finite sets over urelements.
    #[command(subcommand)]
    Hf(HfCmd),
    /// Pairing, sequence codes and coded partial isomorphisms.
    #[command(subcommand)]
    Code(CodeCmd),
    /// Finite model search.
    #[command(subcommand)]
    Find(FindCmd),
}

#[derive(Subcommand)]
enum FmlaCmd {
    /// Parse and print in canonical form
    Parse {
        #[arg(long)]
        vocab: PathBuf,
        formula: String,
    },
    /// Relativize, rename or copy the vocabulary
    Xform {
        #[arg(long)]
        vocab: PathBuf,
        formula: String,
        /// Relativize quantifiers to this unary predicate.
        #[arg(long)]
        relativize: Option<String>,
        /// Also relativize second-order quantifiers.
        #[arg(long)]
        so: bool,
        /// Symbol renaming `a=b`, repeatable.
        #[arg(long = "rename")]
        renames: Vec<String>,
        /// Rename every symbol to its k-th copy.
        #[arg(long)]
        copy: Option<usize>,
    },
}

#[derive(Subcommand)]
enum EvalCmd {
    /// First-order evaluation
    Fo(EvalArgs),
    /// Second-order evaluation with full semantics
    So(EvalArgs),
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    structure: PathBuf,
    formula: String,
    /// Free variable value `x=element`, repeatable.
    #[arg(long = "assign")]
    assign: Vec<String>,
    #[arg(long, default_value_t = mocheck::DEFAULT_MAX_CANDIDATES)]
    max_candidates: u64,
}

#[derive(Args)]
struct TheoryArgs {
    /// Built-in theory id.
    #[arg(long, conflicts_with = "theory_file")]
    theory: Option<String>,
    /// Theory parameter `key=value`, repeatable.
    #[arg(long = "param")]
    params: Vec<String>,
    #[arg(long)]
    theory_file: Option<PathBuf>,
    /// Largest schema instance size (0 for none).
    #[arg(long, default_value_t = 0)]
    schema_bound: usize,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long)]
    structure: PathBuf,
    #[command(flatten)]
    theory: TheoryArgs,
}

#[derive(Subcommand)]
enum EfCmd {
    /// Exact solution for two finite structures.
    Solve {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        rounds: usize,
    },
    /// Play a game; either side may be a human on the terminal.
    Play {
        /// Structure file, or a presentation such as `standard`,
        /// `nonstandard(1)`, `sum(standard,nonstandard(1))`.
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        rounds: usize,
        /// human, solver (finite), random or omega (presented).
        #[arg(long, default_value = "human")]
        spoiler: String,
        /// human, solver (finite), distance or random (presented).
        #[arg(long, default_value = "solver")]
        duplicator: String,
    },
}

#[derive(Subcommand)]
enum DedekindCmd {
    /// Chain closure of the base.
    Closure(ChainArgs),
    /// Check the simply-infinite clauses.
    SimplyInfinite(ChainArgs),
    /// Build and verify the recursion map between two presentations.
    Iso {
        #[arg(long, default_value = "standard")]
        source: String,
        #[arg(long, default_value = "evens")]
        target: String,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Args)]
struct ChainArgs {
    /// Structure with one unary function and one constant.
    #[arg(long, conflicts_with_all = ["phi", "base"])]
    structure: Option<PathBuf>,
    /// Map as a comma list of images of 0, 1, ...
    #[arg(long)]
    phi: Option<String>,
    #[arg(long)]
    base: Option<usize>,
}

#[derive(Args)]
struct UniverseArgs {
    /// Comma separated urelement ids.
    #[arg(long, default_value = "")]
    urelements: String,
    #[arg(long)]
    rank: usize,
    #[arg(long, default_value_t = hf::DEFAULT_UNIVERSE_LIMIT)]
    limit: usize,
}

#[derive(Subcommand)]
enum HfCmd {
    /// Stage sizes of the cumulative hierarchy.
    Build(UniverseArgs),
    /// First stage containing a set literal.
    Stage {
        #[command(flatten)]
        universe: UniverseArgs,
        set: String,
    },
    /// Collapse a membership digraph file.
    Collapse {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Lift a bijection of urelements to the stages above them.
    Lift {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        rank: usize,
        /// Pairs `a=b`; defaults to matching the lists in order.
        #[arg(long = "map")]
        map: Vec<String>,
    },
    /// Axiom-by-axiom audit of a truncated universe.
    Audit(UniverseArgs),
    /// Search every urelement-complete subdomain for the two hypotheses.
    Lemma1(UniverseArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Codec {
    Digits,
    Iterated,
}

impl Codec {
    fn coder(self) -> Coder {
        match self {
            Codec::Digits => Coder::digits(),
            Codec::Iterated => Coder::iterated(),
        }
    }
}

#[derive(Subcommand)]
enum CodeCmd {
    /// Cantor pairing, or unpairing with `--unpair`.
    Pair {
        values: Vec<String>,
        #[arg(long)]
        unpair: bool,
    },
    /// Sequence code of a comma list, or decoding with `--decode`.
    Seq {
        values: Option<String>,
        #[arg(long)]
        decode: Option<String>,
        #[arg(long, value_enum, default_value_t = Codec::Iterated)]
        codec: Codec,
    },
    /// Check ψ(x,u,v); without `--x`, build a witness for u first.
    Psi {
        #[arg(long)]
        u: u64,
        #[arg(long)]
        v: Option<u64>,
        #[arg(long)]
        x: Option<String>,
        #[arg(long, default_value = "standard")]
        source: String,
        #[arg(long, default_value = "evens")]
        target: String,
        #[arg(long, value_enum, default_value_t = Codec::Digits)]
        codec: Codec,
    },
    /// Clauses of the map F on the first n+1 elements.
    Iso {
        #[arg(long, default_value = "standard")]
        source: String,
        #[arg(long, default_value = "evens")]
        target: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Codec::Digits)]
        codec: Codec,
    },
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    theory: TheoryArgs,
    #[arg(long, default_value_t = 1)]
    min: usize,
    #[arg(long, default_value_t = 8)]
    max: usize,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Write the model found as a structure file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum FindCmd {
    /// Smallest model in the size range
    Model(SearchArgs),
    /// Exit 0 when no model exists up to `--max`.
    Unsat(SearchArgs),
    /// Search the joint theory of two relativized copies disagreeing on φ.
    Intolerance {
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        phi: String,
    },
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure { code: 2, msg: msg.into() }
    }

    fn budget(msg: impl Into<String>) -> Self {
        Failure { code: 3, msg: msg.into() }
    }
}

impl From<FormulaError> for Failure {
    fn from(e: FormulaError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<StructureError> for Failure {
    fn from(e: StructureError) -> Self {
        match e {
            StructureError::Budget(_) => Failure::budget(e.to_string()),
            _ => Failure::usage(e.to_string()),
        }
    }
}

impl From<MocheckError> for Failure {
    fn from(e: MocheckError) -> Self {
        match e {
            MocheckError::Budget(_) | MocheckError::LimitExceeded { .. } => Failure::budget(e.to_string()),
            _ => Failure::usage(e.to_string()),
        }
    }
}

impl From<EfError> for Failure {
    fn from(e: EfError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<DedekindError> for Failure {
    fn from(e: DedekindError) -> Self {
        match e {
            DedekindError::Presentation(s) => s.into(),
            e => Failure::usage(e.to_string()),
        }
    }
}

impl From<HfError> for Failure {
    fn from(e: HfError) -> Self {
        match e {
            HfError::LimitExceeded { .. } => Failure::budget(e.to_string()),
            _ => Failure::usage(e.to_string()),
        }
    }
}

impl From<CodingError> for Failure {
    fn from(e: CodingError) -> Self {
        match e {
            CodingError::Presentation(s) => s.into(),
            CodingError::Budget(_) => Failure::budget(e.to_string()),
            e => Failure::usage(e.to_string()),
        }
    }
}

impl From<FinderError> for Failure {
    fn from(e: FinderError) -> Self {
        match e {
            FinderError::Mocheck(m) => m.into(),
            e => Failure::usage(e.to_string()),
        }
    }
}

type Res = Result<u8, Failure>;

struct Out {
    format: Format,
}

impl Out {
    /// Prints `text` or `value` by format; returns `code`.
    fn emit(&self, text: impl AsRef<str>, value: Value, code: u8) -> Res {
        match self.format {
            Format::Text => {
                let t = text.as_ref();
                print!("{t}");
                if !t.ends_with('\n') {
                    println!();
                }
            }
            Format::Json => println!("{}", serde_json::to_string_pretty(&value).expect("serializable")),
        }
        Ok(code)
    }
}

fn code_of(holds: bool) -> u8 {
    if holds {
        0
    } else {
        1
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_vocab(path: &Path) -> Result<Vocabulary, Failure> {
    Ok(Vocabulary::parse(&read(path)?)?)
}

fn load_structure(path: &Path) -> Result<FiniteStructure, Failure> {
    FiniteStructure::load(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn key_values(items: &[String], what: &str) -> Result<BTreeMap<String, String>, Failure> {
    let mut out = BTreeMap::new();
    for item in items {
        let (k, v) = item.split_once('=').ok_or_else(|| Failure::usage(format!("{what} '{item}' is not key=value")))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn parse_with_position(text: &str, vocab: &Vocabulary) -> Result<Formula, Failure> {
    parse_formula(text, vocab).map_err(|e| match e.position() {
        Some(pos) => Failure::usage(format!("{e}\n  {text}\n  {}^", " ".repeat(pos))),
        None => Failure::usage(e.to_string()),
    })
}

fn load_theory(t: &TheoryArgs) -> Result<Theory, Failure> {
    match (&t.theory, &t.theory_file) {
        (Some(id), None) => Ok(formula::build_theory(id, &key_values(&t.params, "parameter")?)?),
        (None, Some(path)) => Ok(Theory::parse(&read(path)?)?),
        _ => Err(Failure::usage(format!("give --theory <id> or --theory-file; ids: {}", formula::THEORY_IDS.join(", ")))),
    }
}

fn limits(cli: &Cli, max_candidates: u64) -> Limits {
    Limits { max_candidates, max_nodes: cli.budget_nodes.unwrap_or(u64::MAX), witness: true }
}

fn step_budget(cli: &Cli) -> u64 {
    cli.budget_nodes.unwrap_or(DEFAULT_STEP_BUDGET)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Res {
    let out = Out { format: cli.format };
    match &cli.cmd {
        Cmd::Fmla(c) => fmla(c, &out),
        Cmd::Eval(c) => eval(cli, c, &out),
        Cmd::Audit(a) => audit(cli, a, &out),
        Cmd::Ef(c) => ef_cmd(cli, c, &out),
        Cmd::Dedekind(c) => dedekind_cmd(cli, c, &out),
        Cmd::Hf(c) => hf_cmd(c, &out),
        Cmd::Code(c) => code_cmd(cli, c, &out),
        Cmd::Find(c) => find_cmd(cli, c, &out),
    }
}

fn fmla(c: &FmlaCmd, out: &Out) -> Res {
    match c {
        FmlaCmd::Parse { vocab, formula } => {
            let v = load_vocab(vocab)?;
            let f = parse_with_position(formula, &v)?;
            let free: Vec<String> = f.free_vars().into_iter().collect();
            let value = json!({
                "formula": f.to_string(),
                "size": f.size(),
                "quantifier_rank": f.quantifier_rank(),
                "first_order": f.is_first_order(),
                "free_vars": free,
            });
            out.emit(format!("{f}\n"), value, 0)
        }
        FmlaCmd::Xform { vocab, formula, relativize, so, renames, copy } => {
            let v = load_vocab(vocab)?;
            let mut f = parse_with_position(formula, &v)?;
            let mut map = key_values(renames, "renaming")?;
            if let Some(k) = copy {
                if *k == 0 {
                    return Err(Failure::usage("copies are numbered from 1"));
                }
                for s in v.symbols() {
                    map.entry(s.name.clone()).or_insert_with(|| formula::copy_name(&s.name, *k));
                }
            }
            if !map.is_empty() {
                f = formula::rename_vocab(&f, &v, &map)?;
            }
            if let Some(u) = relativize {
                f = formula::relativize(&f, u, *so)?;
            }
            out.emit(format!("{f}\n"), json!({ "formula": f.to_string() }), 0)
        }
    }
}

fn assignment(s: &FiniteStructure, items: &[String]) -> Result<Vec<(String, usize)>, Failure> {
    key_values(items, "assignment")?
        .into_iter()
        .map(|(x, e)| {
            let i = s.element(&e).ok_or_else(|| Failure::usage(format!("'{e}' is not an element")))?;
            Ok((x, i))
        })
        .collect()
}

fn eval(cli: &Cli, c: &EvalCmd, out: &Out) -> Res {
    let (a, so) = match c {
        EvalCmd::Fo(a) => (a, false),
        EvalCmd::So(a) => (a, true),
    };
    let s = load_structure(&a.structure)?;
    let f = parse_with_position(&a.formula, s.vocab())?;
    let assign = assignment(&s, &a.assign)?;
    let pairs: Vec<(&str, usize)> = assign.iter().map(|(x, e)| (x.as_str(), *e)).collect();
    let lim = limits(cli, a.max_candidates);
    let v = if so { mocheck::eval_so_with(&s, &f, &pairs, lim)? } else { mocheck::eval_fo_with(&s, &f, &pairs, lim)? };
    let mut text = format!("{}\n", v.value);
    if let Some(w) = v.render_witness(&s) {
        text.push_str(&format!("{} {w}\n", if v.value { "witness" } else { "counterexample" }));
    }
    let value = serde_json::to_value(VerdictJson::new(&v, &s)).expect("serializable");
    out.emit(text, value, code_of(v.value))
}

fn audit(cli: &Cli, a: &AuditArgs, out: &Out) -> Res {
    let s = load_structure(&a.structure)?;
    let t = load_theory(&a.theory)?;
    let r = mocheck::audit_theory(&s, &t, a.theory.schema_bound, limits(cli, mocheck::DEFAULT_MAX_CANDIDATES))?;
    out.emit(r.render(), serde_json::to_value(&r).expect("serializable"), code_of(r.sat))
}

enum Loaded {
    Finite(FiniteStructure),
    Presented(PresentedStructure),
}

fn load_either(spec: &str) -> Result<Loaded, Failure> {
    let path = Path::new(spec);
    if path.exists() {
        return Ok(Loaded::Finite(load_structure(path)?));
    }
    PresentedStructure::parse(spec)
        .map(Loaded::Presented)
        .map_err(|e| Failure::usage(format!("'{spec}' is neither a structure file nor a presentation: {e}")))
}

fn ef_cmd(cli: &Cli, c: &EfCmd, out: &Out) -> Res {
    match c {
        EfCmd::Solve { left, right, rounds } => {
            let a = load_structure(left)?;
            let b = load_structure(right)?;
            let r = ef::solve_game(&a, &b, *rounds)?;
            let verified = ef::verify_certificate(&a, &b, *rounds, &r.certificate)?;
            let game = Game::new(&a, &b)?;
            let winner = r.winner;
            let text = format!(
                "winner: {winner}\npositions: {}\ncertificate: {} entries, verified {verified}\n{}",
                r.positions,
                r.certificate.len(),
                r.transcript.to_text(&game)
            );
            let value = json!({
                "winner": winner,
                "rounds": rounds,
                "positions": r.positions,
                "certificate_entries": r.certificate.len(),
                "certificate_verified": verified,
                "transcript": r.transcript.to_json(&game),
            });
            if !verified {
                return Err(Failure::usage("internal: certificate failed independent replay"));
            }
            out.emit(text, value, code_of(winner == Player::Duplicator))
        }
        EfCmd::Play { left, right, rounds, spoiler, duplicator } => match (load_either(left)?, load_either(right)?) {
            (Loaded::Finite(a), Loaded::Finite(b)) => play_finite(&a, &b, *rounds, spoiler, duplicator, out),
            (Loaded::Presented(a), Loaded::Presented(b)) => {
                play_presented(cli, &a, &b, *rounds, spoiler, duplicator, out)
            }
            _ => Err(Failure::usage("both sides must be structure files or both presentations")),
        },
    }
}

fn finish<G: ef::GameStructure>(game: &Game<G>, t: &ef::Transcript<G::Elem>, out: &Out) -> Res {
    let text = format!("winner: {}\n{}", t.winner, t.to_text(game));
    out.emit(text, t.to_json(game), code_of(t.winner == Player::Duplicator))
}

fn human() -> Interactive<BufReader<io::Stdin>, io::Stderr> {
    Interactive::new(BufReader::new(io::stdin()), io::stderr())
}

fn play_finite(a: &FiniteStructure, b: &FiniteStructure, rounds: usize, sp: &str, dup: &str, out: &Out) -> Res {
    let game = Game::new(a, b)?;
    let mut sp_box: Box<dyn ef::Spoiler<FiniteStructure>> = match sp {
        "human" => Box::new(human()),
        "solver" => Box::new(ef::SolverSpoiler::new(a, b)?),
        other => return Err(Failure::usage(format!("spoiler '{other}' is not available for finite structures"))),
    };
    let mut dup_box: Box<dyn ef::Duplicator<FiniteStructure>> = match dup {
        "human" => Box::new(human()),
        "solver" => Box::new(ef::SolverDuplicator::new(a, b)?),
        other => return Err(Failure::usage(format!("duplicator '{other}' is not available for finite structures"))),
    };
    let t = ef::play(&game, rounds, sp_box.as_mut(), dup_box.as_mut())?;
    finish(&game, &t, out)
}

fn play_presented(
    cli: &Cli,
    a: &PresentedStructure,
    b: &PresentedStructure,
    rounds: usize,
    sp: &str,
    dup: &str,
    out: &Out,
) -> Res {
    let game = Game::new(a, b)?;
    let mut sp_box: Box<dyn ef::Spoiler<PresentedStructure>> = match sp {
        "human" => Box::new(human()),
        "random" => Box::new(ef::RandomSpoiler::new(cli.seed)),
        "omega" => Box::new(ef::OmegaSpoiler::new(&game)?),
        other => return Err(Failure::usage(format!("spoiler '{other}' is not available for presented structures"))),
    };
    let mut dup_box: Box<dyn ef::Duplicator<PresentedStructure>> = match dup {
        "human" => Box::new(human()),
        "distance" => Box::new(ef::DistanceDuplicator::new(&game)?),
        "random" => Box::new(ef::RandomDuplicator::new(cli.seed, 1 << 20, 0.5)),
        other => {
            return Err(Failure::usage(format!("duplicator '{other}' is not available for presented structures")))
        }
    };
    let t = ef::play(&game, rounds, sp_box.as_mut(), dup_box.as_mut())?;
    finish(&game, &t, out)
}

fn chain_problem(a: &ChainArgs) -> Result<ChainProblem, Failure> {
    if let Some(path) = &a.structure {
        return Ok(ChainProblem::from_structure(&load_structure(path)?)?);
    }
    let (Some(phi), Some(base)) = (&a.phi, a.base) else {
        return Err(Failure::usage("give --structure, or --phi and --base"));
    };
    let table = phi
        .split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| Failure::usage(format!("'{x}' is not an element index"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ChainProblem::new(table, base)?)
}

fn dedekind_cmd(cli: &Cli, c: &DedekindCmd, out: &Out) -> Res {
    match c {
        DedekindCmd::Closure(a) => {
            let p = chain_problem(a)?;
            let closure: Vec<usize> = dedekind::chain_closure(&p).into_iter().collect();
            let items: Vec<String> = closure.iter().map(|e| e.to_string()).collect();
            out.emit(format!("{{{}}}\n", items.join(",")), json!({ "base": p.base(), "closure": closure }), 0)
        }
        DedekindCmd::SimplyInfinite(a) => {
            let p = chain_problem(a)?;
            let v = dedekind::check_problem(&p);
            let text = if v.simply_infinite {
                "simply infinite\n".to_string()
            } else {
                let all: Vec<String> = v.failures.iter().map(|f| format!("  {f}\n")).collect();
                format!("not simply infinite\n{}", all.concat())
            };
            out.emit(text, serde_json::to_value(&v).expect("serializable"), code_of(v.simply_infinite))
        }
        DedekindCmd::Iso { source, target, n } => {
            let (p1, p2) = (preset(source)?, preset(target)?);
            let budget = step_budget(cli);
            let m = dedekind::build_recursion_iso(p1.as_ref(), p2.as_ref(), *n, budget)?;
            let r = dedekind::verify_partial_iso(&m, p1.as_ref(), p2.as_ref(), budget)?;
            let shown: Vec<String> = m.pairs.iter().take(12).map(|(a, b)| format!("{a}->{b}")).collect();
            let mut text = format!("{} -> {}, n={n}: {}\n", m.source, m.target, if r.ok { "verified" } else { "FAILED" });
            text.push_str(&format!("{}{}\n", shown.join(" "), if m.pairs.len() > 12 { " ..." } else { "" }));
            for f in &r.failures {
                text.push_str(&format!("  clause {} fails at index {}\n", f.clause, f.index));
            }
            let value = json!({ "map": m, "report": r });
            out.emit(text, value, code_of(r.ok))
        }
    }
}

fn urelement_list(s: &str) -> Vec<&str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).collect()
}

fn universe(a: &UniverseArgs) -> Result<hf::Universe, Failure> {
    Ok(hf::build_universe(&urelement_list(&a.urelements), a.rank, a.limit)?)
}

fn hf_cmd(c: &HfCmd, out: &Out) -> Res {
    match c {
        HfCmd::Build(a) => {
            let u = universe(a)?;
            let sizes: Vec<String> = u.stage_sizes().iter().map(|s| s.to_string()).collect();
            let text = format!("stage sizes {}\n", sizes.join(","));
            out.emit(text, json!({ "urelements": u.urelements(), "rank": a.rank, "stage_sizes": u.stage_sizes() }), 0)
        }
        HfCmd::Stage { universe: a, set } => {
            let u = universe(a)?;
            let x = HFSet::parse(set)?;
            let st = u.stage_of(&x)?;
            out.emit(format!("{st}\n"), json!({ "set": x.to_string(), "stage": st, "rank": x.rank() }), 0)
        }
        HfCmd::Collapse { graph } => {
            let g = MembershipDigraph::from_json(&read(graph)?)?;
            match hf::mostowski_collapse(&g) {
                Ok(values) => {
                    let verified = hf::verify_collapse(&g, &values)?;
                    let lines: Vec<String> = g.nodes.iter().zip(&values).map(|(n, v)| format!("{n} -> {v}\n")).collect();
                    let map: BTreeMap<&String, String> = g.nodes.iter().zip(&values).map(|(n, v)| (n, v.to_string())).collect();
                    out.emit(lines.concat(), json!({ "collapse": map, "verified": verified }), code_of(verified))
                }
                Err(e @ (HfError::IllFounded(_) | HfError::NonExtensional(..) | HfError::UrelementHasMembers(_))) => {
                    out.emit(format!("{e}\n"), json!({ "error": e.to_string() }), 1)
                }
                Err(e) => Err(e.into()),
            }
        }
        HfCmd::Lift { from, to, rank, map } => {
            let (a, b) = (urelement_list(from), urelement_list(to));
            let u = hf::build_universe(&a, *rank, hf::DEFAULT_UNIVERSE_LIMIT)?;
            let v = hf::build_universe(&b, *rank, hf::DEFAULT_UNIVERSE_LIMIT)?;
            let f0 = if map.is_empty() {
                a.iter().zip(&b).map(|(x, y)| (x.to_string(), y.to_string())).collect()
            } else {
                key_values(map, "pair")?
            };
            let lift = hf::lift_urelement_bijection(&u, &v, &f0)?;
            let pairs: Vec<(String, String)> = lift.pairs(&u, &v).map(|(x, y)| (x.to_string(), y.to_string())).collect();
            let lines: Vec<String> = pairs.iter().map(|(x, y)| format!("{x} -> {y}\n")).collect();
            out.emit(format!("verified ∈-isomorphism\n{}", lines.concat()), json!({ "verified": true, "map": pairs }), 0)
        }
        HfCmd::Audit(a) => {
            let u = universe(a)?;
            let r = hf::audit_axioms(&u);
            let all = r.entries.iter().all(|e| e.verdict);
            out.emit(r.render(), serde_json::to_value(&r).expect("serializable"), code_of(all))
        }
        HfCmd::Lemma1(a) => {
            let u = universe(a)?;
            let r = if u.len() <= 20 { hf::check_lemma1(&u, 20)? } else { hf::search_lemma1(&u) };
            let text = format!(
                "{} candidate subdomains, {} pass both hypotheses; only the whole domain: {}\n",
                r.candidates,
                r.passing.len(),
                r.only_whole_domain
            );
            out.emit(text, serde_json::to_value(&r).expect("serializable"), code_of(r.only_whole_domain))
        }
    }
}

fn big(s: &str) -> Result<UBig, Failure> {
    s.trim().parse::<UBig>().map_err(|_| Failure::usage(format!("'{s}' is not a natural number")))
}

fn code_cmd(cli: &Cli, c: &CodeCmd, out: &Out) -> Res {
    match c {
        CodeCmd::Pair { values, unpair } => {
            if *unpair {
                let [n] = values.as_slice() else { return Err(Failure::usage("--unpair takes one number")) };
                let (a, b) = coding::unpair(&big(n)?);
                out.emit(format!("{a} {b}\n"), json!({ "a": a.to_string(), "b": b.to_string() }), 0)
            } else {
                let [a, b] = values.as_slice() else { return Err(Failure::usage("pair takes two numbers")) };
                let p = coding::pair(&big(a)?, &big(b)?);
                out.emit(format!("{p}\n"), json!({ "pair": p.to_string() }), 0)
            }
        }
        CodeCmd::Seq { values, decode, codec } => {
            let coder = codec.coder();
            match (values, decode) {
                (None, Some(n)) => {
                    let s: Vec<String> = coder.decode(&big(n)?).iter().map(|x| x.to_string()).collect();
                    out.emit(format!("{}\n", s.join(",")), json!({ "sequence": s }), 0)
                }
                (Some(list), None) => {
                    let items = list.split(',').filter(|x| !x.trim().is_empty()).map(big).collect::<Result<Vec<_>, _>>()?;
                    let code = coder.encode(&items);
                    out.emit(format!("{code}\n"), json!({ "code": code.to_string() }), 0)
                }
                _ => Err(Failure::usage("give a comma list or --decode <n>")),
            }
        }
        CodeCmd::Psi { u, v, x, source, target, codec } => {
            let (p1, p2) = (preset(source)?, preset(target)?);
            let coder = codec.coder();
            let (v, x) = match (v, x) {
                (Some(v), Some(x)) => (*v, big(x)?),
                (None, None) => coding::phi_witness(&coder, *u, p1.as_ref(), p2.as_ref(), step_budget(cli))?,
                _ => return Err(Failure::usage("give both --v and --x, or neither")),
            };
            let ok = coding::psi_check(&coder, &x, *u, v, p1.as_ref(), p2.as_ref())?;
            let text = format!("psi(x, {u}, {v}) = {ok}\nx = {x}\n");
            out.emit(text, json!({ "u": u, "v": v, "x": x.to_string(), "psi": ok }), code_of(ok))
        }
        CodeCmd::Iso { source, target, n, codec } => {
            let (p1, p2) = (preset(source)?, preset(target)?);
            let r = coding::verify_iso_clauses(*n, p1.as_ref(), p2.as_ref(), &codec.coder(), step_budget(cli))?;
            out.emit(r.render(), serde_json::to_value(&r).expect("serializable"), code_of(r.ok()))
        }
    }
}

fn problem(cli: &Cli, s: &SearchArgs, vocab: Vocabulary, axioms: Vec<formula::Axiom>) -> Result<SearchProblem, Failure> {
    Ok(SearchProblem::new(vocab, axioms)?
        .sizes(s.min, s.max)
        .nodes(cli.budget_nodes.unwrap_or(finder::DEFAULT_MAX_NODES))
        .time_limit(cli.budget_ms.map(Duration::from_millis))
        .threads(s.threads))
}

fn stats_text(stats: &[finder::SizeStats]) -> String {
    stats.iter().map(|s| format!("  size {}: {:?}, {} nodes\n", s.size, s.status, s.nodes)).collect()
}

fn save_model(s: &SearchArgs, m: &FiniteStructure) -> Result<(), Failure> {
    if let Some(path) = &s.out {
        m.save(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn inconclusive(size: usize, reason: SizeStatus) -> String {
    format!("inconclusive: size {size} hit the {} budget\n", if reason == SizeStatus::TimeBudget { "time" } else { "node" })
}

fn find_cmd(cli: &Cli, c: &FindCmd, out: &Out) -> Res {
    match c {
        FindCmd::Model(s) => {
            let t = load_theory(&s.theory)?;
            let p = problem(cli, s, t.vocab.clone(), t.expand(s.theory.schema_bound))?;
            let r = finder::find_model(&p)?;
            let (text, code) = match &r.outcome {
                Outcome::Model { size, structure, .. } => {
                    save_model(s, structure)?;
                    (format!("model of size {size}\n{}", structure.to_json()), 0)
                }
                Outcome::Exhausted { through } => (format!("no model through size {through}\n"), 1),
                Outcome::Inconclusive { size, reason } => (inconclusive(*size, *reason), 3),
            };
            out.emit(text + &stats_text(&r.stats), r.to_json(), code)
        }
        FindCmd::Unsat(s) => {
            let t = load_theory(&s.theory)?;
            let p = problem(cli, s, t.vocab.clone(), t.expand(s.theory.schema_bound))?;
            let r = finder::certify_unsat_upto(&p, s.max)?;
            let (text, value, code) = match &r.verdict {
                UnsatVerdict::Unsat { through } => {
                    (format!("UNSAT through size {through}\n"), json!({ "result": "unsat", "through": through }), 0)
                }
                UnsatVerdict::Sat { size, structure } => {
                    save_model(s, structure)?;
                    (
                        format!("satisfiable: model of size {size}\n{}", structure.to_json()),
                        json!({ "result": "sat", "size": size, "model": structure.to_json_value() }),
                        1,
                    )
                }
                UnsatVerdict::Inconclusive { size, reason } => {
                    (inconclusive(*size, *reason), json!({ "result": "inconclusive", "size": size, "reason": reason }), 3)
                }
            };
            let mut value = value;
            value["stats"] = serde_json::to_value(&r.stats).expect("serializable");
            out.emit(text + &stats_text(&r.stats), value, code)
        }
        FindCmd::Intolerance { search: s, phi } => {
            let t = load_theory(&s.theory)?;
            let f = parse_with_position(phi, &t.vocab)?;
            let (vocab, axioms) = finder::joint_theory(&t, &f, s.theory.schema_bound)?;
            let p = problem(cli, s, vocab, axioms)?;
            let r = finder::certify_unsat_upto(&p, s.max)?;
            let (text, value, code) = match &r.verdict {
                UnsatVerdict::Unsat { through } => (
                    format!("intolerant through size {through}\n"),
                    json!({ "result": "intolerant", "through": through }),
                    0,
                ),
                UnsatVerdict::Sat { size, structure } => {
                    save_model(s, structure)?;
                    (
                        format!("tolerant: counter-model of size {size}\n{}", structure.to_json()),
                        json!({ "result": "tolerant", "size": size, "model": structure.to_json_value() }),
                        1,
                    )
                }
                UnsatVerdict::Inconclusive { size, reason } => {
                    (inconclusive(*size, *reason), json!({ "result": "inconclusive", "size": size, "reason": reason }), 3)
                }
            };
            let mut value = value;
            value["stats"] = serde_json::to_value(&r.stats).expect("serializable");
            out.emit(text + &stats_text(&r.stats), value, code)
        }
    }
}
