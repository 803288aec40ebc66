//! Command-line front end. Every command prints one JSON [`RunReport`] on
//! standard output; progress goes to standard error through `log`.
//!
//! Exit codes: 0 when every verdict passes, 1 when some verdict fails,
//! 2 on usage, parse or input errors.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::dynamics::{
    cocycle_chain_check, cocycle_of_map, orbit_bfs, parity_search, sn_orbit_points, sn_step_check,
    translation_witness_search,
};
use crate::error::{Error, Result};
use crate::generators::{
    builtin, builtin_name_adp, check_finite_relations, check_presentation, GeneratorFamily,
    SeedFile,
};
use crate::graphing::{express_and_verify, treeing_sweep, Graphing, GraphingFile};
use crate::pl::PLMap;
use crate::rational::Rational;
use crate::words::{evaluate, Alphabet, GenWord};

pub const LOG_ENV: &str = "THOMPSON_LOG";

#[derive(Debug, Parser)]
#[command(
    name = "thompson",
    version,
    about = "Exact computations in the Thompson groups F(N)"
)]
pub struct Cli {
    /// Also write the report to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Add decimal approximations of every rational in the result.
    #[arg(long, global = true)]
    pub decimal: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Evaluate a map or word at a point.
    Eval(EvalArgs),
    /// Compose a word into a single map.
    Compose(WordArgs),
    /// Invert a map or word.
    Invert(TargetArgs),
    /// Certify membership in F(N).
    Member(TargetArgs),
    /// Check the defining relations.
    Relations(RelationsArgs),
    /// The measured graphing on [0, 1].
    Graphing(GraphingArgs),
    /// Orbit of a point by breadth-first search.
    Orbit(OrbitArgs),
    /// Radon-Nikodym cocycle along explicit witnesses.
    Cocycle(CocycleArgs),
    /// Slope-one orbit points under A_{d,p}.
    Sn(SnArgs),
    /// Search for an N-adic translation that parity forbids.
    Parity(ParityArgs),
    /// Search for a word carrying one point to another.
    Translate(TranslateArgs),
}

#[derive(Debug, Args, Serialize)]
#[command(group(ArgGroup::new("target").required(true).args(["map", "word"])))]
pub struct TargetArgs {
    /// Built-in name (A, B, A_{d,p}(d;p)) or @file.json.
    #[arg(long)]
    pub map: Option<String>,
    #[arg(long)]
    pub word: Option<String>,
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    /// Bind a word letter: NAME=SPEC, SPEC as for --map.
    #[arg(long = "bind")]
    pub binds: Vec<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct EvalArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    #[arg(long)]
    pub at: Rational,
}

#[derive(Debug, Args, Serialize)]
pub struct WordArgs {
    #[arg(long)]
    pub word: String,
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    #[arg(long = "bind")]
    pub binds: Vec<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct RelationsArgs {
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    #[arg(long, default_value_t = 6)]
    pub max_index: usize,
    /// JSON file {"n": N, "seeds": [map, ...]}; required unless n = 2.
    #[arg(long)]
    pub seeds: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct GraphingArgs {
    /// Graphing JSON file; defaults to the three-piece graphing phi1, phi2, phi3.
    #[arg(long)]
    pub file: Option<PathBuf>,
    #[command(subcommand)]
    pub action: GraphingCommand,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphingCommand {
    Cost,
    /// Rewrite an {A, B} word at x as a word in the graphing.
    Express {
        #[arg(long)]
        x: Rational,
        #[arg(long)]
        word: String,
    },
    /// Check every reduced word up to --max-len for fixed intervals.
    Treeing {
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct OrbitArgs {
    #[arg(long)]
    pub x: Rational,
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    #[arg(long, default_value_t = 10_000)]
    pub max_points: usize,
    /// Alphabet letter, repeatable; defaults to A, B for n = 2 and to
    /// A_{1/n,1}, A_{(n-1)/n,1}, A_{1/n^2,2} otherwise.
    #[arg(long = "letter")]
    pub letters: Vec<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct CocycleArgs {
    #[arg(long)]
    pub x: Rational,
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    /// Single witness; without it every orbit witness up to --depth is tabulated.
    #[arg(long)]
    pub word: Option<String>,
    /// Second word v for the chain rule check of (word, v).
    #[arg(long, requires = "word")]
    pub chain: Option<String>,
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
    #[arg(long = "letter")]
    pub letters: Vec<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct SnArgs {
    #[arg(long)]
    pub x: Rational,
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    #[arg(long)]
    pub d: Rational,
    #[arg(long, default_value_t = 1)]
    pub p_from: i64,
    #[arg(long, default_value_t = 20)]
    pub p_to: i64,
}

#[derive(Debug, Args, Serialize)]
pub struct ParityArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub d: Rational,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub k: i64,
    #[arg(long)]
    pub p: u32,
    #[arg(long, default_value_t = 5)]
    pub max_len: usize,
    #[arg(long = "letter")]
    pub letters: Vec<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct TranslateArgs {
    #[arg(long)]
    pub from: Rational,
    #[arg(long)]
    pub to: Rational,
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    #[arg(long, default_value_t = 3)]
    pub max_len: usize,
    #[arg(long = "letter")]
    pub letters: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub elapsed_seconds: f64,
    pub verdicts: Vec<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decimal_approximations: Option<BTreeMap<String, f64>>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

fn verdict(name: &str, pass: bool) -> Verdict {
    Verdict {
        name: name.to_string(),
        pass,
    }
}

fn to_value<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("report types serialize")
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidParameters(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        pos: e.column(),
        msg: format!("{}: line {}: {e}", path.display(), e.line()),
    })
}

/// A built-in name or `@path` to a map JSON file.
pub fn resolve_map(spec: &str, n: u32) -> Result<PLMap> {
    match spec.strip_prefix('@') {
        Some(path) => read_json(Path::new(path)),
        None => builtin(spec, n),
    }
}

fn word_alphabet(word: &GenWord, n: u32, binds: &[String]) -> Result<Alphabet<PLMap>> {
    let mut bound = BTreeMap::new();
    for bind in binds {
        let (name, spec) = bind.split_once('=').ok_or_else(|| {
            Error::InvalidParameters(format!("--bind {bind}: expected NAME=SPEC"))
        })?;
        bound.insert(name.to_string(), resolve_map(spec, n)?);
    }
    let mut entries: Vec<(String, PLMap)> = Vec::new();
    for letter in word.letters() {
        if entries.iter().any(|(name, _)| name == &letter.name) {
            continue;
        }
        let map = match bound.get(&letter.name) {
            Some(map) => map.clone(),
            None => builtin(&letter.name, n)?,
        };
        entries.push((letter.name.clone(), map));
    }
    Alphabet::new(entries)
}

/// Generator names used when no `--letter` is given.
pub fn default_letters(n: u32) -> Vec<String> {
    if n == 2 {
        return vec!["A".into(), "B".into()];
    }
    let n64 = i64::from(n);
    [(1, n64, 1), (n64 - 1, n64, 1), (1, n64 * n64, 2)]
        .into_iter()
        .map(|(a, b, p)| builtin_name_adp(&Rational::frac(a, b), p))
        .collect()
}

fn letter_alphabet(letters: &[String], n: u32) -> Result<Alphabet<PLMap>> {
    let names = if letters.is_empty() {
        default_letters(n)
    } else {
        letters.to_vec()
    };
    let mut entries = Vec::new();
    for name in names {
        let map = resolve_map(&name, n)?;
        entries.push((name, map));
    }
    Alphabet::new(entries)
}

fn target_map(args: &TargetArgs) -> Result<PLMap> {
    match (&args.map, &args.word) {
        (Some(spec), None) => resolve_map(spec, args.n),
        (None, Some(text)) => {
            let word = GenWord::parse(text)?;
            evaluate(&word, &word_alphabet(&word, args.n, &args.binds)?)
        }
        _ => Err(Error::InvalidParameters(
            "give exactly one of --map, --word".into(),
        )),
    }
}

fn command_name(command: &Command) -> String {
    let name = match command {
        Command::Eval(_) => "eval",
        Command::Compose(_) => "compose",
        Command::Invert(_) => "invert",
        Command::Member(_) => "member",
        Command::Relations(_) => "relations",
        Command::Graphing(g) => match g.action {
            GraphingCommand::Cost => "graphing cost",
            GraphingCommand::Express { .. } => "graphing express",
            GraphingCommand::Treeing { .. } => "graphing treeing",
        },
        Command::Orbit(_) => "orbit",
        Command::Cocycle(_) => "cocycle",
        Command::Sn(_) => "sn",
        Command::Parity(_) => "parity",
        Command::Translate(_) => "translate",
    };
    name.to_string()
}

/// Runs one command; `Err` means a usage or input error (exit code 2).
pub fn run(cli: &Cli) -> Result<RunReport> {
    let start = Instant::now();
    let (result, verdicts) = dispatch(&cli.command)?;
    let decimal_approximations = cli.decimal.then(|| {
        let mut table = BTreeMap::new();
        collect_rationals(&result, &mut table);
        table
    });
    Ok(RunReport {
        command: command_name(&cli.command),
        inputs: to_value(&cli.command),
        result,
        elapsed_seconds: start.elapsed().as_secs_f64(),
        verdicts,
        decimal_approximations,
    })
}

fn collect_rationals(value: &Value, table: &mut BTreeMap<String, f64>) {
    match value {
        Value::String(s) if s.contains('/') => {
            if let Ok(q) = s.parse::<Rational>() {
                table.insert(s.clone(), q.to_f64());
            }
        }
        Value::Array(items) => items.iter().for_each(|v| collect_rationals(v, table)),
        Value::Object(map) => map.values().for_each(|v| collect_rationals(v, table)),
        _ => {}
    }
}

fn dispatch(command: &Command) -> Result<(Value, Vec<Verdict>)> {
    match command {
        Command::Eval(args) => {
            let f = target_map(&args.target)?;
            let value = f.eval(&args.at)?;
            Ok((json!({ "at": args.at, "value": value }), vec![]))
        }
        Command::Compose(args) => {
            let word = GenWord::parse(&args.word)?;
            let f = evaluate(&word, &word_alphabet(&word, args.n, &args.binds)?)?;
            Ok((
                json!({ "word": word, "map": f, "identity": f.is_identity() }),
                vec![],
            ))
        }
        Command::Invert(args) => {
            let f = target_map(args)?;
            let g = f.inverse();
            let ok = f.compose(&g).is_identity() && g.compose(&f).is_identity();
            Ok((
                json!({ "map": f, "inverse": g }),
                vec![verdict("inverse_verified", ok)],
            ))
        }
        Command::Member(args) => {
            let cert = target_map(args)?.check_membership(args.n);
            let pass = cert.verdict;
            Ok((to_value(&cert), vec![verdict("member", pass)]))
        }
        Command::Relations(args) => relations(args),
        Command::Graphing(args) => graphing(args),
        Command::Orbit(args) => {
            let alphabet = letter_alphabet(&args.letters, args.n)?;
            let orbit = orbit_bfs(&args.x, args.n, &alphabet, args.depth, args.max_points)?;
            let mut consistent = true;
            for node in &orbit.nodes {
                consistent &= evaluate(&node.witness, &alphabet)?.eval(&orbit.root)? == node.point;
            }
            Ok((
                json!({ "alphabet": alphabet.names(), "points": orbit.nodes.len(), "orbit": orbit }),
                vec![verdict("witnesses_reproduce_points", consistent)],
            ))
        }
        Command::Cocycle(args) => cocycle(args),
        Command::Sn(args) => {
            let points = sn_orbit_points(&args.x, args.n, &args.d, args.p_from, args.p_to)?;
            let mut rows = Vec::new();
            let mut all_steps = true;
            for (p, point) in (args.p_from..=args.p_to).zip(&points) {
                let name = builtin_name_adp(&args.d, p);
                let alphabet = Alphabet::new([(name.clone(), resolve_map(&name, args.n)?)])?;
                let step = sn_step_check(&GenWord::parse(&name)?, &alphabet, &args.x, args.n)?;
                all_steps &= step.is_some();
                rows.push(json!({ "p": p, "point": point, "translation": step }));
            }
            Ok((
                json!({ "x": args.x, "points": rows }),
                vec![
                    verdict(
                        "pairwise_distinct",
                        points
                            .iter()
                            .collect::<std::collections::HashSet<_>>()
                            .len()
                            == points.len(),
                    ),
                    verdict("slope_one_nadic_steps", all_steps),
                ],
            ))
        }
        Command::Parity(args) => {
            let alphabet = letter_alphabet(&args.letters, args.n)?;
            let report = parity_search(args.n, &args.d, args.k, args.p, &alphabet, args.max_len)?;
            let verdicts = vec![
                verdict("zero_witnesses", report.zero_witnesses),
                verdict(
                    "certificates_agree",
                    report.certificates_agreeing == report.words_tested,
                ),
            ];
            Ok((to_value(&report), verdicts))
        }
        Command::Translate(args) => {
            let alphabet = letter_alphabet(&args.letters, args.n)?;
            let found = translation_witness_search(&args.from, &args.to, &alphabet, args.max_len)?;
            Ok((
                json!({ "alphabet": alphabet.names(), "witnesses": found }),
                vec![verdict("witness_found", !found.is_empty())],
            ))
        }
    }
}

fn relations(args: &RelationsArgs) -> Result<(Value, Vec<Verdict>)> {
    let mut family = match (&args.seeds, args.n) {
        (Some(path), _) => {
            let file: SeedFile = read_json(path)?;
            if file.n != args.n {
                return Err(Error::InvalidParameters(format!(
                    "seed file is for n = {}, not {}",
                    file.n, args.n
                )));
            }
            file.into_family()?
        }
        (None, 2) => GeneratorFamily::thompson_f(),
        (None, n) => {
            return Err(Error::InvalidParameters(format!(
                "n = {n} needs --seeds FILE"
            )));
        }
    };
    let presentation = check_presentation(&mut family, args.max_index);
    let mut verdicts: Vec<Verdict> = presentation
        .relations
        .iter()
        .map(|r| {
            verdict(
                &format!(
                    "x{} x{} = x{} x{}",
                    r.j,
                    r.i,
                    r.i,
                    r.j + args.n as usize - 1
                ),
                r.holds,
            )
        })
        .collect();
    let finite = if args.n == 2 && args.seeds.is_none() {
        let finite = check_finite_relations();
        verdicts.extend(finite.iter().map(|r| verdict(&r.relation, r.holds)));
        finite
    } else {
        Vec::new()
    };
    Ok((
        json!({ "presentation": presentation, "finite_relations": finite }),
        verdicts,
    ))
}

fn graphing(args: &GraphingArgs) -> Result<(Value, Vec<Verdict>)> {
    let g = match &args.file {
        Some(path) => Graphing::from_file(read_json::<GraphingFile>(path)?)?,
        None => Graphing::phi_r2(),
    };
    match &args.action {
        GraphingCommand::Cost => {
            let parts: Vec<Value> = g
                .parts()
                .iter()
                .map(|p| json!({ "name": p.name, "domain": [p.domain.0, p.domain.1] }))
                .collect();
            Ok((
                json!({ "n": g.n(), "cost": g.cost(), "parts": parts }),
                vec![],
            ))
        }
        GraphingCommand::Express { x, word } => {
            let check = express_and_verify(x, &GenWord::parse(word)?)?;
            let ok = check.verified;
            Ok((to_value(&check), vec![verdict("endpoint_verified", ok)]))
        }
        GraphingCommand::Treeing { max_len, jobs } => {
            let report = treeing_sweep(&g, *max_len, *jobs)?;
            let ok = report.treeing_consistent;
            Ok((to_value(&report), vec![verdict("no_fixed_intervals", ok)]))
        }
    }
}

fn cocycle(args: &CocycleArgs) -> Result<(Value, Vec<Verdict>)> {
    let mut verdicts = Vec::new();
    let (alphabet, witnesses) = match &args.word {
        Some(text) => {
            let word = GenWord::parse(text)?;
            let mut letters = word.clone();
            if let Some(v) = &args.chain {
                letters = letters.concat(&GenWord::parse(v)?);
            }
            let alphabet = if args.letters.is_empty() {
                word_alphabet(&letters, args.n, &[])?
            } else {
                letter_alphabet(&args.letters, args.n)?
            };
            (alphabet, vec![word])
        }
        None => {
            let alphabet = letter_alphabet(&args.letters, args.n)?;
            let orbit = orbit_bfs(&args.x, args.n, &alphabet, args.depth, usize::MAX)?;
            let words = orbit.nodes.into_iter().map(|node| node.witness).collect();
            (alphabet, words)
        }
    };
    let mut rows = Vec::new();
    let mut skipped = 0u64;
    for word in &witnesses {
        let f = evaluate(word, &alphabet)?;
        match cocycle_of_map(&f, &args.x, args.n) {
            Ok(value) => rows.push(json!({
                "x": args.x,
                "word": word,
                "image": f.eval(&args.x)?,
                "value": value.value,
                "exponent": value.exponent,
            })),
            Err(Error::NonDifferentiable(_)) if args.word.is_none() => skipped += 1,
            Err(Error::InvariantViolation(msg)) => {
                rows.push(json!({ "x": args.x, "word": word, "violation": msg }));
                verdicts.push(verdict("power_of_n", false));
            }
            Err(e) => return Err(e),
        }
    }
    if verdicts.is_empty() {
        verdicts.push(verdict("power_of_n", true));
    }
    if let (Some(u), Some(v)) = (&args.word, &args.chain) {
        let ok = cocycle_chain_check(
            &GenWord::parse(u)?,
            &GenWord::parse(v)?,
            &alphabet,
            &args.x,
            args.n,
        )?;
        verdicts.push(verdict("chain_rule", ok));
    }
    Ok((
        json!({ "alphabet": alphabet.names(), "rows": rows, "skipped_nondifferentiable": skipped }),
        verdicts,
    ))
}

/// Parses the process arguments, runs, prints, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let report = match run(&cli) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("{}", json!({ "error": e.to_string() }));
            return 2;
        }
    };
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    // a closed pipe downstream is not an error of ours
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, format!("{text}\n")) {
            eprintln!("{}", json!({ "error": format!("{}: {e}", path.display()) }));
            return 2;
        }
    }
    report.exit_code()
}

pub fn init_logging() {
    let env = env_logger::Env::new().filter_or(LOG_ENV, "info");
    let _ = env_logger::Builder::from_env(env)
        .format_timestamp(None)
        .try_init();
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(args: &[&str]) -> Result<RunReport> {
        let cli =
            Cli::try_parse_from(std::iter::once("thompson").chain(args.iter().copied())).unwrap();
        run(&cli)
    }

    #[test]
    fn eval_a_at_half() {
        let r = report(&["eval", "--map", "A", "--at", "1/2"]).unwrap();
        assert_eq!(r.result["value"], "1/4");
        assert!(r.passed());
    }

    #[test]
    fn compose_cancels() {
        let r = report(&["compose", "--word", "A A^-1"]).unwrap();
        assert_eq!(r.result["identity"], true);
    }

    #[test]
    fn relations_need_seeds_off_base_two() {
        assert!(matches!(
            report(&["relations", "--n", "3"]),
            Err(Error::InvalidParameters(_))
        ));
        let r = report(&["relations", "--n", "2", "--max-index", "0"]).unwrap();
        assert_eq!(r.verdicts.len(), 2);
        assert!(r.passed());
    }

    #[test]
    fn cocycle_single_word() {
        let r = report(&["cocycle", "--x", "1/3", "--word", "A"]).unwrap();
        assert_eq!(r.result["rows"][0]["exponent"], 1);
        let r = report(&["cocycle", "--x", "1/5", "--word", "A", "--chain", "B"]).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn decimal_table_is_opt_in() {
        let r = report(&["eval", "--map", "A", "--at", "1/2"]).unwrap();
        assert!(r.decimal_approximations.is_none());
        let r = report(&["--decimal", "eval", "--map", "A", "--at", "1/2"]).unwrap();
        assert_eq!(r.decimal_approximations.unwrap()["1/4"], 0.25);
    }

    #[test]
    fn default_letters_by_base() {
        assert_eq!(default_letters(2), ["A", "B"]);
        assert_eq!(
            default_letters(3),
            ["A_{d,p}(1/3;1)", "A_{d,p}(2/3;1)", "A_{d,p}(1/9;2)"]
        );
    }

    #[test]
    fn bound_letters() {
        let r = report(&["eval", "--word", "f", "--bind", "f=A", "--at", "1/2"]).unwrap();
        assert_eq!(r.result["value"], "1/4");
        assert!(report(&["eval", "--word", "f", "--at", "1/2"]).is_err());
    }
}
