//! The `calf` command line.
//!
//! Exit codes: 0 when a run passes (or finds nothing), 1 when a
//! counterexample is found, 2 on any error.

use std::fs;
use std::io::{self, BufReader, Write};
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};

use calf_core::conformance::{hsi_suite, run_suite, w_method_suite, TestingEquivalence};
use calf_core::learn::{learn, Algorithm, LearnerConfig, RunOptions, DEFAULT_MAX_ROUNDS};
use calf_core::minimize::minimize_with_sets;
use calf_core::oracle::{DfaEquivalence, DfaOracle, FnOracle};
use calf_core::weighted::{
    run_wfa_id, run_wfa_lstar, run_wfa_suite, wfa_minimize_with_words, wfa_w_method, Rational, Wfa, WfaEquivalence,
    WfaOracle, WfaTestingEquivalence,
};
use calf_core::{Alphabet, Dfa, EquivalenceOracle, MembershipOracle, OracleError, QueryCache, QueryLog, Word};

use crate::format::{parse_machine, parse_words, serialize_dfa, serialize_wfa, serialize_words, FormatError, Machine};
use crate::report::{RunReport, Stats};
use crate::wire::{serve, serve_tcp, Endpoint, Reply, Session};

#[derive(Debug, Parser)]
#[command(name = "calf", version, about = "Active automata learning, minimization and conformance testing")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Learn an automaton from a membership oracle.
    Learn(LearnArgs),
    /// Minimize a DFA or WFA file.
    Minimize(MinimizeArgs),
    /// Test a black box against a known automaton.
    Equiv(EquivArgs),
    /// Write a conformance test suite, one word per line.
    Gentests(GentestsArgs),
    /// Answer membership queries about an automaton file over the wire protocol.
    Serve(ServeArgs),
    /// Write a seeded random DFA or WFA.
    Random(RandomArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Dfa,
    Wfa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    W,
    Hsi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatsFormat {
    Json,
    Text,
}

#[derive(Debug, clap::Args)]
pub struct LearnArgs {
    /// lstar, kv, id, az or dual-id
    #[arg(long, value_parser = parse_algorithm)]
    pub algo: Algorithm,
    #[arg(long, value_enum, default_value = "dfa")]
    pub mode: ModeArg,
    /// file:PATH, exec:CMD or tcp:HOST:PORT
    #[arg(long)]
    pub target: Endpoint,
    /// Upper bound on the target's size; needed for black-box equivalence and az.
    #[arg(long)]
    pub bound: Option<usize>,
    /// Access words (id) or separating suffixes (dual-id), one per line.
    #[arg(long)]
    pub given_words: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print every table or tree to stderr.
    #[arg(long)]
    pub trace: bool,
    #[arg(long, value_enum)]
    pub stats: Option<StatsFormat>,
    /// Include every forwarded query in the stats.
    #[arg(long)]
    pub transcript: bool,
    /// Space-separated symbols; checked against the oracle's announcement.
    #[arg(long)]
    pub alphabet: Option<String>,
    #[arg(long, default_value_t = 10_000)]
    pub timeout_ms: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_ROUNDS)]
    pub max_rounds: usize,
}

#[derive(Debug, clap::Args)]
pub struct MinimizeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory for `access.words` and `separators.words`.
    #[arg(long)]
    pub emit_sets: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
}

#[derive(Debug, clap::Args)]
pub struct EquivArgs {
    #[arg(long)]
    pub known: PathBuf,
    /// exec:CMD, tcp:HOST:PORT or file:PATH
    #[arg(long)]
    pub black: Endpoint,
    #[arg(long)]
    pub bound: usize,
    /// Run this suite instead of generating one.
    #[arg(long)]
    pub suite: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "w")]
    pub method: MethodArg,
    #[arg(long, value_enum)]
    pub stats: Option<StatsFormat>,
    #[arg(long, default_value_t = 10_000)]
    pub timeout_ms: u64,
}

#[derive(Debug, clap::Args)]
pub struct GentestsArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub bound: usize,
    #[arg(long, value_enum, default_value = "w")]
    pub method: MethodArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct ServeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Listen on this address instead of using stdin and stdout.
    #[arg(long)]
    pub tcp: Option<String>,
    /// Append every queried word to this file.
    #[arg(long)]
    pub log: Option<PathBuf>,
    /// Stop after this many TCP connections.
    #[arg(long)]
    pub connections: Option<usize>,
}

#[derive(Debug, clap::Args)]
pub struct RandomArgs {
    #[arg(long, value_enum, default_value = "dfa")]
    pub mode: ModeArg,
    /// States (dfa) or dimension (wfa).
    #[arg(long)]
    pub states: usize,
    #[arg(long, default_value = "a b")]
    pub alphabet: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: calf_core::Error| e.to_string())
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Format { path: String, source: FormatError },
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error(transparent)]
    Core(#[from] calf_core::Error),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

fn usage<T>(m: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(m.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Counterexample,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Counterexample => 1,
        }
    }
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit code.
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
    match run(cli) {
        Ok(o) => o.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Learn(a) => cmd_learn(a),
        Command::Minimize(a) => cmd_minimize(a),
        Command::Equiv(a) => cmd_equiv(a),
        Command::Gentests(a) => cmd_gentests(a),
        Command::Serve(a) => cmd_serve(a),
        Command::Random(a) => cmd_random(a),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn write_output(path: Option<&Path>, text: &str) -> Result<Vec<String>, CliError> {
    match path {
        Some(p) => {
            fs::write(p, text).map_err(|source| CliError::Io { path: p.display().to_string(), source })?;
            Ok(vec![p.display().to_string()])
        }
        None => {
            print!("{text}");
            Ok(Vec::new())
        }
    }
}

fn load_machine(path: &Path) -> Result<Machine, CliError> {
    parse_machine(&read(path)?).map_err(|source| CliError::Format { path: path.display().to_string(), source })
}

fn load_words(path: &Path, alphabet: &Alphabet) -> Result<Vec<Word>, CliError> {
    parse_words(&read(path)?, alphabet).map_err(|source| CliError::Format { path: path.display().to_string(), source })
}

fn check_mode(machine: &Machine, mode: ModeArg, path: &Path) -> Result<(), CliError> {
    match (machine, mode) {
        (Machine::Dfa(_), ModeArg::Dfa) | (Machine::Wfa(_), ModeArg::Wfa) => Ok(()),
        _ => usage(format!(
            "{} holds a {} but --mode is {}",
            path.display(),
            machine.kind(),
            if mode == ModeArg::Dfa { "dfa" } else { "wfa" }
        )),
    }
}

fn parse_alphabet(text: &str) -> Result<Alphabet, CliError> {
    Alphabet::new(text.split_whitespace()).or_else(|e| usage(format!("--alphabet: {e}")))
}

fn emit_stats(format: Option<StatsFormat>, report: &RunReport) {
    match format {
        Some(StatsFormat::Json) => println!("{}", report.stats.to_json()),
        Some(StatsFormat::Text) | None => eprintln!("{report}"),
    }
}

/// Maps words over `from` to the symbol numbering of `to`.
fn translation(from: &Alphabet, to: &Alphabet) -> Option<Vec<usize>> {
    from.symbols().map(|a| to.symbol(from.token(a))).collect()
}

fn translate(map: &[usize], w: &Word) -> Word {
    w.iter().map(|&a| map[a]).collect()
}

enum DfaTeacher {
    Exact(DfaEquivalence),
    Testing(TestingEquivalence),
    Absent,
}

impl<O: MembershipOracle<Output = bool>> EquivalenceOracle<O, Dfa> for DfaTeacher {
    fn find_counterexample(&mut self, h: &Dfa, mq: &mut QueryCache<O>) -> calf_core::Result<Option<Word>> {
        match self {
            DfaTeacher::Exact(e) => e.find_counterexample(h, mq),
            DfaTeacher::Testing(e) => e.find_counterexample(h, mq),
            DfaTeacher::Absent => Err(calf_core::Error::Input("no equivalence oracle configured".into())),
        }
    }
}

enum WfaTeacher {
    Exact(WfaEquivalence),
    Testing(WfaTestingEquivalence),
}

impl<O: MembershipOracle<Output = Rational>> EquivalenceOracle<O, Wfa> for WfaTeacher {
    fn find_counterexample(&mut self, h: &Wfa, mq: &mut QueryCache<O>) -> calf_core::Result<Option<Word>> {
        match self {
            WfaTeacher::Exact(e) => e.find_counterexample(h, mq),
            WfaTeacher::Testing(e) => e.find_counterexample(h, mq),
        }
    }
}

fn cache<O: MembershipOracle>(oracle: O, transcript: bool) -> QueryCache<O> {
    let mq = QueryCache::new(oracle);
    if transcript {
        mq.with_transcript()
    } else {
        mq
    }
}

struct Learned {
    machine: Machine,
    log: QueryLog,
    rounds: usize,
    trace: Vec<String>,
}

fn cmd_learn(a: LearnArgs) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let wants_words = matches!(a.algo, Algorithm::Id | Algorithm::DualId);
    if wants_words && a.given_words.is_none() {
        return usage(format!("--algo {} requires --given-words", a.algo.name()));
    }
    if !wants_words && a.given_words.is_some() {
        return usage("--given-words only applies to id and dual-id");
    }
    if a.bound == Some(0) {
        return usage("--bound must be positive");
    }
    if a.algo == Algorithm::Az && a.bound.is_none() {
        return usage("--algo az requires --bound");
    }
    if a.max_rounds == 0 {
        return usage("--max-rounds must be positive");
    }
    let black_box = !matches!(a.target, Endpoint::File(_));
    let needs_teacher = matches!(a.algo, Algorithm::LStar | Algorithm::Kv);
    if black_box && needs_teacher && a.bound.is_none() {
        return usage("learning from a black-box target requires --bound for equivalence testing");
    }
    if a.mode == ModeArg::Wfa && !matches!(a.algo, Algorithm::LStar | Algorithm::Id) {
        return usage(format!("--mode wfa supports --algo lstar and id, not {}", a.algo.name()));
    }
    let configured = a.alphabet.as_deref().map(parse_alphabet).transpose()?;
    let timeout = Duration::from_millis(a.timeout_ms);

    let learned = match (&a.target, a.mode) {
        (Endpoint::File(path), mode) => {
            let machine = load_machine(path)?;
            check_mode(&machine, mode, path)?;
            if let Some(c) = &configured {
                if c != machine.alphabet() {
                    return usage("--alphabet differs from the target file's alphabet");
                }
            }
            match machine {
                Machine::Dfa(d) => {
                    let teacher = DfaTeacher::Exact(DfaEquivalence { target: d.clone() });
                    learn_dfa(&a, d.alphabet(), DfaOracle(&d), teacher)?
                }
                Machine::Wfa(w) => {
                    let teacher = WfaTeacher::Exact(WfaEquivalence { target: w.clone() });
                    learn_wfa(&a, w.alphabet(), WfaOracle(&w), teacher)?
                }
            }
        }
        (target, ModeArg::Dfa) => {
            let session = Session::<bool>::connect(target, configured.as_ref(), timeout)?;
            let alphabet = session.alphabet().clone();
            let teacher = match a.bound {
                Some(b) if needs_teacher => DfaTeacher::Testing(TestingEquivalence::new(b)),
                _ => DfaTeacher::Absent,
            };
            learn_dfa(&a, &alphabet, session, teacher)?
        }
        (target, ModeArg::Wfa) => {
            let session = Session::<Rational>::connect(target, configured.as_ref(), timeout)?;
            let alphabet = session.alphabet().clone();
            let teacher = WfaTeacher::Testing(WfaTestingEquivalence { bound: a.bound.unwrap_or(1) });
            learn_wfa(&a, &alphabet, session, teacher)?
        }
    };

    for t in &learned.trace {
        eprintln!("{t}");
    }
    let outputs = write_output(a.out.as_deref(), &learned.machine.to_string())?;
    let report = RunReport {
        outputs,
        rounds: learned.rounds,
        wall: start.elapsed(),
        stats: Stats::from_log(&learned.log, learned.machine.alphabet()),
    };
    emit_stats(a.stats, &report);
    Ok(Outcome::Pass)
}

fn learn_dfa<O>(a: &LearnArgs, alphabet: &Alphabet, oracle: O, mut teacher: DfaTeacher) -> Result<Learned, CliError>
where
    O: MembershipOracle<Output = bool>,
{
    let given = a.given_words.as_deref().map(|p| load_words(p, alphabet)).transpose()?;
    let mut config = LearnerConfig::new(a.algo);
    config.bound = a.bound;
    config.max_rounds = a.max_rounds;
    config.trace = a.trace;
    match a.algo {
        Algorithm::Id => config.given_prefixes = given,
        Algorithm::DualId => config.given_suffixes = given,
        _ => {}
    }
    config.validate().or_else(|e| usage(e.to_string()))?;
    let mut mq = cache(oracle, a.transcript);
    let r = learn(&config, alphabet, &mut mq, &mut teacher)?;
    Ok(Learned { machine: Machine::Dfa(r.hypothesis.dfa), log: r.log, rounds: r.rounds, trace: r.trace })
}

fn learn_wfa<O>(a: &LearnArgs, alphabet: &Alphabet, oracle: O, mut teacher: WfaTeacher) -> Result<Learned, CliError>
where
    O: MembershipOracle<Output = Rational>,
{
    let opts = RunOptions { max_rounds: a.max_rounds, trace: a.trace };
    let mut mq = cache(oracle, a.transcript);
    let r = match a.algo {
        Algorithm::LStar => run_wfa_lstar(alphabet, &mut mq, &mut teacher, opts)?,
        Algorithm::Id => {
            let given = load_words(a.given_words.as_deref().expect("checked above"), alphabet)?;
            run_wfa_id(alphabet, &mut mq, &given, opts)?
        }
        other => return usage(format!("--mode wfa does not support {}", other.name())),
    };
    Ok(Learned { machine: Machine::Wfa(r.hypothesis), log: r.log, rounds: r.rounds, trace: r.trace })
}

fn cmd_minimize(a: MinimizeArgs) -> Result<Outcome, CliError> {
    let machine = load_machine(&a.input)?;
    if let Some(mode) = a.mode {
        check_mode(&machine, mode, &a.input)?;
    }
    let (text, access, separators, alphabet) = match &machine {
        Machine::Dfa(d) => {
            let (min, s, e) = minimize_with_sets(d);
            (serialize_dfa(&min), s.words, e.words, d.alphabet())
        }
        Machine::Wfa(w) => {
            let (min, s, e) = wfa_minimize_with_words(w);
            (serialize_wfa(&min), s, e, w.alphabet())
        }
    };
    let mut outputs = write_output(a.out.as_deref(), &text)?;
    if let Some(dir) = &a.emit_sets {
        fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
        for (name, words) in [("access.words", &access), ("separators.words", &separators)] {
            let p = dir.join(name);
            outputs.extend(write_output(Some(&p), &serialize_words(words, alphabet))?);
        }
    }
    for o in outputs {
        eprintln!("wrote {o}");
    }
    Ok(Outcome::Pass)
}

fn suite_words(machine: &Machine, bound: usize, method: MethodArg) -> Result<Vec<Word>, CliError> {
    Ok(match (machine, method) {
        (Machine::Dfa(d), MethodArg::W) => w_method_suite(d, bound)?.words,
        (Machine::Dfa(d), MethodArg::Hsi) => hsi_suite(d, bound)?.words,
        (Machine::Wfa(w), MethodArg::W) => wfa_w_method(w, bound)?.words,
        (Machine::Wfa(_), MethodArg::Hsi) => return usage("--method hsi applies to DFAs only"),
    })
}

fn cmd_gentests(a: GentestsArgs) -> Result<Outcome, CliError> {
    let machine = load_machine(&a.input)?;
    let words = suite_words(&machine, a.bound, a.method)?;
    let outputs = write_output(a.out.as_deref(), &serialize_words(&words, machine.alphabet()))?;
    for o in outputs {
        eprintln!("wrote {o} ({} words)", words.len());
    }
    Ok(Outcome::Pass)
}

fn cmd_equiv(a: EquivArgs) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let known = load_machine(&a.known)?;
    let alphabet = known.alphabet().clone();
    let suite = match &a.suite {
        Some(p) => load_words(p, &alphabet)?,
        None => suite_words(&known, a.bound, a.method)?,
    };
    let timeout = Duration::from_millis(a.timeout_ms);

    let (verdict, log) = match (&known, &a.black) {
        (Machine::Dfa(k), Endpoint::File(p)) => {
            let Machine::Dfa(black) = load_machine(p)? else {
                return usage(format!("{} is not a DFA", p.display()));
            };
            let map = translation(&alphabet, black.alphabet())
                .ok_or_else(|| CliError::Usage("the black box has a different alphabet".into()))?;
            let mut mq =
                QueryCache::new(FnOracle(|w: &Word| black.eval(&translate(&map, w)).expect("translated word")));
            (run_suite(&suite, k, &mut mq)?, mq.log().clone())
        }
        (Machine::Wfa(k), Endpoint::File(p)) => {
            let Machine::Wfa(black) = load_machine(p)? else {
                return usage(format!("{} is not a WFA", p.display()));
            };
            let map = translation(&alphabet, black.alphabet())
                .ok_or_else(|| CliError::Usage("the black box has a different alphabet".into()))?;
            let mut mq =
                QueryCache::new(FnOracle(|w: &Word| black.eval(&translate(&map, w)).expect("translated word")));
            (run_wfa_suite(&suite, k, &mut mq)?, mq.log().clone())
        }
        (Machine::Dfa(k), black) => {
            let mut mq = QueryCache::new(Session::<bool>::connect(black, Some(&alphabet), timeout)?);
            (run_suite(&suite, k, &mut mq)?, mq.log().clone())
        }
        (Machine::Wfa(k), black) => {
            let mut mq = QueryCache::new(Session::<Rational>::connect(black, Some(&alphabet), timeout)?);
            (run_wfa_suite(&suite, k, &mut mq)?, mq.log().clone())
        }
    };

    let report =
        RunReport { outputs: Vec::new(), rounds: 0, wall: start.elapsed(), stats: Stats::from_log(&log, &alphabet) };
    let outcome = match &verdict.counterexample {
        None => {
            println!("pass: {} of {} words agree", verdict.queries, suite.len());
            Outcome::Pass
        }
        Some(w) => {
            let expected = match &known {
                Machine::Dfa(k) => k.eval(w)?.render_reply(),
                Machine::Wfa(k) => k.eval(w)?.render_reply(),
            };
            println!("counterexample: {} (known: {expected})", alphabet.render(w));
            Outcome::Counterexample
        }
    };
    emit_stats(a.stats, &report);
    Ok(outcome)
}

fn cmd_serve(a: ServeArgs) -> Result<Outcome, CliError> {
    let machine = load_machine(&a.input)?;
    let mut log_file = match &a.log {
        Some(p) => Some(
            fs::OpenOptions::new()
                .create(true)
                .append(true)
                .open(p)
                .map_err(|source| CliError::Io { path: p.display().to_string(), source })?,
        ),
        None => None,
    };
    let log = log_file.as_mut().map(|f| f as &mut dyn Write);
    let io_err = |source| CliError::Io { path: "oracle connection".into(), source };
    match &a.tcp {
        Some(addr) => {
            let listener = TcpListener::bind(addr).map_err(|source| CliError::Io { path: addr.clone(), source })?;
            eprintln!("listening on {}", listener.local_addr().map_err(io_err)?);
            serve_tcp(&machine, listener, log, a.connections).map_err(io_err)?;
        }
        None => {
            let stdin = io::stdin();
            serve(&machine, BufReader::new(stdin.lock()), io::stdout().lock(), log).map_err(io_err)?;
        }
    }
    Ok(Outcome::Pass)
}

fn cmd_random(a: RandomArgs) -> Result<Outcome, CliError> {
    let alphabet = parse_alphabet(&a.alphabet)?;
    let text = match a.mode {
        ModeArg::Dfa => serialize_dfa(&Dfa::random(a.seed, a.states, &alphabet)?),
        ModeArg::Wfa => serialize_wfa(&Wfa::random(a.seed, a.states, &alphabet, &[-1, 0, 1])?),
    };
    write_output(a.out.as_deref(), &text)?;
    Ok(Outcome::Pass)
}
