//! DFA learners: L*, Kearns–Vazirani, ID, dual ID and Arbib–Zeiger.
//!
//! Every learner takes the alphabet and a [`QueryCache`] over the target.
//! The two counterexample-driven learners also take an equivalence oracle.

use alloc::string::String;
use alloc::vec::Vec;
use core::str::FromStr;

use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::oracle::{EquivalenceOracle, MembershipOracle, Phase, QueryCache, QueryLog};
use crate::table::{CellText, Hypothesis, ObservationTable};
use crate::tree::{ClassificationTree, SplitCost};
use crate::word::{Alphabet, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    LStar,
    Kv,
    Id,
    Az,
    DualId,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::LStar => "lstar",
            Algorithm::Kv => "kv",
            Algorithm::Id => "id",
            Algorithm::Az => "az",
            Algorithm::DualId => "dual-id",
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "lstar" => Algorithm::LStar,
            "kv" => Algorithm::Kv,
            "id" => Algorithm::Id,
            "az" => Algorithm::Az,
            "dual-id" => Algorithm::DualId,
            _ => return Err(Error::Input(alloc::format!("unknown algorithm `{s}`"))),
        })
    }
}

pub const DEFAULT_MAX_ROUNDS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LearnerConfig {
    pub algorithm: Algorithm,
    pub bound: Option<usize>,
    pub given_prefixes: Option<Vec<Word>>,
    pub given_suffixes: Option<Vec<Word>>,
    pub max_rounds: usize,
    pub trace: bool,
}

impl LearnerConfig {
    pub fn new(algorithm: Algorithm) -> Self {
        LearnerConfig {
            algorithm,
            bound: None,
            given_prefixes: None,
            given_suffixes: None,
            max_rounds: DEFAULT_MAX_ROUNDS,
            trace: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_rounds == 0 {
            return Err(Error::Input("the equivalence round cap must be positive".into()));
        }
        if self.bound == Some(0) {
            return Err(Error::Input("the bound must be positive".into()));
        }
        match self.algorithm {
            Algorithm::Az if self.bound.is_none() => Err(Error::Input("az requires a bound".into())),
            Algorithm::Id if self.given_prefixes.is_none() => {
                Err(Error::Input("id requires a list of given prefixes".into()))
            }
            Algorithm::DualId if self.given_suffixes.is_none() => {
                Err(Error::Input("dual-id requires a list of given suffixes".into()))
            }
            _ => Ok(()),
        }
    }

    fn options(&self) -> RunOptions {
        RunOptions { max_rounds: self.max_rounds, trace: self.trace }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub max_rounds: usize,
    pub trace: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { max_rounds: DEFAULT_MAX_ROUNDS, trace: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LearnResult {
    pub hypothesis: Hypothesis,
    pub log: QueryLog,
    /// Equivalence queries asked.
    pub rounds: usize,
    /// Size of the hypothesis handed to each equivalence query.
    pub sizes: Vec<usize>,
    /// Cost of every leaf split (classification-tree learner only).
    pub split_costs: Vec<SplitCost>,
    pub trace: Vec<String>,
}

impl LearnResult {
    fn new<O: MembershipOracle>(hypothesis: Hypothesis, mq: &QueryCache<O>) -> Self {
        LearnResult {
            hypothesis,
            log: mq.log().clone(),
            rounds: 0,
            sizes: Vec::new(),
            split_costs: Vec::new(),
            trace: Vec::new(),
        }
    }
}

/// Runs the configured algorithm. `eq` is only consulted by `lstar` and
/// `kv`.
pub fn learn<O, E>(
    config: &LearnerConfig,
    alphabet: &Alphabet,
    mq: &mut QueryCache<O>,
    eq: &mut E,
) -> Result<LearnResult>
where
    O: MembershipOracle<Output = bool>,
    E: EquivalenceOracle<O, Dfa>,
{
    config.validate()?;
    let opts = config.options();
    match config.algorithm {
        Algorithm::LStar => run_lstar(alphabet, mq, eq, opts),
        Algorithm::Kv => run_kv(alphabet, mq, eq, opts),
        Algorithm::Id => run_id(alphabet, mq, config.given_prefixes.as_deref().unwrap_or_default(), opts),
        Algorithm::DualId => run_dual_id(alphabet, mq, config.given_suffixes.as_deref().unwrap_or_default(), opts),
        Algorithm::Az => run_az(alphabet, mq, config.bound.unwrap_or(1), opts),
    }
}

fn render_row<T: CellText>(row: &[T]) -> String {
    row.iter().map(CellText::cell_text).collect::<Vec<_>>().join(" ")
}

/// Asks for a counterexample and checks that it really is one.
pub(crate) fn counterexample<O, H, E>(
    eq: &mut E,
    hypothesis: &H,
    eval: impl Fn(&H, &Word) -> Result<O::Output>,
    mq: &mut QueryCache<O>,
    alphabet: &Alphabet,
) -> Result<Option<Word>>
where
    O: MembershipOracle,
    E: EquivalenceOracle<O, H>,
{
    mq.record_equivalence();
    let Some(z) = eq.find_counterexample(hypothesis, mq)? else {
        return Ok(None);
    };
    alphabet.check_word(&z)?;
    if mq.query(&z)? == eval(hypothesis, &z)? {
        return Err(Error::Invariant(alloc::format!(
            "counterexample `{}` is classified correctly by the hypothesis; faulty equivalence oracle",
            alphabet.render(&z)
        )));
    }
    Ok(Some(z))
}

/// Equivalence-query loop shared by the two counterexample-driven
/// learners. `refine` fixes defects and returns a hypothesis; `absorb`
/// adds the prefixes of a counterexample.
fn counterexample_loop<O, E, S>(
    alphabet: &Alphabet,
    mq: &mut QueryCache<O>,
    eq: &mut E,
    opts: RunOptions,
    state: &mut S,
    mut refine: impl FnMut(&mut S, &mut QueryCache<O>, &mut LearnResultParts) -> Result<Hypothesis>,
    mut absorb: impl FnMut(&mut S, Word, &mut QueryCache<O>) -> Result<()>,
) -> Result<LearnResult>
where
    O: MembershipOracle<Output = bool>,
    E: EquivalenceOracle<O, Dfa>,
{
    let mut parts = LearnResultParts::default();
    loop {
        mq.set_phase(Phase::Fill);
        let h = refine(state, mq, &mut parts)?;
        let size = h.dfa.size();
        if let Some(&last) = parts.sizes.last() {
            if size <= last {
                return Err(Error::Invariant(alloc::format!(
                    "hypothesis did not grow after a counterexample ({last} -> {size} states)"
                )));
            }
        }
        parts.sizes.push(size);
        parts.rounds += 1;
        match counterexample(eq, &h.dfa, |d, w| d.eval(w), mq, alphabet)? {
            None => {
                let mut result = LearnResult::new(h, mq);
                result.rounds = parts.rounds;
                result.sizes = parts.sizes;
                result.split_costs = parts.split_costs;
                result.trace = parts.trace;
                return Ok(result);
            }
            Some(z) => {
                if opts.trace {
                    parts.trace.push(alloc::format!("counterexample: {}", alphabet.render(&z)));
                }
                if parts.rounds >= opts.max_rounds {
                    return Err(Error::RoundCap(opts.max_rounds));
                }
                mq.set_phase(Phase::Fill);
                absorb(state, z, mq)?;
            }
        }
    }
}

#[derive(Default)]
struct LearnResultParts {
    rounds: usize,
    sizes: Vec<usize>,
    split_costs: Vec<SplitCost>,
    trace: Vec<String>,
}

/// L* with the prefix-closure counterexample treatment: all prefixes of a
/// counterexample are added to `S`, then the table is fixed again.
pub fn run_lstar<O, E>(alphabet: &Alphabet, mq: &mut QueryCache<O>, eq: &mut E, opts: RunOptions) -> Result<LearnResult>
where
    O: MembershipOracle<Output = bool>,
    E: EquivalenceOracle<O, Dfa>,
{
    let mut table = ObservationTable::new(alphabet);
    counterexample_loop(
        alphabet,
        mq,
        eq,
        opts,
        &mut table,
        |t, mq, parts| {
            t.fix(mq)?;
            let h = t.hypothesis()?;
            if opts.trace {
                parts.trace.push(alloc::format!(
                    "round {}: {} states, {} distinct rows\n{}",
                    parts.rounds + 1,
                    h.dfa.size(),
                    t.distinct_rows(),
                    t.dump()
                ));
            }
            Ok(h)
        },
        |t, z, _| {
            for p in z.prefixes() {
                t.add_prefix(p);
            }
            Ok(())
        },
    )
}

/// Kearns–Vazirani style learner on a classification tree. Starts from a
/// single leaf `{ε}`.
pub fn run_kv<O, E>(alphabet: &Alphabet, mq: &mut QueryCache<O>, eq: &mut E, opts: RunOptions) -> Result<LearnResult>
where
    O: MembershipOracle<Output = bool>,
    E: EquivalenceOracle<O, Dfa>,
{
    let mut tree = ClassificationTree::new(alphabet);
    counterexample_loop(
        alphabet,
        mq,
        eq,
        opts,
        &mut tree,
        |t, mq, parts| {
            parts.split_costs.extend(t.fix(mq)?);
            let h = t.hypothesis(mq)?;
            if opts.trace {
                parts.trace.push(alloc::format!("round {}: {} states\n{}", parts.rounds + 1, h.dfa.size(), t.dump()));
            }
            Ok(h)
        },
        |t, z, mq| {
            for p in z.prefixes() {
                t.add_prefix(p, mq)?;
            }
            Ok(())
        },
    )
}

fn table_trace(result: &mut LearnResult, table: &ObservationTable<bool>, opts: RunOptions) {
    if opts.trace {
        result.trace.push(table.dump());
    }
}

/// ID: `S` is given and only consistency defects are fixed.
pub fn run_id<O>(alphabet: &Alphabet, mq: &mut QueryCache<O>, given: &[Word], opts: RunOptions) -> Result<LearnResult>
where
    O: MembershipOracle<Output = bool>,
{
    for s in given {
        alphabet.check_word(s)?;
    }
    let mut table = ObservationTable::with_words(alphabet, given.iter().cloned(), []);
    table.fill(mq)?;
    while let Some(e) = table.consistency_defect()? {
        let phase = mq.set_phase(Phase::Fix);
        table.add_suffix(e);
        let filled = table.fill(mq);
        mq.set_phase(phase);
        filled?;
    }
    if let Some(t) = table.closedness_defect()? {
        return Err(Error::Insufficient(alloc::format!(
            "the given prefixes do not reach every state: the row of `{}` ({}) is not the row of any given prefix",
            alphabet.render(&t),
            render_row(table.row(&t).unwrap_or_default())
        )));
    }
    let mut result = LearnResult::new(table.hypothesis()?, mq);
    table_trace(&mut result, &table, opts);
    Ok(result)
}

/// Dual ID: `E` is given and only closedness defects are fixed.
///
/// Closedness fixing alone keeps the rows of `S` distinct, so a table built
/// this way is always consistent. To detect suffix sets that merge states,
/// the result is checked once more with `S ∪ S·A` as prefixes.
pub fn run_dual_id<O>(
    alphabet: &Alphabet,
    mq: &mut QueryCache<O>,
    given: &[Word],
    opts: RunOptions,
) -> Result<LearnResult>
where
    O: MembershipOracle<Output = bool>,
{
    for e in given {
        alphabet.check_word(e)?;
    }
    let mut table = ObservationTable::with_words(alphabet, [], given.iter().cloned());
    table.fill(mq)?;
    while let Some(t) = table.closedness_defect()? {
        let phase = mq.set_phase(Phase::Fix);
        table.add_prefix(t);
        let filled = table.fill(mq);
        mq.set_phase(phase);
        filled?;
    }
    let hypothesis = table.hypothesis()?;

    let mut check = ObservationTable::with_words(alphabet, table.row_words(), table.suffixes().iter().cloned());
    let phase = mq.set_phase(Phase::Fix);
    let filled = check.fill(mq);
    mq.set_phase(phase);
    filled?;
    if let Some(i) = check.inconsistency()? {
        return Err(Error::Insufficient(alloc::format!(
            "the given suffixes do not separate every pair of states: `{}` and `{}` agree on them but differ on `{}`",
            alphabet.render(&i.first),
            alphabet.render(&i.second),
            alphabet.render(&i.suffix.prepend(i.symbol))
        )));
    }
    let mut result = LearnResult::new(hypothesis, mq);
    table_trace(&mut result, &table, opts);
    Ok(result)
}

/// Arbib–Zeiger: the full table over `S = E = A^{≤n−1}`, with no fixing.
pub fn run_az<O>(alphabet: &Alphabet, mq: &mut QueryCache<O>, bound: usize, opts: RunOptions) -> Result<LearnResult>
where
    O: MembershipOracle<Output = bool>,
{
    if bound == 0 {
        return Err(Error::Input("the bound must be positive".into()));
    }
    let words = alphabet.words_up_to(bound - 1);
    let mut table = ObservationTable::with_words(alphabet, words.clone(), words);
    table.fill(mq)?;
    if table.closedness_defect()?.is_some() || table.consistency_defect()?.is_some() {
        return Err(Error::Invariant(alloc::format!(
            "the table over words of length < {bound} has a defect; the target has more than {bound} states"
        )));
    }
    let mut result = LearnResult::new(table.hypothesis()?, mq);
    table_trace(&mut result, &table, opts);
    Ok(result)
}
