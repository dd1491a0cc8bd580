//! Membership and equivalence oracles, plus the caching layer every learner
//! and tester talks through.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::dfa::Dfa;
use crate::error::{OracleError, Result};
use crate::word::Word;

/// Answers membership queries about a fixed target language.
///
/// Implementations must be deterministic: repeated queries on the same word
/// return the same answer.
pub trait MembershipOracle {
    type Output: Clone + PartialEq;

    fn query(&mut self, word: &Word) -> Result<Self::Output, OracleError>;
}

impl<O: MembershipOracle + ?Sized> MembershipOracle for &mut O {
    type Output = O::Output;

    fn query(&mut self, word: &Word) -> Result<Self::Output, OracleError> {
        (**self).query(word)
    }
}

/// White-box membership oracle backed by a known DFA.
#[derive(Debug, Clone)]
pub struct DfaOracle<'a>(pub &'a Dfa);

impl MembershipOracle for DfaOracle<'_> {
    type Output = bool;

    fn query(&mut self, word: &Word) -> Result<bool, OracleError> {
        self.0.eval(word).map_err(|e| OracleError::Transport(alloc::format!("{e}")))
    }
}

/// Membership oracle from a closure.
pub struct FnOracle<F>(pub F);

impl<F, T> MembershipOracle for FnOracle<F>
where
    F: FnMut(&Word) -> T,
    T: Clone + PartialEq,
{
    type Output = T;

    fn query(&mut self, word: &Word) -> Result<T, OracleError> {
        Ok((self.0)(word))
    }
}

/// Answers `rev(L)` by reversing each word before asking the inner oracle.
pub struct Reversed<O>(pub O);

impl<O: MembershipOracle> MembershipOracle for Reversed<O> {
    type Output = O::Output;

    fn query(&mut self, word: &Word) -> Result<Self::Output, OracleError> {
        self.0.query(&word.reversed())
    }
}

/// Which part of an algorithm issued a query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Phase {
    /// Filling cells for new rows, or sifting new words.
    Fill,
    /// Fixing closedness or consistency defects.
    Fix,
    /// Running a conformance test suite.
    Test,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PhaseCounts {
    pub fill: u64,
    pub fix: u64,
    pub test: u64,
}

impl PhaseCounts {
    fn bump(&mut self, phase: Phase) {
        match phase {
            Phase::Fill => self.fill += 1,
            Phase::Fix => self.fix += 1,
            Phase::Test => self.test += 1,
        }
    }
}

/// Query accounting for one oracle session. All counters only grow.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueryLog {
    /// Membership queries asked by algorithms, cache hits included.
    pub membership: u64,
    pub cache_hits: u64,
    pub equivalence_rounds: u64,
    /// Membership queries per phase, cache hits included.
    pub phases: PhaseCounts,
    /// Words forwarded to the inner oracle, in order, when enabled.
    pub transcript: Option<Vec<Word>>,
}

impl QueryLog {
    /// Queries that actually reached the inner oracle.
    pub fn wire_queries(&self) -> u64 {
        self.membership - self.cache_hits
    }
}

/// Memoizing wrapper around a membership oracle.
///
/// Tables, trees, learners and test runs share one cache per target so that
/// query counts are comparable across algorithms.
pub struct QueryCache<O: MembershipOracle> {
    inner: O,
    answers: BTreeMap<Word, O::Output>,
    log: QueryLog,
    phase: Phase,
}

impl<O: MembershipOracle> QueryCache<O> {
    pub fn new(inner: O) -> Self {
        QueryCache { inner, answers: BTreeMap::new(), log: QueryLog::default(), phase: Phase::Fill }
    }

    /// Also record every forwarded word in [`QueryLog::transcript`].
    pub fn with_transcript(mut self) -> Self {
        self.log.transcript = Some(Vec::new());
        self
    }

    pub fn query(&mut self, word: &Word) -> Result<O::Output, OracleError> {
        self.log.membership += 1;
        self.log.phases.bump(self.phase);
        if let Some(v) = self.answers.get(word) {
            self.log.cache_hits += 1;
            return Ok(v.clone());
        }
        let v = self.inner.query(word)?;
        if let Some(t) = self.log.transcript.as_mut() {
            t.push(word.clone());
        }
        self.answers.insert(word.clone(), v.clone());
        Ok(v)
    }

    /// Cached answer, without counting a query.
    pub fn peek(&self, word: &Word) -> Option<&O::Output> {
        self.answers.get(word)
    }

    /// Switches the phase attributed to subsequent queries; returns the old one.
    pub fn set_phase(&mut self, phase: Phase) -> Phase {
        core::mem::replace(&mut self.phase, phase)
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn record_equivalence(&mut self) {
        self.log.equivalence_rounds += 1;
    }

    pub fn log(&self) -> &QueryLog {
        &self.log
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }

    pub fn inner_mut(&mut self) -> &mut O {
        &mut self.inner
    }

    pub fn into_inner(self) -> O {
        self.inner
    }
}

/// Answers equivalence queries for hypotheses of type `H`.
///
/// The membership cache of the running learner is passed in so that
/// testing-based oracles can query the black box through the same session.
pub trait EquivalenceOracle<O: MembershipOracle, H> {
    fn find_counterexample(&mut self, hypothesis: &H, mq: &mut QueryCache<O>) -> Result<Option<Word>>;
}

/// Exact equivalence against a known DFA (white-box teacher).
#[derive(Debug, Clone)]
pub struct DfaEquivalence {
    pub target: Dfa,
}

impl<O: MembershipOracle> EquivalenceOracle<O, Dfa> for DfaEquivalence {
    fn find_counterexample(&mut self, hypothesis: &Dfa, _mq: &mut QueryCache<O>) -> Result<Option<Word>> {
        self.target.find_difference(hypothesis)
    }
}

impl<O: MembershipOracle, H, F> EquivalenceOracle<O, H> for F
where
    F: FnMut(&H) -> Option<Word>,
{
    fn find_counterexample(&mut self, hypothesis: &H, _mq: &mut QueryCache<O>) -> Result<Option<Word>> {
        Ok(self(hypothesis))
    }
}
