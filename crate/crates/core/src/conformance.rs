//! Conformance testing against a known DFA: W-method and HSI suites, suite
//! execution, and an equivalence oracle built from them.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::minimize::{minimize_with_sets, SplittingTree};
use crate::oracle::{EquivalenceOracle, MembershipOracle, Phase, QueryCache};
use crate::word::{concat_sets, Alphabet, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteMethod {
    WMethod,
    Hsi,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestSuite {
    /// Duplicate-free, sorted by length and then lexicographically.
    pub words: Vec<Word>,
    pub method: SuiteMethod,
    pub bound: usize,
    /// States (or dimension) of the minimized known machine.
    pub states: usize,
    pub access: Vec<Word>,
    pub separators: Vec<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub counterexample: Option<Word>,
    /// Words queried, the failing one included.
    pub queries: usize,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

fn sorted(words: impl IntoIterator<Item = Word>) -> Vec<Word> {
    words.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
}

/// `S·A^{≤k}`
pub(crate) fn explore(access: &[Word], alphabet: &Alphabet, k: usize) -> Vec<Word> {
    concat_sets(access, &alphabet.words_up_to(k))
}

/// `S′·E ∪ E ∪ S′·A·E ∪ S′`, sorted.
pub(crate) fn w_union(explored: &[Word], separators: &[Word], alphabet: &Alphabet) -> Vec<Word> {
    let step = concat_sets(explored, &alphabet.words_up_to(1)[1..]);
    let mut all = concat_sets(explored, separators);
    all.extend(separators.iter().cloned());
    all.extend(concat_sets(&step, separators));
    all.extend(explored.iter().cloned());
    sorted(all)
}

struct Parts {
    min: Dfa,
    access: Vec<Word>,
    separators: Vec<Word>,
    explored: Vec<Word>,
}

fn parts(u: &Dfa, bound: usize) -> Result<Parts> {
    let (min, access, separators) = minimize_with_sets(u);
    if bound < min.size() {
        return Err(Error::BoundTooSmall { bound, size: min.size() });
    }
    let explored = explore(&access.words, u.alphabet(), bound - min.size());
    Ok(Parts { min, access: access.words, separators: separators.words, explored })
}

/// W-method suite for a black box with at most `bound` states.
pub fn w_method_suite(u: &Dfa, bound: usize) -> Result<TestSuite> {
    let p = parts(u, bound)?;
    Ok(TestSuite {
        words: w_union(&p.explored, &p.separators, u.alphabet()),
        method: SuiteMethod::WMethod,
        bound,
        states: p.min.size(),
        access: p.access,
        separators: p.separators,
    })
}

/// HSI-style suite. Each state `q` of the minimized machine gets the
/// identifier set `H(q)`: the labels on its path in the splitting tree
/// built from the separator set, plus `ε`. Every word `s` of `S′ ∪ S′·A` is
/// followed only by `H` of the state it reaches.
///
/// Identifiers are drawn from the separator set, so the suite is a subset
/// of the W-method suite for the same bound.
pub fn hsi_suite(u: &Dfa, bound: usize) -> Result<TestSuite> {
    let p = parts(u, bound)?;
    let tree = SplittingTree::from_separators(&p.min, &p.separators);
    let ids: Vec<Vec<Word>> = (0..p.min.size())
        .map(|q| {
            let mut h = vec![Word::empty()];
            h.extend(tree.path_labels(q));
            h
        })
        .collect();
    let step = concat_sets(&p.explored, &u.alphabet().words_up_to(1));
    let mut all: Vec<Word> = p.explored.clone();
    for s in &step {
        let q = p.min.run_from(p.min.initial(), s);
        all.extend(ids[q].iter().map(|h| s.concat(h)));
    }
    Ok(TestSuite {
        words: sorted(all),
        method: SuiteMethod::Hsi,
        bound,
        states: p.min.size(),
        access: p.access,
        separators: p.separators,
    })
}

/// Queries the black box on each suite word in order and stops at the
/// first disagreement with `known`.
pub fn run_suite<O>(suite: &[Word], known: &Dfa, black: &mut QueryCache<O>) -> Result<Verdict>
where
    O: MembershipOracle<Output = bool>,
{
    let phase = black.set_phase(Phase::Test);
    let result = run_words(suite, |w| known.eval(w), black);
    black.set_phase(phase);
    result
}

pub(crate) fn run_words<O, T>(
    suite: &[Word],
    mut expected: impl FnMut(&Word) -> Result<T>,
    black: &mut QueryCache<O>,
) -> Result<Verdict>
where
    O: MembershipOracle<Output = T>,
    T: PartialEq,
{
    for (i, w) in suite.iter().enumerate() {
        let want = expected(w)?;
        let got = black.query(w).map_err(|source| Error::SuiteAborted { completed: i, source })?;
        if got != want {
            return Ok(Verdict { counterexample: Some(w.clone()), queries: i + 1 });
        }
    }
    Ok(Verdict { counterexample: None, queries: suite.len() })
}

/// Equivalence oracle that runs the W-method suite of each hypothesis
/// against the black box, trusting that the black box has at most `bound`
/// states.
#[derive(Debug, Clone, Copy)]
pub struct TestingEquivalence {
    pub bound: usize,
    pub method: SuiteMethod,
}

impl TestingEquivalence {
    pub fn new(bound: usize) -> Self {
        TestingEquivalence { bound, method: SuiteMethod::WMethod }
    }
}

impl<O: MembershipOracle<Output = bool>> EquivalenceOracle<O, Dfa> for TestingEquivalence {
    fn find_counterexample(&mut self, hypothesis: &Dfa, mq: &mut QueryCache<O>) -> Result<Option<Word>> {
        let suite = match self.method {
            SuiteMethod::WMethod => w_method_suite(hypothesis, self.bound),
            SuiteMethod::Hsi => hsi_suite(hypothesis, self.bound),
        };
        let suite = suite.map_err(|e| match e {
            Error::BoundTooSmall { bound, size } => Error::BoundViolated { bound, size },
            e => e,
        })?;
        Ok(run_suite(&suite.words, hypothesis, mq)?.counterexample)
    }
}
