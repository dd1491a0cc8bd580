//! W-method for weighted automata.

use super::linalg::Rational;
use super::minimize::wfa_minimize_with_words;
use super::wfa::Wfa;
use crate::conformance::{explore, run_words, SuiteMethod, TestSuite, Verdict};
use crate::error::{Error, Result};
use crate::oracle::{EquivalenceOracle, MembershipOracle, Phase, QueryCache};
use crate::word::Word;

/// Suite for a black box of dimension at most `bound`: with `S` spanning
/// and `E` separating the minimized `u`, and `S′ = S·A^{≤ bound − dim}`,
/// the words `S′·E ∪ E ∪ S′·A·E ∪ S′`, sorted.
pub fn wfa_w_method(u: &Wfa, bound: usize) -> Result<TestSuite> {
    let (min, access, separators) = wfa_minimize_with_words(u);
    if bound < min.dim() {
        return Err(Error::BoundTooSmall { bound, size: min.dim() });
    }
    let explored = explore(&access, u.alphabet(), bound - min.dim());
    Ok(TestSuite {
        words: crate::conformance::w_union(&explored, &separators, u.alphabet()),
        method: SuiteMethod::WMethod,
        bound,
        states: min.dim(),
        access,
        separators,
    })
}

/// Compares the black box with `known` on each word, stopping at the first
/// differing value.
pub fn run_wfa_suite<O>(suite: &[Word], known: &Wfa, black: &mut QueryCache<O>) -> Result<Verdict>
where
    O: MembershipOracle<Output = Rational>,
{
    let phase = black.set_phase(Phase::Test);
    let result = run_words(suite, |w| known.eval(w), black);
    black.set_phase(phase);
    result
}

/// Equivalence oracle from the weighted W-method, trusting that the black
/// box has dimension at most `bound`.
#[derive(Debug, Clone, Copy)]
pub struct WfaTestingEquivalence {
    pub bound: usize,
}

impl<O: MembershipOracle<Output = Rational>> EquivalenceOracle<O, Wfa> for WfaTestingEquivalence {
    fn find_counterexample(&mut self, hypothesis: &Wfa, mq: &mut QueryCache<O>) -> Result<Option<Word>> {
        let suite = wfa_w_method(hypothesis, self.bound).map_err(|e| match e {
            Error::BoundTooSmall { bound, size } => Error::BoundViolated { bound, size },
            e => e,
        })?;
        Ok(run_wfa_suite(&suite.words, hypothesis, mq)?.counterexample)
    }
}
