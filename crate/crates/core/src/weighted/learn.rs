//! Learners for weighted automata: L* over rational tables, and ID.

use alloc::string::String;
use alloc::vec::Vec;

use super::linalg::Rational;
use super::table::WfaTable;
use super::wfa::Wfa;
use crate::error::{Error, Result};
use crate::learn::{counterexample, RunOptions};
use crate::oracle::{EquivalenceOracle, MembershipOracle, Phase, QueryCache, QueryLog};
use crate::word::{Alphabet, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WfaLearnResult {
    pub hypothesis: Wfa,
    pub log: QueryLog,
    pub rounds: usize,
    /// Dimension of the hypothesis handed to each equivalence query.
    pub ranks: Vec<usize>,
    pub trace: Vec<String>,
}

/// L* over rational tables: closedness by span, consistency through the
/// transposed table, counterexamples handled by adding all prefixes.
pub fn run_wfa_lstar<O, E>(
    alphabet: &Alphabet,
    mq: &mut QueryCache<O>,
    eq: &mut E,
    opts: RunOptions,
) -> Result<WfaLearnResult>
where
    O: MembershipOracle<Output = Rational>,
    E: EquivalenceOracle<O, Wfa>,
{
    let mut table = WfaTable::new(alphabet);
    let mut ranks: Vec<usize> = Vec::new();
    let mut trace = Vec::new();
    loop {
        mq.set_phase(Phase::Fill);
        table.fix(mq)?;
        let h = table.hypothesis()?;
        if let Some(&last) = ranks.last() {
            if h.dim() <= last {
                return Err(Error::Invariant(alloc::format!(
                    "hypothesis dimension did not grow after a counterexample ({last} -> {})",
                    h.dim()
                )));
            }
        }
        ranks.push(h.dim());
        if opts.trace {
            trace.push(alloc::format!("round {}: dimension {}\n{}", ranks.len(), h.dim(), table.dump()));
        }
        match counterexample(eq, &h, |h, w| h.eval(w), mq, alphabet)? {
            None => {
                return Ok(WfaLearnResult { hypothesis: h, log: mq.log().clone(), rounds: ranks.len(), ranks, trace })
            }
            Some(z) => {
                if opts.trace {
                    trace.push(alloc::format!("counterexample: {}", alphabet.render(&z)));
                }
                if ranks.len() >= opts.max_rounds {
                    return Err(Error::RoundCap(opts.max_rounds));
                }
                for p in z.prefixes() {
                    table.add_prefix(p);
                }
            }
        }
    }
}

/// ID over rational tables: `S` is given and only consistency is fixed.
pub fn run_wfa_id<O>(
    alphabet: &Alphabet,
    mq: &mut QueryCache<O>,
    given: &[Word],
    opts: RunOptions,
) -> Result<WfaLearnResult>
where
    O: MembershipOracle<Output = Rational>,
{
    for s in given {
        alphabet.check_word(s)?;
    }
    let mut table = WfaTable::with_words(alphabet, given.iter().cloned(), []);
    table.fill(mq)?;
    while let Some(e) = table.consistency_defect()? {
        let phase = mq.set_phase(Phase::Fix);
        table.add_suffix(e);
        let filled = table.fill(mq);
        mq.set_phase(phase);
        filled?;
    }
    if let Some((s, a)) = table.closed_defect()? {
        return Err(Error::Insufficient(alloc::format!(
            "the given prefixes do not span the state space: the row of `{}` is outside their span",
            alphabet.render(&s.append(a))
        )));
    }
    let hypothesis = table.hypothesis()?;
    let mut trace = Vec::new();
    if opts.trace {
        trace.push(table.dump());
    }
    Ok(WfaLearnResult { ranks: Vec::new(), rounds: 0, log: mq.log().clone(), hypothesis, trace })
}

#[cfg(test)]
mod tests {
    use super::super::wfa::{fixtures::count_a, wfa_equiv, WfaEquivalence, WfaOracle};
    use super::*;
    use crate::dfa::fixtures::ab;

    #[test]
    fn lstar_learns_count_a() {
        let w1 = count_a();
        let mut mq = QueryCache::new(WfaOracle(&w1));
        let mut eq = WfaEquivalence { target: w1.clone() };
        let r = run_wfa_lstar(&ab(), &mut mq, &mut eq, RunOptions::default()).unwrap();
        assert_eq!(r.hypothesis.dim(), 2);
        assert_eq!(wfa_equiv(&r.hypothesis, &w1).unwrap(), None);
        assert!(r.ranks.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn lstar_on_zero_language() {
        let zero = Wfa::zero(ab());
        let mut mq = QueryCache::new(WfaOracle(&zero));
        let mut eq = WfaEquivalence { target: zero.clone() };
        let r = run_wfa_lstar(&ab(), &mut mq, &mut eq, RunOptions::default()).unwrap();
        assert!(r.hypothesis.dim() <= 1);
        assert_eq!(r.rounds, 1);
    }

    #[test]
    fn id() {
        let w1 = count_a();
        let mut mq = QueryCache::new(WfaOracle(&w1));
        let given = [Word::empty(), Word::from([0])];
        let r = run_wfa_id(&ab(), &mut mq, &given, RunOptions::default()).unwrap();
        assert_eq!(wfa_equiv(&r.hypothesis, &w1).unwrap(), None);

        let err = run_wfa_id(&ab(), &mut mq, &[Word::empty()], RunOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Insufficient(_)), "{err}");
    }
}
