mod common;

use calf_core::conformance::{hsi_suite, run_suite, w_method_suite, TestingEquivalence};
use calf_core::dfa::fixtures::{ab, even_a};
use calf_core::oracle::DfaOracle;
use calf_core::{Alphabet, Dfa, EquivalenceOracle, Error, MembershipOracle, OracleError, QueryCache, Word};
use proptest::prelude::*;

fn pair() -> impl Strategy<Value = (Dfa, Dfa, usize)> {
    (any::<u64>(), any::<u64>(), 1usize..=4, 1usize..=4, 1usize..=2, 0usize..=1).prop_map(|(s, t, n, m, k, extra)| {
        let a = Alphabet::from_chars(&"ab"[..k]).unwrap();
        let u = Dfa::random(s, n, &a).unwrap();
        let v = Dfa::random(t, m, &a).unwrap();
        let bound = common::nerode_quotient(&u).size().max(common::nerode_quotient(&v).size()) + extra;
        (u, v, bound)
    })
}

fn passes(suite: &[Word], known: &Dfa, black: &Dfa) -> bool {
    let mut mq = QueryCache::new(DfaOracle(black));
    run_suite(suite, known, &mut mq).unwrap().passed()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn w_method_is_exact_within_the_bound((u, v, bound) in pair()) {
        let suite = w_method_suite(&u, bound).unwrap();
        prop_assert_eq!(passes(&suite.words, &u, &v), common::difference(&u, &v).is_none());
    }

    #[test]
    fn hsi_is_exact_and_no_larger((u, v, bound) in pair()) {
        let w = w_method_suite(&u, bound).unwrap();
        let h = hsi_suite(&u, bound).unwrap();
        prop_assert!(h.words.iter().all(|x| w.words.contains(x)));
        prop_assert!(h.words.contains(&Word::empty()));
        prop_assert_eq!(passes(&h.words, &u, &v), common::difference(&u, &v).is_none());
    }

    #[test]
    fn suites_are_sorted_without_duplicates((u, _v, bound) in pair()) {
        for s in [w_method_suite(&u, bound).unwrap(), hsi_suite(&u, bound).unwrap()] {
            prop_assert!(s.words.windows(2).all(|p| p[0] < p[1]));
            prop_assert_eq!(s.states, common::nerode_quotient(&u).size());
        }
    }

    #[test]
    fn bound_below_the_known_size_is_rejected((u, _v, _b) in pair()) {
        let n = common::nerode_quotient(&u).size();
        if n > 1 {
            prop_assert_eq!(
                w_method_suite(&u, n - 1).unwrap_err(),
                Error::BoundTooSmall { bound: n - 1, size: n }
            );
        }
    }
}

#[test]
fn d1_suite() {
    let s = w_method_suite(&even_a(), 2).unwrap();
    let text: Vec<String> = s.words.iter().map(|w| ab().render(w)).collect();
    assert_eq!(text, ["eps", "a", "b", "a a", "a b"]);
}

struct Flaky<'a> {
    dfa: &'a Dfa,
    left: usize,
}

impl MembershipOracle for Flaky<'_> {
    type Output = bool;

    fn query(&mut self, w: &Word) -> Result<bool, OracleError> {
        if self.left == 0 {
            return Err(OracleError::Transport("gone".into()));
        }
        self.left -= 1;
        Ok(self.dfa.eval(w).unwrap())
    }
}

#[test]
fn oracle_failure_aborts_with_progress() {
    let d = even_a();
    let suite = w_method_suite(&d, 3).unwrap().words;
    let mut mq = QueryCache::new(Flaky { dfa: &d, left: 4 });
    match run_suite(&suite, &d, &mut mq) {
        Err(Error::SuiteAborted { completed, .. }) => assert_eq!(completed, 4),
        other => panic!("{other:?}"),
    }
}

#[test]
fn testing_oracle_rejects_oversized_hypotheses() {
    let d = calf_core::dfa::fixtures::second_is_a();
    let mut mq = QueryCache::new(DfaOracle(&d));
    let mut eq = TestingEquivalence::new(2);
    let err = eq.find_counterexample(&d, &mut mq).unwrap_err();
    assert_eq!(err, Error::BoundViolated { bound: 2, size: 4 });
}
