mod common;

use calf_core::dfa::fixtures::ab;
use calf_core::learn::RunOptions;
use calf_core::oracle::Reversed;
use calf_core::weighted::{
    in_span, rank, run_wfa_lstar, run_wfa_suite, solve_coords, wfa_equiv, wfa_minimize, wfa_w_method, Rational,
    SpanBasis, Wfa, WfaEquivalence, WfaOracle, WfaTable,
};
use calf_core::{QueryCache, Word};
use common::int;
use num_traits::Zero;
use proptest::prelude::*;

fn wfa(max_dim: usize) -> impl Strategy<Value = Wfa> {
    (any::<u64>(), 0..=max_dim).prop_map(|(seed, n)| Wfa::random(seed, n, &ab(), &[-1, 0, 1]).unwrap())
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    proptest::collection::vec(proptest::collection::vec((-2i64..=2).prop_map(int), cols), rows)
}

fn prefix_closed(words: Vec<Vec<usize>>) -> Vec<Word> {
    words.into_iter().flat_map(|w| Word::from(w).prefixes().collect::<Vec<_>>()).collect()
}

fn small_words() -> impl Strategy<Value = Vec<Vec<usize>>> {
    proptest::collection::vec(proptest::collection::vec(0usize..2, 0..3), 0..4)
}

proptest! {
    #[test]
    fn rank_matches_reference(m in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| matrix(r, c))) {
        prop_assert_eq!(rank(&m).unwrap(), common::rank(&m));
        let mut basis = SpanBasis::new();
        for r in &m {
            basis.insert(r);
        }
        prop_assert_eq!(basis.rank(), common::rank(&m));
    }

    #[test]
    fn coordinates_reconstruct_the_target(
        (m, t) in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| (matrix(r, c), proptest::collection::vec((-2i64..=2).prop_map(int), c)))
    ) {
        let mut with = m.clone();
        with.push(t.clone());
        let expected = common::rank(&with) == common::rank(&m);
        prop_assert_eq!(in_span(&m, &t).unwrap(), expected);
        if let Some(l) = solve_coords(&m, &t).unwrap() {
            for j in 0..t.len() {
                let s: Rational = (0..m.len()).map(|i| &l[i] * &m[i][j]).sum();
                prop_assert_eq!(&s, &t[j]);
            }
        }
    }

    #[test]
    fn equivalence_agrees_with_exhaustive_check(u in wfa(3), v in wfa(3)) {
        let brute = common::wfa_agree(&u, &v);
        match wfa_equiv(&u, &v).unwrap() {
            None => prop_assert_eq!(brute, None),
            Some((w, x, y)) => {
                prop_assert!(brute.is_some());
                prop_assert_eq!(&x, &common::eval(&u, &w));
                prop_assert_eq!(&y, &common::eval(&v, &w));
                prop_assert_ne!(x, y);
            }
        }
        prop_assert_eq!(wfa_equiv(&u, &u).unwrap(), None);
    }

    #[test]
    fn minimize_reaches_the_hankel_rank(w in wfa(4)) {
        let m = wfa_minimize(&w);
        prop_assert_eq!(m.dim(), common::hankel_rank(&w, w.dim()));
        prop_assert_eq!(common::wfa_agree(&w, &m), None);
        prop_assert_eq!(wfa_minimize(&m).dim(), m.dim());
    }

    #[test]
    fn lstar_learns_a_minimal_wfa(w in wfa(3)) {
        let mut mq = QueryCache::new(WfaOracle(&w));
        let mut eq = WfaEquivalence { target: w.clone() };
        let r = run_wfa_lstar(&ab(), &mut mq, &mut eq, RunOptions::default()).unwrap();
        let min = common::hankel_rank(&w, w.dim());
        prop_assert_eq!(common::wfa_agree(&r.hypothesis, &w), None);
        prop_assert_eq!(r.hypothesis.dim(), min);
        prop_assert!(r.ranks.iter().all(|&d| d <= min));
        prop_assert!(r.ranks.windows(2).all(|p| p[0] < p[1]));
        prop_assert!(r.rounds <= min.max(1));
    }

    #[test]
    fn closed_transpose_implies_consistency(w in wfa(3), s in small_words(), e in small_words()) {
        let mut t = WfaTable::with_words(&ab(), prefix_closed(s), e.into_iter().map(Word::from));
        let mut mq = QueryCache::new(WfaOracle(&w));
        t.fill(&mut mq).unwrap();
        if t.transpose_defect().unwrap().is_none() {
            let top = t.top().unwrap();
            let bottoms: Vec<_> = (0..2).map(|a| t.bottom(a).unwrap()).collect();
            let mut combos = common::left_kernel(&top);
            // Small integer combinations as well, checked directly.
            let n = top.len().min(5);
            let mut c = vec![-1i64; n];
            loop {
                let v: Vec<Rational> = c.iter().map(|&x| int(x)).chain((n..top.len()).map(|_| Rational::zero())).collect();
                if (0..top[0].len()).all(|j| (0..top.len()).map(|i| &v[i] * &top[i][j]).sum::<Rational>().is_zero()) {
                    combos.push(v);
                }
                let Some(i) = c.iter().position(|&x| x < 1) else { break };
                c[i] += 1;
                for x in &mut c[..i] {
                    *x = -1;
                }
            }
            for v in combos {
                for b in &bottoms {
                    for j in 0..b[0].len() {
                        let s: Rational = (0..b.len()).map(|i| &v[i] * &b[i][j]).sum();
                        prop_assert!(s.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn transpose_cells_match_reversed_queries(w in wfa(3), s in small_words(), e in small_words()) {
        let t = {
            let mut t = WfaTable::with_words(&ab(), prefix_closed(s), e.into_iter().map(Word::from));
            t.fill(&mut QueryCache::new(WfaOracle(&w))).unwrap();
            t
        };
        let mut rev = QueryCache::new(Reversed(WfaOracle(&w)));
        for (i, s) in t.prefixes().iter().enumerate() {
            for (j, e) in t.suffixes().iter().enumerate() {
                prop_assert_eq!(&rev.query(&e.reversed().concat(&s.reversed())).unwrap(), &t.top().unwrap()[i][j]);
                for a in 0..2 {
                    let x = e.reversed().append(a).concat(&s.reversed());
                    prop_assert_eq!(&rev.query(&x).unwrap(), &t.bottom(a).unwrap()[i][j]);
                }
            }
        }
    }

    #[test]
    fn w_method_is_exact_within_the_bound(u in wfa(2), v in wfa(2)) {
        let bound = wfa_minimize(&u).dim().max(wfa_minimize(&v).dim()).max(1);
        let suite = wfa_w_method(&u, bound).unwrap();
        let mut mq = QueryCache::new(WfaOracle(&v));
        let pass = run_wfa_suite(&suite.words, &u, &mut mq).unwrap().passed();
        prop_assert_eq!(pass, common::wfa_agree(&u, &v).is_none());
    }
}
