//! Reference implementations used as test oracles. Written independently
//! of the library: naive, exhaustive and slow on purpose.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeMap, VecDeque};

use calf_core::weighted::{Rational, Wfa};
use calf_core::{Alphabet, Dfa, Word};
use num_traits::{One, Zero};

/// Every word of length at most `n`, shortest first.
pub fn all_words(k: usize, n: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Vec::<usize>::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &layer {
            for a in 0..k {
                let mut v = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned().map(Word::from));
        layer = next;
    }
    out
}

pub fn run(d: &Dfa, mut q: usize, w: &[usize]) -> usize {
    for &a in w {
        q = d.next(q, a);
    }
    q
}

/// Acceptance of every word of length at most `n` from each state, in a
/// fixed word order. Built level by level: the block of words of length
/// `l + 1` from `q` is the concatenation over `a` of the length-`l` blocks
/// from `δ(q, a)`.
pub fn signatures(d: &Dfa, n: usize) -> Vec<Vec<bool>> {
    let k = d.alphabet().len();
    let mut level: Vec<Vec<bool>> = (0..d.size()).map(|q| vec![d.is_accepting(q)]).collect();
    let mut sig = level.clone();
    for _ in 0..n {
        level = (0..d.size()).map(|q| (0..k).flat_map(|a| level[d.next(q, a)].iter().copied()).collect()).collect();
        for q in 0..d.size() {
            sig[q].extend_from_slice(&level[q]);
        }
    }
    sig
}

/// Quotient of the reachable part by `key`, numbered in breadth-first
/// order.
fn quotient_by<K: Ord + Clone>(d: &Dfa, key: impl Fn(usize) -> K) -> Dfa {
    let k = d.alphabet().len();
    let mut class_of: BTreeMap<K, usize> = BTreeMap::new();
    let mut rep = vec![d.initial()];
    class_of.insert(key(d.initial()), 0);
    let mut seen = vec![false; d.size()];
    seen[d.initial()] = true;
    let mut queue = VecDeque::from([d.initial()]);
    while let Some(q) = queue.pop_front() {
        for a in 0..k {
            let p = d.next(q, a);
            class_of.entry(key(p)).or_insert_with(|| {
                rep.push(p);
                rep.len() - 1
            });
            if !seen[p] {
                seen[p] = true;
                queue.push_back(p);
            }
        }
    }
    let class = |q: usize| class_of[&key(q)];
    Dfa::from_fn(d.alphabet().clone(), rep.len(), 0, |c| d.is_accepting(rep[c]), |c, a| class(d.next(rep[c], a)))
        .unwrap()
}

/// Nerode quotient by brute force: reachable states grouped by acceptance
/// on every word of length at most `|d|`. Exponential in `|d|`.
pub fn nerode_quotient(d: &Dfa) -> Dfa {
    let sig = signatures(d, d.size());
    quotient_by(d, |q| sig[q].clone())
}

/// Nerode quotient by the pairwise table-filling method: mark pairs that
/// differ in acceptance, then pairs with a marked successor pair, until
/// nothing changes.
pub fn table_filling_quotient(d: &Dfa) -> Dfa {
    let n = d.size();
    let k = d.alphabet().len();
    let mut marked = vec![vec![false; n]; n];
    for p in 0..n {
        for q in 0..n {
            marked[p][q] = d.is_accepting(p) != d.is_accepting(q);
        }
    }
    let mut changed = true;
    while changed {
        changed = false;
        for p in 0..n {
            for q in 0..n {
                if !marked[p][q] && (0..k).any(|a| marked[d.next(p, a)][d.next(q, a)]) {
                    marked[p][q] = true;
                    changed = true;
                }
            }
        }
    }
    quotient_by(d, |q| (0..n).find(|&p| !marked[p][q]).unwrap())
}

/// Isomorphism of two DFAs whose states are all reachable, by a joint
/// breadth-first walk.
pub fn isomorphic(x: &Dfa, y: &Dfa) -> bool {
    if x.size() != y.size() || x.alphabet() != y.alphabet() {
        return false;
    }
    let mut map = vec![usize::MAX; x.size()];
    let mut back = vec![usize::MAX; y.size()];
    let mut queue = VecDeque::from([(x.initial(), y.initial())]);
    map[x.initial()] = y.initial();
    back[y.initial()] = x.initial();
    while let Some((p, q)) = queue.pop_front() {
        if x.is_accepting(p) != y.is_accepting(q) {
            return false;
        }
        for a in 0..x.alphabet().len() {
            let (p2, q2) = (x.next(p, a), y.next(q, a));
            match (map[p2], back[q2]) {
                (usize::MAX, usize::MAX) => {
                    map[p2] = q2;
                    back[q2] = p2;
                    queue.push_back((p2, q2));
                }
                (m, b) if m == q2 && b == p2 => {}
                _ => return false,
            }
        }
    }
    map.iter().all(|&m| m != usize::MAX)
}

/// Shortlex-least word on which the DFAs disagree, by breadth-first
/// search over pairs of states.
pub fn difference(x: &Dfa, y: &Dfa) -> Option<Word> {
    let k = x.alphabet().len();
    let mut seen = vec![false; x.size() * y.size()];
    let mut queue = VecDeque::from([(x.initial(), y.initial(), Vec::new())]);
    seen[x.initial() * y.size() + y.initial()] = true;
    while let Some((p, q, w)) = queue.pop_front() {
        if x.is_accepting(p) != y.is_accepting(q) {
            return Some(Word::from(w));
        }
        for a in 0..k {
            let (p2, q2) = (x.next(p, a), y.next(q, a));
            if !seen[p2 * y.size() + q2] {
                seen[p2 * y.size() + q2] = true;
                let mut v = w.clone();
                v.push(a);
                queue.push_back((p2, q2, v));
            }
        }
    }
    None
}

/// States reachable from the initial one.
pub fn reachable(d: &Dfa) -> usize {
    let mut seen = vec![false; d.size()];
    let mut stack = vec![d.initial()];
    seen[d.initial()] = true;
    while let Some(q) = stack.pop() {
        for a in 0..d.alphabet().len() {
            let p = d.next(q, a);
            if !seen[p] {
                seen[p] = true;
                stack.push(p);
            }
        }
    }
    seen.iter().filter(|&&s| s).count()
}

/// Every complete DFA over `alphabet` with exactly `n` states and initial
/// state 0.
pub fn all_dfas(alphabet: &Alphabet, n: usize) -> Vec<Dfa> {
    let k = alphabet.len();
    let cells = n * k;
    let mut out = Vec::new();
    for acc in 0..(1u32 << n) {
        let mut delta = vec![0usize; cells];
        loop {
            let accepting = (0..n).map(|q| acc >> q & 1 == 1).collect();
            out.push(Dfa::new(alphabet.clone(), 0, accepting, delta.clone()).unwrap());
            let mut i = 0;
            while i < cells {
                delta[i] += 1;
                if delta[i] < n {
                    break;
                }
                delta[i] = 0;
                i += 1;
            }
            if i == cells {
                break;
            }
        }
    }
    out
}

// Exact linear algebra, written separately from the library's.

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Row echelon form by Gaussian elimination; returns the rank.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for j in c..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

/// Basis of `{ c : Σ c_i · rows[i] = 0 }`.
pub fn left_kernel(rows: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    // Columns of the transpose, augmented with the identity.
    let mut m: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut r = rows[i].clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..n).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in 0..n {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for j in 0..cols + n {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        r += 1;
    }
    m[r..].iter().map(|row| row[cols..].to_vec()).collect()
}

pub fn eval(w: &Wfa, word: &[usize]) -> Rational {
    let mut x: Vec<Rational> = w.init().to_vec();
    for &a in word {
        let m = w.matrix(a);
        x = (0..w.dim()).map(|j| (0..w.dim()).map(|i| &x[i] * &m[i][j]).sum()).collect();
    }
    x.iter().zip(w.out()).map(|(a, b)| a * b).sum()
}

/// Rank of the Hankel block over words of length below `n` on both sides,
/// which is the minimal dimension of any WFA of dimension at most `n`
/// computing the same function.
pub fn hankel_rank(w: &Wfa, n: usize) -> usize {
    let words = all_words(w.alphabet().len(), n.saturating_sub(1));
    let rows: Vec<Vec<Rational>> =
        words.iter().map(|u| words.iter().map(|v| eval(w, &u.concat(v))).collect()).collect();
    rank(&rows)
}

/// Two WFAs of dimensions `n` and `m` agree everywhere iff they agree on
/// all words shorter than `n + m`.
pub fn wfa_agree(x: &Wfa, y: &Wfa) -> Option<Word> {
    let n = x.dim() + y.dim();
    all_words(x.alphabet().len(), n.saturating_sub(1)).into_iter().find(|w| eval(x, w) != eval(y, w))
}

/// The seeded family of random targets: `count` DFAs with 1 to `max_states`
/// states over 1 to 3 symbols.
pub fn random_family(seed: u64, count: usize, max_states: usize) -> Vec<Dfa> {
    let alphabets =
        [Alphabet::from_chars("a").unwrap(), Alphabet::from_chars("ab").unwrap(), Alphabet::from_chars("abc").unwrap()];
    (0..count as u64)
        .map(|i| {
            let s = seed.wrapping_mul(1_000_003).wrapping_add(i);
            let alphabet = &alphabets[(s % 3) as usize];
            let states = 1 + (s / 3 % max_states as u64) as usize;
            Dfa::random(s, states, alphabet).unwrap()
        })
        .collect()
}
