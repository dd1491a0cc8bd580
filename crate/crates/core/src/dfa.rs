//! Complete deterministic finite automata.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::word::{Alphabet, Symbol, Word};

/// A complete DFA with dense state ids `0..n`.
///
/// Transitions are stored row-major: `delta[q * |A| + a]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dfa {
    alphabet: Alphabet,
    initial: usize,
    accepting: Vec<bool>,
    delta: Vec<usize>,
}

impl Dfa {
    pub fn new(alphabet: Alphabet, initial: usize, accepting: Vec<bool>, delta: Vec<usize>) -> Result<Self> {
        let n = accepting.len();
        if n == 0 {
            return Err(Error::Input("a DFA needs at least one state".into()));
        }
        if initial >= n {
            return Err(Error::Input(alloc::format!("initial state {initial} out of range")));
        }
        if delta.len() != n * alphabet.len() {
            return Err(Error::Input(alloc::format!(
                "expected {} transitions, got {}",
                n * alphabet.len(),
                delta.len()
            )));
        }
        if let Some(&t) = delta.iter().find(|&&t| t >= n) {
            return Err(Error::Input(alloc::format!("transition target {t} out of range")));
        }
        Ok(Dfa { alphabet, initial, accepting, delta })
    }

    /// Builds a DFA from a transition function.
    pub fn from_fn(
        alphabet: Alphabet,
        states: usize,
        initial: usize,
        accepting: impl Fn(usize) -> bool,
        next: impl Fn(usize, Symbol) -> usize,
    ) -> Result<Self> {
        let k = alphabet.len();
        let delta = (0..states * k).map(|i| next(i / k, i % k)).collect();
        let accepting = (0..states).map(accepting).collect();
        Dfa::new(alphabet, initial, accepting, delta)
    }

    /// Draws a complete DFA: for each state in order, its acceptance bit and
    /// then one uniformly chosen target per symbol. The initial state is 0.
    pub fn random(seed: u64, states: usize, alphabet: &Alphabet) -> Result<Self> {
        if states == 0 {
            return Err(Error::Input("random DFA needs at least one state".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut accepting = Vec::with_capacity(states);
        let mut delta = Vec::with_capacity(states * alphabet.len());
        for _ in 0..states {
            accepting.push(rng.random::<bool>());
            for _ in alphabet.symbols() {
                delta.push(rng.random_range(0..states));
            }
        }
        Dfa::new(alphabet.clone(), 0, accepting, delta)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn size(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn accepting(&self) -> &[bool] {
        &self.accepting
    }

    pub fn next(&self, q: usize, a: Symbol) -> usize {
        self.delta[q * self.alphabet.len() + a]
    }

    /// State reached from `q` by reading `w`. Symbols must be in range.
    pub fn run_from(&self, q: usize, w: &[Symbol]) -> usize {
        w.iter().fold(q, |q, &a| self.next(q, a))
    }

    /// Acceptance of `w` read from state `q`.
    pub fn accepts_from(&self, q: usize, w: &[Symbol]) -> bool {
        self.accepting[self.run_from(q, w)]
    }

    pub fn eval(&self, w: &[Symbol]) -> Result<bool> {
        self.alphabet.check_word(w)?;
        Ok(self.accepts_from(self.initial, w))
    }

    pub fn complement(&self) -> Dfa {
        Dfa { accepting: self.accepting.iter().map(|b| !b).collect(), ..self.clone() }
    }

    /// States in breadth-first discovery order from the initial state, with
    /// their shortest (length-lexicographically least) access words.
    pub fn bfs(&self) -> (Vec<usize>, Vec<Word>) {
        let mut order = vec![self.initial];
        let mut access = vec![Word::empty()];
        let mut seen = vec![false; self.size()];
        seen[self.initial] = true;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for a in self.alphabet.symbols() {
                let t = self.next(q, a);
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                    access.push(access[i].append(a));
                }
            }
            i += 1;
        }
        (order, access)
    }

    /// Reachable part relabelled in BFS order (symbols in alphabet order).
    /// Two DFAs are isomorphic exactly when their canonical forms are equal.
    pub fn canonical(&self) -> Dfa {
        let (order, _) = self.bfs();
        let mut rename = vec![usize::MAX; self.size()];
        for (new, &old) in order.iter().enumerate() {
            rename[old] = new;
        }
        let k = self.alphabet.len();
        let mut delta = Vec::with_capacity(order.len() * k);
        for &q in &order {
            for a in self.alphabet.symbols() {
                delta.push(rename[self.next(q, a)]);
            }
        }
        Dfa {
            alphabet: self.alphabet.clone(),
            initial: 0,
            accepting: order.iter().map(|&q| self.accepting[q]).collect(),
            delta,
        }
    }

    /// Isomorphism of the reachable parts.
    pub fn is_isomorphic(&self, other: &Dfa) -> Result<bool> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        Ok(self.canonical() == other.canonical())
    }

    /// `None` when both DFAs accept the same language, otherwise the
    /// length-lexicographically least word in the symmetric difference.
    pub fn find_difference(&self, other: &Dfa) -> Result<Option<Word>> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let m = other.size();
        let mut seen = vec![false; self.size() * m];
        let mut queue = VecDeque::new();
        seen[self.initial * m + other.initial] = true;
        queue.push_back((self.initial, other.initial, Word::empty()));
        while let Some((p, q, w)) = queue.pop_front() {
            if self.accepting[p] != other.accepting[q] {
                return Ok(Some(w));
            }
            for a in self.alphabet.symbols() {
                let (p2, q2) = (self.next(p, a), other.next(q, a));
                if !seen[p2 * m + q2] {
                    seen[p2 * m + q2] = true;
                    queue.push_back((p2, q2, w.append(a)));
                }
            }
        }
        Ok(None)
    }
}

impl core::fmt::Debug for Dfa {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        writeln!(f, "Dfa {:?} initial={}", self.alphabet, self.initial)?;
        for q in 0..self.size() {
            write!(f, "  {q}{}:", if self.accepting[q] { "*" } else { "" })?;
            for a in self.alphabet.symbols() {
                write!(f, " {}", self.next(q, a))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Small fixed automata used across the test suites.
#[doc(hidden)]
pub mod fixtures {
    use super::*;

    pub fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    /// Even number of `a`s over {a, b}; state 0 = even (accepting).
    pub fn even_a() -> Dfa {
        Dfa::from_fn(ab(), 2, 0, |q| q == 0, |q, a| if a == 0 { 1 - q } else { q }).unwrap()
    }

    /// `q0 -a-> q1 -a-> q2 (loop)` over {a}, accepting {q1, q2}.
    pub fn chain_d2() -> Dfa {
        let a = Alphabet::new(["a"]).unwrap();
        Dfa::from_fn(a, 3, 0, |q| q > 0, |q, _| (q + 1).min(2)).unwrap()
    }

    /// One state with a self loop on every symbol.
    pub fn constant(alphabet: Alphabet, accept: bool) -> Dfa {
        Dfa::from_fn(alphabet, 1, 0, |_| accept, |_, _| 0).unwrap()
    }

    /// Words of length ≥ 2 whose second symbol is `a`, over {a, b}.
    pub fn second_is_a() -> Dfa {
        // 0: start, 1: one symbol read, 2: accept sink, 3: reject sink
        Dfa::from_fn(
            ab(),
            4,
            0,
            |q| q == 2,
            |q, a| match q {
                0 => 1,
                1 => {
                    if a == 0 {
                        2
                    } else {
                        3
                    }
                }
                q => q,
            },
        )
        .unwrap()
    }

    /// Words ending in `b`, over {a, b}.
    pub fn ends_in_b() -> Dfa {
        Dfa::from_fn(ab(), 2, 0, |q| q == 1, |_, a| a).unwrap()
    }
}
