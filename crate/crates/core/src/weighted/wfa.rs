use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::linalg::{dot, rat, Rational, SpanBasis};
use crate::error::{Error, Result};
use crate::oracle::{EquivalenceOracle, MembershipOracle, QueryCache};
use crate::word::{Alphabet, Symbol, Word};
use crate::OracleError;

/// Linear weighted automaton: `L(a1…ak) = init · M_a1 ⋯ M_ak · out`.
#[derive(Clone, PartialEq, Eq)]
pub struct Wfa {
    alphabet: Alphabet,
    init: Vec<Rational>,
    trans: Vec<Vec<Vec<Rational>>>,
    out: Vec<Rational>,
}

impl Wfa {
    /// `trans[a]` is the `dim × dim` matrix of symbol `a`, as rows.
    pub fn new(
        alphabet: Alphabet,
        init: Vec<Rational>,
        trans: Vec<Vec<Vec<Rational>>>,
        out: Vec<Rational>,
    ) -> Result<Self> {
        let dim = init.len();
        if out.len() != dim {
            return Err(Error::Input(alloc::format!("output vector has length {}, expected {dim}", out.len())));
        }
        if trans.len() != alphabet.len() {
            return Err(Error::Input(alloc::format!(
                "{} transition matrices for {} symbols",
                trans.len(),
                alphabet.len()
            )));
        }
        for (a, m) in trans.iter().enumerate() {
            if m.len() != dim || m.iter().any(|r| r.len() != dim) {
                return Err(Error::Input(alloc::format!("matrix of `{}` is not {dim}×{dim}", alphabet.token(a))));
            }
        }
        Ok(Wfa { alphabet, init, trans, out })
    }

    /// The dimension-0 automaton, which assigns 0 to every word.
    pub fn zero(alphabet: Alphabet) -> Self {
        let k = alphabet.len();
        Wfa { alphabet, init: Vec::new(), trans: vec![Vec::new(); k], out: Vec::new() }
    }

    /// Entries drawn uniformly from `entries`: the initial vector, then each
    /// matrix row by row, then the output vector.
    pub fn random(seed: u64, dim: usize, alphabet: &Alphabet, entries: &[i64]) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Input("no entries to draw from".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw =
            |n: usize| -> Vec<Rational> { (0..n).map(|_| rat(entries[rng.random_range(0..entries.len())])).collect() };
        let init = draw(dim);
        let trans = alphabet.symbols().map(|_| (0..dim).map(|_| draw(dim)).collect()).collect();
        let out = draw(dim);
        Wfa::new(alphabet.clone(), init, trans, out)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn dim(&self) -> usize {
        self.init.len()
    }

    pub fn init(&self) -> &[Rational] {
        &self.init
    }

    pub fn out(&self) -> &[Rational] {
        &self.out
    }

    pub fn matrix(&self, a: Symbol) -> &[Vec<Rational>] {
        &self.trans[a]
    }

    /// `x · M_a`
    pub fn step_forward(&self, x: &[Rational], a: Symbol) -> Vec<Rational> {
        let m = &self.trans[a];
        (0..self.dim()).map(|j| x.iter().zip(m).map(|(xi, row)| xi * &row[j]).sum()).collect()
    }

    /// `M_a · y`
    pub fn step_backward(&self, a: Symbol, y: &[Rational]) -> Vec<Rational> {
        self.trans[a].iter().map(|row| dot(row, y)).collect()
    }

    /// `init · M_w`
    pub fn forward(&self, w: &[Symbol]) -> Vec<Rational> {
        w.iter().fold(self.init.clone(), |x, &a| self.step_forward(&x, a))
    }

    pub fn eval(&self, w: &[Symbol]) -> Result<Rational> {
        self.alphabet.check_word(w)?;
        Ok(dot(&self.forward(w), &self.out))
    }

    /// Same automaton with the output vector multiplied by `c`.
    pub fn scale(&self, c: &Rational) -> Wfa {
        Wfa { out: self.out.iter().map(|x| x * c).collect(), ..self.clone() }
    }

    /// Block-diagonal sum whose language is `L(self) + L(other)`.
    pub fn direct_sum(&self, other: &Wfa) -> Result<Wfa> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let (n, m) = (self.dim(), other.dim());
        let mut init = self.init.clone();
        init.extend(other.init.iter().cloned());
        let mut out = self.out.clone();
        out.extend(other.out.iter().cloned());
        let trans = self
            .alphabet
            .symbols()
            .map(|a| {
                let mut rows = Vec::with_capacity(n + m);
                for r in &self.trans[a] {
                    let mut row = r.clone();
                    row.resize(n + m, Rational::zero());
                    rows.push(row);
                }
                for r in &other.trans[a] {
                    let mut row = vec![Rational::zero(); n];
                    row.extend(r.iter().cloned());
                    rows.push(row);
                }
                rows
            })
            .collect();
        Wfa::new(self.alphabet.clone(), init, trans, out)
    }
}

impl core::fmt::Debug for Wfa {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let show = |v: &[Rational]| v.iter().map(|x| alloc::format!("{x}")).collect::<Vec<_>>().join(" ");
        writeln!(f, "Wfa {:?} dim={}", self.alphabet, self.dim())?;
        writeln!(f, "  init: {}", show(&self.init))?;
        writeln!(f, "  out: {}", show(&self.out))?;
        for a in self.alphabet.symbols() {
            let rows: Vec<_> = self.trans[a].iter().map(|r| show(r)).collect();
            writeln!(f, "  {}: {}", self.alphabet.token(a), rows.join(" / "))?;
        }
        Ok(())
    }
}

/// A word on which two automata differ, with both values.
pub type WfaDifference = (Word, Rational, Rational);

/// `None` when `u` and `v` assign the same value to every word.
///
/// Breadth-first search over the difference automaton `u ⊕ −v`; a word is
/// not expanded when its forward vector lies in the span of the vectors
/// seen before it.
pub fn wfa_equiv(u: &Wfa, v: &Wfa) -> Result<Option<WfaDifference>> {
    if u.alphabet != v.alphabet {
        return Err(Error::AlphabetMismatch);
    }
    let n = u.dim();
    let diff = u.direct_sum(&v.scale(&rat(-1)))?;
    let mut basis = SpanBasis::new();
    let mut queue = VecDeque::from([(Word::empty(), diff.init.clone())]);
    while let Some((w, x)) = queue.pop_front() {
        if !basis.insert(&x) {
            continue;
        }
        if !dot(&x, &diff.out).is_zero() {
            let left = dot(&x[..n], &u.out);
            let right = dot(&x[n..], &v.out);
            return Ok(Some((w, left, right)));
        }
        for a in u.alphabet.symbols() {
            queue.push_back((w.append(a), diff.step_forward(&x, a)));
        }
    }
    Ok(None)
}

/// White-box membership oracle over a WFA.
#[derive(Debug, Clone)]
pub struct WfaOracle<'a>(pub &'a Wfa);

impl MembershipOracle for WfaOracle<'_> {
    type Output = Rational;

    fn query(&mut self, word: &Word) -> Result<Rational, OracleError> {
        self.0.eval(word).map_err(|e| OracleError::Transport(alloc::format!("{e}")))
    }
}

/// Exact equivalence against a known WFA.
#[derive(Debug, Clone)]
pub struct WfaEquivalence {
    pub target: Wfa,
}

impl<O: MembershipOracle> EquivalenceOracle<O, Wfa> for WfaEquivalence {
    fn find_counterexample(&mut self, hypothesis: &Wfa, _mq: &mut QueryCache<O>) -> Result<Option<Word>> {
        Ok(wfa_equiv(&self.target, hypothesis)?.map(|(w, _, _)| w))
    }
}

/// Small fixed automata used across the test suites.
#[doc(hidden)]
pub mod fixtures {
    use super::*;
    use crate::dfa::fixtures::ab;

    /// Counts `a`s: init (1,0), M_a = [[1,1],[0,1]], M_b = I, out (0,1)ᵀ.
    pub fn count_a() -> Wfa {
        let m = |rows: [[i64; 2]; 2]| rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
        Wfa::new(ab(), vec![rat(1), rat(0)], vec![m([[1, 1], [0, 1]]), m([[1, 0], [0, 1]])], vec![rat(0), rat(1)])
            .unwrap()
    }
}
