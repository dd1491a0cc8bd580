//! Observation tables with rational cells.
//!
//! Closedness asks every row of `S·A` to lie in the span of the rows of
//! `S`. Consistency is checked on the transposed table: rows `rev(E)` and
//! columns `rev(S)` for `rev(L)`. Its cells are cells of this table
//! (`rev(L)(rev(e)·a·rev(s)) = L(s·a·e)`), so the check issues no queries.
//! A transpose defect at `(e, a)` is fixed by adding `a·e` to `E`.

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use super::linalg::{rank, solve_coords, Rational, SpanBasis};
use super::wfa::Wfa;
use crate::error::{Error, Result};
use crate::oracle::{MembershipOracle, Phase, QueryCache};
use crate::table::{CellText, ObservationTable};
use crate::word::{Alphabet, Symbol, Word};

impl CellText for Rational {
    fn cell_text(&self) -> String {
        alloc::format!("{self}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WfaTable {
    table: ObservationTable<Rational>,
}

impl WfaTable {
    pub fn new(alphabet: &Alphabet) -> Self {
        WfaTable { table: ObservationTable::new(alphabet) }
    }

    pub fn with_words(
        alphabet: &Alphabet,
        prefixes: impl IntoIterator<Item = Word>,
        suffixes: impl IntoIterator<Item = Word>,
    ) -> Self {
        WfaTable { table: ObservationTable::with_words(alphabet, prefixes, suffixes) }
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.table.alphabet()
    }

    pub fn prefixes(&self) -> &[Word] {
        self.table.prefixes()
    }

    pub fn suffixes(&self) -> &[Word] {
        self.table.suffixes()
    }

    pub fn add_prefix(&mut self, w: Word) -> bool {
        self.table.add_prefix(w)
    }

    pub fn add_suffix(&mut self, e: Word) -> bool {
        self.table.add_suffix(e)
    }

    pub fn fill<O>(&mut self, mq: &mut QueryCache<O>) -> Result<usize>
    where
        O: MembershipOracle<Output = Rational>,
    {
        self.table.fill(mq)
    }

    pub fn row(&self, u: &Word) -> Option<&[Rational]> {
        self.table.row(u)
    }

    fn filled_row(&self, u: &Word) -> Result<Vec<Rational>> {
        self.table
            .row(u)
            .map(<[Rational]>::to_vec)
            .ok_or_else(|| Error::Precondition(alloc::format!("row {u:?} is not filled")))
    }

    /// The `|S| × |E|` matrix of `L(s·e)`.
    pub fn top(&self) -> Result<Vec<Vec<Rational>>> {
        self.prefixes().iter().map(|s| self.filled_row(s)).collect()
    }

    /// The `|S| × |E|` matrix of `L(s·a·e)`.
    pub fn bottom(&self, a: Symbol) -> Result<Vec<Vec<Rational>>> {
        self.prefixes().iter().map(|s| self.filled_row(&s.append(a))).collect()
    }

    pub fn rank(&self) -> Result<usize> {
        rank(&self.top()?)
    }

    /// First `(s, a)` whose row is outside the span of the rows of `S`.
    pub fn closed_defect(&self) -> Result<Option<(Word, Symbol)>> {
        let mut span = SpanBasis::new();
        for r in self.top()? {
            span.insert(&r);
        }
        for s in self.prefixes() {
            for a in self.alphabet().symbols() {
                if !span.contains(&self.filled_row(&s.append(a))?) {
                    return Ok(Some((s.clone(), a)));
                }
            }
        }
        Ok(None)
    }

    /// First `(e, a)` for which the transposed table is not closed: the
    /// column of `L(s·a·e)` over `S` is outside the span of the columns of
    /// the top matrix.
    pub fn transpose_defect(&self) -> Result<Option<(Word, Symbol)>> {
        let top = self.top()?;
        let cols = self.suffixes().len();
        let column = |m: &[Vec<Rational>], j: usize| -> Vec<Rational> { m.iter().map(|r| r[j].clone()).collect() };
        let mut span = SpanBasis::new();
        for j in 0..cols {
            span.insert(&column(&top, j));
        }
        let bottoms: Vec<_> = self.alphabet().symbols().map(|a| self.bottom(a)).collect::<Result<_>>()?;
        for (j, e) in self.suffixes().iter().enumerate() {
            for (a, bottom) in bottoms.iter().enumerate() {
                if !span.contains(&column(bottom, j)) {
                    return Ok(Some((e.clone(), a)));
                }
            }
        }
        Ok(None)
    }

    /// The suffix `a·e` that resolves the first transpose defect.
    pub fn consistency_defect(&self) -> Result<Option<Word>> {
        Ok(self.transpose_defect()?.map(|(e, a)| e.prepend(a)))
    }

    pub fn fix<O>(&mut self, mq: &mut QueryCache<O>) -> Result<()>
    where
        O: MembershipOracle<Output = Rational>,
    {
        self.fill(mq)?;
        let phase = mq.set_phase(Phase::Fix);
        let result = self.fix_defects(mq);
        mq.set_phase(phase);
        result
    }

    fn fix_defects<O>(&mut self, mq: &mut QueryCache<O>) -> Result<()>
    where
        O: MembershipOracle<Output = Rational>,
    {
        loop {
            if let Some((s, a)) = self.closed_defect()? {
                self.add_prefix(s.append(a));
            } else if let Some(e) = self.consistency_defect()? {
                self.add_suffix(e);
            } else {
                return Ok(());
            }
            self.fill(mq)?;
        }
    }

    /// Basis rows chosen greedily in `S` order give the states; the
    /// coordinates of `row(b·a)` in that basis give the rows of `M_a`.
    pub fn hypothesis(&self) -> Result<Wfa> {
        let render = |w: &Word| self.alphabet().render(w);
        if !self.prefixes().contains(&Word::empty()) || !self.suffixes().contains(&Word::empty()) {
            return Err(Error::Precondition("ε must be both a prefix and a suffix".into()));
        }
        if let Some((s, a)) = self.closed_defect()? {
            return Err(Error::Precondition(alloc::format!(
                "table is not closed: row of `{}` is outside the span of S",
                render(&s.append(a))
            )));
        }
        if let Some((e, a)) = self.transpose_defect()? {
            return Err(Error::Precondition(alloc::format!(
                "table is not consistent: column `{}` is outside the column span",
                render(&e.prepend(a))
            )));
        }
        let eps = self.suffixes().iter().position(|e| e.is_empty()).expect("checked above");
        let mut span = SpanBasis::new();
        let mut basis: Vec<(Word, Vec<Rational>)> = Vec::new();
        for s in self.prefixes() {
            let r = self.filled_row(s)?;
            if span.insert(&r) {
                basis.push((s.clone(), r));
            }
        }
        if basis.is_empty() {
            return Ok(Wfa::zero(self.alphabet().clone()));
        }
        let rows: Vec<Vec<Rational>> = basis.iter().map(|(_, r)| r.clone()).collect();
        let coords = |target: &[Rational]| -> Result<Vec<Rational>> {
            solve_coords(&rows, target)?
                .ok_or_else(|| Error::Invariant("closed table has a row outside the span".into()))
        };
        let init = coords(&self.filled_row(&Word::empty())?)?;
        let trans = self
            .alphabet()
            .symbols()
            .map(|a| basis.iter().map(|(b, _)| coords(&self.filled_row(&b.append(a))?)).collect())
            .collect::<Result<Vec<Vec<Vec<Rational>>>>>()?;
        let out = basis.iter().map(|(_, r)| r[eps].clone()).collect();
        Wfa::new(self.alphabet().clone(), init, trans, out)
    }

    pub fn dump(&self) -> String {
        self.table.dump()
    }

    /// Whether every cell is zero.
    pub fn is_zero(&self) -> Result<bool> {
        Ok(self.top()?.iter().flatten().all(Zero::is_zero))
    }
}
