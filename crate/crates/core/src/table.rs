//! Observation tables.
//!
//! A table fixes a prefix set `S` and a suffix set `E` and records
//! `L(u·e)` for every `u ∈ S ∪ S·A` and `e ∈ E`. The row of `u` is the
//! vector of those values in `E` order. Cells are stored in the table
//! itself; refilling only asks for cells that are missing, and every query
//! goes through the shared [`QueryCache`].

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::oracle::{MembershipOracle, Phase, QueryCache};
use crate::word::{Alphabet, Symbol, Word};

/// Text form of a table cell, used by [`ObservationTable::dump`].
pub trait CellText {
    fn cell_text(&self) -> String;
}

impl CellText for bool {
    fn cell_text(&self) -> String {
        String::from(if *self { "1" } else { "0" })
    }
}

/// A DFA read off an approximation structure, with the prefix that
/// represents each of its states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypothesis {
    pub dfa: Dfa,
    pub representatives: Vec<Word>,
    /// Row of each state, for hypotheses built from tables.
    pub rows: Option<Vec<Vec<bool>>>,
}

/// Two prefixes with equal rows whose one-step extensions disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inconsistency {
    pub first: Word,
    pub second: Word,
    pub symbol: Symbol,
    pub suffix: Word,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FixReport {
    pub closedness_fixes: usize,
    pub consistency_fixes: usize,
}

#[derive(Clone, PartialEq, Eq)]
pub struct ObservationTable<T> {
    alphabet: Alphabet,
    prefixes: Vec<Word>,
    suffixes: Vec<Word>,
    rows: BTreeMap<Word, Vec<T>>,
}

impl<T: Clone + Ord> ObservationTable<T> {
    /// `S = E = {ε}`.
    pub fn new(alphabet: &Alphabet) -> Self {
        Self::with_words(alphabet, [], [])
    }

    /// Table over the given words. `ε` is put first in `S` and `E` when
    /// missing; duplicates are dropped.
    pub fn with_words(
        alphabet: &Alphabet,
        prefixes: impl IntoIterator<Item = Word>,
        suffixes: impl IntoIterator<Item = Word>,
    ) -> Self {
        let mut t = ObservationTable {
            alphabet: alphabet.clone(),
            prefixes: Vec::new(),
            suffixes: Vec::new(),
            rows: BTreeMap::new(),
        };
        let prefixes: Vec<Word> = prefixes.into_iter().collect();
        let suffixes: Vec<Word> = suffixes.into_iter().collect();
        if !prefixes.contains(&Word::empty()) {
            t.add_prefix(Word::empty());
        }
        if !suffixes.contains(&Word::empty()) {
            t.add_suffix(Word::empty());
        }
        for p in prefixes {
            t.add_prefix(p);
        }
        for e in suffixes {
            t.add_suffix(e);
        }
        t
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn prefixes(&self) -> &[Word] {
        &self.prefixes
    }

    pub fn suffixes(&self) -> &[Word] {
        &self.suffixes
    }

    /// Adds `w` to `S`. Returns false if it was already there.
    pub fn add_prefix(&mut self, w: Word) -> bool {
        if self.prefixes.contains(&w) {
            return false;
        }
        self.prefixes.push(w);
        true
    }

    /// Adds `e` to `E`. Returns false if it was already there.
    pub fn add_suffix(&mut self, e: Word) -> bool {
        if self.suffixes.contains(&e) {
            return false;
        }
        self.suffixes.push(e);
        true
    }

    /// `S·A` in `S` order, then alphabet order.
    pub fn extensions(&self) -> impl Iterator<Item = Word> + '_ {
        self.prefixes.iter().flat_map(move |s| self.alphabet.symbols().map(move |a| s.append(a)))
    }

    /// `S ∪ S·A`: the prefixes, then the extensions not already in `S`.
    pub fn row_words(&self) -> Vec<Word> {
        let mut seen: BTreeSet<Word> = self.prefixes.iter().cloned().collect();
        let mut out = self.prefixes.clone();
        for t in self.extensions() {
            if seen.insert(t.clone()) {
                out.push(t);
            }
        }
        out
    }

    /// Queries every missing cell; returns how many cells were filled.
    pub fn fill<O>(&mut self, mq: &mut QueryCache<O>) -> Result<usize>
    where
        O: MembershipOracle<Output = T>,
    {
        let mut filled = 0;
        for u in self.row_words() {
            let row = self.rows.entry(u.clone()).or_default();
            while row.len() < self.suffixes.len() {
                let e = &self.suffixes[row.len()];
                row.push(mq.query(&u.concat(e))?);
                filled += 1;
            }
        }
        Ok(filled)
    }

    pub fn is_filled(&self) -> bool {
        self.row_words().iter().all(|u| self.rows.get(u).is_some_and(|r| r.len() == self.suffixes.len()))
    }

    /// The row of `u` over `E`, if it has been filled.
    pub fn row(&self, u: &Word) -> Option<&[T]> {
        self.rows.get(u).filter(|r| r.len() == self.suffixes.len()).map(Vec::as_slice)
    }

    fn filled_row(&self, u: &Word) -> Result<&[T]> {
        self.row(u).ok_or_else(|| Error::Precondition(alloc::format!("row {u:?} is not filled")))
    }

    /// Number of distinct rows among the prefixes.
    pub fn distinct_rows(&self) -> usize {
        self.prefixes.iter().filter_map(|s| self.row(s)).collect::<BTreeSet<_>>().len()
    }

    /// First `s·a` (in `S` order, then alphabet order) whose row is not the
    /// row of any prefix.
    pub fn closedness_defect(&self) -> Result<Option<Word>> {
        let rows: BTreeSet<&[T]> = self.prefixes.iter().map(|s| self.filled_row(s)).collect::<Result<_>>()?;
        for t in self.extensions() {
            if !rows.contains(self.filled_row(&t)?) {
                return Ok(Some(t));
            }
        }
        Ok(None)
    }

    /// First pair of prefixes with equal rows that disagree on acceptance
    /// or after one more symbol. Pairs are scanned in `S` order, then
    /// symbols in alphabet order, then suffixes in `E` order.
    pub fn inconsistency(&self) -> Result<Option<Inconsistency>> {
        let eps = self.suffixes.iter().position(|e| e.is_empty());
        for (i, s1) in self.prefixes.iter().enumerate() {
            let r1 = self.filled_row(s1)?;
            for s2 in &self.prefixes[i + 1..] {
                if self.filled_row(s2)? != r1 {
                    continue;
                }
                if eps.is_none() {
                    return Err(Error::Precondition("ε is not a suffix".into()));
                }
                for a in self.alphabet.symbols() {
                    let x1 = self.filled_row(&s1.append(a))?;
                    let x2 = self.filled_row(&s2.append(a))?;
                    if let Some(j) = (0..x1.len()).find(|&j| x1[j] != x2[j]) {
                        return Ok(Some(Inconsistency {
                            first: s1.clone(),
                            second: s2.clone(),
                            symbol: a,
                            suffix: self.suffixes[j].clone(),
                        }));
                    }
                }
            }
        }
        Ok(None)
    }

    /// The suffix `a·e` that resolves the first inconsistency.
    pub fn consistency_defect(&self) -> Result<Option<Word>> {
        Ok(self.inconsistency()?.map(|i| i.suffix.prepend(i.symbol)))
    }

    /// Fills, then repeatedly adds closedness defects to `S` and
    /// consistency witnesses to `E` until the table is closed and
    /// consistent.
    pub fn fix<O>(&mut self, mq: &mut QueryCache<O>) -> Result<FixReport>
    where
        O: MembershipOracle<Output = T>,
    {
        let mut report = FixReport::default();
        self.fill(mq)?;
        let phase = mq.set_phase(Phase::Fix);
        let result = loop {
            if let Some(t) = self.closedness_defect()? {
                self.add_prefix(t);
                report.closedness_fixes += 1;
            } else if let Some(e) = self.consistency_defect()? {
                self.add_suffix(e);
                report.consistency_fixes += 1;
            } else {
                break Ok(report);
            }
            if let Err(e) = self.fill(mq) {
                break Err(e);
            }
        };
        mq.set_phase(phase);
        result
    }

    /// TSV dump: a header of suffixes, then one line per row of `S ∪ S·A`.
    pub fn dump(&self) -> String
    where
        T: CellText,
    {
        let mut out = String::new();
        for e in &self.suffixes {
            out.push('\t');
            out.push_str(&self.alphabet.render(e));
        }
        out.push('\n');
        for u in self.row_words() {
            out.push_str(&self.alphabet.render(&u));
            if let Some(r) = self.rows.get(&u) {
                for c in r {
                    out.push('\t');
                    out.push_str(&c.cell_text());
                }
            }
            out.push('\n');
        }
        out
    }
}

impl ObservationTable<bool> {
    /// Reads the hypothesis DFA off a closed and consistent table: one state
    /// per distinct row of `S`, numbered by first occurrence in `S`.
    pub fn hypothesis(&self) -> Result<Hypothesis> {
        if let Some(t) = self.closedness_defect()? {
            return Err(Error::Precondition(alloc::format!(
                "table is not closed: row of `{}` is missing from S",
                self.alphabet.render(&t)
            )));
        }
        if let Some(i) = self.inconsistency()? {
            return Err(Error::Precondition(alloc::format!(
                "table is not consistent: `{}` and `{}` differ on `{}`",
                self.alphabet.render(&i.first),
                self.alphabet.render(&i.second),
                self.alphabet.render(&i.suffix.prepend(i.symbol))
            )));
        }
        let eps = self
            .suffixes
            .iter()
            .position(|e| e.is_empty())
            .ok_or_else(|| Error::Precondition("ε is not a suffix".into()))?;
        if !self.prefixes.contains(&Word::empty()) {
            return Err(Error::Precondition("ε is not a prefix".into()));
        }

        let mut index: BTreeMap<&[bool], usize> = BTreeMap::new();
        let mut representatives = Vec::new();
        let mut rows = Vec::new();
        for s in &self.prefixes {
            let r = self.filled_row(s)?;
            if !index.contains_key(r) {
                index.insert(r, representatives.len());
                representatives.push(s.clone());
                rows.push(r.to_vec());
            }
        }
        let k = self.alphabet.len();
        let mut delta = Vec::with_capacity(rows.len() * k);
        for s in &representatives {
            for a in self.alphabet.symbols() {
                delta.push(index[self.filled_row(&s.append(a))?]);
            }
        }
        let initial = index[self.filled_row(&Word::empty())?];
        let accepting = rows.iter().map(|r| r[eps]).collect();
        let dfa = Dfa::new(self.alphabet.clone(), initial, accepting, delta)?;
        Ok(Hypothesis { dfa, representatives, rows: Some(rows) })
    }
}

impl<T: core::fmt::Debug> core::fmt::Debug for ObservationTable<T> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("ObservationTable")
            .field("S", &self.prefixes)
            .field("E", &self.suffixes)
            .field("rows", &self.rows)
            .finish()
    }
}
