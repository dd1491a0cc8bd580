//! Alphabets of text tokens and words over them.
//!
//! Symbols are dense indices into an [`Alphabet`]; the token text only matters
//! at the boundaries (files, wire protocol, diagnostics). Words order by
//! length first and then lexicographically by symbol index, which is the
//! order used for every deterministic choice in the crate.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::Deref;

use crate::error::{Error, Result};

/// Index of a token in its alphabet.
pub type Symbol = usize;

/// Token that spells the empty word.
pub const EMPTY_WORD_TOKEN: &str = "eps";

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    tokens: Vec<String>,
}

impl Alphabet {
    pub fn new<I, T>(tokens: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<String>,
    {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        if tokens.is_empty() {
            return Err(Error::Alphabet("alphabet is empty".into()));
        }
        for (i, t) in tokens.iter().enumerate() {
            if t.is_empty() || t.chars().any(char::is_whitespace) {
                return Err(Error::Alphabet(alloc::format!("invalid token `{t}`")));
            }
            if t == EMPTY_WORD_TOKEN {
                return Err(Error::Alphabet(alloc::format!("`{EMPTY_WORD_TOKEN}` is reserved for the empty word")));
            }
            if tokens[..i].contains(t) {
                return Err(Error::Alphabet(alloc::format!("duplicate token `{t}`")));
            }
        }
        Ok(Alphabet { tokens })
    }

    /// Single-character tokens, one per char of `chars`.
    pub fn from_chars(chars: &str) -> Result<Self> {
        Self::new(chars.chars().map(|c| c.to_string()))
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn symbols(&self) -> core::ops::Range<Symbol> {
        0..self.tokens.len()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn token(&self, a: Symbol) -> &str {
        &self.tokens[a]
    }

    pub fn symbol(&self, token: &str) -> Option<Symbol> {
        self.tokens.iter().position(|t| t == token)
    }

    /// Same token set, regardless of order.
    pub fn same_tokens(&self, other: &Alphabet) -> bool {
        self.len() == other.len() && self.tokens.iter().all(|t| other.tokens.contains(t))
    }

    pub fn contains_word(&self, w: &[Symbol]) -> bool {
        w.iter().all(|&a| a < self.len())
    }

    pub fn check_word(&self, w: &[Symbol]) -> Result<()> {
        match w.iter().find(|&&a| a >= self.len()) {
            Some(a) => Err(Error::UnknownSymbol(alloc::format!("#{a}"))),
            None => Ok(()),
        }
    }

    /// Parses the word serialization: tokens separated by whitespace, or the
    /// literal `eps` for the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text == EMPTY_WORD_TOKEN {
            return Ok(Word::empty());
        }
        text.split_whitespace()
            .map(|t| self.symbol(t).ok_or_else(|| Error::UnknownSymbol(t.into())))
            .collect::<Result<Vec<_>>>()
            .map(Word::from)
    }

    pub fn render(&self, w: &[Symbol]) -> String {
        if w.is_empty() {
            return EMPTY_WORD_TOKEN.into();
        }
        let mut out = String::new();
        for (i, &a) in w.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(self.tokens.get(a).map_or("?", String::as_str));
        }
        out
    }

    /// All words of length at most `n`, in length-lexicographic order.
    pub fn words_up_to(&self, n: usize) -> Vec<Word> {
        let mut all = alloc::vec![Word::empty()];
        let mut layer_start = 0;
        for _ in 0..n {
            let layer_end = all.len();
            for i in layer_start..layer_end {
                for a in self.symbols() {
                    let next = all[i].append(a);
                    all.push(next);
                }
            }
            layer_start = layer_end;
        }
        all
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.tokens).finish()
    }
}

/// A finite sequence of symbols.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub const fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.0
    }

    /// `self · a`
    pub fn append(&self, a: Symbol) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.extend_from_slice(&self.0);
        v.push(a);
        Word(v)
    }

    /// `a · self`
    pub fn prepend(&self, a: Symbol) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(a);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    pub fn concat(&self, other: &[Symbol]) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(other);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// All prefixes from `ε` up to the word itself, shortest first.
    pub fn prefixes(&self) -> impl Iterator<Item = Word> + '_ {
        (0..=self.0.len()).map(|i| Word(self.0[..i].to_vec()))
    }
}

impl Deref for Word {
    type Target = [Symbol];

    fn deref(&self) -> &[Symbol] {
        &self.0
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl From<&[Symbol]> for Word {
    fn from(v: &[Symbol]) -> Self {
        Word(v.to_vec())
    }
}

impl<const N: usize> From<[Symbol; N]> for Word {
    fn from(v: [Symbol; N]) -> Self {
        Word(v.to_vec())
    }
}

impl FromIterator<Symbol> for Word {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// `U · V` for word lists, deduplicated, in the order of first appearance.
pub fn concat_sets(left: &[Word], right: &[Word]) -> Vec<Word> {
    let mut seen = alloc::collections::BTreeSet::new();
    let mut out = Vec::new();
    for u in left {
        for v in right {
            let w = u.concat(v);
            if seen.insert(w.clone()) {
                out.push(w);
            }
        }
    }
    out
}
