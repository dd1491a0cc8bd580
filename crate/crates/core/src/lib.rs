//! Active automata learning, minimization and conformance testing.
//!
//! The crate treats learning, minimization and testing as three uses of the
//! same approximation machinery: a set of access words `S` mapped into the
//! target and a set of observations `E` mapped out of it.
//!
//! * [`table`] and [`tree`] hold the two approximation structures
//!   (observation tables and classification trees).
//! * [`learn`] assembles them into L*, Kearns–Vazirani, ID, dual ID and
//!   Arbib–Zeiger learners.
//! * [`minimize`] runs reachability analysis and state merging on a known
//!   DFA, and produces the access/separator sets used by [`conformance`].
//! * [`weighted`] repeats the story for weighted automata over the rationals.
//!
//! Everything here is `no_std` + `alloc`; IO, file formats and wire oracles
//! live in the `calf` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod conformance;
pub mod dfa;
pub mod error;
pub mod learn;
pub mod minimize;
pub mod oracle;
pub mod table;
pub mod tree;
pub mod weighted;
pub mod word;

pub use dfa::Dfa;
pub use error::{Error, OracleError, Result};
pub use oracle::{EquivalenceOracle, MembershipOracle, Phase, QueryCache, QueryLog};
pub use word::{Alphabet, Symbol, Word};
