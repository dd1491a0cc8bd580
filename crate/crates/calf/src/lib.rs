//! File formats, wire oracles and the command line for `calf-core`.

pub mod cli;
pub mod format;
pub mod report;
pub mod wire;

pub use format::{
    parse_dfa, parse_machine, parse_wfa, parse_words, serialize_dfa, serialize_wfa, serialize_words, FormatError,
    Machine,
};
pub use wire::{serve, Endpoint, Mode, Session};
