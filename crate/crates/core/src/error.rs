use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Failure while talking to a membership oracle.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    /// The session could not be established (banner, alphabet, process start).
    #[error("oracle setup failed: {0}")]
    Setup(String),
    /// A query failed on the wire: malformed reply, timeout or disconnect.
    #[error("oracle transport failed: {0}")]
    Transport(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    Alphabet(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("alphabet mismatch")]
    AlphabetMismatch,
    #[error("invalid input: {0}")]
    Input(String),
    /// An operation was called on a structure that does not satisfy its
    /// precondition (e.g. a hypothesis requested from an unclosed table).
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// A learner's progress or size invariant did not hold. Usually means an
    /// oracle lied or a caller-provided bound was wrong.
    #[error("invariant violated: {0}")]
    Invariant(String),
    /// The user-provided word set for ID / dual ID was insufficient.
    #[error("{0}")]
    Insufficient(String),
    #[error("equivalence round cap of {0} exceeded; suspected faulty equivalence oracle")]
    RoundCap(usize),
    #[error("bound {bound} is smaller than the {size} states of the minimized automaton")]
    BoundTooSmall { bound: usize, size: usize },
    /// The hypothesis handed to a testing equivalence oracle is already larger
    /// than the promised bound on the black box.
    #[error("hypothesis has {size} states, exceeding the promised bound {bound}")]
    BoundViolated { bound: usize, size: usize },
    /// An oracle failed in the middle of running a test suite.
    #[error("test suite aborted after {completed} words: {source}")]
    SuiteAborted { completed: usize, source: OracleError },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}
