//! Linear weighted automata over exact rationals: evaluation, equivalence,
//! observation tables, learning, minimization and testing.

pub mod learn;
pub mod linalg;
pub mod minimize;
pub mod table;
pub mod testing;
pub mod wfa;

pub use learn::{run_wfa_id, run_wfa_lstar, WfaLearnResult};
pub use linalg::{in_span, parse_rational, rank, rat, ratio, solve_coords, Rational, SpanBasis};
pub use minimize::{wfa_minimize, wfa_minimize_with_words};
pub use table::WfaTable;
pub use testing::{run_wfa_suite, wfa_w_method, WfaTestingEquivalence};
pub use wfa::{wfa_equiv, Wfa, WfaDifference, WfaEquivalence, WfaOracle};
