//! Run reports: query statistics as JSON, plus a human-readable summary.

use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use calf_core::{Alphabet, QueryLog};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Phases {
    pub fill: u64,
    pub fix: u64,
    pub test: u64,
}

/// The query log of a run, flat apart from the per-phase map.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stats {
    pub membership: u64,
    pub cache_hits: u64,
    pub equivalence_rounds: u64,
    pub phases: Phases,
    pub transcript: Option<Vec<String>>,
}

impl Stats {
    pub fn from_log(log: &QueryLog, alphabet: &Alphabet) -> Self {
        Stats {
            membership: log.membership,
            cache_hits: log.cache_hits,
            equivalence_rounds: log.equivalence_rounds,
            phases: Phases { fill: log.phases.fill, fix: log.phases.fix, test: log.phases.test },
            transcript: log.transcript.as_ref().map(|t| t.iter().map(|w| alphabet.render(w)).collect()),
        }
    }

    pub fn wire_queries(&self) -> u64 {
        self.membership - self.cache_hits
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("stats serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    /// Files written by the run.
    pub outputs: Vec<String>,
    pub rounds: usize,
    pub wall: Duration,
    pub stats: Stats,
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.stats;
        for o in &self.outputs {
            writeln!(f, "wrote {o}")?;
        }
        writeln!(f, "equivalence rounds: {}", s.equivalence_rounds)?;
        writeln!(f, "membership queries: {} ({} cache hits, {} sent)", s.membership, s.cache_hits, s.wire_queries())?;
        writeln!(f, "  fill {}, fix {}, test {}", s.phases.fill, s.phases.fix, s.phases.test)?;
        write!(f, "wall time: {} ms", self.wall.as_millis())
    }
}
