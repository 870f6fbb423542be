//! Equivalence checking.
//!
//! [`game`] decides fully-concurrent and causal-net bisimilarity through the
//! OIM and OIMC games over ordered indexed markings. [`interleaving`] is the
//! classical baseline on the collective reachability graph and [`oracle`]
//! plays the process-based game literally, up to a depth.

use std::time::Duration;

pub mod beta;
pub mod game;
pub mod interleaving;
pub mod matching;
pub mod oracle;
pub mod witness;

pub use beta::TokenRelation;
pub use game::{decide, decide_oim, decide_oimc, GameConfig};
pub use interleaving::decide_interleaving;
pub use oracle::oracle_game;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Equivalent,
    NotEquivalent,
    Unknown,
}

impl Outcome {
    pub fn is_conclusive(self) -> bool {
        self != Outcome::Unknown
    }
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Outcome::Equivalent => "equivalent",
            Outcome::NotEquivalent => "not-equivalent",
            Outcome::Unknown => "unknown",
        })
    }
}

/// Which equivalence a game or oracle decides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// Fully-concurrent bisimilarity.
    Fc,
    /// Causal-net bisimilarity.
    Cn,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    /// Game triples, oracle states or LTS states, depending on the procedure.
    pub explored: usize,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct Verdict<E = ()> {
    pub outcome: Outcome,
    pub evidence: Option<E>,
    pub stats: Stats,
}
