//! Corpus generation and the executable theorem suite.
//!
//! The suite evaluates thirteen claims (`T1` .. `T13`) over every graph and
//! labeling in a small corpus. Claims that follow from the definitions are
//! run as invariants; the rest are recorded as findings, with the smallest
//! failing instance kept as a replayable counterexample.

mod corpus;
mod theorems;

use thiserror::Error;

use crate::labeling::LabelingError;
use crate::search::SearchError;
use crate::setcore::DEFAULT_UNIVERSE_BOUND;
use crate::transforms::TransformError;

pub use corpus::{
    connected_graphs, generate_corpus, named_families, Corpus, CorpusEntry, CorpusGraph,
    CorpusLabeling, MAX_ENUMERATED_ORDER,
};
pub use theorems::{
    evaluate, instances, replay, run_suite, Counterexample, EvalConfig, Instance, Kind,
    Observation, SuiteReport, Target, TheoremId, TheoremReport, Verdict,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error(
        "n_max = {0} is too large; the enumerator handles at most {MAX_ENUMERATED_ORDER} vertices"
    )]
    OrderTooLarge(usize),
    #[error("unknown theorem {0:?}")]
    UnknownTheorem(String),
    #[error("instance does not fit theorem {theorem}: {reason}")]
    BadInstance { theorem: TheoremId, reason: String },
    #[error(transparent)]
    Labeling(#[from] LabelingError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarnessOptions {
    /// Largest order of the exhaustive part of the corpus.
    pub n_max: usize,
    pub seed: u64,
    /// Named families are added for orders `n_max + 1 ..= family_max`.
    pub family_max: usize,
    pub universe_bound: u32,
    /// Node budget for every search the harness runs. A budget instead of a
    /// wall-clock limit keeps results identical across machines.
    pub node_budget: u64,
    /// Random labelings kept per graph and mode.
    pub samples_per_graph: usize,
    /// Draws per graph and mode before giving up on a sample.
    pub sample_attempts: usize,
    /// Restrict the suite to these theorems; empty means all.
    pub theorems: Vec<TheoremId>,
}

impl HarnessOptions {
    pub fn new(n_max: usize, seed: u64) -> Self {
        HarnessOptions {
            n_max,
            seed,
            family_max: n_max + 2,
            universe_bound: DEFAULT_UNIVERSE_BOUND,
            node_budget: 50_000,
            samples_per_graph: 2,
            sample_attempts: 40,
            theorems: Vec::new(),
        }
    }

    pub fn eval_config(&self) -> EvalConfig {
        EvalConfig {
            universe_bound: self.universe_bound,
            node_budget: self.node_budget,
        }
    }
}

impl Default for HarnessOptions {
    fn default() -> Self {
        HarnessOptions::new(5, 0)
    }
}
