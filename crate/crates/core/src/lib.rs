//! Integer additive set-indexers (IASIs) of finite simple graphs.
//!
//! An IASI labels every vertex with a distinct non-empty set of
//! non-negative integers such that the induced edge labels
//! `f(u) + f(v) = {a + b : a in f(u), b in f(v)}` are distinct as well.
//!
//! - [`setcore`]: bit-vector sets, sumsets, compatibility classes.
//! - [`graph`]: simple graphs, edge-list parsing, DOT output.
//! - [`labeling`]: labelings, verification reports, canonical constructions.
//! - [`transforms`]: line/total graphs, contraction, topological reduction.
//! - [`search`]: exhaustive labeling search and ground-set bounds.
//! - [`harness`]: small-graph corpus and the executable theorem suite.

pub mod graph;
pub mod harness;
pub mod labeling;
pub mod search;
pub mod setcore;
pub mod transforms;

pub use graph::{emit_dot, EdgeId, Graph, GraphError};
pub use harness::{
    generate_corpus, run_suite, HarnessError, HarnessOptions, SuiteReport, TheoremId,
};
pub use labeling::{
    canonical_iasi, induced_edge_labels, is_k_uniform, is_l_uniformly_set_indexed,
    mono_indexed_elements, restrict, verify, Class, LabelingError, SetLabeling, VerificationReport,
};
pub use search::{
    find_labeling, ground_set_lower_bound, minimal_ground_set, uniform_ground_set_lower_bound,
    Mode, SearchOutcome, SearchSpec, Status,
};
pub use setcore::{IntSet, SetError, DEFAULT_UNIVERSE_BOUND};
pub use transforms::{TransformError, TransformResult};
