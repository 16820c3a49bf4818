use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{EdgeId, Graph};
use crate::labeling::{
    canonical_iasi, is_k_uniform, restrict, sidon_iasi, verify, SetLabeling, VerificationReport,
};
use crate::search::{
    find_labeling, ground_set_lower_bound, uniform_ground_set_lower_bound, Mode, SearchSpec, Status,
};
use crate::transforms::{
    contract_edge, line_graph_labeled, topological_reduction, total_graph_labeled, Origin,
    TransformResult,
};

use super::corpus::{generate_corpus, Corpus};
use super::{HarnessError, HarnessOptions};

/// Ground-set theorems are only run exhaustively up to this order.
const GROUND_MAX_ORDER: usize = 5;
const UNIFORM_SIZES: [usize; 3] = [1, 2, 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    T8,
    T9,
    T10,
    T11,
    T12,
    T13,
}

impl TheoremId {
    pub const ALL: [TheoremId; 13] = [
        TheoremId::T1,
        TheoremId::T2,
        TheoremId::T3,
        TheoremId::T4,
        TheoremId::T5,
        TheoremId::T6,
        TheoremId::T7,
        TheoremId::T8,
        TheoremId::T9,
        TheoremId::T10,
        TheoremId::T11,
        TheoremId::T12,
        TheoremId::T13,
    ];

    pub fn title(self) -> &'static str {
        match self {
            TheoremId::T1 => "every graph admits an IASI",
            TheoremId::T2 => "restriction to a subgraph stays an IASI",
            TheoremId::T3 => "edge contraction keeps an IASI",
            TheoremId::T4 => "topological reduction keeps an IASI",
            TheoremId::T5 => "induced labeling of the line graph is an IASI",
            TheoremId::T6 => "induced labeling of the total graph is an IASI",
            TheoremId::T7 => "weak IASI after reducing a degree-2 vertex",
            TheoremId::T8 => "weak line graph iff adjacent edges have a mono-indexed member",
            TheoremId::T9 => "weak total graph iff the IASI is 1-uniform",
            TheoremId::T10 => "line graph of a strong IASI graph is not strong",
            TheoremId::T11 => "total graph of a strong IASI graph is not strong",
            TheoremId::T12 => "an IASI needs at least ceil(log2(n+1)) ground elements",
            TheoremId::T13 => "an l-uniform labeling needs C(m, l) >= n",
        }
    }

    pub fn kind(self) -> Kind {
        match self {
            TheoremId::T1 | TheoremId::T2 | TheoremId::T12 | TheoremId::T13 => Kind::MustHold,
            _ => Kind::Adjudicated,
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for TheoremId {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| HarnessError::UnknownTheorem(s.to_string()))
    }
}

/// Whether a failure is a bug (`must-hold`) or a finding (`adjudicated`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    MustHold,
    Adjudicated,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::MustHold => "must-hold",
            Kind::Adjudicated => "adjudicated",
        })
    }
}

/// What the theorem is applied to, beyond the graph and labeling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum Target {
    Whole,
    DeleteEdge {
        edge: EdgeId,
    },
    DeleteVertex {
        vertex: String,
    },
    Contract {
        edge: EdgeId,
    },
    Reduce {
        vertex: String,
    },
    Ground {
        mode: Mode,
        size: usize,
        uniform: Option<usize>,
    },
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Whole => f.write_str("whole graph"),
            Target::DeleteEdge { edge } => write!(f, "delete edge {edge}"),
            Target::DeleteVertex { vertex } => write!(f, "delete vertex {vertex}"),
            Target::Contract { edge } => write!(f, "contract {edge}"),
            Target::Reduce { vertex } => write!(f, "reduce at {vertex}"),
            Target::Ground {
                mode,
                size,
                uniform,
            } => {
                write!(f, "{mode} search over {{0..{}}}", size.saturating_sub(1))?;
                if let Some(l) = uniform {
                    write!(f, " with {l}-element labels")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub graph_name: String,
    pub graph: Graph,
    pub labeling: Option<SetLabeling>,
    /// Where the labeling came from (see `CorpusLabeling::source`).
    pub source: String,
    pub target: Target,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub universe_bound: u32,
    pub node_budget: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observation {
    /// The statement, read through the induced labeling, holds here.
    pub holds: bool,
    /// A search ran out of budget; `holds` is then false and meaningless.
    pub inconclusive: bool,
    /// The part of the check that follows from the definitions held.
    pub invariant_ok: bool,
    pub facts: BTreeMap<String, bool>,
    pub detail: String,
}

impl Observation {
    fn new(holds: bool) -> Self {
        Observation {
            holds,
            inconclusive: false,
            invariant_ok: true,
            facts: BTreeMap::new(),
            detail: String::new(),
        }
    }

    fn fact(mut self, name: &str, value: bool) -> Self {
        self.facts.insert(name.to_string(), value);
        self
    }
}

fn bad(theorem: TheoremId, reason: impl Into<String>) -> HarnessError {
    HarnessError::BadInstance {
        theorem,
        reason: reason.into(),
    }
}

fn clash_detail(r: &VerificationReport) -> String {
    if let Some((a, b)) = &r.vertex_injective.witness {
        format!("vertices {a} and {b} share a label")
    } else if let Some((a, b)) = &r.edge_injective.witness {
        format!(
            "edges ({}, {}) and ({}, {}) share a label",
            a.low(),
            a.high(),
            b.low(),
            b.high()
        )
    } else {
        String::new()
    }
}

fn class_detail(r: &VerificationReport, want_weak: bool) -> String {
    let clash = clash_detail(r);
    if !clash.is_empty() {
        return clash;
    }
    r.per_edge
        .iter()
        .find(|e| {
            if want_weak {
                !e.class.is_weak()
            } else {
                !e.class.is_strong()
            }
        })
        .map(|e| format!("edge {} has label {} ({})", e.edge, e.label, e.class))
        .unwrap_or_default()
}

fn iasi_observation(r: &VerificationReport) -> Observation {
    let mut obs = Observation::new(r.is_iasi)
        .fact("vertex_injective", r.vertex_injective.holds)
        .fact("edge_injective", r.edge_injective.holds);
    obs.detail = clash_detail(r);
    obs
}

fn labeling_of(theorem: TheoremId, inst: &Instance) -> Result<&SetLabeling, HarnessError> {
    inst.labeling
        .as_ref()
        .ok_or_else(|| bad(theorem, "a labeling is required"))
}

fn expect_target(theorem: TheoremId, inst: &Instance) -> Result<(), HarnessError> {
    if inst.target != Target::Whole {
        return Err(bad(theorem, format!("unexpected target {}", inst.target)));
    }
    Ok(())
}

/// Verifies `f` on `g` and checks it is an IASI of the required mode.
fn source_report(
    theorem: TheoremId,
    g: &Graph,
    f: &SetLabeling,
    mode: Mode,
) -> Result<VerificationReport, HarnessError> {
    let r = verify(g, f)?;
    if !mode.accepts(&r) {
        return Err(bad(
            theorem,
            format!("source labeling is not a {mode} IASI"),
        ));
    }
    Ok(r)
}

fn derived_report(t: &TransformResult) -> &VerificationReport {
    t.report
        .as_ref()
        .expect("labeled transforms carry a report")
}

fn is_mono(f: &SetLabeling, v: &str) -> bool {
    f.get(v).is_some_and(|s| s.is_singleton())
}

fn edge_is_mono(r: &VerificationReport, e: &EdgeId) -> bool {
    r.edge(e).is_some_and(|x| x.set_indexing_number == 1)
}

/// Labels of derived vertices with the same kind of origin are distinct.
fn injective_within_origin_kinds(t: &TransformResult) -> bool {
    let f = t.induced_labeling.as_ref().expect("labeled transform");
    let mut seen: BTreeMap<(u8, &crate::setcore::IntSet), ()> = BTreeMap::new();
    t.provenance.iter().all(|(name, origin)| {
        let kind = match origin {
            Origin::Vertex { .. } => 0,
            Origin::Edge { .. } => 1,
            Origin::Merged { .. } => 2,
        };
        let label = f.get(name).expect("labeled transform covers its graph");
        seen.insert((kind, label), ()).is_none()
    })
}

/// Reading (b) of "admits a weak/strong IASI": some labeling of `h` has the
/// property. Distinct singletons with distinct pairwise sums are both weak
/// and strong, so the witness below settles it without searching.
fn witness_exists(h: &Graph, mode: Mode, cfg: &EvalConfig) -> Result<bool, HarnessError> {
    let f = sidon_iasi(h, cfg.universe_bound)?;
    Ok(mode.accepts(&verify(h, &f)?))
}

fn ground_search(
    theorem: TheoremId,
    inst: &Instance,
    cfg: &EvalConfig,
) -> Result<Observation, HarnessError> {
    let Target::Ground {
        mode,
        size,
        uniform,
    } = inst.target.clone()
    else {
        return Err(bad(theorem, format!("unexpected target {}", inst.target)));
    };
    let n = inst.graph.vertex_count();
    let threshold = match uniform {
        None => ground_set_lower_bound(n)?,
        Some(l) => uniform_ground_set_lower_bound(n, l)?,
    };
    if size >= threshold {
        return Err(bad(
            theorem,
            format!("ground size {size} is not below the bound {threshold}"),
        ));
    }
    let mut spec = SearchSpec::prefix(mode, size, cfg.universe_bound)?.node_budget(cfg.node_budget);
    if let Some(l) = uniform {
        spec = spec.uniform(l);
    }
    let outcome = find_labeling(&inst.graph, &spec)?;
    let mut obs = Observation::new(outcome.status == Status::Exhausted)
        .fact("exhausted", outcome.status == Status::Exhausted);
    obs.inconclusive = outcome.status == Status::Timeout;
    obs.invariant_ok = outcome.status != Status::Found;
    obs.detail = match (&outcome.status, &outcome.labeling) {
        (Status::Found, Some(f)) => format!("found {}", f.to_text().trim_end().replace('\n', "; ")),
        (status, _) => format!("{status} after {} nodes", outcome.nodes_expanded),
    };
    Ok(obs)
}

/// Evaluates one theorem on one instance. Pure: the same inputs always give
/// the same observation.
pub fn evaluate(
    theorem: TheoremId,
    inst: &Instance,
    cfg: &EvalConfig,
) -> Result<Observation, HarnessError> {
    let g = &inst.graph;
    match theorem {
        TheoremId::T1 => {
            expect_target(theorem, inst)?;
            let f = canonical_iasi(g, cfg.universe_bound)?;
            let mut obs = iasi_observation(&verify(g, &f)?);
            obs.invariant_ok = obs.holds;
            Ok(obs)
        }
        TheoremId::T2 => {
            let f = labeling_of(theorem, inst)?;
            source_report(theorem, g, f, Mode::Iasi)?;
            let h = match &inst.target {
                Target::DeleteEdge { edge } => g.without_edge(
                    g.edge_position(edge)
                        .map_err(crate::labeling::LabelingError::from)?,
                ),
                Target::DeleteVertex { vertex } => g
                    .without_vertex(vertex)
                    .map_err(crate::labeling::LabelingError::from)?,
                other => return Err(bad(theorem, format!("unexpected target {other}"))),
            };
            let mut obs = iasi_observation(&verify(&h, &restrict(g, f, &h)?)?);
            obs.invariant_ok = obs.holds;
            Ok(obs)
        }
        TheoremId::T3 => {
            let f = labeling_of(theorem, inst)?;
            source_report(theorem, g, f, Mode::Iasi)?;
            let Target::Contract { edge } = &inst.target else {
                return Err(bad(theorem, format!("unexpected target {}", inst.target)));
            };
            let t = contract_edge(g, edge, Some(f))?;
            Ok(iasi_observation(derived_report(&t)))
        }
        TheoremId::T4 => {
            let f = labeling_of(theorem, inst)?;
            source_report(theorem, g, f, Mode::Iasi)?;
            let Target::Reduce { vertex } = &inst.target else {
                return Err(bad(theorem, format!("unexpected target {}", inst.target)));
            };
            let t = topological_reduction(g, vertex, Some(f))?;
            let r = derived_report(&t);
            let mut obs = iasi_observation(r);
            // Surviving vertices keep their distinct labels.
            obs.invariant_ok = r.vertex_injective.holds;
            Ok(obs)
        }
        TheoremId::T5 | TheoremId::T6 => {
            expect_target(theorem, inst)?;
            let f = labeling_of(theorem, inst)?;
            source_report(theorem, g, f, Mode::Iasi)?;
            let t = if theorem == TheoremId::T5 {
                line_graph_labeled(g, Some(f))?
            } else {
                total_graph_labeled(g, Some(f))?
            };
            let within = injective_within_origin_kinds(&t);
            let mut obs =
                iasi_observation(derived_report(&t)).fact("injective_within_kinds", within);
            obs.invariant_ok = within;
            Ok(obs)
        }
        TheoremId::T7 => {
            let f = labeling_of(theorem, inst)?;
            let r = source_report(theorem, g, f, Mode::Weak)?;
            let Target::Reduce { vertex } = &inst.target else {
                return Err(bad(theorem, format!("unexpected target {}", inst.target)));
            };
            let t = topological_reduction(g, vertex, Some(f))?;
            let nbrs = g
                .neighbors(vertex)
                .map_err(crate::labeling::LabelingError::from)?;
            let vertex_not_mono = !is_mono(f, vertex);
            let edge_mono = nbrs
                .iter()
                .any(|u| edge_is_mono(&r, &EdgeId::new(*u, vertex.as_str())));
            let literal = vertex_not_mono || edge_mono;

            let induced = derived_report(&t).is_weak_iasi();
            let exists = witness_exists(&t.graph, Mode::Weak, cfg)?;
            let mut obs = Observation::new(induced == literal)
                .fact("induced_weak_iasi", induced)
                .fact("witness_weak_iasi", exists);
            for (reading, value) in [
                ("literal", literal),
                ("not_mono_vertex", vertex_not_mono),
                ("mono_edge", edge_mono),
            ] {
                obs.facts.insert(reading.to_string(), value);
                obs.facts
                    .insert(format!("a_matches_{reading}"), induced == value);
                obs.facts
                    .insert(format!("b_matches_{reading}"), exists == value);
            }
            if !obs.holds {
                obs.detail = format!(
                    "condition is {literal} but the induced labeling is {}weak: {}",
                    if induced { "" } else { "not " },
                    class_detail(derived_report(&t), true)
                );
            }
            Ok(obs)
        }
        TheoremId::T8 | TheoremId::T9 => {
            expect_target(theorem, inst)?;
            let f = labeling_of(theorem, inst)?;
            let r = source_report(theorem, g, f, Mode::Weak)?;
            let (condition, t) = if theorem == TheoremId::T8 {
                let cond = g
                    .adjacent_edge_pairs()
                    .iter()
                    .all(|(a, b)| edge_is_mono(&r, a) || edge_is_mono(&r, b));
                (cond, line_graph_labeled(g, Some(f))?)
            } else {
                (is_k_uniform(&r, 1), total_graph_labeled(g, Some(f))?)
            };
            let dr = derived_report(&t);
            let induced = dr.is_weak_iasi();
            let exists = witness_exists(&t.graph, Mode::Weak, cfg)?;
            let mut obs = Observation::new(induced == condition)
                .fact("condition", condition)
                .fact("induced_iasi", dr.is_iasi)
                .fact("induced_weak_iasi", induced)
                .fact("a_matches", induced == condition)
                .fact("b_matches", exists == condition);
            if !obs.holds {
                obs.detail = format!(
                    "condition is {condition} but the induced labeling is {}weak: {}",
                    if induced { "" } else { "not " },
                    class_detail(dr, true)
                );
            }
            Ok(obs)
        }
        TheoremId::T10 | TheoremId::T11 => {
            expect_target(theorem, inst)?;
            let f = labeling_of(theorem, inst)?;
            source_report(theorem, g, f, Mode::Strong)?;
            if g.adjacent_edge_index_pairs().is_empty() {
                return Err(bad(theorem, "graph has no adjacent edges"));
            }
            let t = if theorem == TheoremId::T10 {
                line_graph_labeled(g, Some(f))?
            } else {
                total_graph_labeled(g, Some(f))?
            };
            let dr = derived_report(&t);
            let induced_strong = dr.is_strong_iasi();
            let exists = witness_exists(&t.graph, Mode::Strong, cfg)?;
            let mut obs = Observation::new(!induced_strong)
                .fact("induced_iasi", dr.is_iasi)
                .fact("induced_strong_iasi", induced_strong)
                .fact("a_holds", !induced_strong)
                .fact("b_holds", !exists);
            if !obs.holds {
                obs.detail = "the induced labeling is a strong IASI".to_string();
            }
            Ok(obs)
        }
        TheoremId::T12 | TheoremId::T13 => ground_search(theorem, inst, cfg),
    }
}

fn whole(
    graph_name: &str,
    graph: &Graph,
    labeling: Option<&SetLabeling>,
    source: &str,
    target: Target,
) -> Instance {
    Instance {
        graph_name: graph_name.to_string(),
        graph: graph.clone(),
        labeling: labeling.cloned(),
        source: source.to_string(),
        target,
    }
}

fn reducible_vertices(g: &Graph) -> Vec<String> {
    g.vertices()
        .iter()
        .filter(|v| {
            let nbrs = g.neighbors(v).expect("own vertex");
            nbrs.len() == 2 && !g.has_edge(nbrs[0], nbrs[1])
        })
        .cloned()
        .collect()
}

/// Every instance the suite checks for `theorem`, in a fixed order.
pub fn instances(theorem: TheoremId, corpus: &Corpus) -> Result<Vec<Instance>, HarnessError> {
    let mut out = Vec::new();
    for entry in &corpus.entries {
        let (name, g) = (&entry.graph.name, &entry.graph.graph);
        match theorem {
            TheoremId::T1 => out.push(whole(name, g, None, "canonical", Target::Whole)),
            TheoremId::T12 | TheoremId::T13 => {
                let n = g.vertex_count();
                if n > GROUND_MAX_ORDER || !entry.graph.enumerated {
                    continue;
                }
                if theorem == TheoremId::T12 {
                    let size = ground_set_lower_bound(n)? - 1;
                    out.push(whole(
                        name,
                        g,
                        None,
                        "search",
                        Target::Ground {
                            mode: Mode::Iasi,
                            size,
                            uniform: None,
                        },
                    ));
                } else {
                    for l in UNIFORM_SIZES {
                        let size = uniform_ground_set_lower_bound(n, l)? - 1;
                        if size >= l {
                            let target = Target::Ground {
                                mode: Mode::Iasi,
                                size,
                                uniform: Some(l),
                            };
                            out.push(whole(name, g, None, "search", target));
                        }
                    }
                }
            }
            _ => {
                for cl in &entry.labelings {
                    let f = Some(&cl.labeling);
                    let src = cl.source.as_str();
                    let r = verify(g, &cl.labeling)?;
                    match theorem {
                        TheoremId::T2 => {
                            for e in g.edge_ids() {
                                out.push(whole(name, g, f, src, Target::DeleteEdge { edge: e }));
                            }
                            for v in g.vertices() {
                                out.push(whole(
                                    name,
                                    g,
                                    f,
                                    src,
                                    Target::DeleteVertex { vertex: v.clone() },
                                ));
                            }
                        }
                        TheoremId::T3 => {
                            for e in g.edge_ids() {
                                out.push(whole(name, g, f, src, Target::Contract { edge: e }));
                            }
                        }
                        TheoremId::T4 => {
                            for v in reducible_vertices(g) {
                                out.push(whole(name, g, f, src, Target::Reduce { vertex: v }));
                            }
                        }
                        TheoremId::T5 | TheoremId::T6 => {
                            out.push(whole(name, g, f, src, Target::Whole))
                        }
                        TheoremId::T7 if r.is_weak_iasi() => {
                            for v in reducible_vertices(g) {
                                out.push(whole(name, g, f, src, Target::Reduce { vertex: v }));
                            }
                        }
                        TheoremId::T8 | TheoremId::T9 if r.is_weak_iasi() => {
                            out.push(whole(name, g, f, src, Target::Whole))
                        }
                        TheoremId::T10 | TheoremId::T11
                            if r.is_strong_iasi() && !g.adjacent_edge_index_pairs().is_empty() =>
                        {
                            out.push(whole(name, g, f, src, Target::Whole))
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    HoldsOnCorpus,
    Counterexample,
    Inconclusive,
    NoInstances,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::HoldsOnCorpus => "holds-on-corpus",
            Verdict::Counterexample => "counterexample",
            Verdict::Inconclusive => "inconclusive",
            Verdict::NoInstances => "no-instances",
        })
    }
}

/// A failing instance together with everything needed to re-check it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub theorem: TheoremId,
    pub config: EvalConfig,
    pub instance: Instance,
    pub observation: Observation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub id: TheoremId,
    pub title: String,
    pub kind: Kind,
    pub instances: usize,
    pub holds: usize,
    pub fails: usize,
    pub inconclusive: usize,
    pub errors: usize,
    pub invariant_failures: usize,
    pub verdict: Verdict,
    /// For each recorded fact, the number of instances where it was true.
    pub fact_counts: BTreeMap<String, usize>,
    /// Smallest failing instance by vertex count, then edge count.
    pub counterexample: Option<Counterexample>,
    pub first_error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub n_max: usize,
    pub seed: u64,
    pub graphs: usize,
    pub labelings: usize,
    pub theorems: Vec<TheoremReport>,
}

impl SuiteReport {
    /// No check errored. Counterexamples are findings, not errors.
    pub fn ok(&self) -> bool {
        self.theorems.iter().all(|t| t.errors == 0)
    }

    /// Every must-hold theorem held and every invariant held.
    pub fn invariants_ok(&self) -> bool {
        self.theorems
            .iter()
            .all(|t| t.invariant_failures == 0 && (t.kind == Kind::Adjudicated || t.fails == 0))
    }

    pub fn theorem(&self, id: TheoremId) -> Option<&TheoremReport> {
        self.theorems.iter().find(|t| t.id == id)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "corpus: n_max={} seed={} graphs={} labelings={}",
            self.n_max, self.seed, self.graphs, self.labelings
        );
        for t in &self.theorems {
            let _ = writeln!(
                out,
                "{:<4} {:<16} {:<12} instances={} holds={} fails={} inconclusive={} errors={}  {}",
                t.id,
                t.verdict,
                t.kind,
                t.instances,
                t.holds,
                t.fails,
                t.inconclusive,
                t.errors,
                t.title
            );
            if t.invariant_failures > 0 {
                let _ = writeln!(out, "     invariant failures: {}", t.invariant_failures);
            }
            if !t.fact_counts.is_empty() {
                let facts: Vec<String> = t
                    .fact_counts
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect();
                let _ = writeln!(out, "     facts: {}", facts.join(" "));
            }
            if let Some(cx) = &t.counterexample {
                let inst = &cx.instance;
                let _ = writeln!(
                    out,
                    "     counterexample: {} (n={}, m={}) labeling={} target={}",
                    inst.graph_name,
                    inst.graph.vertex_count(),
                    inst.graph.edge_count(),
                    inst.source,
                    inst.target
                );
                if let Some(f) = &inst.labeling {
                    let _ = writeln!(
                        out,
                        "       labels: {}",
                        f.to_text().trim_end().replace('\n', "; ")
                    );
                }
                if !cx.observation.detail.is_empty() {
                    let _ = writeln!(out, "       {}", cx.observation.detail);
                }
            }
            if let Some(e) = &t.first_error {
                let _ = writeln!(out, "     first error: {e}");
            }
        }
        out
    }
}

fn summarize(
    id: TheoremId,
    cfg: &EvalConfig,
    insts: Vec<Instance>,
    results: Vec<Result<Observation, HarnessError>>,
) -> TheoremReport {
    let mut report = TheoremReport {
        id,
        title: id.title().to_string(),
        kind: id.kind(),
        instances: insts.len(),
        holds: 0,
        fails: 0,
        inconclusive: 0,
        errors: 0,
        invariant_failures: 0,
        verdict: Verdict::NoInstances,
        fact_counts: BTreeMap::new(),
        counterexample: None,
        first_error: None,
    };
    let mut best: Option<((usize, usize), Counterexample)> = None;
    for (inst, result) in insts.into_iter().zip(results) {
        let obs = match result {
            Ok(obs) => obs,
            Err(e) => {
                report.errors += 1;
                report
                    .first_error
                    .get_or_insert_with(|| format!("{} ({}): {e}", inst.graph_name, inst.target));
                continue;
            }
        };
        for (k, v) in &obs.facts {
            *report.fact_counts.entry(k.clone()).or_insert(0) += usize::from(*v);
        }
        if !obs.invariant_ok {
            report.invariant_failures += 1;
        }
        if obs.inconclusive {
            report.inconclusive += 1;
        } else if obs.holds {
            report.holds += 1;
        } else {
            report.fails += 1;
            let key = (inst.graph.vertex_count(), inst.graph.edge_count());
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                best = Some((
                    key,
                    Counterexample {
                        theorem: id,
                        config: *cfg,
                        instance: inst,
                        observation: obs,
                    },
                ));
            }
        }
    }
    report.counterexample = best.map(|(_, cx)| cx);
    report.verdict = if report.fails > 0 {
        Verdict::Counterexample
    } else if report.inconclusive > 0 {
        Verdict::Inconclusive
    } else if report.holds > 0 {
        Verdict::HoldsOnCorpus
    } else {
        Verdict::NoInstances
    };
    report
}

/// Runs the selected theorems over `corpus`. Instances are evaluated in
/// parallel and collected in order, so the report is deterministic.
pub fn run_suite(corpus: &Corpus, opts: &HarnessOptions) -> Result<SuiteReport, HarnessError> {
    let cfg = opts.eval_config();
    let selected: Vec<TheoremId> = if opts.theorems.is_empty() {
        TheoremId::ALL.to_vec()
    } else {
        let mut t = opts.theorems.clone();
        t.sort();
        t.dedup();
        t
    };
    let mut theorems = Vec::new();
    for id in selected {
        let insts = instances(id, corpus)?;
        let results: Vec<_> = insts
            .par_iter()
            .map(|inst| evaluate(id, inst, &cfg))
            .collect();
        theorems.push(summarize(id, &cfg, insts, results));
    }
    Ok(SuiteReport {
        n_max: corpus.n_max,
        seed: corpus.seed,
        graphs: corpus.entries.len(),
        labelings: corpus.labeling_count(),
        theorems,
    })
}

impl SuiteReport {
    /// Generates the corpus for `opts` and runs the suite on it.
    pub fn generate(opts: &HarnessOptions) -> Result<SuiteReport, HarnessError> {
        run_suite(&generate_corpus(opts)?, opts)
    }
}

/// Re-evaluates a counterexample; true when the fresh observation is
/// identical to the recorded one.
pub fn replay(cx: &Counterexample) -> Result<bool, HarnessError> {
    let fresh = evaluate(cx.theorem, &cx.instance, &cx.config)?;
    Ok(fresh == cx.observation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setcore::IntSet;

    fn cfg() -> EvalConfig {
        EvalConfig {
            universe_bound: 4096,
            node_budget: 100_000,
        }
    }

    fn labels(pairs: &[(&str, &[u32])]) -> SetLabeling {
        pairs
            .iter()
            .map(|(v, xs)| {
                (
                    v.to_string(),
                    IntSet::new(xs.iter().copied(), 4096).unwrap(),
                )
            })
            .collect()
    }

    fn inst(g: &str, f: Option<SetLabeling>, target: Target) -> Instance {
        Instance {
            graph_name: "test".into(),
            graph: Graph::parse(g).unwrap(),
            labeling: f,
            source: "manual".into(),
            target,
        }
    }

    #[test]
    fn theorem_ids_parse() {
        assert_eq!("t12".parse::<TheoremId>().unwrap(), TheoremId::T12);
        assert!("T14".parse::<TheoremId>().is_err());
        assert_eq!(TheoremId::T5.kind(), Kind::Adjudicated);
    }

    #[test]
    fn t12_on_three_vertices_is_exhausted() {
        let i = inst(
            "a b\nb c",
            None,
            Target::Ground {
                mode: Mode::Iasi,
                size: 1,
                uniform: None,
            },
        );
        let obs = evaluate(TheoremId::T12, &i, &cfg()).unwrap();
        assert!(obs.holds && obs.invariant_ok && !obs.inconclusive);
    }

    #[test]
    fn t12_rejects_sizes_at_the_bound() {
        let i = inst(
            "a b\nb c",
            None,
            Target::Ground {
                mode: Mode::Iasi,
                size: 2,
                uniform: None,
            },
        );
        assert!(matches!(
            evaluate(TheoremId::T12, &i, &cfg()),
            Err(HarnessError::BadInstance { .. })
        ));
    }

    #[test]
    fn t10_fails_on_a_strong_path() {
        // P3 with singletons: L(P3) = K2 labeled {a+b}, {b+c}, both singletons.
        let f = labels(&[("a", &[1]), ("b", &[2]), ("c", &[4])]);
        let i = inst("a b\nb c", Some(f), Target::Whole);
        let obs = evaluate(TheoremId::T10, &i, &cfg()).unwrap();
        assert!(!obs.holds);
        assert!(!obs.facts["b_holds"]);
    }

    #[test]
    fn t8_condition_tracks_induced_weakness() {
        // b carries two elements; both edges of P3 are then non-mono, and the
        // single adjacent pair violates the condition.
        let f = labels(&[("a", &[0]), ("b", &[1, 3]), ("c", &[10])]);
        let i = inst("a b\nb c", Some(f), Target::Whole);
        let obs = evaluate(TheoremId::T8, &i, &cfg()).unwrap();
        assert!(!obs.facts["condition"]);
        assert!(!obs.facts["induced_weak_iasi"]);
        assert!(obs.holds);
    }

    #[test]
    fn t7_requires_a_weak_source() {
        let f = labels(&[("a", &[0, 1]), ("b", &[2, 4]), ("c", &[10])]);
        let i = inst("a b\nb c", Some(f), Target::Reduce { vertex: "b".into() });
        assert!(evaluate(TheoremId::T7, &i, &cfg()).is_err());
    }

    #[test]
    fn wrong_targets_are_errors() {
        let f = labels(&[("a", &[1]), ("b", &[2])]);
        let i = inst("a b", Some(f), Target::Reduce { vertex: "a".into() });
        assert!(evaluate(TheoremId::T5, &i, &cfg()).is_err());
        assert!(evaluate(TheoremId::T3, &i, &cfg()).is_err());
    }

    #[test]
    fn small_suite_runs_and_replays() {
        let mut opts = HarnessOptions::new(3, 7);
        opts.family_max = 4;
        let report = SuiteReport::generate(&opts).unwrap();
        assert!(report.ok(), "{}", report.to_text());
        assert!(report.invariants_ok(), "{}", report.to_text());
        assert_eq!(report.theorems.len(), 13);
        assert_eq!(
            report.theorem(TheoremId::T1).unwrap().verdict,
            Verdict::HoldsOnCorpus
        );
        for t in &report.theorems {
            if let Some(cx) = &t.counterexample {
                assert!(replay(cx).unwrap(), "{} does not replay", t.id);
            }
        }
        let again = SuiteReport::generate(&opts).unwrap();
        assert_eq!(
            serde_json::to_string(&report).unwrap(),
            serde_json::to_string(&again).unwrap()
        );
    }
}
