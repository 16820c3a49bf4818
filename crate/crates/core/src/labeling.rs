//! Set-labelings of graphs and their verification.
//!
//! A labeling assigns a non-empty [`IntSet`] to each vertex; each edge `uv`
//! then carries the sumset `f(u) + f(v)`. [`verify`] checks injectivity on
//! vertices and on edges and classifies every edge as weak (edge label as
//! large as the larger endpoint label), strong (as large as the product),
//! both, or neither.
//!
//! Labeling text format, one vertex per line: `<v>: {a,b,c}`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fmt::Write as _;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeId, Graph, GraphError};
use crate::setcore::{IntSet, SetError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelingError {
    #[error("vertex {0:?} has no label")]
    MissingVertex(String),
    #[error("label given for {0:?}, which is not a vertex of the graph")]
    ExtraVertex(String),
    #[error("vertex {0:?} labeled twice")]
    DuplicateVertex(String),
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// Vertex name to set label, in insertion order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SetLabeling {
    assignments: IndexMap<String, IntSet>,
}

impl SetLabeling {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, vertex: impl Into<String>, label: IntSet) -> Option<IntSet> {
        self.assignments.insert(vertex.into(), label)
    }

    pub fn get(&self, vertex: &str) -> Option<&IntSet> {
        self.assignments.get(vertex)
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &IntSet)> {
        self.assignments.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Labels of `g`'s vertices in vertex order; fails unless the labeling
    /// covers exactly `V(g)`.
    pub fn labels_for<'a>(&'a self, g: &Graph) -> Result<Vec<&'a IntSet>, LabelingError> {
        let labels = g
            .vertices()
            .iter()
            .map(|v| {
                self.assignments
                    .get(v)
                    .ok_or_else(|| LabelingError::MissingVertex(v.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if self.assignments.len() != g.vertex_count() {
            let extra = self
                .assignments
                .keys()
                .find(|k| !g.contains_vertex(k))
                .expect("more labels than vertices");
            return Err(LabelingError::ExtraVertex(extra.clone()));
        }
        Ok(labels)
    }

    pub fn parse(text: &str, bound: u32) -> Result<Self, LabelingError> {
        let mut f = SetLabeling::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            // Names may contain ':' (derived graphs use `e:` and `m:`), set
            // literals never do.
            let (name, literal) = content
                .rsplit_once(':')
                .ok_or_else(|| LabelingError::Parse {
                    line,
                    reason: "expected `<vertex>: {a,b,...}`".into(),
                })?;
            let name = name.trim();
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(LabelingError::Parse {
                    line,
                    reason: format!("invalid vertex name {name:?}"),
                });
            }
            let set =
                IntSet::parse_with_bound(literal, bound).map_err(|e| LabelingError::Parse {
                    line,
                    reason: e.to_string(),
                })?;
            if f.insert(name, set).is_some() {
                return Err(LabelingError::Parse {
                    line,
                    reason: LabelingError::DuplicateVertex(name.to_string()).to_string(),
                });
            }
        }
        Ok(f)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (v, set) in &self.assignments {
            let _ = writeln!(out, "{v}: {set}");
        }
        out
    }
}

impl FromIterator<(String, IntSet)> for SetLabeling {
    fn from_iter<T: IntoIterator<Item = (String, IntSet)>>(iter: T) -> Self {
        SetLabeling {
            assignments: iter.into_iter().collect(),
        }
    }
}

/// Edge labels `f(u) + f(v)`, in the graph's edge order.
pub fn induced_edge_labels(
    g: &Graph,
    f: &SetLabeling,
) -> Result<IndexMap<EdgeId, IntSet>, LabelingError> {
    let labels = f.labels_for(g)?;
    g.edges()
        .iter()
        .map(|&(i, j)| Ok((g.edge_id((i, j)), labels[i].sumset(labels[j])?)))
        .collect()
}

/// Size class of an edge label relative to its endpoint labels, or of a
/// whole labeling when every edge agrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Class {
    Weak,
    Strong,
    Both,
    Neither,
}

impl Class {
    pub fn of_sizes(left: usize, right: usize, sum: usize) -> Class {
        match (sum == left.max(right), sum == left * right) {
            (true, true) => Class::Both,
            (true, false) => Class::Weak,
            (false, true) => Class::Strong,
            (false, false) => Class::Neither,
        }
    }

    pub fn is_weak(self) -> bool {
        matches!(self, Class::Weak | Class::Both)
    }

    pub fn is_strong(self) -> bool {
        matches!(self, Class::Strong | Class::Both)
    }

    fn from_flags(weak: bool, strong: bool) -> Class {
        match (weak, strong) {
            (true, true) => Class::Both,
            (true, false) => Class::Weak,
            (false, true) => Class::Strong,
            (false, false) => Class::Neither,
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Class::Weak => "weak",
            Class::Strong => "strong",
            Class::Both => "both",
            Class::Neither => "neither",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Injectivity<W> {
    pub holds: bool,
    /// Lexicographically first clashing pair, present iff `holds` is false.
    pub witness: Option<W>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeReport {
    pub edge: EdgeId,
    pub label: IntSet,
    pub set_indexing_number: usize,
    pub class: Class,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub vertex_injective: Injectivity<(String, String)>,
    pub edge_injective: Injectivity<(EdgeId, EdgeId)>,
    pub is_iasi: bool,
    pub per_edge: Vec<EdgeReport>,
    pub graph_class: Class,
    /// `Some(k)` when the graph has edges and all of them have `k` elements.
    pub uniformity: Option<usize>,
    pub mono_indexed_vertices: Vec<String>,
    pub mono_indexed_edges: Vec<EdgeId>,
    /// Informational only.
    pub isolated_vertices: Vec<String>,
}

impl VerificationReport {
    pub fn is_weak(&self) -> bool {
        self.graph_class.is_weak()
    }

    pub fn is_strong(&self) -> bool {
        self.graph_class.is_strong()
    }

    /// `is_iasi` and weak.
    pub fn is_weak_iasi(&self) -> bool {
        self.is_iasi && self.is_weak()
    }

    pub fn is_strong_iasi(&self) -> bool {
        self.is_iasi && self.is_strong()
    }

    pub fn edge(&self, e: &EdgeId) -> Option<&EdgeReport> {
        self.per_edge.iter().find(|r| &r.edge == e)
    }

    /// Stable `key: value` rendering.
    pub fn to_text(&self) -> String {
        fn pair<T: fmt::Display>(w: &Option<(T, T)>) -> String {
            match w {
                Some((a, b)) => format!("{a} {b}"),
                None => "-".into(),
            }
        }
        fn list<T: fmt::Display>(xs: &[T]) -> String {
            if xs.is_empty() {
                "-".into()
            } else {
                xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
            }
        }
        let mut out = String::new();
        let _ = writeln!(out, "vertices: {}", self.vertex_count);
        let _ = writeln!(out, "edges: {}", self.edge_count);
        let _ = writeln!(out, "vertex_injective: {}", self.vertex_injective.holds);
        let _ = writeln!(
            out,
            "vertex_witness: {}",
            pair(&self.vertex_injective.witness)
        );
        let _ = writeln!(out, "edge_injective: {}", self.edge_injective.holds);
        let _ = writeln!(out, "edge_witness: {}", pair(&self.edge_injective.witness));
        let _ = writeln!(out, "is_iasi: {}", self.is_iasi);
        let _ = writeln!(out, "graph_class: {}", self.graph_class);
        let _ = writeln!(
            out,
            "uniformity: {}",
            self.uniformity
                .map_or_else(|| "-".to_string(), |k| k.to_string())
        );
        let _ = writeln!(
            out,
            "mono_indexed_vertices: {}",
            list(&self.mono_indexed_vertices)
        );
        let _ = writeln!(
            out,
            "mono_indexed_edges: {}",
            list(&self.mono_indexed_edges)
        );
        let _ = writeln!(out, "isolated_vertices: {}", list(&self.isolated_vertices));
        for r in &self.per_edge {
            let _ = writeln!(
                out,
                "edge {}: {} set_indexing_number={} class={}",
                r.edge, r.label, r.set_indexing_number, r.class
            );
        }
        out
    }
}

fn first_clash<K: Clone + Ord, L: Eq + std::hash::Hash>(items: Vec<(K, L)>) -> Option<(K, K)> {
    let mut groups: HashMap<L, Vec<K>> = HashMap::new();
    for (k, l) in items {
        groups.entry(l).or_default().push(k);
    }
    groups
        .into_values()
        .filter(|g| g.len() > 1)
        .map(|mut g| {
            g.sort();
            (g[0].clone(), g[1].clone())
        })
        .min()
}

/// Checks `f` on `g`. A labeling that is not an IASI yields a report with
/// witnesses, not an error; errors are reserved for coverage mismatches and
/// universe overflow.
pub fn verify(g: &Graph, f: &SetLabeling) -> Result<VerificationReport, LabelingError> {
    let labels = f.labels_for(g)?;

    let vertex_clash = first_clash(
        g.vertices()
            .iter()
            .cloned()
            .zip(labels.iter().copied())
            .collect(),
    );

    let mut per_edge = Vec::with_capacity(g.edge_count());
    for &(i, j) in g.edges() {
        let label = labels[i].sumset(labels[j])?;
        let size = label.len();
        per_edge.push(EdgeReport {
            edge: g.edge_id((i, j)),
            class: Class::of_sizes(labels[i].len(), labels[j].len(), size),
            set_indexing_number: size,
            label,
        });
    }
    let edge_clash = first_clash(
        per_edge
            .iter()
            .map(|r| (r.edge.clone(), &r.label))
            .collect(),
    );

    let graph_class = Class::from_flags(
        per_edge.iter().all(|r| r.class.is_weak()),
        per_edge.iter().all(|r| r.class.is_strong()),
    );
    let uniformity = match per_edge.first() {
        Some(first)
            if per_edge
                .iter()
                .all(|r| r.set_indexing_number == first.set_indexing_number) =>
        {
            Some(first.set_indexing_number)
        }
        _ => None,
    };
    let mono_indexed_vertices = g
        .vertices()
        .iter()
        .zip(&labels)
        .filter(|(_, l)| l.is_singleton())
        .map(|(v, _)| v.clone())
        .collect();
    let mono_indexed_edges = per_edge
        .iter()
        .filter(|r| r.set_indexing_number == 1)
        .map(|r| r.edge.clone())
        .collect();

    let vertex_injective = Injectivity {
        holds: vertex_clash.is_none(),
        witness: vertex_clash,
    };
    let edge_injective = Injectivity {
        holds: edge_clash.is_none(),
        witness: edge_clash,
    };
    Ok(VerificationReport {
        vertex_count: g.vertex_count(),
        edge_count: g.edge_count(),
        is_iasi: vertex_injective.holds && edge_injective.holds,
        vertex_injective,
        edge_injective,
        per_edge,
        graph_class,
        uniformity,
        mono_indexed_vertices,
        mono_indexed_edges,
        isolated_vertices: g
            .isolated_vertices()
            .into_iter()
            .map(String::from)
            .collect(),
    })
}

/// Every edge label has exactly `k` elements (vacuous without edges).
pub fn is_k_uniform(report: &VerificationReport, k: usize) -> bool {
    report.per_edge.iter().all(|r| r.set_indexing_number == k)
}

/// Every vertex label of `g` under `f` has exactly `l` elements.
pub fn is_l_uniformly_set_indexed(
    g: &Graph,
    f: &SetLabeling,
    l: usize,
) -> Result<bool, LabelingError> {
    Ok(f.labels_for(g)?.iter().all(|s| s.len() == l))
}

pub fn mono_indexed_elements(report: &VerificationReport) -> (&[String], &[EdgeId]) {
    (&report.mono_indexed_vertices, &report.mono_indexed_edges)
}

/// `f(v_i) = {2^i}` in vertex order.
///
/// Distinct unordered pairs `{i, j}` give distinct sums `2^i + 2^j` (binary
/// expansions are unique), so the result is always an IASI, 1-uniform, and
/// both weak and strong.
pub fn canonical_iasi(g: &Graph, bound: u32) -> Result<SetLabeling, LabelingError> {
    let n = g.vertex_count();
    // Largest value that must fit: the top label, or the sum of the top two.
    let top: u64 = match n {
        0 => 0,
        1 => 1,
        _ if n > 33 => u64::MAX,
        _ => (1u64 << (n - 1)) + (1u64 << (n - 2)),
    };
    if top > u64::from(bound) {
        return Err(SetError::BoundExceeded {
            element: top,
            bound,
        }
        .into());
    }
    g.vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| Ok((v.clone(), IntSet::singleton(1u32 << i, bound)?)))
        .collect::<Result<SetLabeling, SetError>>()
        .map_err(Into::into)
}

/// First `n` terms of the greedy sequence starting at 0 in which sums of
/// distinct terms never repeat: 0, 1, 2, 4, 7, 12, 20, ...
pub fn distinct_sum_sequence(n: usize) -> Vec<u64> {
    let mut terms: Vec<u64> = Vec::with_capacity(n);
    let mut sums: HashSet<u64> = HashSet::new();
    let mut next = 0u64;
    while terms.len() < n {
        if terms.iter().all(|&t| !sums.contains(&(t + next))) {
            sums.extend(terms.iter().map(|&t| t + next));
            terms.push(next);
        }
        next += 1;
    }
    terms
}

/// Singleton labels drawn from [`distinct_sum_sequence`], in vertex order.
/// Like [`canonical_iasi`] it is always an IASI that is both weak and strong,
/// but the labels grow roughly cubically rather than exponentially.
pub fn sidon_iasi(g: &Graph, bound: u32) -> Result<SetLabeling, LabelingError> {
    let terms = distinct_sum_sequence(g.vertex_count());
    let top = match terms.len() {
        0 => 0,
        1 => terms[0],
        k => terms[k - 1] + terms[k - 2],
    };
    if top > u64::from(bound) {
        return Err(SetError::BoundExceeded {
            element: top,
            bound,
        }
        .into());
    }
    g.vertices()
        .iter()
        .zip(terms)
        .map(|(v, t)| Ok((v.clone(), IntSet::singleton(t as u32, bound)?)))
        .collect::<Result<SetLabeling, SetError>>()
        .map_err(Into::into)
}

/// `f` restricted to the vertices of the subgraph `h` of `g`.
pub fn restrict(g: &Graph, f: &SetLabeling, h: &Graph) -> Result<SetLabeling, LabelingError> {
    h.is_subgraph_of(g)?;
    let labels = f.labels_for(g)?;
    Ok(h.vertices()
        .iter()
        .map(|v| {
            let i = g.vertex_index(v).expect("checked subgraph");
            (v.clone(), labels[i].clone())
        })
        .collect())
}
