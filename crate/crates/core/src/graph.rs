//! Finite simple undirected graphs with named vertices.
//!
//! Vertex order is insertion order and is the determinism anchor for every
//! downstream computation. Edges are kept in insertion order as index pairs.
//!
//! Edge-list text format, one item per line:
//!
//! ```text
//! # comment
//! vertex z      # declares an isolated (or not yet connected) vertex
//! a b           # an edge between a and b
//! ```

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::labeling::{induced_edge_labels, LabelingError, SetLabeling};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(String),
    #[error("loop at vertex {0:?}")]
    Loop(String),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(String, String),
    #[error("unknown edge {0}-{1}")]
    UnknownEdge(String, String),
    #[error("invalid vertex name {0:?}")]
    InvalidName(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// An edge named by its endpoints, lexicographically smaller name first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "(String, String)", from = "(String, String)")]
pub struct EdgeId {
    low: String,
    high: String,
}

impl EdgeId {
    pub fn new(u: impl Into<String>, v: impl Into<String>) -> Self {
        let (u, v) = (u.into(), v.into());
        if u <= v {
            EdgeId { low: u, high: v }
        } else {
            EdgeId { low: v, high: u }
        }
    }

    pub fn low(&self) -> &str {
        &self.low
    }

    pub fn high(&self) -> &str {
        &self.high
    }

    pub fn touches(&self, v: &str) -> bool {
        self.low == v || self.high == v
    }
}

impl From<EdgeId> for (String, String) {
    fn from(e: EdgeId) -> Self {
        (e.low, e.high)
    }
}

impl From<(String, String)> for EdgeId {
    fn from((u, v): (String, String)) -> Self {
        EdgeId::new(u, v)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.low, self.high)
    }
}

/// A simple undirected graph. Immutable once shared; building happens
/// through `add_vertex` / `add_edge` or [`Graph::parse`].
#[derive(Debug, Clone, Default)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    adj: Vec<BTreeSet<usize>>,
    edges: Vec<(usize, usize)>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.edges == other.edges
    }
}

impl Eq for Graph {}

fn validate_name(name: &str) -> Result<(), GraphError> {
    if name.is_empty() || name.contains('#') || name.chars().any(char::is_whitespace) {
        return Err(GraphError::InvalidName(name.to_string()));
    }
    Ok(())
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from an edge list; vertices appear in first-mention order.
    pub fn from_edges<'a, I>(edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut g = Graph::new();
        for (u, v) in edges {
            g.ensure_vertex(u)?;
            g.ensure_vertex(v)?;
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, name: &str) -> Result<usize, GraphError> {
        validate_name(name)?;
        if self.index.contains_key(name) {
            return Err(GraphError::DuplicateVertex(name.to_string()));
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        self.adj.push(BTreeSet::new());
        Ok(i)
    }

    /// Index of `name`, adding it if absent.
    pub fn ensure_vertex(&mut self, name: &str) -> Result<usize, GraphError> {
        match self.index.get(name) {
            Some(&i) => Ok(i),
            None => self.add_vertex(name),
        }
    }

    pub fn add_edge(&mut self, u: &str, v: &str) -> Result<(), GraphError> {
        let i = self.require(u)?;
        let j = self.require(v)?;
        self.add_edge_idx(i, j)
    }

    pub fn add_edge_idx(&mut self, i: usize, j: usize) -> Result<(), GraphError> {
        if i == j {
            return Err(GraphError::Loop(self.names[i].clone()));
        }
        if self.adj[i].contains(&j) {
            return Err(GraphError::DuplicateEdge(
                self.names[i].clone(),
                self.names[j].clone(),
            ));
        }
        self.adj[i].insert(j);
        self.adj[j].insert(i);
        self.edges.push((i, j));
        Ok(())
    }

    fn require(&self, name: &str) -> Result<usize, GraphError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn contains_vertex(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    /// Edges as index pairs, in insertion order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_id(&self, (i, j): (usize, usize)) -> EdgeId {
        EdgeId::new(self.names[i].as_str(), self.names[j].as_str())
    }

    pub fn edge_ids(&self) -> Vec<EdgeId> {
        self.edges.iter().map(|&e| self.edge_id(e)).collect()
    }

    pub fn has_edge(&self, u: &str, v: &str) -> bool {
        match (self.vertex_index(u), self.vertex_index(v)) {
            (Some(i), Some(j)) => self.adj[i].contains(&j),
            _ => false,
        }
    }

    pub fn has_edge_idx(&self, i: usize, j: usize) -> bool {
        self.adj[i].contains(&j)
    }

    /// Position of edge `e` in [`Graph::edges`].
    pub fn edge_position(&self, e: &EdgeId) -> Result<usize, GraphError> {
        let unknown = || GraphError::UnknownEdge(e.low.clone(), e.high.clone());
        let i = self.vertex_index(&e.low).ok_or_else(unknown)?;
        let j = self.vertex_index(&e.high).ok_or_else(unknown)?;
        self.edges
            .iter()
            .position(|&(a, b)| (a, b) == (i, j) || (a, b) == (j, i))
            .ok_or_else(unknown)
    }

    pub fn degree(&self, v: &str) -> Result<usize, GraphError> {
        Ok(self.adj[self.require(v)?].len())
    }

    pub fn degree_idx(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    /// Neighbours of `v` in vertex order.
    pub fn neighbors(&self, v: &str) -> Result<Vec<&str>, GraphError> {
        let i = self.require(v)?;
        Ok(self.adj[i]
            .iter()
            .map(|&j| self.names[j].as_str())
            .collect())
    }

    pub fn neighbor_indices(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[i].iter().copied()
    }

    /// Each unordered pair of distinct edges sharing a vertex, once, as
    /// positions into [`Graph::edges`] with the smaller position first.
    pub fn adjacent_edge_index_pairs(&self) -> Vec<(usize, usize)> {
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); self.names.len()];
        for (k, &(i, j)) in self.edges.iter().enumerate() {
            incident[i].push(k);
            incident[j].push(k);
        }
        // Two distinct simple edges share at most one endpoint, so walking
        // each vertex's incidence list yields every pair exactly once.
        let mut pairs = Vec::new();
        for list in &incident {
            for (x, &a) in list.iter().enumerate() {
                for &b in &list[x + 1..] {
                    pairs.push((a.min(b), a.max(b)));
                }
            }
        }
        pairs.sort_unstable();
        pairs
    }

    pub fn adjacent_edge_pairs(&self) -> Vec<(EdgeId, EdgeId)> {
        self.adjacent_edge_index_pairs()
            .into_iter()
            .map(|(a, b)| (self.edge_id(self.edges[a]), self.edge_id(self.edges[b])))
            .collect()
    }

    pub fn isolated_vertices(&self) -> Vec<&str> {
        (0..self.names.len())
            .filter(|&i| self.adj[i].is_empty())
            .map(|i| self.names[i].as_str())
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.names.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.names.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for &j in &self.adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Copy of the graph with the edge at position `k` removed.
    pub fn without_edge(&self, k: usize) -> Graph {
        let mut g = Graph::new();
        for name in &self.names {
            g.add_vertex(name).expect("names already valid");
        }
        for (x, &(i, j)) in self.edges.iter().enumerate() {
            if x != k {
                g.add_edge_idx(i, j).expect("edges already simple");
            }
        }
        g
    }

    /// Copy of the graph with vertex `v` and its incident edges removed.
    pub fn without_vertex(&self, v: &str) -> Result<Graph, GraphError> {
        let drop = self.require(v)?;
        let mut g = Graph::new();
        for (i, name) in self.names.iter().enumerate() {
            if i != drop {
                g.add_vertex(name).expect("names already valid");
            }
        }
        for &(i, j) in &self.edges {
            if i != drop && j != drop {
                g.add_edge(&self.names[i], &self.names[j])
                    .expect("edges already simple");
            }
        }
        Ok(g)
    }

    /// Every vertex and edge of `self` is present in `host`.
    pub fn is_subgraph_of(&self, host: &Graph) -> Result<(), GraphError> {
        for v in &self.names {
            host.require(v)?;
        }
        for &(i, j) in &self.edges {
            let (u, v) = (&self.names[i], &self.names[j]);
            if !host.has_edge(u, v) {
                return Err(GraphError::UnknownEdge(u.clone(), v.clone()));
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Graph, GraphError> {
        let mut g = Graph::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let content = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = content.split_whitespace().collect();
            let at = |e: GraphError| GraphError::Parse {
                line,
                reason: e.to_string(),
            };
            match tokens.as_slice() {
                [] => {}
                ["vertex", v] => {
                    g.ensure_vertex(v).map_err(at)?;
                }
                [u, v] => {
                    let i = g.ensure_vertex(u).map_err(at)?;
                    let j = g.ensure_vertex(v).map_err(at)?;
                    g.add_edge_idx(i, j).map_err(at)?;
                }
                [_] => {
                    return Err(GraphError::Parse {
                        line,
                        reason: "blank vertex name: an edge needs two endpoints".into(),
                    })
                }
                _ => {
                    return Err(GraphError::Parse {
                        line,
                        reason: format!(
                            "expected `<u> <v>` or `vertex <u>`, got {} tokens",
                            tokens.len()
                        ),
                    })
                }
            }
        }
        Ok(g)
    }

    /// Edge-list text that parses back to an identical graph: every vertex is
    /// declared first so that vertex order survives.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for name in &self.names {
            let _ = writeln!(out, "vertex {name}");
        }
        for &(i, j) in &self.edges {
            let _ = writeln!(out, "{} {}", self.names[i], self.names[j]);
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        GraphRepr {
            vertices: self.names.clone(),
            edges: self
                .edges
                .iter()
                .map(|&(i, j)| (self.names[i].clone(), self.names[j].clone()))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = GraphRepr::deserialize(deserializer)?;
        let mut g = Graph::new();
        for v in &repr.vertices {
            g.add_vertex(v).map_err(serde::de::Error::custom)?;
        }
        for (u, v) in &repr.edges {
            g.add_edge(u, v).map_err(serde::de::Error::custom)?;
        }
        Ok(g)
    }
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Renders `g` as a DOT `graph`. With labels, vertices carry `name {set}`
/// and edges carry their induced sumset.
pub fn emit_dot(g: &Graph, labels: Option<&SetLabeling>) -> Result<String, LabelingError> {
    let edge_labels = match labels {
        Some(f) => Some(induced_edge_labels(g, f)?),
        None => None,
    };
    let mut out = String::from("graph G {\n");
    for name in g.vertices() {
        match labels.and_then(|f| f.get(name)) {
            Some(set) => {
                let _ = writeln!(
                    out,
                    "  {} [label={}];",
                    dot_quote(name),
                    dot_quote(&format!("{name} {set}"))
                );
            }
            None => {
                let _ = writeln!(out, "  {};", dot_quote(name));
            }
        }
    }
    for (k, &(i, j)) in g.edges().iter().enumerate() {
        let _ = write!(
            out,
            "  {} -- {}",
            dot_quote(g.name(i)),
            dot_quote(g.name(j))
        );
        if let Some(el) = &edge_labels {
            let (_, set) = el.get_index(k).expect("one label per edge");
            let _ = write!(out, " [label={}]", dot_quote(&set.to_string()));
        }
        out.push_str(";\n");
    }
    out.push_str("}\n");
    Ok(out)
}
