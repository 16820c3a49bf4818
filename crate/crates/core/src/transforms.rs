//! Derived graphs and the labelings they inherit.
//!
//! Naming of new vertices:
//! - line and total graphs: an edge `{u, v}` of `G` becomes `e:<u>-<v>`,
//!   endpoints in [`EdgeId`] order;
//! - contraction of `{u, v}`: the merged vertex is `m:<u>+<v>`.
//!
//! Induced labelings are never trusted: whenever one is built, it is run
//! through [`verify`] and the report travels with the result.

use std::collections::HashSet;
use std::fmt;
use std::fmt::Write as _;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeId, Graph, GraphError};
use crate::labeling::{
    induced_edge_labels, verify, LabelingError, SetLabeling, VerificationReport,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Labeling(#[from] LabelingError),
    #[error("vertex {vertex:?} has degree {degree}, reduction needs degree 2")]
    NotDegreeTwo { vertex: String, degree: usize },
    #[error("neighbours {0:?} and {1:?} are already adjacent")]
    NeighborsAdjacent(String, String),
    #[error("derived vertex name {0:?} collides with an existing vertex")]
    NameCollision(String),
}

/// Where a vertex of a derived graph came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Origin {
    Vertex { vertex: String },
    Edge { edge: EdgeId },
    Merged { left: String, right: String },
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Vertex { vertex } => write!(f, "vertex {vertex}"),
            Origin::Edge { edge } => write!(f, "edge {} {}", edge.low(), edge.high()),
            Origin::Merged { left, right } => write!(f, "merged {left} {right}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformResult {
    pub graph: Graph,
    pub provenance: IndexMap<String, Origin>,
    pub induced_labeling: Option<SetLabeling>,
    pub report: Option<VerificationReport>,
}

impl TransformResult {
    /// Provenance sidecar text: `<vertex>: vertex <v>` / `edge <u> <v>` /
    /// `merged <u> <v>`.
    pub fn provenance_text(&self) -> String {
        let mut out = String::new();
        for (v, origin) in &self.provenance {
            let _ = writeln!(out, "{v}: {origin}");
        }
        out
    }

    fn attach(mut self, labeling: Option<SetLabeling>) -> Result<Self, TransformError> {
        if let Some(f) = labeling {
            self.report = Some(verify(&self.graph, &f)?);
            self.induced_labeling = Some(f);
        }
        Ok(self)
    }
}

pub fn edge_vertex_name(e: &EdgeId) -> String {
    format!("e:{}-{}", e.low(), e.high())
}

pub fn merged_vertex_name(e: &EdgeId) -> String {
    format!("m:{}+{}", e.low(), e.high())
}

/// `L(G)`: one vertex per edge, adjacent iff the edges share an endpoint.
pub fn line_graph(g: &Graph) -> TransformResult {
    let mut lg = Graph::new();
    let mut provenance = IndexMap::new();
    for e in g.edge_ids() {
        let name = edge_vertex_name(&e);
        lg.add_vertex(&name)
            .expect("edge names are unique and valid");
        provenance.insert(name, Origin::Edge { edge: e });
    }
    for (a, b) in g.adjacent_edge_index_pairs() {
        lg.add_edge_idx(a, b)
            .expect("each adjacent pair listed once");
    }
    TransformResult {
        graph: lg,
        provenance,
        induced_labeling: None,
        report: None,
    }
}

/// Labels each vertex of `L(G)` with the edge label `f(u) + f(v)`.
pub fn induce_line_labeling(g: &Graph, f: &SetLabeling) -> Result<SetLabeling, TransformError> {
    Ok(induced_edge_labels(g, f)?
        .into_iter()
        .map(|(e, set)| (edge_vertex_name(&e), set))
        .collect())
}

/// Line graph plus, when `f` is given, the induced labeling and its report.
pub fn line_graph_labeled(
    g: &Graph,
    f: Option<&SetLabeling>,
) -> Result<TransformResult, TransformError> {
    let labeling = f.map(|f| induce_line_labeling(g, f)).transpose()?;
    line_graph(g).attach(labeling)
}

/// `T(G)`: vertices of `G` followed by one vertex per edge. Edges are the
/// edges of `G`, then adjacent-edge pairs, then vertex-edge incidences.
pub fn total_graph(g: &Graph) -> Result<TransformResult, TransformError> {
    let mut tg = Graph::new();
    let mut provenance = IndexMap::new();
    for v in g.vertices() {
        tg.add_vertex(v)?;
        provenance.insert(v.clone(), Origin::Vertex { vertex: v.clone() });
    }
    let n = g.vertex_count();
    for e in g.edge_ids() {
        let name = edge_vertex_name(&e);
        tg.add_vertex(&name)
            .map_err(|_| TransformError::NameCollision(name.clone()))?;
        provenance.insert(name, Origin::Edge { edge: e });
    }
    for &(i, j) in g.edges() {
        tg.add_edge_idx(i, j)?;
    }
    for (a, b) in g.adjacent_edge_index_pairs() {
        tg.add_edge_idx(n + a, n + b)?;
    }
    for (k, &(i, j)) in g.edges().iter().enumerate() {
        tg.add_edge_idx(i, n + k)?;
        tg.add_edge_idx(j, n + k)?;
    }
    Ok(TransformResult {
        graph: tg,
        provenance,
        induced_labeling: None,
        report: None,
    })
}

/// Copies `f` onto vertex-origin vertices and `f(u) + f(v)` onto edge-origin
/// vertices of `T(G)`.
pub fn induce_total_labeling(g: &Graph, f: &SetLabeling) -> Result<SetLabeling, TransformError> {
    let labels = f.labels_for(g)?;
    let mut out: SetLabeling = g
        .vertices()
        .iter()
        .cloned()
        .zip(labels.into_iter().cloned())
        .collect();
    for (e, set) in induced_edge_labels(g, f)? {
        out.insert(edge_vertex_name(&e), set);
    }
    Ok(out)
}

pub fn total_graph_labeled(
    g: &Graph,
    f: Option<&SetLabeling>,
) -> Result<TransformResult, TransformError> {
    let result = total_graph(g)?;
    let labeling = f.map(|f| induce_total_labeling(g, f)).transpose()?;
    result.attach(labeling)
}

/// `G∘e`: merges the endpoints of `e` into `m:<u>+<v>`, placed where the
/// earlier endpoint stood. Parallel edges coalesce and loops vanish. With
/// `f`, the merged vertex is labeled `f(u) + f(v)`.
pub fn contract_edge(
    g: &Graph,
    e: &EdgeId,
    f: Option<&SetLabeling>,
) -> Result<TransformResult, TransformError> {
    let pos = g.edge_position(e)?;
    let (a, b) = g.edges()[pos];
    let (keep, drop) = (a.min(b), a.max(b));
    let merged = merged_vertex_name(e);
    if g.contains_vertex(&merged) {
        return Err(TransformError::NameCollision(merged));
    }

    let mut out = Graph::new();
    let mut provenance = IndexMap::new();
    // old index -> new index
    let mut remap = vec![0usize; g.vertex_count()];
    for (i, name) in g.vertices().iter().enumerate() {
        if i == drop {
            continue;
        }
        let (new_name, origin) = if i == keep {
            (
                merged.clone(),
                Origin::Merged {
                    left: e.low().to_string(),
                    right: e.high().to_string(),
                },
            )
        } else {
            (
                name.clone(),
                Origin::Vertex {
                    vertex: name.clone(),
                },
            )
        };
        remap[i] = out.add_vertex(&new_name)?;
        provenance.insert(new_name, origin);
    }
    remap[drop] = remap[keep];

    let mut seen = HashSet::new();
    for &(i, j) in g.edges() {
        let (x, y) = (remap[i], remap[j]);
        if x == y || !seen.insert((x.min(y), x.max(y))) {
            continue;
        }
        out.add_edge_idx(x, y)?;
    }

    let labeling = match f {
        Some(f) => {
            let labels = f.labels_for(g)?;
            let merged_label = labels[keep]
                .sumset(labels[drop])
                .map_err(LabelingError::from)?;
            let mut induced = SetLabeling::new();
            for (i, name) in g.vertices().iter().enumerate() {
                if i == keep {
                    induced.insert(merged.clone(), merged_label.clone());
                } else if i != drop {
                    induced.insert(name.clone(), labels[i].clone());
                }
            }
            Some(induced)
        }
        None => None,
    };
    TransformResult {
        graph: out,
        provenance,
        induced_labeling: None,
        report: None,
    }
    .attach(labeling)
}

/// Removes a degree-2 vertex `v` whose neighbours `u`, `w` are non-adjacent
/// and joins `u` to `w` (the new edge goes last). With `f`, the labeling is
/// `f` restricted to the surviving vertices.
pub fn topological_reduction(
    g: &Graph,
    v: &str,
    f: Option<&SetLabeling>,
) -> Result<TransformResult, TransformError> {
    let degree = g.degree(v)?;
    if degree != 2 {
        return Err(TransformError::NotDegreeTwo {
            vertex: v.to_string(),
            degree,
        });
    }
    let nbrs = g.neighbors(v)?;
    let (u, w) = (nbrs[0], nbrs[1]);
    if g.has_edge(u, w) {
        return Err(TransformError::NeighborsAdjacent(
            u.to_string(),
            w.to_string(),
        ));
    }
    let mut out = g.without_vertex(v)?;
    out.add_edge(u, w)?;
    let provenance = out
        .vertices()
        .iter()
        .map(|x| (x.clone(), Origin::Vertex { vertex: x.clone() }))
        .collect();
    let labeling = match f {
        Some(f) => {
            let labels = f.labels_for(g)?;
            Some(
                out.vertices()
                    .iter()
                    .map(|x| (x.clone(), labels[g.vertex_index(x).expect("kept")].clone()))
                    .collect(),
            )
        }
        None => None,
    };
    TransformResult {
        graph: out,
        provenance,
        induced_labeling: None,
        report: None,
    }
    .attach(labeling)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labeling::canonical_iasi;
    use crate::setcore::{IntSet, DEFAULT_UNIVERSE_BOUND as B};

    fn lab(pairs: &[(&str, &[u32])]) -> SetLabeling {
        pairs
            .iter()
            .map(|(v, xs)| (v.to_string(), IntSet::new(xs.iter().copied(), B).unwrap()))
            .collect()
    }

    fn s(xs: &[u32]) -> IntSet {
        IntSet::new(xs.iter().copied(), B).unwrap()
    }

    #[test]
    fn line_graph_shapes() {
        let lp3 = line_graph(&Graph::parse("a b\nb c").unwrap());
        assert_eq!(lp3.graph.vertices(), ["e:a-b", "e:b-c"]);
        assert_eq!(lp3.graph.edge_count(), 1);

        let lk3 = line_graph(&Graph::parse("a b\nb c\na c").unwrap());
        assert_eq!((lk3.graph.vertex_count(), lk3.graph.edge_count()), (3, 3));

        let empty = line_graph(&Graph::parse("vertex a").unwrap());
        assert_eq!(empty.graph.vertex_count(), 0);
    }

    #[test]
    fn line_labeling() {
        let p3 = Graph::parse("a b\nb c").unwrap();
        let f = lab(&[("a", &[1]), ("b", &[2]), ("c", &[4])]);
        let r = line_graph_labeled(&p3, Some(&f)).unwrap();
        let fl = r.induced_labeling.as_ref().unwrap();
        assert_eq!(fl.get("e:a-b"), Some(&s(&[3])));
        assert_eq!(fl.get("e:b-c"), Some(&s(&[6])));
        assert!(r.report.unwrap().is_iasi);
    }

    #[test]
    fn total_graph_shapes() {
        let tk2 = total_graph(&Graph::parse("a b").unwrap()).unwrap();
        assert_eq!(tk2.graph.vertices(), ["a", "b", "e:a-b"]);
        assert_eq!(tk2.graph.edge_count(), 3);
        assert_eq!(
            tk2.provenance_text(),
            "a: vertex a\nb: vertex b\ne:a-b: edge a b\n"
        );

        let g = Graph::parse("a b\nb c\nc d\nd a\na c\nd e").unwrap();
        let t = total_graph(&g).unwrap();
        assert_eq!(t.graph.vertex_count(), g.vertex_count() + g.edge_count());
        assert_eq!(
            t.graph.edge_count(),
            3 * g.edge_count() + g.adjacent_edge_pairs().len()
        );

        let clash = Graph::parse("a b\nvertex e:a-b").unwrap();
        assert!(matches!(
            total_graph(&clash),
            Err(TransformError::NameCollision(_))
        ));
    }

    #[test]
    fn total_labeling() {
        let k2 = Graph::parse("a b").unwrap();
        let r = total_graph_labeled(&k2, Some(&lab(&[("a", &[1]), ("b", &[2])]))).unwrap();
        let ft = r.induced_labeling.as_ref().unwrap();
        assert_eq!(ft.get("e:a-b"), Some(&s(&[3])));
        let rep = r.report.unwrap();
        let labels: Vec<_> = rep.per_edge.iter().map(|e| e.label.clone()).collect();
        assert_eq!(labels, vec![s(&[3]), s(&[4]), s(&[5])]);
        assert!(rep.is_iasi);
    }

    #[test]
    fn total_labeling_vertex_clash() {
        // f(c) = {3} = f(a) + f(b)
        let g = Graph::parse("a b\nb c").unwrap();
        let r =
            total_graph_labeled(&g, Some(&lab(&[("a", &[1]), ("b", &[2]), ("c", &[3])]))).unwrap();
        let rep = r.report.unwrap();
        assert!(!rep.vertex_injective.holds);
        assert_eq!(
            rep.vertex_injective.witness,
            Some(("c".into(), "e:a-b".into()))
        );
    }

    #[test]
    fn contraction() {
        let k3 = Graph::parse("a b\nb c\na c").unwrap();
        let r = contract_edge(&k3, &EdgeId::new("a", "b"), None).unwrap();
        assert_eq!(r.graph.vertices(), ["m:a+b", "c"]);
        assert_eq!(r.graph.edge_count(), 1);

        let p3 = Graph::parse("a b\nb c").unwrap();
        let f = lab(&[("a", &[1]), ("b", &[2]), ("c", &[4])]);
        let r = contract_edge(&p3, &EdgeId::new("b", "a"), Some(&f)).unwrap();
        let fc = r.induced_labeling.as_ref().unwrap();
        assert_eq!(fc.get("m:a+b"), Some(&s(&[3])));
        let rep = r.report.as_ref().unwrap();
        assert_eq!(rep.per_edge[0].label, s(&[7]));
        assert!(rep.is_iasi);
        assert!(matches!(r.provenance["m:a+b"], Origin::Merged { .. }));

        let f = lab(&[("a", &[1]), ("b", &[2]), ("c", &[3])]);
        let r = contract_edge(&k3, &EdgeId::new("a", "b"), Some(&f)).unwrap();
        let rep = r.report.unwrap();
        assert!(!rep.vertex_injective.holds);
        assert_eq!(
            rep.vertex_injective.witness,
            Some(("c".into(), "m:a+b".into()))
        );

        assert!(contract_edge(&p3, &EdgeId::new("a", "c"), None).is_err());
    }

    #[test]
    fn contraction_edge_count() {
        // |E(G∘e)| = |E| - 1 - common neighbours of the endpoints
        let g = Graph::parse("a b\nb c\nc d\nd a\na c\nd e\nb e").unwrap();
        for (k, e) in g.edge_ids().into_iter().enumerate() {
            let (i, j) = g.edges()[k];
            let common = (0..g.vertex_count())
                .filter(|&x| g.has_edge_idx(x, i) && g.has_edge_idx(x, j))
                .count();
            let r = contract_edge(&g, &e, None).unwrap();
            assert_eq!(r.graph.edge_count(), g.edge_count() - 1 - common, "{e}");
            assert_eq!(r.graph.vertex_count(), g.vertex_count() - 1);
        }
    }

    #[test]
    fn reductions() {
        let p3 = Graph::parse("a b\nb c").unwrap();
        let r = topological_reduction(&p3, "b", None).unwrap();
        assert_eq!(r.graph, Graph::parse("a c").unwrap());

        let c4 = Graph::parse("a b\nb c\nc d\nd a").unwrap();
        let f = canonical_iasi(&c4, B).unwrap();
        let r = topological_reduction(&c4, "a", Some(&f)).unwrap();
        assert_eq!((r.graph.vertex_count(), r.graph.edge_count()), (3, 3));
        assert!(r.graph.has_edge("b", "d"));
        let rep = r.report.unwrap();
        assert_eq!(rep.edge(&EdgeId::new("b", "d")).unwrap().label, s(&[10]));

        let star = Graph::parse("o x\no y\no z").unwrap();
        assert!(matches!(
            topological_reduction(&star, "o", None),
            Err(TransformError::NotDegreeTwo { degree: 3, .. })
        ));
        let k3 = Graph::parse("a b\nb c\na c").unwrap();
        assert!(matches!(
            topological_reduction(&k3, "a", None),
            Err(TransformError::NeighborsAdjacent(..))
        ));
    }
}
