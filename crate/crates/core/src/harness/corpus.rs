//! Small-graph corpus: every connected graph up to `n_max` vertices, a few
//! larger named families, and a set of verified IASIs for each graph.
//!
//! Graphs on `n` vertices are grown from those on `n - 1` by attaching a new
//! vertex to every non-empty subset of old vertices; duplicates are removed by
//! a canonical code (the smallest edge bitmask over all vertex permutations).
//! Every connected graph has a vertex whose removal leaves it connected, so
//! this reaches all of them.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::labeling::{canonical_iasi, sidon_iasi, verify, SetLabeling};
use crate::search::{minimal_ground_set, MinimizeOptions, Mode};
use crate::setcore::IntSet;

use super::{HarnessError, HarnessOptions};

/// Largest `n_max` the enumerator accepts.
pub const MAX_ENUMERATED_ORDER: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusGraph {
    pub name: String,
    pub graph: Graph,
    /// Part of the exhaustive enumeration, as opposed to a named family.
    pub enumerated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusLabeling {
    /// `canonical`, `sidon`, `search:<mode>` or `sample:<mode>:<k>`.
    pub source: String,
    pub labeling: SetLabeling,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub graph: CorpusGraph,
    /// Verified IASIs only.
    pub labelings: Vec<CorpusLabeling>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    pub n_max: usize,
    pub seed: u64,
    pub entries: Vec<CorpusEntry>,
}

impl Corpus {
    pub fn graphs(&self) -> impl Iterator<Item = &CorpusGraph> {
        self.entries.iter().map(|e| &e.graph)
    }

    pub fn enumerated_count(&self) -> usize {
        self.graphs().filter(|g| g.enumerated).count()
    }

    pub fn labeling_count(&self) -> usize {
        self.entries.iter().map(|e| e.labelings.len()).sum()
    }
}

fn pair_bit(i: usize, j: usize) -> u32 {
    let (a, b) = (i.min(j), i.max(j));
    (b * (b - 1) / 2 + a) as u32
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for slot in 0..n {
            let mut q = p.clone();
            q.insert(slot, n - 1);
            out.push(q);
        }
    }
    out
}

fn canonical_code(n: usize, edges: &[(usize, usize)], perms: &[Vec<usize>]) -> u64 {
    perms
        .iter()
        .map(|p| {
            edges
                .iter()
                .fold(0u64, |acc, &(i, j)| acc | 1 << pair_bit(p[i], p[j]))
        })
        .min()
        .unwrap_or(0)
        & if n < 2 { 0 } else { u64::MAX }
}

fn edges_of_code(n: usize, code: u64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for j in 1..n {
        for i in 0..j {
            if code & (1 << pair_bit(i, j)) != 0 {
                edges.push((i, j));
            }
        }
    }
    edges
}

fn vertex_name(i: usize) -> String {
    if i < 26 {
        char::from(b'a' + i as u8).to_string()
    } else {
        format!("v{i}")
    }
}

fn graph_of(n: usize, edges: &[(usize, usize)]) -> Graph {
    let mut g = Graph::new();
    for i in 0..n {
        g.add_vertex(&vertex_name(i)).expect("fresh names");
    }
    for &(i, j) in edges {
        g.add_edge_idx(i, j).expect("simple");
    }
    g
}

/// Canonical codes of all connected graphs on exactly `n` vertices, for
/// `n` in `2..=n_max`, ascending by `(n, edge count, code)`.
fn connected_codes(n_max: usize) -> Vec<(usize, u64)> {
    let mut out = Vec::new();
    // K2 seeds the growth.
    let mut layer: BTreeSet<u64> = BTreeSet::from([1]);
    for n in 2..=n_max {
        if n > 2 {
            let perms = permutations(n);
            let mut next = BTreeSet::new();
            for &code in &layer {
                let base = edges_of_code(n - 1, code);
                for subset in 1u32..(1 << (n - 1)) {
                    let mut edges = base.clone();
                    edges.extend(
                        (0..n - 1)
                            .filter(|i| subset & (1 << i) != 0)
                            .map(|i| (i, n - 1)),
                    );
                    next.insert(canonical_code(n, &edges, &perms));
                }
            }
            layer = next;
        }
        let mut codes: Vec<u64> = layer.iter().copied().collect();
        codes.sort_by_key(|c| (c.count_ones(), *c));
        out.extend(codes.into_iter().map(|c| (n, c)));
    }
    out
}

/// All connected graphs with 2..=`n_max` vertices, pairwise non-isomorphic,
/// named `c<n>_<k>` and labelled `a, b, c, ...`.
pub fn connected_graphs(n_max: usize) -> Result<Vec<CorpusGraph>, HarnessError> {
    if n_max > MAX_ENUMERATED_ORDER {
        return Err(HarnessError::OrderTooLarge(n_max));
    }
    let mut counter = 0;
    let mut last_n = 0;
    Ok(connected_codes(n_max)
        .into_iter()
        .map(|(n, code)| {
            if n != last_n {
                counter = 0;
                last_n = n;
            }
            counter += 1;
            CorpusGraph {
                name: format!("c{n}_{counter:02}"),
                graph: graph_of(n, &edges_of_code(n, code)),
                enumerated: true,
            }
        })
        .collect())
}

/// Paths, cycles, stars and complete graphs on `lo..=hi` vertices.
pub fn named_families(lo: usize, hi: usize) -> Vec<CorpusGraph> {
    let mut out = Vec::new();
    for n in lo.max(2)..=hi {
        let path: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        let mut cycle = path.clone();
        if n >= 3 {
            cycle.push((0, n - 1));
        }
        let star: Vec<(usize, usize)> = (1..n).map(|i| (0, i)).collect();
        let complete: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        let mut families = vec![("path", path), ("star", star), ("complete", complete)];
        if n >= 3 {
            families.insert(1, ("cycle", cycle));
        }
        for (family, edges) in families {
            out.push(CorpusGraph {
                name: format!("{family}{n}"),
                graph: graph_of(n, &edges),
                enumerated: false,
            });
        }
    }
    out
}

fn random_set<R: Rng>(rng: &mut R, size: usize, pool: u32, bound: u32) -> IntSet {
    let mut all: Vec<u32> = (0..pool).collect();
    all.shuffle(rng);
    IntSet::new(all.into_iter().take(size), bound).expect("pool within bound")
}

fn sample_labeling<R: Rng>(rng: &mut R, g: &Graph, mode: Mode, bound: u32) -> SetLabeling {
    match mode {
        Mode::Iasi => g
            .vertices()
            .iter()
            .map(|v| {
                let size = rng.random_range(1..=3);
                (v.clone(), random_set(rng, size, 12, bound))
            })
            .collect(),
        Mode::Weak => {
            // Non-singleton labels only on an independent set, so every edge
            // keeps a singleton endpoint.
            let mut order: Vec<usize> = (0..g.vertex_count()).collect();
            order.shuffle(rng);
            let mut multi = vec![false; g.vertex_count()];
            for i in order {
                if rng.random_bool(0.6) && !g.neighbor_indices(i).any(|j| multi[j]) {
                    multi[i] = true;
                }
            }
            g.vertices()
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let size = if multi[i] { rng.random_range(2..=3) } else { 1 };
                    (v.clone(), random_set(rng, size, 12, bound))
                })
                .collect()
        }
        Mode::Strong => g
            .vertices()
            .iter()
            .map(|v| {
                let size = rng.random_range(1..=2);
                (v.clone(), random_set(rng, size, 16, bound))
            })
            .collect(),
    }
}

fn labelings_for(
    index: usize,
    cg: &CorpusGraph,
    opts: &HarnessOptions,
) -> Result<Vec<CorpusLabeling>, HarnessError> {
    let g = &cg.graph;
    let bound = opts.universe_bound;
    let mut out: Vec<CorpusLabeling> = Vec::new();
    let push = |source: String, labeling: SetLabeling, out: &mut Vec<CorpusLabeling>| {
        if !out.iter().any(|c| c.labeling == labeling) {
            out.push(CorpusLabeling { source, labeling });
        }
    };

    push("canonical".into(), canonical_iasi(g, bound)?, &mut out);
    push("sidon".into(), sidon_iasi(g, bound)?, &mut out);

    if cg.enumerated {
        for mode in Mode::ALL {
            let mut mo = MinimizeOptions::new(mode);
            mo.universe_bound = bound;
            mo.node_budget = Some(opts.node_budget);
            mo.max_ground = crate::search::ground_set_lower_bound(g.vertex_count())? + 3;
            let found = minimal_ground_set(g, &mo)?;
            if let Some(f) = found.outcome.labeling {
                push(format!("search:{mode}"), f, &mut out);
            }
        }
    }

    let mut rng =
        ChaCha8Rng::seed_from_u64(opts.seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    for mode in Mode::ALL {
        let mut kept = 0;
        for _ in 0..opts.sample_attempts {
            if kept == opts.samples_per_graph {
                break;
            }
            let f = sample_labeling(&mut rng, g, mode, bound);
            if mode.accepts(&verify(g, &f)?) {
                kept += 1;
                push(format!("sample:{mode}:{kept}"), f, &mut out);
            }
        }
    }
    Ok(out)
}

/// Builds the corpus for `opts.n_max` and `opts.seed`. The graph list does
/// not depend on the seed; only the sampled labelings do.
pub fn generate_corpus(opts: &HarnessOptions) -> Result<Corpus, HarnessError> {
    let mut graphs = connected_graphs(opts.n_max)?;
    graphs.extend(named_families(opts.n_max + 1, opts.family_max));
    let entries = graphs
        .into_par_iter()
        .enumerate()
        .map(|(i, cg)| {
            let labelings = labelings_for(i, &cg, opts)?;
            Ok(CorpusEntry {
                graph: cg,
                labelings,
            })
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    Ok(Corpus {
        n_max: opts.n_max,
        seed: opts.seed,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_counts() {
        let counts: Vec<usize> = (2..=6)
            .map(|n| {
                connected_graphs(6)
                    .unwrap()
                    .iter()
                    .filter(|g| g.graph.vertex_count() == n)
                    .count()
            })
            .collect();
        assert_eq!(counts, [1, 2, 6, 21, 112]);
    }

    #[test]
    fn small_corpus_listing() {
        let gs = connected_graphs(3).unwrap();
        let shapes: Vec<(usize, usize)> = gs
            .iter()
            .map(|g| (g.graph.vertex_count(), g.graph.edge_count()))
            .collect();
        assert_eq!(shapes, [(2, 1), (3, 2), (3, 3)]);
        assert!(gs.iter().all(|g| g.graph.is_connected()));
        assert!(connected_graphs(7).is_err());
    }

    #[test]
    fn families() {
        let fam = named_families(3, 4);
        let names: Vec<&str> = fam.iter().map(|g| g.name.as_str()).collect();
        assert_eq!(
            names,
            [
                "path3",
                "cycle3",
                "star3",
                "complete3",
                "path4",
                "cycle4",
                "star4",
                "complete4"
            ]
        );
        assert_eq!(fam[7].graph.edge_count(), 6);
    }
}
