use std::collections::BTreeSet;

use iasi_core::graph::Graph;
use iasi_core::harness::{connected_graphs, generate_corpus, HarnessOptions};
use iasi_core::verify;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for k in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..=k).map(move |slot| {
                    let mut q = p.clone();
                    q.insert(slot, k);
                    q
                })
            })
            .collect();
    }
    out
}

fn edge_set(g: &Graph, perm: &[usize]) -> BTreeSet<(usize, usize)> {
    g.edges()
        .iter()
        .map(|&(i, j)| (perm[i].min(perm[j]), perm[i].max(perm[j])))
        .collect()
}

fn automorphisms(g: &Graph, perms: &[Vec<usize>]) -> usize {
    let id = edge_set(g, &(0..g.vertex_count()).collect::<Vec<_>>());
    perms.iter().filter(|p| edge_set(g, p) == id).count()
}

fn isomorphic(a: &Graph, b: &Graph, perms: &[Vec<usize>]) -> bool {
    a.vertex_count() == b.vertex_count() && a.edge_count() == b.edge_count() && {
        let target = edge_set(b, &(0..b.vertex_count()).collect::<Vec<_>>());
        perms.iter().any(|p| edge_set(a, p) == target)
    }
}

/// Labeled connected graphs on `n` vertices, counted over all edge subsets.
fn labeled_connected(n: usize) -> usize {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    (0u64..1 << pairs.len())
        .filter(|mask| {
            let mut reach = 1u32;
            loop {
                let mut next = reach;
                for (k, &(i, j)) in pairs.iter().enumerate() {
                    if mask >> k & 1 == 1 && (reach >> i & 1 == 1 || reach >> j & 1 == 1) {
                        next |= 1 << i | 1 << j;
                    }
                }
                if next == reach {
                    break;
                }
                reach = next;
            }
            reach == (1 << n) - 1
        })
        .count()
}

#[test]
fn counts_match_known_values() {
    let graphs = connected_graphs(6).unwrap();
    let by_order: Vec<usize> = (2..=6)
        .map(|n| {
            graphs
                .iter()
                .filter(|g| g.graph.vertex_count() == n)
                .count()
        })
        .collect();
    assert_eq!(by_order, [1, 2, 6, 21, 112]);
    assert_eq!(connected_graphs(3).unwrap().len(), 3);
    assert_eq!(connected_graphs(4).unwrap().len(), 9);
}

#[test]
fn orbit_sizes_add_up_to_labeled_counts() {
    // Each unlabeled graph accounts for n!/|Aut| labeled ones; the sum over
    // the list must equal a direct count of labeled connected graphs.
    let graphs = connected_graphs(5).unwrap();
    for n in 2..=5 {
        let perms = permutations(n);
        let from_list: usize = graphs
            .iter()
            .filter(|g| g.graph.vertex_count() == n)
            .map(|g| perms.len() / automorphisms(&g.graph, &perms))
            .sum();
        assert_eq!(from_list, labeled_connected(n), "n = {n}");
    }
    assert_eq!(labeled_connected(5), 728);
}

#[test]
fn no_two_graphs_are_isomorphic_up_to_four_vertices() {
    let graphs = connected_graphs(4).unwrap();
    for (x, a) in graphs.iter().enumerate() {
        assert!(a.graph.is_connected());
        let perms = permutations(a.graph.vertex_count());
        for b in &graphs[x + 1..] {
            assert!(
                !isomorphic(&a.graph, &b.graph, &perms),
                "{} ~ {}",
                a.name,
                b.name
            );
        }
    }
}

#[test]
fn graph_list_ignores_the_seed() {
    let a = generate_corpus(&HarnessOptions::new(4, 1)).unwrap();
    let b = generate_corpus(&HarnessOptions::new(4, 99)).unwrap();
    let names = |c: &iasi_core::harness::Corpus| -> Vec<(String, Graph)> {
        c.graphs()
            .map(|g| (g.name.clone(), g.graph.clone()))
            .collect()
    };
    assert_eq!(names(&a), names(&b));
    assert_ne!(a.entries, b.entries, "seeded samples should differ");
}

#[test]
fn same_seed_same_corpus() {
    let opts = HarnessOptions::new(5, 42);
    assert_eq!(
        generate_corpus(&opts).unwrap(),
        generate_corpus(&opts).unwrap()
    );
}

#[test]
fn every_corpus_labeling_is_a_verified_iasi() {
    let corpus = generate_corpus(&HarnessOptions::new(5, 0)).unwrap();
    assert_eq!(corpus.enumerated_count(), 30);
    for entry in &corpus.entries {
        let sources: Vec<&str> = entry.labelings.iter().map(|l| l.source.as_str()).collect();
        assert!(sources.contains(&"canonical"), "{}", entry.graph.name);
        for l in &entry.labelings {
            let r = verify(&entry.graph.graph, &l.labeling).unwrap();
            assert!(r.is_iasi, "{} {}", entry.graph.name, l.source);
            if l.source.ends_with(":weak") || l.source.contains(":weak:") {
                assert!(r.is_weak());
            }
            if l.source.ends_with(":strong") || l.source.contains(":strong:") {
                assert!(r.is_strong());
            }
        }
    }
}

#[test]
fn families_extend_past_the_enumeration() {
    let corpus = generate_corpus(&HarnessOptions::new(3, 0)).unwrap();
    let families: Vec<&str> = corpus
        .graphs()
        .filter(|g| !g.enumerated)
        .map(|g| g.name.as_str())
        .collect();
    assert_eq!(
        families,
        [
            "path4",
            "cycle4",
            "star4",
            "complete4",
            "path5",
            "cycle5",
            "star5",
            "complete5"
        ]
    );
    assert!(generate_corpus(&HarnessOptions::new(7, 0)).is_err());
}
