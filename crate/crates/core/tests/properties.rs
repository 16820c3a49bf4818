use std::collections::BTreeSet;

use proptest::prelude::*;

use iasi_core::graph::{EdgeId, Graph};
use iasi_core::labeling::{canonical_iasi, restrict, verify, SetLabeling, VerificationReport};
use iasi_core::search::{
    find_labeling, ground_set_lower_bound, minimal_ground_set, uniform_ground_set_lower_bound,
    MinimizeOptions, Mode, SearchSpec, Status,
};
use iasi_core::setcore::{compatibility_index, max_class_size, neglecting_number, IntSet};
use iasi_core::transforms::{
    contract_edge, line_graph_labeled, topological_reduction, total_graph_labeled,
};

fn build(n: usize, mask: u32) -> Graph {
    let mut g = Graph::new();
    for i in 0..n {
        g.add_vertex(&format!("v{i}")).unwrap();
    }
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if mask >> k & 1 == 1 {
                g.add_edge_idx(i, j).unwrap();
            }
            k += 1;
        }
    }
    g
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, any::<u32>()).prop_map(|(n, mask)| build(n, mask))
}

fn arb_set() -> impl Strategy<Value = IntSet> {
    prop::collection::btree_set(0u32..24, 1..=3).prop_map(|s| IntSet::new(s, 4096).unwrap())
}

/// A graph with a random labeling; about half are IASIs.
fn arb_labeled(max_n: usize) -> impl Strategy<Value = (Graph, SetLabeling)> {
    arb_graph(max_n)
        .prop_flat_map(|g| {
            let n = g.vertex_count();
            (Just(g), prop::collection::vec(arb_set(), n), any::<bool>())
        })
        .prop_map(|(g, sets, canonical)| {
            let f = if canonical {
                canonical_iasi(&g, 4096).unwrap()
            } else {
                g.vertices().iter().cloned().zip(sets).collect()
            };
            (g, f)
        })
}

fn degree_pairs(g: &Graph) -> usize {
    (0..g.vertex_count())
        .map(|i| {
            let d = g.degree_idx(i);
            d * d.saturating_sub(1) / 2
        })
        .sum()
}

fn edge_ends(g: &Graph, e: &EdgeId) -> (usize, usize) {
    (
        g.vertex_index(e.low()).unwrap(),
        g.vertex_index(e.high()).unwrap(),
    )
}

fn assert_simple(g: &Graph) {
    let mut seen = BTreeSet::new();
    for &(i, j) in g.edges() {
        assert_ne!(i, j);
        assert!(seen.insert((i.min(j), i.max(j))));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn graph_text_and_json_round_trip(g in arb_graph(8)) {
        let text = g.to_edge_list();
        let again = Graph::parse(&text).unwrap();
        prop_assert_eq!(&again, &g);
        prop_assert_eq!(Graph::parse(&again.to_edge_list()).unwrap(), again);
        let json = serde_json::to_string(&g).unwrap();
        prop_assert_eq!(serde_json::from_str::<Graph>(&json).unwrap(), g);
    }

    #[test]
    fn adjacent_edge_pairs_match_brute_force(g in arb_graph(8)) {
        let edges = g.edges();
        let mut brute = Vec::new();
        for x in 0..edges.len() {
            for y in x + 1..edges.len() {
                let (a, b) = edges[x];
                let (c, d) = edges[y];
                if a == c || a == d || b == c || b == d {
                    brute.push((x, y));
                }
            }
        }
        prop_assert_eq!(brute.len(), degree_pairs(&g));
        prop_assert_eq!(g.adjacent_edge_index_pairs(), brute);
    }

    #[test]
    fn edge_report_identities((g, f) in arb_labeled(7)) {
        let r = verify(&g, &f).unwrap();
        for e in &r.per_edge {
            let a = f.get(e.edge.low()).unwrap();
            let b = f.get(e.edge.high()).unwrap();
            prop_assert_eq!(e.set_indexing_number, compatibility_index(a, b).unwrap());
            prop_assert_eq!(e.set_indexing_number, a.len() * b.len() - neglecting_number(a, b).unwrap());
            if e.class.is_weak() || e.class.is_strong() {
                prop_assert_eq!(max_class_size(a, b).unwrap(), 1);
            }
            prop_assert_eq!(e.class.is_strong(), max_class_size(a, b).unwrap() == 1);
        }
    }

    #[test]
    fn report_json_round_trips((g, f) in arb_labeled(6)) {
        let r = verify(&g, &f).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        prop_assert_eq!(serde_json::from_str::<VerificationReport>(&json).unwrap(), r);
        prop_assert_eq!(SetLabeling::parse(&f.to_text(), 4096).unwrap(), f);
    }

    #[test]
    fn restriction_is_hereditary((g, f) in arb_labeled(7), pick in any::<prop::sample::Index>()) {
        let r = verify(&g, &f).unwrap();
        if r.is_iasi {
            if g.edge_count() > 0 {
                let h = g.without_edge(pick.index(g.edge_count()));
                prop_assert!(verify(&h, &restrict(&g, &f, &h).unwrap()).unwrap().is_iasi);
            }
            let v = &g.vertices()[pick.index(g.vertex_count())];
            let h = g.without_vertex(v).unwrap();
            prop_assert!(verify(&h, &restrict(&g, &f, &h).unwrap()).unwrap().is_iasi);
        }
    }

    #[test]
    fn line_graph_shape_and_vertex_injectivity((g, f) in arb_labeled(7)) {
        let r = verify(&g, &f).unwrap();
        let t = line_graph_labeled(&g, Some(&f)).unwrap();
        assert_simple(&t.graph);
        prop_assert_eq!(t.graph.vertex_count(), g.edge_count());
        prop_assert_eq!(t.graph.edge_count(), degree_pairs(&g));
        let lr = t.report.unwrap();
        prop_assert_eq!(lr.vertex_injective.holds, r.edge_injective.holds);
    }

    #[test]
    fn total_graph_shape_and_cross_clashes((g, f) in arb_labeled(7)) {
        let r = verify(&g, &f).unwrap();
        let t = total_graph_labeled(&g, Some(&f)).unwrap();
        assert_simple(&t.graph);
        prop_assert_eq!(t.graph.vertex_count(), g.vertex_count() + g.edge_count());
        prop_assert_eq!(t.graph.edge_count(), 3 * g.edge_count() + degree_pairs(&g));
        if r.is_iasi {
            // Only a vertex label equal to some edge label can break injectivity.
            let vertex_labels: BTreeSet<&IntSet> = f.iter().map(|(_, s)| s).collect();
            let cross = r.per_edge.iter().any(|e| vertex_labels.contains(&e.label));
            prop_assert_eq!(t.report.unwrap().vertex_injective.holds, !cross);
        }
    }

    #[test]
    fn contraction_counts((g, f) in arb_labeled(7), pick in any::<prop::sample::Index>()) {
        prop_assume!(g.edge_count() > 0);
        let e = g.edge_ids()[pick.index(g.edge_count())].clone();
        let (u, v) = edge_ends(&g, &e);
        let common = g.neighbor_indices(u).filter(|&w| g.has_edge_idx(w, v)).count();
        let t = contract_edge(&g, &e, Some(&f)).unwrap();
        assert_simple(&t.graph);
        prop_assert_eq!(t.graph.vertex_count(), g.vertex_count() - 1);
        prop_assert_eq!(t.graph.edge_count(), g.edge_count() - 1 - common);
        let merged = t.induced_labeling.unwrap();
        let want = f.get(e.low()).unwrap().sumset(f.get(e.high()).unwrap()).unwrap();
        prop_assert_eq!(merged.get(&format!("m:{}+{}", e.low(), e.high())), Some(&want));
    }

    #[test]
    fn reduction_counts((g, f) in arb_labeled(7)) {
        for v in g.vertices() {
            let nbrs = g.neighbors(v).unwrap();
            let ok = nbrs.len() == 2 && !g.has_edge(nbrs[0], nbrs[1]);
            match topological_reduction(&g, v, Some(&f)) {
                Ok(t) => {
                    prop_assert!(ok);
                    prop_assert_eq!(t.graph.vertex_count(), g.vertex_count() - 1);
                    prop_assert_eq!(t.graph.edge_count(), g.edge_count() - 1);
                    prop_assert!(t.graph.has_edge(nbrs[0], nbrs[1]));
                }
                Err(_) => prop_assert!(!ok),
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn search_is_sound_and_respects_bounds(g in arb_graph(5), mode_ix in 0usize..3, extra in 0usize..3) {
        let mode = Mode::ALL[mode_ix];
        let n = g.vertex_count();
        let lb = ground_set_lower_bound(n).unwrap();
        let spec = SearchSpec::prefix(mode, lb + extra, 4096).unwrap();
        let out = find_labeling(&g, &spec).unwrap();
        if out.status == Status::Found {
            prop_assert!(mode.accepts(&verify(&g, out.labeling.as_ref().unwrap()).unwrap()));
        } else {
            prop_assert!(out.labeling.is_none());
        }
        if lb > 1 {
            let below = SearchSpec::prefix(mode, lb - 1, 4096).unwrap();
            prop_assert_eq!(find_labeling(&g, &below).unwrap().status, Status::Exhausted);
        }

        let mut opts = MinimizeOptions::new(mode);
        opts.max_ground = 8;
        let found = minimal_ground_set(&g, &opts).unwrap();
        if let Some(m) = found.minimum {
            prop_assert!(m >= lb);
            prop_assert_eq!(found.ground.as_ref().map(|s| s.len()), Some(m));
        }
        let mut uniform = MinimizeOptions::new(Mode::Iasi);
        uniform.max_ground = 7;
        uniform.uniform_vertex_size = Some(2);
        if n >= 2 {
            if let Some(m) = minimal_ground_set(&g, &uniform).unwrap().minimum {
                prop_assert!(m >= uniform_ground_set_lower_bound(n, 2).unwrap());
            }
        }
    }
}
