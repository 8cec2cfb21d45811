use dpack_core::generators::{grid_graph, random_connected_graph};
use dpack_core::graph::{
    ball, bs_distance, canonical_form, hull_sequence, rooted_isomorphic, vertex_boundary, Graph, RootedGraph,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The same graph with vertex indices permuted and fresh labels.
fn shuffled(g: &Graph, seed: u64) -> (Graph, Vec<usize>) {
    let mut perm: Vec<usize> = (0..g.len()).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let labels = (0..g.len() as u64).map(|i| 1000 + 7 * i).collect();
    let edges: Vec<(usize, usize)> = g.edges().map(|(u, v)| (perm[u], perm[v])).collect();
    (Graph::from_edges(labels, edges).unwrap(), perm)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn relabelling_preserves_canonical_form(n in 2usize..14, extra in 0.0f64..1.0, seed in any::<u64>(), root in 0usize..14) {
        let g = random_connected_graph(n, extra, seed).unwrap();
        let root = root % n;
        let (h, perm) = shuffled(&g, seed ^ 0x5eed);
        let a = RootedGraph::new(g, root).unwrap();
        let b = RootedGraph::new(h, perm[root]).unwrap();
        prop_assert_eq!(canonical_form(&a).key(), canonical_form(&b).key());
        prop_assert!(rooted_isomorphic(&a, &b));
        prop_assert_eq!(bs_distance(&a, &b, 20).value(), 0.0);
    }

    #[test]
    fn canonical_key_agrees_with_isomorphism(n in 3usize..9, s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = RootedGraph::new(random_connected_graph(n, 0.6, s1).unwrap(), 0).unwrap();
        let b = RootedGraph::new(random_connected_graph(n, 0.6, s2).unwrap(), 0).unwrap();
        prop_assert_eq!(canonical_form(&a).key() == canonical_form(&b).key(), rooted_isomorphic(&a, &b));
    }

    #[test]
    fn bs_distance_is_symmetric(n in 3usize..12, s1 in any::<u64>(), s2 in any::<u64>(), r1 in 0usize..12, r2 in 0usize..12) {
        let a = RootedGraph::new(random_connected_graph(n, 0.5, s1).unwrap(), r1 % n).unwrap();
        let b = RootedGraph::new(random_connected_graph(n + 1, 0.5, s2).unwrap(), r2 % (n + 1)).unwrap();
        prop_assert_eq!(bs_distance(&a, &b, 20), bs_distance(&b, &a, 20));
    }

    #[test]
    fn hull_sequence_invariants(n in 2usize..40, seed in any::<u64>()) {
        let g = random_connected_graph(n, 0.3, seed).unwrap();
        let h = hull_sequence(&g, 0, None).unwrap();
        prop_assert_eq!(h.set(0), vec![0]);
        for k in 0..h.last() {
            prop_assert!(h.sizes[k] < h.sizes[k + 1]);
            let boundary = vertex_boundary(&g, &h.set(k)).unwrap();
            prop_assert_eq!(boundary.len(), h.boundary_sizes[k]);
            let mut next = h.set(k);
            next.extend(&boundary);
            next.sort_unstable();
            prop_assert_eq!(next, h.set(k + 1));
        }
        prop_assert_eq!(h.sizes[h.last()], n);
    }
}

#[test]
fn nested_boxes_agree_to_radius_five() {
    let a = grid_graph(2, 11).unwrap();
    let b = grid_graph(2, 21).unwrap();
    let ra = RootedGraph::new(a.clone(), 60).unwrap();
    let rb = RootedGraph::new(b.clone(), 220).unwrap();
    let d = bs_distance(&ra, &rb, 12);
    assert!((d.value() - 1.0 / 6.0).abs() < 1e-15);
    // Independent per-radius comparison of the balls.
    for k in 0..=6 {
        let same = rooted_isomorphic(&ball(&a, 60, k).unwrap(), &ball(&b, 220, k).unwrap());
        assert_eq!(same, k <= 5, "radius {k}");
    }
}
