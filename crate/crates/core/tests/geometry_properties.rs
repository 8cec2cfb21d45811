use dpack_core::generators::{cubic_lattice_packing, grid_graph, hexagonal_packing, random_tangent_packing};
use dpack_core::geometry::io::{packing_from_csv, packing_from_json, packing_to_csv, packing_to_json};
use dpack_core::geometry::{normalize_packing, supported_census, tangency_graph, validate_packing, SupportMode};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn normalization_keeps_the_tangency_graph(d in 1usize..4, n in 2usize..40, seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let p = random_tangent_packing(d, n, seed).unwrap();
        prop_assert!(validate_packing(&p).unwrap().pass);
        let id = p.balls[pick.index(p.len())].id;
        let q = normalize_packing(&p, id).unwrap();
        prop_assert_eq!(tangency_graph(&p).unwrap(), tangency_graph(&q).unwrap());
    }

    #[test]
    fn documents_round_trip(d in 1usize..4, n in 1usize..30, seed in any::<u64>()) {
        let p = random_tangent_packing(d, n, seed).unwrap();
        prop_assert_eq!(&packing_from_json(&packing_to_json(&p)).unwrap(), &p);
        prop_assert_eq!(&packing_from_csv(&packing_to_csv(&p), p.tol_rel).unwrap(), &p);
    }

    #[test]
    fn census_counts_are_non_increasing(n in 10usize..120, seed in any::<u64>(), delta in 0.2f64..0.8) {
        let p = random_tangent_packing(2, n, seed).unwrap();
        let pts = p.centers();
        let s_values = [2, 4, 8, 16, 32];
        for mode in [SupportMode::Candidate, SupportMode::Exact] {
            let c = supported_census(&pts, delta, &s_values, mode).unwrap();
            prop_assert!(c.counts.windows(2).all(|w| w[0] >= w[1]));
            prop_assert!(c.counts.iter().all(|&k| k <= n));
        }
    }

    #[test]
    fn census_is_similarity_invariant(n in 10usize..80, seed in any::<u64>(), scale in 0.01f64..100.0, shift in -50.0f64..50.0) {
        let p = random_tangent_packing(2, n, seed).unwrap();
        let pts = p.centers();
        // Power-of-two scaling keeps the arithmetic exact.
        let k = scale.log2().round();
        let moved: Vec<Vec<f64>> = pts.iter().map(|c| c.iter().map(|x| x * 2f64.powf(k) + shift.round()).collect()).collect();
        let a = supported_census(&pts, 0.5, &[2, 4, 8], SupportMode::Candidate).unwrap();
        let b = supported_census(&moved, 0.5, &[2, 4, 8], SupportMode::Candidate).unwrap();
        prop_assert_eq!(a.counts, b.counts);
    }
}

#[test]
fn lattice_tangency_is_the_grid() {
    for d in 1..=3 {
        for side in [2, 5] {
            let p = cubic_lattice_packing(d, side).unwrap();
            assert_eq!(tangency_graph(&p).unwrap(), grid_graph(d, side).unwrap());
        }
    }
}

#[test]
fn hexagonal_census_is_bounded() {
    let p = hexagonal_packing(40, 40).unwrap();
    let c = supported_census(&p.centers(), 0.5, &[2, 4, 8, 16, 32, 64, 128], SupportMode::Candidate).unwrap();
    assert!(c.counts.windows(2).all(|w| w[0] >= w[1]));
    assert!(c.c_hat <= 16.0, "{c:?}");
}
