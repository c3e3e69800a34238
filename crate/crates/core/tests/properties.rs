//! Invariants on random polygon triangulations and random diagonals.

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use qorbifold::expansion::{height_vector, height_vector_by_twists, valuation_on, ArcExpansion};
use qorbifold::scenario::{generate_polygon, FlipPlan};
use qorbifold::seed::build_principal_quantization;
use qorbifold::snake::{
    build_snake_graph, count_matchings, enumerate_matchings, maximal_matching, minimal_matching, twist_graph,
    Decomposition,
};
use qorbifold::triangulation::signed_adjacency;
use qorbifold::verify::{check_positivity_and_bar, verify, Outcome, SeedCheckMode};

use common::{brute_force_matchings, ear_cut, fibonacci, zigzag, Polygon};

fn triangulated_diagonal() -> impl Strategy<Value = (Polygon, usize, usize)> {
    (5usize..=9, prop::collection::vec(0usize..16, 8), 0usize..64, 0usize..64).prop_filter_map(
        "diagonal must cross a chord",
        |(n, picks, a, b)| {
            let poly = ear_cut(n, &picks);
            let (p, q) = (a % n, b % n);
            let (p, q) = (p.min(q), p.max(q));
            poly.crossing(p, q)?;
            Some((poly, p, q))
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matching_enumeration_agrees_with_brute_force((poly, p, q) in triangulated_diagonal()) {
        let c = poly.crossing(p, q).unwrap();
        let g = build_snake_graph(&poly.triangulation, &c).unwrap();
        let listed: BTreeSet<Vec<usize>> = enumerate_matchings(&g).iter().map(|m| m.edges().to_vec()).collect();
        prop_assert_eq!(&listed, &brute_force_matchings(&g));
        prop_assert_eq!(count_matchings(&g), listed.len() as u128);
        prop_assert!(listed.iter().all(|m| m.len() == g.d() + 1));
    }

    #[test]
    fn twists_connect_and_heights_agree((poly, p, q) in triangulated_diagonal()) {
        let t = &poly.triangulation;
        let g = build_snake_graph(t, &poly.crossing(p, q).unwrap()).unwrap();
        let tg = twist_graph(&g);
        prop_assert!(tg.is_connected());
        for m in &tg.matchings {
            prop_assert_eq!(height_vector(t, &g, m).unwrap(), height_vector_by_twists(t, &g, m).unwrap());
        }
        let zero: Vec<_> = tg.matchings.iter().filter(|m| height_vector(t, &g, m).unwrap().iter().all(|&h| h == 0)).collect();
        let lowest = minimal_matching(&g);
        prop_assert_eq!(zero, vec![&lowest]);
    }

    #[test]
    fn quantum_expansion_is_positive_bar_invariant_and_coherent((poly, p, q) in triangulated_diagonal()) {
        let t = &poly.triangulation;
        let seed = build_principal_quantization(&signed_adjacency(t), &vec![1; t.n()]).unwrap();
        let c = poly.crossing(p, q).unwrap();
        let e = ArcExpansion::compute(t, &c, seed.btilde()).unwrap();
        let v = valuation_on(&e.graph, &e.twists, &seed).unwrap();
        prop_assert_eq!(v.get(&minimal_matching(&e.graph)), Some(0));
        prop_assert_eq!(v.get(&maximal_matching(&e.graph)), Some(0));
        let x = e.quantum(&seed).unwrap();
        prop_assert_eq!(check_positivity_and_bar(&x).unwrap(), Outcome::Pass);
        prop_assert_eq!(x.specialize_q1(), e.commutative());
    }

    #[test]
    fn decomposition_round_trips((poly, p, q) in triangulated_diagonal(), pick in 0usize..32) {
        let g = build_snake_graph(&poly.triangulation, &poly.crossing(p, q).unwrap()).unwrap();
        let glue = g.gluing_edges().to_vec();
        prop_assume!(!glue.is_empty());
        let mut cuts: Vec<usize> = glue.iter().enumerate().filter(|(i, _)| pick >> (i % 5) & 1 == 1).map(|(_, &e)| e).collect();
        if cuts.is_empty() {
            cuts.push(glue[pick % glue.len()]);
        }
        let dec = Decomposition::new(&g, &cuts).unwrap();
        for m in enumerate_matchings(&g) {
            let parts = dec.decompose_matching(&m).unwrap();
            prop_assert!(dec.is_compatible(&parts));
            prop_assert_eq!(dec.recombine(&parts).unwrap(), m);
        }
    }

    #[test]
    fn generated_polygons_pass_the_suite(n in 4usize..=7, apex in 0usize..7, depth in 1usize..=2) {
        let s = generate_polygon(n, apex % n, FlipPlan::Depth(depth)).unwrap();
        let report = verify(&s, None, SeedCheckMode::Strict).unwrap();
        prop_assert!(report.passed(), "{}", report);
    }
}

#[test]
fn zigzag_counts_are_fibonacci() {
    for d in 1..=10 {
        let (poly, c) = zigzag(d);
        let g = build_snake_graph(&poly.triangulation, &c).unwrap();
        assert_eq!(count_matchings(&g), fibonacci(d + 2), "d = {d}");
    }
}

#[test]
fn fan_long_diagonal_has_linear_count() {
    // All crossed arcs share the apex, so every tile turns: d + 1 matchings.
    for n in 4..=10 {
        let s = generate_polygon(n, 0, FlipPlan::Depth(1)).unwrap();
        let c = &s.curve(&format!("d1_{}", n - 1)).unwrap().crossing;
        let g = build_snake_graph(&s.triangulation, c).unwrap();
        assert_eq!(count_matchings(&g), (n - 2) as u128);
    }
}
