use proptest::prelude::*;
use pseudodisk::gallery::{build_good_pair_graph, euler_bound_check, verify_good_pair_graph};
use pseudodisk::generators::{gen_random_family, GenSpec, WeightScheme};
use pseudodisk::geometry::{
    build_intersection_hypergraph_all_pairs, disks_intersect, homothets_intersect, BuildOptions,
};
use pseudodisk::solvers::{
    exact_min_weight_hitting_set, greedy_hitting_set, round_and_repair, solve_lp, verify_hitting_set,
    DEFAULT_EPSILON,
};
use pseudodisk::{
    build_intersection_hypergraph, neighborhood_hypergraph, ConvexTemplate, Disk, FamilyKind, Homothet, Hypergraph,
    PseudoDiskFamily,
};

fn disk_family(spec: &[(f64, f64, f64)]) -> PseudoDiskFamily {
    PseudoDiskFamily::disks(
        spec.iter()
            .enumerate()
            .map(|(i, &(x, y, r))| Disk::new(i, x, y, r, 1.0).unwrap())
            .collect(),
    )
    .unwrap()
}

fn disks_strategy(max: usize) -> impl Strategy<Value = Vec<(f64, f64, f64)>> {
    prop::collection::vec((0.0..10.0f64, 0.0..10.0f64, 0.2..2.5f64), 1..max)
}

fn homothet_family(spec: &[(f64, f64, f64)]) -> PseudoDiskFamily {
    PseudoDiskFamily::homothets(
        ConvexTemplate::regular(5).unwrap(),
        spec.iter()
            .enumerate()
            .map(|(i, &(x, y, s))| Homothet::new(i, s, x, y, 1.0).unwrap())
            .collect(),
    )
    .unwrap()
}

fn weighted_edges() -> impl Strategy<Value = (Vec<Vec<usize>>, Vec<f64>)> {
    (2usize..11).prop_flat_map(|n| {
        (
            prop::collection::vec(prop::collection::btree_set(0..n, 1..=n.min(4)), 1..12)
                .prop_map(|edges| edges.into_iter().map(|e| e.into_iter().collect()).collect()),
            prop::collection::vec(0.1..5.0f64, n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn grid_matches_all_pairs(p in disks_strategy(40), f in disks_strategy(40)) {
        let (p, f) = (disk_family(&p), disk_family(&f));
        prop_assert_eq!(
            build_intersection_hypergraph(&p, &f).unwrap(),
            build_intersection_hypergraph_all_pairs(&p, &f).unwrap()
        );
    }

    #[test]
    fn grid_matches_all_pairs_homothets(p in disks_strategy(30), f in disks_strategy(30)) {
        let (p, f) = (homothet_family(&p), homothet_family(&f));
        prop_assert_eq!(
            build_intersection_hypergraph(&p, &f).unwrap(),
            build_intersection_hypergraph_all_pairs(&p, &f).unwrap()
        );
    }

    #[test]
    fn predicates_symmetric(a in (0.0..5.0f64, 0.0..5.0f64, 0.1..3.0f64), b in (0.0..5.0f64, 0.0..5.0f64, 0.1..3.0f64)) {
        let da = Disk::new(0, a.0, a.1, a.2, 1.0).unwrap();
        let db = Disk::new(1, b.0, b.1, b.2, 1.0).unwrap();
        prop_assert_eq!(disks_intersect(&da, &db), disks_intersect(&db, &da));
        let t = ConvexTemplate::regular(6).unwrap();
        let ha = Homothet::new(0, a.2, a.0, a.1, 1.0).unwrap();
        let hb = Homothet::new(1, b.2, b.0, b.1, 1.0).unwrap();
        prop_assert_eq!(homothets_intersect(&t, &ha, &t, &hb).unwrap(), homothets_intersect(&t, &hb, &t, &ha).unwrap());
    }

    #[test]
    fn relabeling_permutes_edges(spec in disks_strategy(25), shift in 0usize..25) {
        let n = spec.len();
        let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        let mut moved = vec![(0.0, 0.0, 1.0); n];
        for (i, &s) in spec.iter().enumerate() {
            moved[perm[i]] = s;
        }
        let h = neighborhood_hypergraph(&disk_family(&spec)).unwrap();
        let g = neighborhood_hypergraph(&disk_family(&moved)).unwrap();
        let mut mapped: Vec<Vec<usize>> = h
            .edges()
            .iter()
            .map(|e| {
                let mut m: Vec<usize> = e.iter().map(|&i| perm[i]).collect();
                m.sort_unstable();
                m
            })
            .collect();
        mapped.sort();
        prop_assert_eq!(mapped, g.edges().to_vec());
    }

    #[test]
    fn restriction_composes(spec in disks_strategy(25), a_mask in any::<u32>(), b_mask in any::<u32>()) {
        let h = neighborhood_hypergraph(&disk_family(&spec)).unwrap();
        let a: Vec<usize> = (0..h.n()).filter(|i| a_mask & (1 << i) != 0).collect();
        let b: Vec<usize> = (0..a.len()).filter(|i| b_mask & (1 << i) != 0).collect();
        let direct: Vec<usize> = b.iter().map(|&i| a[i]).collect();
        let twice = h.restrict_trace(&a).unwrap().restrict_trace(&b).unwrap();
        let once = h.restrict_trace(&direct).unwrap();
        prop_assert_eq!(twice.edges(), once.edges());
        prop_assert_eq!(twice.has_empty_trace(), once.has_empty_trace());
    }

    #[test]
    fn small_edge_counts_monotone(spec in disks_strategy(40)) {
        let h = neighborhood_hypergraph(&disk_family(&spec)).unwrap();
        let counts: Vec<usize> = (1..=10).map(|k| h.count_edges_at_most(k).unwrap()).collect();
        prop_assert!(counts.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(counts[9] <= h.edge_count());
        prop_assert!(counts[0] <= h.n());
    }

    #[test]
    fn disk_traces_never_shatter_five(p in disks_strategy(16), f in prop::collection::vec((0.0..10.0f64, 0.0..10.0f64, 0.2..4.0f64), 1..80)) {
        let h = build_intersection_hypergraph(&disk_family(&p), &disk_family(&f)).unwrap();
        prop_assert!(h.max_shattered_size(5) <= 4);
    }

    #[test]
    fn solver_chain((edges, weights) in weighted_edges()) {
        let n = weights.len();
        let h = Hypergraph::canonicalize(edges, n).unwrap().with_weights(weights).unwrap();
        let lp = solve_lp(&h, DEFAULT_EPSILON).unwrap();
        let exact = exact_min_weight_hitting_set(&h, 10_000_000).unwrap();
        let greedy = greedy_hitting_set(&h).unwrap();
        let rounded = round_and_repair(&h, &lp, 7, None).unwrap();
        for r in [&exact, &greedy, &rounded] {
            prop_assert!(verify_hitting_set(&h, &r.chosen));
        }
        let tol = 1e-9 * (1.0 + exact.total_weight);
        let bound = 1.0 + (h.edge_count() as f64).ln();
        prop_assert!(lp.objective <= exact.total_weight + tol);
        prop_assert!(exact.total_weight <= greedy.total_weight + tol);
        prop_assert!(greedy.total_weight <= bound * exact.total_weight + tol);
        prop_assert!(rounded.total_weight + tol >= lp.objective);
        prop_assert!(rounded.total_weight + tol >= exact.total_weight);
    }

    #[test]
    fn exact_invariant_under_weight_scaling((edges, weights) in weighted_edges(), scale in 0.01..100.0f64) {
        let n = weights.len();
        let h = Hypergraph::canonicalize(edges.clone(), n).unwrap().with_weights(weights.clone()).unwrap();
        let scaled = Hypergraph::canonicalize(edges, n)
            .unwrap()
            .with_weights(weights.iter().map(|w| w * scale).collect())
            .unwrap();
        let a = exact_min_weight_hitting_set(&h, 10_000_000).unwrap();
        let b = exact_min_weight_hitting_set(&scaled, 10_000_000).unwrap();
        let tol = 1e-9 * (1.0 + b.total_weight);
        prop_assert!((a.total_weight * scale - b.total_weight).abs() <= tol);
        // Each optimum stays optimal after rescaling.
        prop_assert!((scaled.total_weight(&a.chosen) - b.total_weight).abs() <= tol);
    }

    #[test]
    fn hypergraph_json_round_trip((edges, weights) in weighted_edges(), empty in any::<bool>()) {
        let n = weights.len();
        let h = Hypergraph::canonicalize(edges, n).unwrap().with_weights(weights).unwrap().with_empty_trace(empty);
        prop_assert_eq!(Hypergraph::from_json(&h.to_json().unwrap()).unwrap(), h);
    }
}

#[test]
fn grid_matches_all_pairs_on_large_families() {
    for (kind, seed) in [(FamilyKind::Disk, 1), (FamilyKind::Homothet, 2), (FamilyKind::CircleBoundary, 3)] {
        let spec = GenSpec::disks(600, 30.0, 0.3, 1.5, seed).with_kind(kind);
        let p = gen_random_family(&spec).unwrap();
        let f = gen_random_family(&spec.clone().with_seed(seed + 100)).unwrap();
        let grid = build_intersection_hypergraph(&p, &f).unwrap();
        let plain = build_intersection_hypergraph_all_pairs(&p, &f).unwrap();
        assert_eq!(grid, plain, "{kind}");
        let no_grid = pseudodisk::geometry::build_intersection_hypergraph_with(
            &p,
            &f,
            &BuildOptions { use_grid: false, ..BuildOptions::default() },
        )
        .unwrap();
        assert_eq!(grid, no_grid);
    }
}

#[test]
fn rounding_expectation_bound() {
    // Pre-repair weight is a sum of independent terms with mean at most
    // alpha * LP; its sample mean over 200 seeds must not exceed that by
    // more than three standard errors.
    let spec = GenSpec::disks(80, 12.0, 0.5, 1.5, 4).with_weights(WeightScheme::Uniform01);
    let h = neighborhood_hypergraph(&gen_random_family(&spec).unwrap()).unwrap();
    let lp = solve_lp(&h, DEFAULT_EPSILON).unwrap();
    let samples: Vec<f64> = (0..200)
        .map(|s| round_and_repair(&h, &lp, s, None).unwrap().diagnostics.pre_repair_weight.unwrap())
        .collect();
    let k = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / k;
    let var = samples.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
    let se = (var / k).sqrt();
    let first = round_and_repair(&h, &lp, 0, None).unwrap();
    let bound = first.diagnostics.pre_repair_bound.unwrap();
    let expected = first.diagnostics.expected_pre_repair_weight.unwrap();
    assert!(expected <= bound + 1e-9);
    assert!(mean <= bound + 3.0 * se, "mean {mean} bound {bound} se {se}");
    assert!((mean - expected).abs() <= 4.0 * se + 1e-9, "mean {mean} expected {expected} se {se}");
}

#[test]
fn good_pair_graphs_respect_euler_bound() {
    for seed in 0..40u64 {
        let kind = if seed % 2 == 0 { FamilyKind::Disk } else { FamilyKind::Homothet };
        let spec = GenSpec::disks(30, 8.0, 0.4, 1.6, seed).with_kind(kind);
        let p = gen_random_family(&spec).unwrap();
        let f = gen_random_family(&spec.clone().with_seed(seed + 1000).with_n(50)).unwrap();
        let g = build_good_pair_graph(&p, &f).unwrap();
        assert!(verify_good_pair_graph(&g, &p, &f).is_empty(), "seed {seed}");
        let report = euler_bound_check(&g, 20, seed);
        assert!(report.passed(), "seed {seed}: {report:?}");
    }
}
