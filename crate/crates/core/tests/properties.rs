use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use multicut::contraction::{contraction_step, select_matching, Policy, StepOptions};
use multicut::dual::{separate_conflicted_cycles, triangulate, DualState};
use multicut::generate::random_graph;
use multicut::graph::clustering_cost;
use multicut::oracle::{brute_force_optimum, naive_gaec};
use multicut::report::{RunReport, WallTimes, RUN_REPORT_SCHEMA};
use multicut::{solve, Labeling, Mode, SolverConfig, WeightedGraph};

fn cfg(mode: Mode) -> SolverConfig {
    SolverConfig {
        threads: 1,
        ..SolverConfig::new(mode)
    }
}

fn graph_strategy(max_nodes: usize) -> impl Strategy<Value = WeightedGraph> {
    (2..=max_nodes, 0.2f64..0.9, any::<u64>())
        .prop_map(|(n, p, seed)| random_graph(n, p, seed).unwrap())
}

/// State after a few iterations, so the multipliers are non-trivial.
fn warmed_state(g: &WeightedGraph, iterations: usize) -> DualState {
    let mut s = triangulate(&separate_conflicted_cycles(g, 5), g);
    for _ in 0..iterations {
        s.message_passing_iteration();
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matching_is_a_matching_of_positive_edges(g in graph_strategy(25), rounds in 1usize..6) {
        let s = select_matching(&g, rounds, None);
        let mut used = vec![false; g.num_nodes()];
        for &(u, v) in &s {
            let e = g.find_edge(u, v).expect("selected pair is an edge");
            prop_assert!(g.edges()[e].cost > 0.0);
            prop_assert!(!used[u] && !used[v]);
            used[u] = true;
            used[v] = true;
        }
    }

    #[test]
    fn contraction_preserves_lifted_objective(g in graph_strategy(20), seed in any::<u64>()) {
        for policy in [Policy::Matching, Policy::SpanningForest, Policy::Gaec] {
            let step = contraction_step(&g, policy, &StepOptions::default());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k = step.graph.num_nodes().max(1);
            let raw: Vec<usize> = (0..step.graph.num_nodes()).map(|_| rng.random_range(0..k)).collect();
            let coarse = Labeling::from_raw(&raw);
            let lifted: Vec<usize> = (0..g.num_nodes()).map(|v| raw[step.mapping.apply(v)]).collect();
            let fine = clustering_cost(&g, &Labeling::from_raw(&lifted)).unwrap();
            let on_contracted = clustering_cost(&step.graph, &coarse).unwrap();
            prop_assert!((fine - on_contracted).abs() <= 1e-9);
        }
    }

    #[test]
    fn gaec_step_loop_matches_naive(g in graph_strategy(15)) {
        let mut current = g.clone();
        let mut mapping = multicut::contraction::ContractionMapping::identity(g.num_nodes());
        loop {
            let step = contraction_step(&current, Policy::Gaec, &StepOptions::default());
            if step.contracted_edges == 0 {
                break;
            }
            mapping = mapping.then(&step.mapping);
            current = step.graph;
        }
        let (naive_lab, naive_cost) = naive_gaec(&g);
        prop_assert_eq!(mapping.to_labeling(), naive_lab);
        prop_assert!((clustering_cost(&g, &mapping.to_labeling()).unwrap() - naive_cost).abs() <= 1e-9);
    }

    #[test]
    fn edge_phase_zeroes_covered_edges(g in graph_strategy(12), warm in 0usize..5) {
        let mut s = warmed_state(&g, warm);
        s.edges_to_triplets();
        for e in 0..s.num_edges() {
            if s.coverage(e) > 0 {
                prop_assert!(s.reparametrized_cost(e).abs() <= 1e-12);
            } else {
                prop_assert_eq!(s.reparametrized_cost(e), s.graph().edges()[e].cost);
            }
        }
    }

    #[test]
    fn schedule_invariance(g in graph_strategy(12), warm in 0usize..5, seed in any::<u64>()) {
        let base = warmed_state(&g, warm);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);

        let mut edge_order: Vec<usize> = (0..base.num_edges()).collect();
        edge_order.shuffle(&mut rng);
        let (mut a, mut b) = (base.clone(), base.clone());
        a.edges_to_triplets();
        b.edges_to_triplets_in_order(&edge_order);
        for (x, y) in a.lambda().iter().zip(b.lambda()) {
            for s in 0..3 {
                prop_assert!((x[s] - y[s]).abs() <= 1e-12);
            }
        }

        let mut triplet_order: Vec<usize> = (0..a.triplets().len()).collect();
        triplet_order.shuffle(&mut rng);
        let mut c = a.clone();
        a.triplets_to_edges();
        c.triplets_to_edges_in_order(&triplet_order);
        for (x, y) in a.lambda().iter().zip(c.lambda()) {
            for s in 0..3 {
                prop_assert!((x[s] - y[s]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn bound_valid_for_arbitrary_multipliers(g in graph_strategy(7), seed in any::<u64>()) {
        let opt = brute_force_optimum(&g).unwrap().optimum_cost;
        let mut s = warmed_state(&g, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for lam in s.lambda_mut() {
            for x in lam.iter_mut() {
                *x = rng.random_range(-3.0..3.0);
            }
        }
        prop_assert!(s.lower_bound() <= opt + 1e-9);
        for _ in 0..10 {
            s.message_passing_iteration();
            prop_assert!(s.lower_bound() <= opt + 1e-9);
        }
    }
}

#[test]
fn sandwich_on_random_instances() {
    for seed in 0..200u64 {
        let n = ChaCha8Rng::seed_from_u64(seed).random_range(3..=8);
        let g = random_graph(n, 0.6, 7_000 + seed).unwrap();
        let opt = brute_force_optimum(&g).unwrap().optimum_cost;
        let (_, greedy) = naive_gaec(&g);
        for mode in Mode::ALL {
            let s = solve(&g, &cfg(mode)).unwrap();
            assert!(s.labeling.len() == n, "{mode}");
            if let Some(lb) = s.lower_bound() {
                assert!(lb <= opt + 1e-9, "seed {seed} {mode}: lb {lb} > opt {opt}");
                assert!(lb <= s.primal_cost + 1e-9);
            }
            if mode != Mode::Dual {
                assert!(s.primal_cost >= opt - 1e-9, "seed {seed} {mode}");
                assert!(
                    (clustering_cost(&g, &s.labeling).unwrap() - s.primal_cost).abs() <= 1e-12,
                    "reported cost is the labeling's cost"
                );
            }
            if matches!(mode, Mode::PrimalDual | Mode::PrimalDualPlus) {
                assert!(
                    s.primal_cost <= greedy + 1e-9,
                    "seed {seed} {mode}: cleanup never loses to GAEC"
                );
            }
        }
    }
}

#[test]
fn more_separation_rounds_never_lower_the_bound() {
    for seed in 0..30u64 {
        let g = random_graph(9, 0.5, seed).unwrap();
        let opt = brute_force_optimum(&g).unwrap().optimum_cost;
        let one = multicut::dual_bound(&g, &cfg(Mode::Dual)).unwrap();
        let three = SolverConfig {
            separation_rounds: 3,
            ..cfg(Mode::Dual)
        };
        let three = multicut::dual_bound(&g, &three).unwrap();
        assert!(three >= one - 1e-9, "seed {seed}: {three} < {one}");
        assert!(three <= opt + 1e-9);
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let g = random_graph(300, 0.05, 11).unwrap();
    for mode in Mode::ALL {
        let one = solve(&g, &cfg(mode)).unwrap();
        let four = solve(
            &g,
            &SolverConfig {
                threads: 4,
                ..cfg(mode)
            },
        )
        .unwrap();
        assert_eq!(one.labeling, four.labeling, "{mode}");
        assert_eq!(
            one.primal_cost.to_bits(),
            four.primal_cost.to_bits(),
            "{mode}"
        );
        assert_eq!(
            one.lower_bound.to_bits(),
            four.lower_bound.to_bits(),
            "{mode}"
        );
    }
}

#[test]
fn reports_validate_against_schema() {
    let schema: serde_json::Value = serde_json::from_str(RUN_REPORT_SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let g = random_graph(20, 0.3, 5).unwrap();
    for mode in Mode::ALL {
        let c = cfg(mode);
        let s = solve(&g, &c).unwrap();
        let report = RunReport::new("random", &c, &s, WallTimes::default());
        let value: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        let errors: Vec<String> = validator
            .iter_errors(&value)
            .map(|e| e.to_string())
            .collect();
        assert!(errors.is_empty(), "{mode}: {errors:?}");
        assert_eq!(report.node_labels.len(), g.num_nodes());
        if let Some(lb) = report.lower_bound {
            assert_eq!(report.gap, Some(report.primal_cost - lb));
        }
    }
    let mut bad: serde_json::Value = serde_json::from_str(
        &RunReport::new(
            "x",
            &cfg(Mode::Primal),
            &solve(&g, &cfg(Mode::Primal)).unwrap(),
            WallTimes::default(),
        )
        .to_json(),
    )
    .unwrap();
    bad["mode"] = "Q".into();
    assert!(!validator.is_valid(&bad));
}
