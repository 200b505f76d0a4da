mod common;

use common::*;
use pinsync::{
    exhaustive_oracle, perturbation_scores, select, select_bfg, select_bfg_pruned, smallest_eigenpair, Graph, PinSet,
    SelectOptions, SolverOptions, SpectralPair, StrategyKind,
};
use proptest::prelude::*;

fn opts() -> SelectOptions {
    SelectOptions::default()
}

fn connected_graph(n: usize, fam: u8, seed: u64) -> Graph {
    (0..50u64).map(|i| random_graph(n, fam, seed.wrapping_add(i))).find(|g| g.is_connected()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn bfg_steps_are_dense_optimal(n in 6..=30usize, fam in any::<u8>(), seed in any::<u64>(), k in 1..=5usize) {
        let g = random_graph(n, fam, seed);
        let trace = select_bfg(&g, k.min(n - 1), &SolverOptions::default()).unwrap();
        let bad = bfg_step_violations(&g, &trace);
        prop_assert!(bad.is_empty(), "{bad:?}");
    }

    #[test]
    fn bfg_equals_exhaustive_at_one(n in 3..=30usize, fam in any::<u8>(), seed in any::<u64>()) {
        let g = random_graph(n, fam, seed);
        let trace = select_bfg(&g, 1, &SolverOptions::default()).unwrap();
        let ex = exhaustive_oracle(&g, 1, &SolverOptions::default()).unwrap();
        prop_assert_eq!(trace.nodes(), ex.pins);
        prop_assert!((trace.final_lambda1() - ex.lambda1).abs() <= 1e-9);
    }

    #[test]
    fn pruned_bfg_matches_full(n in 6..=40usize, fam in any::<u8>(), seed in any::<u64>(), k in 1..=6usize) {
        let g = random_graph(n, fam, seed);
        let k = k.min(n - 1);
        let a = select_bfg(&g, k, &SolverOptions::default()).unwrap();
        let b = select_bfg_pruned(&g, k, &SolverOptions::default()).unwrap();
        prop_assert_eq!(a.nodes(), b.nodes());
    }

    #[test]
    fn traces_interlace(n in 6..=60usize, fam in any::<u8>(), seed in any::<u64>(), frac in 0.05..0.6f64) {
        let g = random_graph(n, fam, seed);
        let k = ((n as f64 * frac) as usize).clamp(1, n - 1);
        for s in StrategyKind::ALL {
            let trace = select(&g, s, k, &opts()).unwrap();
            let bad = interlacing_violations(&g, &trace);
            prop_assert!(bad.is_empty(), "{bad:?}");
        }
    }

    #[test]
    fn pbo_first_pick_is_a_max_degree_node(n in 4..=60usize, fam in any::<u8>(), seed in any::<u64>()) {
        let g = connected_graph(n, fam, seed);
        let first = select(&g, StrategyKind::Pbo, 1, &opts()).unwrap().nodes()[0];
        let top = (0..n).find(|&v| g.degree(v) == g.max_degree()).unwrap();
        prop_assert_eq!(first, top);
    }

    #[test]
    fn pbo_scores_ignore_eigenvector_sign((g, pins) in graph_and_pins(4..=40)) {
        let v = view(&g, &pins);
        let pair = smallest_eigenpair(&v, &SolverOptions::default()).unwrap();
        let flipped = SpectralPair { u: pair.u.iter().map(|x| -x).collect(), ..pair.clone() };
        prop_assert_eq!(perturbation_scores(&v, &pair), perturbation_scores(&v, &flipped));
    }

    #[test]
    fn strategies_are_deterministic_and_prefix_stable(n in 6..=40usize, fam in any::<u8>(), seed in any::<u64>()) {
        let g = random_graph(n, fam, seed);
        let k = (n / 3).max(2);
        for s in StrategyKind::ALL {
            let long = select(&g, s, k, &opts()).unwrap();
            let again = select(&g, s, k, &opts()).unwrap();
            prop_assert_eq!(long.nodes(), again.nodes());
            let short = select(&g, s, k - 1, &opts()).unwrap();
            prop_assert_eq!(short.nodes(), long.prefix(k - 1).nodes());
            prop_assert_eq!(short.lambdas(), long.prefix(k - 1).lambdas());
        }
    }
}

#[test]
fn no_strategy_beats_the_exhaustive_pair() {
    for seed in 0..10 {
        let g = random_graph(12, seed as u8, seed);
        let ex = exhaustive_oracle(&g, 2, &SolverOptions::default()).unwrap();
        for s in StrategyKind::ALL {
            let t = select(&g, s, 2, &opts()).unwrap();
            assert!(t.final_lambda1() <= ex.lambda1 + 1e-9, "{s} beat the oracle");
        }
        let pins = PinSet::new(&g, ex.pins.clone(), "oracle").unwrap();
        let again = smallest_eigenpair(&view(&g, &pins), &SolverOptions::default()).unwrap().lambda1;
        assert!((again - ex.lambda1).abs() < 1e-9);
    }
}
