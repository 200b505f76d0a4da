mod common;

use common::*;
use pinsync::robustness::failure_count;
use pinsync::{
    apply_failures, effective_lambda1, robustness_curve, GenSpec, SelectOptions, SolverOptions, StrategyKind,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn masks_are_deterministic_and_sized((_g, pins) in graph_and_pins(6..=60), ratio in 0.0..=1.0f64, seed in any::<u64>()) {
        let a = apply_failures(&pins, ratio, seed).unwrap();
        prop_assert_eq!(&a, &apply_failures(&pins, ratio, seed).unwrap());
        prop_assert_eq!(a.len(), pins.len());
        prop_assert_eq!(a.failed_count(), failure_count(pins.len(), ratio));
    }

    #[test]
    fn failed_sets_grow_with_ratio((_g, pins) in graph_and_pins(6..=60), seed in any::<u64>()) {
        let mut prev = apply_failures(&pins, 0.0, seed).unwrap();
        for r in [0.1, 0.2, 0.3, 0.5, 1.0] {
            let next = apply_failures(&pins, r, seed).unwrap();
            prop_assert!(prev.beta.iter().zip(&next.beta).all(|(a, b)| !a || *b));
            prev = next;
        }
    }

    #[test]
    fn failures_never_beat_the_intact_set((g, pins) in graph_and_pins(6..=40), ratio in 0.0..=1.0f64, seed in any::<u64>()) {
        let opts = SolverOptions::default();
        let mask = apply_failures(&pins, ratio, seed).unwrap();
        let with = effective_lambda1(&g, &pins, &mask, &opts).unwrap();
        let without = effective_lambda1(&g, &pins, &apply_failures(&pins, 0.0, seed).unwrap(), &opts).unwrap();
        prop_assert!(with <= without + 1e-9);
    }
}

#[test]
fn mean_effective_lambda1_falls_with_failure_ratio() {
    let g = GenSpec::ba(300, 3, 8).generate().unwrap();
    let ratios = [0.0, 0.1, 0.2, 0.3];
    for s in StrategyKind::ALL {
        let curve = robustness_curve(&g, s, &[15, 30, 60], &ratios, 30, 4, &SelectOptions::default()).unwrap();
        for w in curve.rows.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            if a.k != b.k {
                continue;
            }
            let se = ((a.lambda1_std.powi(2) + b.lambda1_std.powi(2)) / a.trials as f64).sqrt();
            assert!(b.lambda1_mean <= a.lambda1_mean + se, "{s} k={} {a:?} -> {b:?}", a.k);
        }
    }
}
