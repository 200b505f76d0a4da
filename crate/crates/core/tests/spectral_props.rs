mod common;

use common::*;
use pinsync::{
    dense_spectrum_oracle, smallest_eigenpair, smallest_eigenpair_warm, unpinned_components, EigenMethod, PinSet,
    SolverOptions,
};
use proptest::prelude::*;

fn inverse() -> SolverOptions {
    SolverOptions { method: EigenMethod::InverseIteration, ..Default::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn grounded_laplacian_is_psd((g, pins) in graph_and_pins(4..=40), xs in prop::collection::vec(-1.0..1.0f64, 40)) {
        let v = view(&g, &pins);
        let x = &xs[..v.dim()];
        prop_assert!(v.quadratic_form(x) >= -1e-12);
    }

    #[test]
    fn iterative_matches_dense((g, pins) in graph_and_pins(4..=60)) {
        let v = view(&g, &pins);
        let oracle = dense_spectrum_oracle(&v).unwrap().values[0];
        for opts in [SolverOptions::default(), inverse()] {
            let pair = smallest_eigenpair(&v, &opts).unwrap();
            prop_assert!((pair.lambda1 - oracle).abs() <= 1e-8, "{} vs {oracle}", pair.lambda1);
            prop_assert!(pair.residual <= 1e-10);
        }
    }

    #[test]
    fn positive_iff_every_component_touches_a_pin((g, pins) in graph_and_pins(4..=40)) {
        let v = view(&g, &pins);
        let lambda = smallest_eigenpair(&v, &SolverOptions::default()).unwrap().lambda1;
        let grounded = unpinned_components(&g, &pins).iter().all(|c| c.touches_pinned);
        prop_assert_eq!(v.is_grounded(), grounded);
        if grounded {
            prop_assert!(lambda > 1e-12);
        } else {
            prop_assert_eq!(lambda, 0.0);
        }
    }

    #[test]
    fn adding_pins_never_lowers_lambda1((g, pins) in graph_and_pins(6..=40), extra in any::<u64>()) {
        let more = random_pins(&g, g.node_count() - 1, extra);
        let mut superset: Vec<usize> = pins.members().to_vec();
        for &v in more.members() {
            if superset.len() >= pins.len() + 3 || superset.len() + 1 >= g.node_count() {
                break;
            }
            if !superset.contains(&v) {
                superset.push(v);
            }
        }
        let sup = PinSet::new(&g, superset, "superset").unwrap();
        let a = smallest_eigenpair(&view(&g, &pins), &SolverOptions::default()).unwrap().lambda1;
        let b = smallest_eigenpair(&view(&g, &sup), &SolverOptions::default()).unwrap().lambda1;
        prop_assert!(b >= a - 1e-9, "{b} < {a}");
    }

    #[test]
    fn rayleigh_and_degree_bounds((g, pins) in graph_and_pins(4..=40), xs in prop::collection::vec(-1.0..1.0f64, 40)) {
        let v = view(&g, &pins);
        let pair = smallest_eigenpair(&v, &SolverOptions::default()).unwrap();
        prop_assert!(pair.lambda1 <= v.min_unpinned_degree() as f64 + 1e-9);
        let x = &xs[..v.dim()];
        let norm2: f64 = x.iter().map(|a| a * a).sum();
        prop_assume!(norm2 > 1e-6);
        prop_assert!(pair.lambda1 <= v.quadratic_form(x) / norm2 + 1e-9);
    }

    #[test]
    fn perron_vector_is_positive((g, pins) in graph_and_pins(4..=40)) {
        let comps = unpinned_components(&g, &pins);
        prop_assume!(comps.len() == 1 && comps[0].touches_pinned);
        let pair = smallest_eigenpair(&view(&g, &pins), &SolverOptions::default()).unwrap();
        prop_assert!(pair.u.iter().all(|&x| x > 0.0));
        let norm: f64 = pair.u.iter().map(|a| a * a).sum::<f64>().sqrt();
        prop_assert!((norm - 1.0).abs() < 1e-9);
    }

    #[test]
    fn warm_start_reaches_the_same_pair((g, pins) in graph_and_pins(4..=40), warm in prop::collection::vec(-1.0..1.0f64, 40)) {
        let v = view(&g, &pins);
        let cold = smallest_eigenpair(&v, &SolverOptions::default()).unwrap();
        let hot = smallest_eigenpair_warm(&v, &SolverOptions::default(), Some(&warm[..g.node_count()])).unwrap();
        prop_assert!((cold.lambda1 - hot.lambda1).abs() <= 1e-8);
    }
}
