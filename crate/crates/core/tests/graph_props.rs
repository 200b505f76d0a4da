mod common;

use common::*;
use pinsync::{gen_ba, gen_er, gen_ws, load_edge_list, write_edge_list, GenSpec};
use proptest::prelude::*;

fn edge_list_text() -> impl Strategy<Value = String> {
    let label = prop_oneof![(0..40u32).prop_map(|i| i.to_string()), "[a-z]{1,3}".prop_map(String::from),];
    prop::collection::vec((label.clone(), label), 1..80)
        .prop_map(|pairs| pairs.iter().map(|(a, b)| format!("{a} {b}\n")).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn edge_list_round_trip(text in edge_list_text()) {
        // a list made only of self-loops has no edges
        let Ok((g, _)) = load_edge_list(text.as_bytes()) else { return Ok(()); };
        prop_assert!(g.min_degree() > 0);
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        let (again, _) = load_edge_list(buf.as_slice()).unwrap();
        prop_assert_eq!(&again, &g);
    }

    #[test]
    fn generated_graphs_are_simple_and_symmetric(n in 3..=80usize, fam in any::<u8>(), seed in any::<u64>()) {
        let g = random_graph(n, fam, seed);
        for v in 0..n {
            let nb = g.neighbors(v);
            prop_assert!(nb.windows(2).all(|w| w[0] < w[1]), "unsorted or duplicate neighbors");
            prop_assert!(!nb.contains(&v));
            for &w in nb {
                prop_assert!(g.neighbors(w).contains(&v));
            }
        }
        let sum: usize = g.degrees().iter().sum();
        prop_assert_eq!(sum, 2 * g.edge_count());
    }

    #[test]
    fn generators_are_pure(n in 3..=80usize, fam in any::<u8>(), seed in any::<u64>()) {
        prop_assert_eq!(random_graph(n, fam, seed), random_graph(n, fam, seed));
    }

    #[test]
    fn ba_edge_count(n in 4..=200usize, m in 1..=3usize, seed in any::<u64>()) {
        prop_assume!(m < n);
        prop_assert_eq!(gen_ba(n, m, seed).unwrap().edge_count(), m * (n - m));
    }

    #[test]
    fn ws_without_rewiring_is_regular(half in 1..=4usize, extra in 1..=40usize, seed in any::<u64>()) {
        let k = 2 * half;
        let g = gen_ws(k + extra, k, 0.0, seed).unwrap();
        prop_assert!(g.degrees().iter().all(|&d| d == k));
    }

    #[test]
    fn er_with_p_one_is_complete(n in 1..=40usize, seed in any::<u64>()) {
        prop_assert_eq!(gen_er(n, 1.0, seed).unwrap().edge_count(), n * (n - 1) / 2);
    }
}

#[test]
fn ba_degree_tail_follows_a_power_law() {
    // P(K >= k) ~ k^-2 for preferential attachment
    let g = GenSpec::ba(20_000, 3, 17).generate().unwrap();
    let mut degrees = g.degrees();
    degrees.sort_unstable();
    let n = degrees.len() as f64;
    let points: Vec<(f64, f64)> = [6usize, 10, 16, 25, 40, 63, 100]
        .iter()
        .map(|&k| {
            let at_least = degrees.len() - degrees.partition_point(|&d| d < k);
            (k as f64, at_least as f64 / n)
        })
        .collect();
    let slope = pinsync::harness::loglog_slope(&points).unwrap();
    assert!((-2.5..=-1.6).contains(&slope), "CCDF slope {slope}");
}
