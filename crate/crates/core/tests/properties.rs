//! Cross-module invariants checked on generated inputs.

mod common;

use num_bigint::BigInt;
use proptest::prelude::*;
use qcs_core::avg_case::{gap_from_quasi_avg_oracle, GapOracle};
use qcs_core::circuits::iqp_gap_amplitude;
use qcs_core::cli::parse_poly_source;
use qcs_core::estimator::{estimate, EstimateParams, Model};
use qcs_core::linops::{permanent_naive_int, permanent_ryser_int, FockConfig, IntMatrix};
use qcs_core::lptwy::count_ones_lptwy;
use qcs_core::Poly3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn poly(n: usize, seed: u64) -> Poly3 {
    Poly3::random(n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gap_matches_enumeration(n in 1usize..=10, seed in any::<u64>()) {
        let f = poly(n, seed);
        let g = f.gap_bruteforce().unwrap().0;
        prop_assert_eq!(g, common::gap(&f));
        prop_assert_eq!(g, f.gap_pointwise().unwrap().0);
        prop_assert_eq!(f.zeros_count().unwrap() as i64 * 2 - (1i64 << n), g);
        prop_assert!(g.abs() <= 1 << n);
        prop_assert_eq!(g.rem_euclid(2), 0);
    }

    #[test]
    fn both_formats_round_trip(n in 1usize..=8, seed in any::<u64>()) {
        let f = poly(n, seed);
        prop_assert_eq!(&Poly3::from_json(&f.to_json()).unwrap(), &f);
        if !f.is_zero() {
            let text = parse_poly_source(&f.to_string()).unwrap();
            // The text form cannot name variables beyond the largest index used.
            prop_assert_eq!(common::gap(&text) << (f.n() - text.n()), common::gap(&f));
        }
    }

    #[test]
    fn modular_count_matches_brute_force(n in 2usize..=11, t in 1usize..=4, seed in any::<u64>()) {
        let f = poly(n, seed);
        prop_assert_eq!(count_ones_lptwy(&f, t.min(n)).unwrap(), common::ones(&f));
    }

    #[test]
    fn iqp_amplitude_is_normalised_gap(n in 1usize..=9, seed in any::<u64>()) {
        let f = poly(n, seed);
        let a = iqp_gap_amplitude(&f).unwrap();
        prop_assert!((a.re * (n as f64).exp2() - common::gap(&f) as f64).abs() < 1e-9);
        prop_assert!(a.im.abs() < 1e-9);
    }

    #[test]
    fn ryser_matches_permutation_sum(d in 1usize..=6, entries in prop::collection::vec(-3i64..=3, 36)) {
        let rows: Vec<Vec<i64>> = (0..d).map(|i| entries[i * d..(i + 1) * d].to_vec()).collect();
        let m = IntMatrix::from_rows(rows.clone()).unwrap();
        let want = BigInt::from(common::permanent_by_permutations(&rows));
        prop_assert_eq!(permanent_ryser_int(&m).unwrap(), want.clone());
        prop_assert_eq!(permanent_naive_int(&m).unwrap(), want);
    }

    #[test]
    fn fock_config_text_round_trip(occ in prop::collection::vec(0usize..5, 1..6)) {
        let cfg = FockConfig(occ);
        prop_assert_eq!(cfg.to_string().parse::<FockConfig>().unwrap(), cfg);
    }

    #[test]
    fn exact_oracle_recursion_recovers_gap(n in 1usize..=9, seed in any::<u64>()) {
        let f = poly(n, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let t = gap_from_quasi_avg_oracle(&f, &mut GapOracle::Exact, &mut rng).unwrap();
        prop_assert_eq!(t.gap, common::gap(&f));
        prop_assert!(t.oracle_calls <= n);
    }

    #[test]
    fn more_compute_never_needs_fewer_qubits(exp in 10i32..24) {
        for model in Model::ALL {
            let mut p = EstimateParams::new(model);
            p.flops = 10f64.powi(exp);
            let small = estimate(&p).unwrap().q;
            p.flops *= 10.0;
            prop_assert!(estimate(&p).unwrap().q >= small);
        }
    }
}
