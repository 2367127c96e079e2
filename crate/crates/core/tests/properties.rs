//! Randomized invariants.

use hyperkernel::cli::verify::random_hyp_params;
use hyperkernel::rk_space::{
    integral_inner_product, pontryagin_index_formula, pontryagin_index_oracle, series_inner_product, taylor_from_json,
    taylor_to_json, HypParams, IntegralOptions,
};
use hyperkernel::specfun::{laguerre, pochhammer, pochhammer_sign};
use hyperkernel::topology::{invariants, WrightParams};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn plane_sets() -> Vec<HypParams> {
    [
        (vec![], vec![], 1.0),
        (vec![1.5], vec![2.5], 0.8),
        (vec![], vec![0.7], 1.3),
        (vec![0.5], vec![1.2, 2.3], 1.0),
        (vec![], vec![-0.5], 1.0),
        (vec![2.2], vec![1.3, 0.4], 1.7),
    ]
    .into_iter()
    .map(|(a, b, t)| HypParams::plane(a, b, t).unwrap())
    .collect()
}

fn disk_sets() -> Vec<HypParams> {
    [
        (vec![1.0], vec![], 1.0),
        (vec![2.0], vec![], 2.0),
        (vec![1.5], vec![], 1.0),
        (vec![2.5, 1.3], vec![1.8], 1.0),
        (vec![3.0], vec![], 0.7),
        (vec![1.2, 0.8], vec![1.5], 1.4),
    ]
    .into_iter()
    .map(|(a, b, t)| HypParams::disk(a, b, t).unwrap())
    .collect()
}

fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64).prop_map(|(r, i)| Complex64::new(r, i)), 1..=max_len)
}

proptest! {
    #[test]
    fn pochhammer_sign_matches_product(a in -8.0..8.0f64, k in 0usize..12) {
        prop_assume!((a - a.round()).abs() > 1e-6);
        let p = pochhammer(a, k);
        prop_assert_eq!(pochhammer_sign(a, k), if p > 0.0 { 1 } else { -1 });
    }

    #[test]
    fn laguerre_three_term_recurrence(n in 1usize..20, nu in 0.0..4.0f64, x in 0.0..30.0f64) {
        let nf = n as f64;
        let lhs = (nf + 1.0) * laguerre(n + 1, nu, x);
        let rhs = (2.0 * nf + 1.0 + nu - x) * laguerre(n, nu, x) - (nf + nu) * laguerre(n - 1, nu, x);
        let scale = ((2.0 * nf + 1.0 + nu + x) * laguerre(n, nu, x).abs() + (nf + nu) * laguerre(n - 1, nu, x).abs()).max(1.0);
        prop_assert!((lhs - rhs).abs() <= 1e-11 * scale);
    }

    #[test]
    fn index_formula_matches_sign_count(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hyp_params(&mut rng);
        let oracle = pontryagin_index_oracle(&h, 120).unwrap();
        prop_assert!(pontryagin_index_formula(&h).agrees_with(&oracle), "{:?}", h);
    }

    #[test]
    fn taylor_json_round_trip(f in coeffs(12)) {
        prop_assert_eq!(taylor_from_json(&taylor_to_json(&f)).unwrap(), f);
    }

    #[test]
    fn cancelling_pairs_leave_invariants_unchanged(
        b1 in 0.1..3.0f64, big_b in 0.3..2.5f64, a1 in 0.1..3.0f64, big_a in 0.2..1.0f64, c in 0.05..6.0f64,
    ) {
        let w = WrightParams::new(vec![big_a], vec![a1], vec![big_b + big_a], vec![b1]).unwrap();
        let (base, paired) = (invariants(&w), invariants(&w.with_cancelling_pair(c).unwrap()));
        prop_assert_eq!(base.l, paired.l);
        for (x, y) in [(base.alpha, paired.alpha), (base.mu, paired.mu), (base.nu, paired.nu)] {
            prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2))]

    #[test]
    fn integral_matches_series_in_the_plane(f in coeffs(5), g in coeffs(5)) {
        for h in plane_sets() {
            let want = series_inner_product(&h, &f, &g).unwrap();
            let got = integral_inner_product(&h, &f, &g, &IntegralOptions::default()).unwrap().value;
            prop_assert!((got - want).norm() <= 1e-6 * (1.0 + want.norm()), "{:?}: {} vs {}", h, got, want);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn integral_matches_series_on_the_disk(f in coeffs(5), g in coeffs(5)) {
        for h in disk_sets() {
            let want = series_inner_product(&h, &f, &g).unwrap();
            let got = integral_inner_product(&h, &f, &g, &IntegralOptions::default()).unwrap().value;
            prop_assert!((got - want).norm() <= 1e-6 * (1.0 + want.norm()), "{:?}: {} vs {}", h, got, want);
        }
    }
}
