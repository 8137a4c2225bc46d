mod common;

use proptest::prelude::*;
use robust_median::dist::std_normal_quantile;
use robust_median::{
    alpha_star, build_interval, classical_alpha, h_interior, min_coverage, robust_sign_test, select_k_with, Sample,
    SelectionRule,
};

#[test]
fn interior_probability_matches_direct_sum() {
    for n in [2usize, 5, 11, 30, 61] {
        for k in 0..=n / 2 {
            if 2 * k + 2 > n {
                continue;
            }
            for j in 1..20 {
                let p = j as f64 / 20.0;
                let want = common::interior_prob_small(n, p, k);
                let got = h_interior(n as u64, k as u64, p).unwrap() - edge_terms(n, k, p);
                assert!((got - want).abs() < 1e-13, "n={n} k={k} p={p}: {got} vs {want}");
            }
        }
    }
}

// h counts the closed range k..=n-k; the open-range oracle misses both ends.
fn edge_terms(n: usize, k: usize, p: f64) -> f64 {
    let b = robust_median::Binomial::new(n as u64, p).unwrap();
    b.pmf(k as i64) + b.pmf((n - k) as i64)
}

#[test]
fn interior_probability_symmetric_and_unimodal_on_grid() {
    for n in 1..=120u64 {
        for k in 0..=n / 2 {
            let mut prev = -1.0;
            for j in 0..=100 {
                let p = j as f64 / 200.0;
                let h = h_interior(n, k, p).unwrap();
                let mirror = h_interior(n, k, 1.0 - p).unwrap();
                assert!((h - mirror).abs() <= 1e-14, "n={n} k={k} p={p}");
                assert!(h >= prev - 1e-14, "n={n} k={k} p={p}: {h} < {prev}");
                prev = h;
            }
        }
    }
}

#[test]
fn worst_case_level_reduces_to_classical() {
    for n in 2..=300u64 {
        for k in 0..n / 2 {
            if 2 * k + 2 > n {
                break;
            }
            assert_eq!(alpha_star(n, k, 0.0).unwrap(), classical_alpha(n, k).unwrap());
        }
    }
}

#[test]
fn normal_quantile_against_series_oracle() {
    let mut us: Vec<f64> = (1..1000).map(|i| i as f64 / 1000.0).collect();
    us.extend([1e-10, 1e-6, 1e-3, 0.025, 0.975, 1.0 - 1e-6]);
    for u in us {
        let want = common::normal_quantile_oracle(u);
        let got = std_normal_quantile(u);
        assert!((got - want).abs() < 1e-9, "u={u}: {got} vs {want}");
    }
    assert!((std_normal_quantile(0.975) - 1.959_963_984_540_054).abs() < 1e-12);
}

fn sample_strategy() -> impl Strategy<Value = Vec<f64>> {
    // Mixing a small integer lattice with continuous values produces ties.
    prop::collection::vec(prop_oneof![(-5i32..5).prop_map(f64::from), -10.0f64..10.0], 2..150)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn interval_is_ordered_and_within_sample(
        xs in sample_strategy(),
        eps in 0.0f64..0.4,
        alpha in prop::sample::select(vec![0.01, 0.05, 0.1, 0.2]),
    ) {
        let n = xs.len() as u64;
        let s = Sample::new(xs).unwrap();
        let d = select_k_with(n, alpha, eps, SelectionRule::Nearest).unwrap();
        let iv = build_interval(&s, &d).unwrap();
        prop_assert!(iv.lower <= iv.upper);
        prop_assert_eq!(iv.lower, s.order_stat(d.k as usize + 1));
        prop_assert_eq!(iv.upper, s.order_stat((n - d.k) as usize));
        prop_assert_eq!(iv.min_coverage, min_coverage(n, d.k, eps).unwrap());
    }

    #[test]
    fn conservative_rule_never_exceeds_target(n in 2u64..3000, eps in 0.0f64..0.45, alpha in 0.001f64..0.5) {
        let d = select_k_with(n, alpha, eps, SelectionRule::Conservative).unwrap();
        if d.warnings.is_empty() || d.alpha_achieved <= alpha {
            prop_assert!(d.alpha_achieved <= alpha);
            if 2 * (d.k + 1) + 2 <= n {
                prop_assert!(alpha_star(n, d.k + 1, eps).unwrap() > alpha);
            }
        }
    }

    #[test]
    fn nearest_rule_is_closest(n in 2u64..400, eps in 0.0f64..0.45, alpha in 0.001f64..0.5) {
        let d = select_k_with(n, alpha, eps, SelectionRule::Nearest).unwrap();
        let gap = (d.alpha_achieved - alpha).abs();
        let mut k = 0;
        while 2 * k + 2 <= n {
            let other = (alpha_star(n, k, eps).unwrap() - alpha).abs();
            prop_assert!(gap <= other, "k={} beats chosen {}", k, d.k);
            if other == gap {
                prop_assert!(d.k <= k);
            }
            k += 1;
        }
    }

    #[test]
    fn test_statistic_is_symmetric_under_reflection(xs in sample_strategy(), theta0 in -6.0f64..6.0) {
        let n = xs.len() as u64;
        let neg: Vec<f64> = xs.iter().map(|x| -x).collect();
        let d = select_k_with(n, 0.05, 0.05, SelectionRule::Nearest).unwrap();
        let a = robust_sign_test(&Sample::new(xs).unwrap(), theta0, &d).unwrap();
        let b = robust_sign_test(&Sample::new(neg).unwrap(), -theta0, &d).unwrap();
        // Reflection swaps "above" and "below"; ties stay put.
        prop_assert_eq!(a.ties_at_theta0, b.ties_at_theta0);
        if a.ties_at_theta0 == 0 {
            prop_assert_eq!(a.statistic, n - b.statistic);
            prop_assert_eq!(a.reject, b.reject);
            prop_assert_eq!(a.tolerance, b.tolerance);
        }
    }
}
