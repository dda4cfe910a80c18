mod common;

use proptest::prelude::*;
use schur_equilibrium::{check_n_monotone, forward_difference, DiscreteDistribution};

use common::explicit_base;

fn closed_form() -> impl Strategy<Value = DiscreteDistribution> {
    prop_oneof![
        (0.01f64..50.0).prop_map(|l| DiscreteDistribution::poisson(l).unwrap()),
        (0.01f64..0.95).prop_map(|q| DiscreteDistribution::geometric(q).unwrap()),
    ]
}

fn binom(x: usize, j: usize) -> f64 {
    if j > x {
        return 0.0;
    }
    (0..j)
        .fold(1.0, |acc, k| acc * (x - k) as f64 / (k + 1) as f64)
        .round()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn truncation_keeps_total_mass(d in closed_form(), exp in 3i32..13) {
        let eps = 10f64.powi(-exp);
        let t = d.truncate(eps).unwrap();
        let e = t.as_explicit().unwrap();
        let kept: f64 = e.pmf().iter().sum();
        prop_assert!((kept + e.discarded_mass() - 1.0).abs() < 1e-12);
        prop_assert!(e.discarded_mass() < eps);
    }

    #[test]
    fn survival_differences_are_pmf(d in prop_oneof![closed_form(), explicit_base(1..=40)]) {
        for x in 0..60 {
            prop_assert!((d.survival(x) - d.survival(x + 1) - d.pmf(x)).abs() < 1e-12, "x={}", x);
        }
        prop_assert_eq!(d.survival(0), 1.0);
    }

    #[test]
    fn binomial_identity_for_differences(j in 0usize..=10, x in 0usize..30) {
        prop_assert_eq!(forward_difference(|y| binom(y, j), x, j), 1.0);
    }

    #[test]
    fn survival_is_always_one_monotone(d in prop_oneof![closed_form(), explicit_base(1..=40)]) {
        prop_assert!(check_n_monotone(&d, 1, 80).holds);
    }

    #[test]
    fn truncation_preserves_moments(lambda in 0.01f64..10.0, exp in 4i32..13) {
        let d = DiscreteDistribution::poisson(lambda).unwrap();
        let t = d.truncate(10f64.powi(-exp)).unwrap();
        for j in 1..=4 {
            let exact = d.moment(j).unwrap().value;
            let est = t.moment(j).unwrap();
            prop_assert!((est.value - exact).abs() <= est.error_bound, "j={} {} vs {}", j, est.value, exact);
        }
    }
}
