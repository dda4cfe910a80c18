#![allow(dead_code)]

use proptest::prelude::*;
use schur_equilibrium::DiscreteDistribution;

/// Normalized random weights on `{0..len}` with a positive last atom.
pub fn explicit_base(
    len: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = DiscreteDistribution> {
    prop::collection::vec(0.0f64..1.0, len).prop_map(|mut w| {
        // exponential spacings give a flat Dirichlet draw
        for v in w.iter_mut() {
            *v = -(1.0 - *v).ln() + 1e-3;
        }
        let total: f64 = w.iter().sum();
        let pmf = w.iter().map(|v| v / total).collect();
        DiscreteDistribution::explicit(pmf).expect("normalized weights")
    })
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
