//! Small numeric helpers shared by the main path and the oracle.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

/// Neumaier (improved Kahan) compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values.into_iter().collect::<CompensatedSum>().value()
}

/// Exact binomial coefficient C(n, k); zero when k > n.
///
/// Computed in `u128` while it fits, promoted to arbitrary precision otherwise.
pub fn binomial_exact(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) is exact at every step
        match acc.checked_mul(u128::from(n - i)) {
            Some(p) => acc = p / u128::from(i + 1),
            None => return binomial_big(n, k),
        }
    }
    BigUint::from(acc)
}

fn binomial_big(n: u64, k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= BigUint::from(n - i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

/// C(n, k) as `f64` (correctly rounded from the exact integer when it is
/// representable, `inf` if it overflows).
pub fn binomial(n: u64, k: u64) -> f64 {
    binomial_exact(n, k).to_f64().unwrap_or(f64::INFINITY)
}

/// Stirling numbers of the second kind S(j, k) for k = 0..=j.
pub(crate) fn stirling2_row(j: usize) -> Vec<f64> {
    let mut row = vec![0.0; j + 1];
    row[0] = 1.0;
    for m in 1..=j {
        for k in (1..=m).rev() {
            row[k] = k as f64 * row[k] + row[k - 1];
        }
        row[0] = 0.0;
    }
    row
}

/// ln(x!) exact for small x, Stirling series otherwise.
pub(crate) fn ln_factorial(x: u64) -> f64 {
    if x < 32 {
        return (2..=x).map(|k| (k as f64).ln()).sum();
    }
    let n = x as f64 + 1.0;
    // ln Gamma(n), n >= 33
    let inv = 1.0 / n;
    let inv2 = inv * inv;
    (n - 0.5) * n.ln() - n
        + 0.5 * (2.0 * std::f64::consts::PI).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)))
}
