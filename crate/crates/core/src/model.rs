//! The `n`-dimensional Schur-constant equilibrium model.
//!
//! `(X_1, .., X_n)` has joint survival `S^{(n-1)*}(x_1 + .. + x_n)`. Every
//! coordinate is distributed as the `(n-1)`-th order equilibrium of the base
//! law, the vector is exchangeable, and all of its laws are forward
//! differences of a single survival function.

use crate::dist::{forward_difference, DiscreteDistribution, Kind};
use crate::equilibrium::{nth_equilibrium, EquilibriumChain};
use crate::error::{Error, Result};
use crate::numeric::{binomial, compensated_sum};

pub const MAX_DIMENSION: usize = 10;
/// Rounding slack allowed on probabilities produced by differencing.
pub const NEGATIVE_PMF_TOLERANCE: f64 = 1e-12;
const ZERO_VARIANCE_THRESHOLD: f64 = 1e-300;

#[derive(Debug, Clone)]
pub struct SchurModel {
    n: usize,
    chain: EquilibriumChain,
    mean_product: f64,
}

/// A joint probability from differencing: `value` is clamped at zero,
/// `raw` keeps the unclamped result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointPmf {
    pub value: f64,
    pub raw: f64,
}

/// Ways of computing `P(Z = z)` for `Z = X_1 + .. + X_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumRoute {
    /// `P(X = z + n - 1) C(z + n - 1, n - 1) / (μ μ_{1:1} .. μ_{n-2:1})`.
    ClosedForm,
    /// `(-1)^n Δ^n S^{(n-1)*}(z) C(z + n - 1, n - 1)`.
    Differences,
    /// Joint pmf summed over all compositions of `z` into `n` parts.
    Compositions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhoMethod {
    /// From mean and variance of the marginal.
    MarginalForm,
    /// From ordinary moments of the base law (`n` in 2..=4).
    BaseMomentForm,
    /// Known closed forms (Poisson for `n` in 2..=5, geometric).
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoResult {
    pub value: f64,
    pub method: RhoMethod,
}

/// Builds the `n`-dimensional model generated by `dist`.
pub fn build_model(dist: &DiscreteDistribution, n: usize) -> Result<SchurModel> {
    if !(2..=MAX_DIMENSION).contains(&n) {
        return Err(Error::UnsupportedDimension {
            n,
            supported: format!("2..={MAX_DIMENSION}"),
        });
    }
    let chain = nth_equilibrium(dist, n - 1)?;
    let mean_product = chain.mean_product(n - 1);
    Ok(SchurModel {
        n,
        chain,
        mean_product,
    })
}

impl SchurModel {
    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> &DiscreteDistribution {
        self.chain.base()
    }

    pub fn chain(&self) -> &EquilibriumChain {
        &self.chain
    }

    /// `μ μ_{1:1} .. μ_{n-2:1}`.
    pub fn mean_product(&self) -> f64 {
        self.mean_product
    }

    /// The common marginal law, the `(n-1)`-th order equilibrium of the base.
    pub fn marginal(&self) -> &DiscreteDistribution {
        self.chain.level(self.n - 1).expect("chain has order n - 1")
    }

    /// Fault-injection hook for exercising the verification suite: scales
    /// the cached mean product used by the closed-form sum law.
    pub fn with_mean_product_scale(mut self, factor: f64) -> Self {
        self.mean_product *= factor;
        self
    }

    fn check_arity(&self, len: usize, min: usize) -> Result<()> {
        if len < min || len > self.n {
            return Err(Error::InvalidParameter(format!(
                "expected between {min} and {} coordinates, got {len}",
                self.n
            )));
        }
        Ok(())
    }

    /// `P(X_1 >= x_1, .., X_j >= x_j)` for `j <= n`; omitted coordinates are 0.
    pub fn joint_survival(&self, x: &[usize]) -> Result<f64> {
        self.check_arity(x.len(), 0)?;
        Ok(self.marginal().survival(x.iter().sum()))
    }

    /// `P(X_1 = x_1, .., X_j = x_j) = (-1)^j Δ^j S^{(n-1)*}(x_1 + .. + x_j)`.
    pub fn joint_pmf(&self, x: &[usize]) -> Result<JointPmf> {
        self.check_arity(x.len(), 1)?;
        let j = x.len();
        let marginal = self.marginal();
        let sign = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
        let raw = sign * forward_difference(|y| marginal.survival(y), x.iter().sum(), j);
        if raw < -NEGATIVE_PMF_TOLERANCE {
            return Err(Error::Integrity {
                what: format!("joint pmf at {x:?}"),
                value: raw,
            });
        }
        Ok(JointPmf {
            value: raw.max(0.0),
            raw,
        })
    }

    /// `P(Z = z)` by the closed form route.
    pub fn sum_pmf(&self, z: usize) -> f64 {
        let k = self.n - 1;
        self.base().pmf(z + k) * binomial((z + k) as u64, k as u64) / self.mean_product
    }

    pub fn sum_pmf_via(&self, z: usize, route: SumRoute) -> Result<f64> {
        let k = (self.n - 1) as u64;
        match route {
            SumRoute::ClosedForm => Ok(self.sum_pmf(z)),
            SumRoute::Differences => {
                let marginal = self.marginal();
                let sign = if self.n.is_multiple_of(2) { 1.0 } else { -1.0 };
                let diff = sign * forward_difference(|y| marginal.survival(y), z, self.n);
                Ok(diff * binomial(z as u64 + k, k))
            }
            SumRoute::Compositions => {
                let mut parts = vec![0usize; self.n];
                let mut acc = Vec::new();
                self.visit_compositions(z, 0, &mut parts, &mut acc)?;
                Ok(compensated_sum(acc))
            }
        }
    }

    fn visit_compositions(
        &self,
        remaining: usize,
        slot: usize,
        parts: &mut [usize],
        acc: &mut Vec<f64>,
    ) -> Result<()> {
        if slot + 1 == parts.len() {
            parts[slot] = remaining;
            acc.push(self.joint_pmf(parts)?.value);
            return Ok(());
        }
        for v in 0..=remaining {
            parts[slot] = v;
            self.visit_compositions(remaining - v, slot + 1, parts, acc)?;
        }
        Ok(())
    }

    /// Number of `z` values with (materialized) positive sum probability.
    pub fn sum_support_len(&self) -> usize {
        let base_len = self
            .chain
            .level(0)
            .and_then(|l| l.as_explicit())
            .map_or(0, |e| e.len());
        base_len.saturating_sub(self.n - 1)
    }

    /// `P(Z = z)` for `z` over the materialized support.
    pub fn sum_distribution(&self) -> Vec<f64> {
        (0..self.sum_support_len())
            .map(|z| self.sum_pmf(z))
            .collect()
    }

    pub fn marginal_pmf(&self, x: usize) -> f64 {
        self.marginal().pmf(x)
    }

    /// The bivariate marginal recursion
    /// `P(X_1 = x + 1) = P(X_1 = x) - P(Z = x) / (x + 1)`,
    /// `P(X_1 = 0) = E[1 / (Z + 1)]`, for `x = 0..=x_max`.
    pub fn marginal_pmf_by_recursion(&self, x_max: usize) -> Result<Vec<f64>> {
        if self.n != 2 {
            return Err(Error::UnsupportedDimension {
                n: self.n,
                supported: "2".into(),
            });
        }
        let sums = self.sum_distribution();
        let at_zero = compensated_sum(sums.iter().enumerate().map(|(z, p)| p / (z + 1) as f64));
        let mut out = Vec::with_capacity(x_max + 1);
        out.push(at_zero);
        for x in 0..x_max {
            let p_z = sums.get(x).copied().unwrap_or(0.0);
            out.push(out[x] - p_z / (x + 1) as f64);
        }
        Ok(out)
    }

    /// Mean and variance of the marginal by direct summation.
    pub fn marginal_stats(&self) -> (f64, f64) {
        let pmf = self
            .marginal()
            .as_explicit()
            .expect("levels are explicit")
            .pmf();
        let mean = compensated_sum(pmf.iter().enumerate().map(|(x, p)| x as f64 * p));
        let variance = compensated_sum(
            pmf.iter()
                .enumerate()
                .map(|(x, p)| (x as f64 - mean).powi(2) * p),
        );
        (mean, variance)
    }

    /// Pearson correlation between any two coordinates.
    pub fn correlation(&self, method: RhoMethod) -> Result<RhoResult> {
        let value = match method {
            RhoMethod::MarginalForm => {
                let (e, v) = self.marginal_stats();
                if !(v > ZERO_VARIANCE_THRESHOLD) {
                    return Err(Error::ZeroVariance);
                }
                (v - e * e - e) / (2.0 * v)
            }
            RhoMethod::BaseMomentForm => self.rho_from_base_moments()?,
            RhoMethod::ClosedForm => match self.base().kind() {
                Kind::Poisson { lambda } => poisson_rho(*lambda, self.n)?,
                Kind::Geometric { .. } => 0.0,
                Kind::Explicit(_) => {
                    return Err(Error::InvalidParameter(
                        "no closed-form correlation for an explicit base".into(),
                    ))
                }
            },
        };
        Ok(RhoResult { value, method })
    }

    fn rho_from_base_moments(&self) -> Result<f64> {
        if self.n > 4 {
            return Err(Error::UnsupportedDimension {
                n: self.n,
                supported: "2..=4".into(),
            });
        }
        let m = (1..=self.n as u32 + 1)
            .map(|j| self.base().moment(j).map(|e| e.value))
            .collect::<Result<Vec<f64>>>()?;
        let mu = m[0];
        let (num, den) = match self.n {
            2 => {
                let (m2, m3) = (m[1], m[2]);
                (
                    2.0 * mu * m3 - 3.0 * m2 * m2 + mu * mu,
                    4.0 * mu * m3 - 3.0 * m2 * m2 - mu * mu,
                )
            }
            // rho = 1/2 - num/den; fold into (den/2 - num) / den
            3 => {
                let (m2, m3, m4) = (m[1], m[2], m[3]);
                let num = (mu - m3) * (2.0 * mu - 3.0 * m2 + m3);
                let den = 2.0 * mu * mu
                    + 2.0 * m3 * m3
                    + 3.0 * m2 * (m2 - m4)
                    + mu * (-3.0 * m2 - 4.0 * m3 + 3.0 * m4);
                (0.5 * den - num, den)
            }
            _ => {
                let (m2, m3, m4, m5) = (m[1], m[2], m[3], m[4]);
                let d = 36.0 * mu * mu + 65.0 * m2 * m2 + 20.0 * m3 * m3 - 70.0 * m2 * m4
                    + 5.0 * m4 * m4
                    + 24.0 * m2 * m5
                    - 8.0 * m3 * m5;
                let j = 21.0 * m2 + 8.0 * m3 - 15.0 * m4 + 4.0 * m5;
                let num =
                    5.0 * (6.0 * mu - 11.0 * m2 + 6.0 * m3 - m4) * (2.0 * mu - m2 - 2.0 * m3 + m4);
                let den = 2.0 * (d - 4.0 * mu * j);
                (0.5 * den - num, den)
            }
        };
        if den.abs() < ZERO_VARIANCE_THRESHOLD {
            return Err(Error::ZeroVariance);
        }
        Ok(num / den)
    }
}

/// Correlation of the Poisson(λ) model for `n` in 2..=5:
/// `-λ/(6+λ)`, `-λ/(12+2λ)`, `-λ/(20+3λ)`, `-λ/(30+4λ)`.
pub fn poisson_rho(lambda: f64, n: usize) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    let den = match n {
        2 => 6.0 + lambda,
        3 => 12.0 + 2.0 * lambda,
        4 => 20.0 + 3.0 * lambda,
        5 => 30.0 + 4.0 * lambda,
        _ => {
            return Err(Error::UnsupportedDimension {
                n,
                supported: "2..=5".into(),
            })
        }
    };
    Ok(-lambda / den)
}

/// The pattern `-λ / (n(n+1) + (n-1)λ)` extrapolated from the tabulated
/// dimensions. Unproven for `n > 5`; only checked numerically.
pub fn poisson_rho_conjecture(lambda: f64, n: usize) -> f64 {
    let n = n as f64;
    -lambda / (n * (n + 1.0) + (n - 1.0) * lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poisson(lambda: f64) -> DiscreteDistribution {
        DiscreteDistribution::poisson(lambda).unwrap()
    }

    fn geometric(q: f64) -> DiscreteDistribution {
        DiscreteDistribution::geometric(q).unwrap()
    }

    #[test]
    fn build_rejects_bad_dimensions() {
        assert!(matches!(
            build_model(&poisson(1.0), 1),
            Err(Error::UnsupportedDimension { .. })
        ));
        assert!(build_model(&poisson(1.0), 11).is_err());
        let b = DiscreteDistribution::explicit(vec![0.5, 0.5]).unwrap();
        assert_eq!(
            build_model(&b, 3).unwrap_err(),
            Error::ZeroMean { level: 2 }
        );
    }

    #[test]
    fn poisson_bivariate_marginal_is_scaled_tail() {
        let m = build_model(&poisson(1.0), 2).unwrap();
        let base = poisson(1.0);
        for x in 0..30 {
            // P(X_1 = x) = P(Poisson(1) >= x + 1) / 1
            assert!((m.marginal_pmf(x) - base.survival(x + 1)).abs() < 1e-15);
        }
        assert!((m.marginal_pmf(0) - 0.632_120_558_828_557_7).abs() < 1e-15);
    }

    #[test]
    fn joint_survival_examples() {
        let m = build_model(&geometric(0.5), 2).unwrap();
        assert_eq!(m.joint_survival(&[0, 0]).unwrap(), 1.0);
        assert_eq!(m.joint_survival(&[]).unwrap(), 1.0);
        for (a, b) in [(1, 2), (3, 0), (5, 7)] {
            let expected = 0.5f64.powi((a + b) as i32);
            assert!((m.joint_survival(&[a, b]).unwrap() - expected).abs() < 1e-15);
        }
        assert!(m.joint_survival(&[1, 1, 1]).is_err());

        let p = build_model(&poisson(1.0), 2).unwrap();
        let base = poisson(1.0);
        let oracle: f64 = (3..80).map(|h| base.survival(h)).sum();
        assert!((p.joint_survival(&[1, 1]).unwrap() - oracle).abs() < 1e-14);
    }

    #[test]
    fn poisson_joint_pmf_matches_shifted_base() {
        let lambda = 2.5;
        let m = build_model(&poisson(lambda), 2).unwrap();
        for a in 0..8 {
            for b in 0..8 {
                let expected = poisson(lambda).pmf(a + b + 1) / lambda;
                let got = m.joint_pmf(&[a, b]).unwrap();
                assert!((got.value - expected).abs() < 1e-14);
            }
        }
        assert!(m.joint_pmf(&[]).is_err());
    }

    #[test]
    fn sum_examples() {
        let b = DiscreteDistribution::explicit(vec![0.25, 0.5, 0.25]).unwrap();
        let m = build_model(&b, 2).unwrap();
        assert!((m.sum_pmf(0) - 0.5).abs() < 1e-15);
        let compositions = m.sum_pmf_via(0, SumRoute::Compositions).unwrap();
        assert!((compositions - 0.5).abs() < 1e-15);

        let p = build_model(&poisson(3.0), 2).unwrap();
        for z in 0..30 {
            assert!((p.sum_pmf(z) - poisson(3.0).pmf(z)).abs() < 1e-15);
        }
    }

    #[test]
    fn sum_routes_agree() {
        let b = DiscreteDistribution::explicit(vec![0.1, 0.3, 0.05, 0.2, 0.15, 0.2]).unwrap();
        for n in 2..=4 {
            let m = build_model(&b, n).unwrap();
            for z in 0..m.sum_support_len() + 2 {
                let closed = m.sum_pmf(z);
                let diff = m.sum_pmf_via(z, SumRoute::Differences).unwrap();
                let comp = m.sum_pmf_via(z, SumRoute::Compositions).unwrap();
                assert!((closed - diff).abs() < 1e-12, "n={n} z={z}");
                assert!((closed - comp).abs() < 1e-12, "n={n} z={z}");
            }
            let total: f64 = m.sum_distribution().iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bivariate_recursion_matches_marginal() {
        let m = build_model(&poisson(1.0), 2).unwrap();
        let rec = m.marginal_pmf_by_recursion(40).unwrap();
        for (x, r) in rec.iter().enumerate() {
            assert!((r - m.marginal_pmf(x)).abs() < 1e-12, "x={x}");
        }
        let m3 = build_model(&poisson(1.0), 3).unwrap();
        assert!(m3.marginal_pmf_by_recursion(5).is_err());
    }

    #[test]
    fn correlation_examples() {
        let m = build_model(&poisson(1.0), 2).unwrap();
        let rho = m.correlation(RhoMethod::MarginalForm).unwrap().value;
        assert!((rho + 1.0 / 7.0).abs() < 1e-12);
        let m = build_model(&poisson(5.0), 4).unwrap();
        let rho = m.correlation(RhoMethod::MarginalForm).unwrap().value;
        assert!((rho + 5.0 / 35.0).abs() < 1e-12);
        let g = build_model(&geometric(0.5), 2).unwrap();
        assert!(g.correlation(RhoMethod::MarginalForm).unwrap().value.abs() < 1e-12);
        assert_eq!(g.correlation(RhoMethod::ClosedForm).unwrap().value, 0.0);
    }

    #[test]
    fn small_means_keep_deep_levels_accurate() {
        for n in 2..=5 {
            let m = build_model(&poisson(0.01), n).unwrap();
            let rho = m.correlation(RhoMethod::MarginalForm).unwrap().value;
            assert!((rho - poisson_rho(0.01, n).unwrap()).abs() < 1e-12, "n={n}");
        }
        let m = build_model(&geometric(0.02), 6).unwrap();
        let rho = m.correlation(RhoMethod::MarginalForm).unwrap().value;
        assert!(rho.abs() < 1e-12);
    }

    #[test]
    fn correlation_forms_agree() {
        let bases = [
            poisson(0.7),
            poisson(4.0),
            geometric(0.35),
            DiscreteDistribution::explicit(vec![0.1, 0.3, 0.05, 0.2, 0.15, 0.2]).unwrap(),
        ];
        for base in &bases {
            for n in 2..=4 {
                let m = build_model(base, n).unwrap();
                let a = m.correlation(RhoMethod::MarginalForm).unwrap().value;
                let b = m.correlation(RhoMethod::BaseMomentForm).unwrap().value;
                assert!((a - b).abs() < 1e-9, "{base:?} n={n}: {a} vs {b}");
            }
        }
        let m = build_model(&poisson(1.0), 5).unwrap();
        assert!(matches!(
            m.correlation(RhoMethod::BaseMomentForm),
            Err(Error::UnsupportedDimension { .. })
        ));
    }

    #[test]
    fn degenerate_marginal_has_zero_variance() {
        let b = DiscreteDistribution::explicit(vec![0.5, 0.0, 0.5]).unwrap();
        // level 2 of a law on {0,1,2} is a point mass at 0
        let m = build_model(&b, 3).unwrap();
        assert_eq!(
            m.correlation(RhoMethod::MarginalForm).unwrap_err(),
            Error::ZeroVariance
        );
    }

    #[test]
    fn poisson_rho_table_and_conjecture() {
        assert!((poisson_rho(100.0, 2).unwrap() + 100.0 / 106.0).abs() < 1e-15);
        assert!((poisson_rho(10.0, 3).unwrap() + 0.3125).abs() < 1e-15);
        assert!((poisson_rho(0.01, 5).unwrap() + 0.01 / 30.04).abs() < 1e-15);
        assert!(poisson_rho(1.0, 6).is_err());
        assert!(poisson_rho(1.0, 1).is_err());
        for n in 2..=5 {
            for lambda in [0.3, 2.0, 40.0] {
                let diff = poisson_rho(lambda, n).unwrap() - poisson_rho_conjecture(lambda, n);
                assert!(diff.abs() < 1e-15);
            }
        }
    }

    #[test]
    fn fault_injection_scales_sum_law() {
        let m = build_model(&poisson(1.0), 2)
            .unwrap()
            .with_mean_product_scale(2.0);
        let total: f64 = m.sum_distribution().iter().sum();
        assert!((total - 0.5).abs() < 1e-12);
    }
}
