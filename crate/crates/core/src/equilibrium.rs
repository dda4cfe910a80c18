//! The discrete stationary-excess operator and its iterates.
//!
//! For a law with survival `S` and mean `μ`, the (first order) equilibrium
//! law has pmf `p*(x) = S(x + 1) / μ`. Applying the map `i` times gives the
//! `i`-th order equilibrium `X^{i*}`, with means `μ_{i:1}`.

use num_traits::ToPrimitive;

use crate::coeffs::delta_inverse_coeffs;
use crate::dist::{DiscreteDistribution, ExplicitPmf, Kind};
use crate::error::{Error, Result};
use crate::numeric::compensated_sum;

/// Means below this are treated as zero.
pub const ZERO_MEAN_THRESHOLD: f64 = 1e-300;

/// A base law with its equilibrium levels `0..=order` materialized as
/// explicit pmfs.
#[derive(Debug, Clone)]
pub struct EquilibriumChain {
    base: DiscreteDistribution,
    levels: Vec<DiscreteDistribution>,
    /// `μ_{0:1}, .., μ_{order-1:1}`
    means: Vec<f64>,
}

impl EquilibriumChain {
    pub fn base(&self) -> &DiscreteDistribution {
        &self.base
    }

    pub fn order(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[DiscreteDistribution] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> Option<&DiscreteDistribution> {
        self.levels.get(i)
    }

    /// The first moments of levels `0..order`, each of which normalizes the
    /// level above it.
    pub fn means(&self) -> &[f64] {
        &self.means
    }

    /// `μ_{0:1} μ_{1:1} .. μ_{k-1:1}`.
    pub fn mean_product(&self, k: usize) -> f64 {
        self.means[..k].iter().product()
    }
}

fn weighted_mean(pmf: &[f64]) -> f64 {
    compensated_sum(pmf.iter().enumerate().map(|(x, p)| x as f64 * p))
}

/// Builds levels `0..=n` of the equilibrium ladder of `dist`.
///
/// Closed-form laws are laid out on a finite support whose tail (weighted by
/// `(1 + x)^(n + 3)`) stays below `tail_tolerance / (n + 1)`, tightened by
/// the product of the level means below one, since each level divides the
/// tail it inherits by its mean.
pub fn nth_equilibrium(dist: &DiscreteDistribution, n: usize) -> Result<EquilibriumChain> {
    let eps = dist.tail_tolerance() / (n + 1) as f64;
    let chain = build_ladder(dist, n, eps)?;
    if matches!(dist.kind(), Kind::Explicit(_)) {
        return Ok(chain);
    }
    let shrink: f64 = chain.means.iter().map(|m| m.min(1.0)).product();
    if shrink < 1.0 {
        build_ladder(dist, n, eps * shrink)
    } else {
        Ok(chain)
    }
}

fn build_ladder(dist: &DiscreteDistribution, n: usize, eps: f64) -> Result<EquilibriumChain> {
    let expansion = dist.expand(eps, n as u32 + 3)?;
    let base_level = match dist.kind() {
        Kind::Explicit(_) => dist.clone(),
        _ => DiscreteDistribution::from_explicit(
            ExplicitPmf::from_parts(expansion.pmf.clone(), expansion.discarded()),
            dist,
        ),
    };
    let mut levels = vec![base_level];
    let mut means = Vec::with_capacity(n);
    // survival of the current level at 0..=len, tail included where known
    let mut survival = expansion.survival;

    for i in 0..n {
        let current = &levels[i];
        let mean = match (i, dist.kind()) {
            (0, Kind::Poisson { .. } | Kind::Geometric { .. }) => dist.mean()?,
            _ => weighted_mean(current.as_explicit().expect("levels are explicit").pmf()),
        };
        if !mean.is_finite() {
            return Err(Error::NonConvergent(format!(
                "mean of level {i} is not finite"
            )));
        }
        if mean < ZERO_MEAN_THRESHOLD {
            return Err(Error::ZeroMean { level: i + 1 });
        }
        let mut pmf: Vec<f64> = survival[1..].iter().map(|s| s / mean).collect();
        while pmf.len() > 1 && pmf.last() == Some(&0.0) {
            pmf.pop();
        }
        let discarded = (1.0 - compensated_sum(pmf.iter().copied())).max(0.0);
        let next = ExplicitPmf::from_parts(pmf, discarded);
        survival = next.suffix_sums().to_vec();
        survival.push(0.0);
        means.push(mean);
        levels.push(DiscreteDistribution::from_explicit(next, dist));
    }
    Ok(EquilibriumChain {
        base: dist.clone(),
        levels,
        means,
    })
}

/// The stationary-excess (first order equilibrium) law of `dist`.
pub fn stationary_excess(dist: &DiscreteDistribution) -> Result<DiscreteDistribution> {
    let mut chain = nth_equilibrium(dist, 1)?;
    Ok(chain.levels.pop().expect("order 1 chain has two levels"))
}

/// `μ_{i:j} = E[(X^{i*})^j]` by the moment recursion
/// `μ_{i:j} = (1 / μ_{i-1:1}) sum_{r=1}^{j+1} μ_{i-1:r} a_r(j + 1)`,
/// seeded with the base moments `μ_{0:r} = E(X^r)` for `r <= i + j`.
pub fn equilibrium_moment(chain: &EquilibriumChain, i: usize, j: usize) -> Result<f64> {
    if j == 0 {
        return Err(Error::InvalidParameter(
            "moment order must be at least 1".into(),
        ));
    }
    if i > chain.order() {
        return Err(Error::InvalidParameter(format!(
            "level {i} exceeds chain order {}",
            chain.order()
        )));
    }
    let top = i + j;
    // moments[r - 1] = μ_{level:r}
    let mut moments = (1..=top)
        .map(|r| chain.base().moment(r as u32).map(|m| m.value))
        .collect::<Result<Vec<f64>>>()?;
    let coeffs: Vec<Vec<f64>> = (2..=top + 1)
        .map(|n| {
            delta_inverse_coeffs(n)
                .iter()
                .map(|c| c.to_f64().unwrap_or(f64::NAN))
                .collect()
        })
        .collect();
    for level in 1..=i {
        let prev_mean = moments[0];
        if prev_mean < ZERO_MEAN_THRESHOLD {
            return Err(Error::ZeroMean { level });
        }
        let width = top - level;
        moments = (1..=width)
            .map(|r| {
                let a = &coeffs[r - 1]; // a_s(r + 1), s = 1..=r+1
                compensated_sum((1..=r + 1).map(|s| moments[s - 1] * a[s - 1])) / prev_mean
            })
            .collect();
    }
    let value = moments[j - 1];
    if !value.is_finite() {
        return Err(Error::NonConvergent(format!("μ_{{{i}:{j}}} is not finite")));
    }
    Ok(value)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumStats {
    pub mean: f64,
    pub variance: f64,
}

/// Mean and variance of the first order equilibrium law in terms of the
/// first three moments of the base:
/// `E = (E X^2 / μ - 1) / 2`, `V = (4 μ E X^3 - 3 (E X^2)^2 - μ^2) / (12 μ^2)`.
pub fn bivariate_eq_stats(dist: &DiscreteDistribution) -> Result<EquilibriumStats> {
    let mu = dist.moment(1)?.value;
    if mu < ZERO_MEAN_THRESHOLD {
        return Err(Error::ZeroMean { level: 1 });
    }
    let m2 = dist.moment(2)?.value;
    let m3 = dist.moment(3)?.value;
    let mean = 0.5 * (m2 / mu - 1.0);
    let variance = (4.0 * mu * m3 - 3.0 * m2 * m2 - mu * mu) / (12.0 * mu * mu);
    if !(mean.is_finite() && variance.is_finite()) {
        return Err(Error::NonConvergent("base moments are not finite".into()));
    }
    Ok(EquilibriumStats { mean, variance })
}
