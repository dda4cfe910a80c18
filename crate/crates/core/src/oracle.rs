//! Brute-force reference computations.
//!
//! Nothing here reuses the equilibrium ladder or the model's cached means:
//! survival functions are rebuilt by literal nested tail sums from the base
//! survival, means are recomputed as `sum_{h >= 1} S(h)`, and differences are
//! taken by repeated subtraction. Only the base law's `pmf`/`survival`
//! primitives are shared with the main path.

use std::fmt;

use serde::Serialize;

use crate::dist::{check_n_monotone, DiscreteDistribution, Kind};
use crate::error::{Error, Result};
use crate::model::{RhoMethod, SchurModel, SumRoute};
use crate::numeric::{binomial, CompensatedSum};

const ORACLE_TAIL: f64 = 1e-14;
const ORACLE_ZERO_MEAN: f64 = 1e-300;
/// Omitted probability allowed in brute-force joint moments.
pub const OMITTED_MASS_LIMIT: f64 = 1e-10;

/// Support bound for the oracle grid: the smallest `M` whose tail, weighted
/// for moments of the `order`-th level, is below 1e-14; explicit laws use
/// their full support.
pub fn default_support(dist: &DiscreteDistribution, order: usize) -> usize {
    match dist.kind() {
        Kind::Explicit(e) => e.len().saturating_sub(1),
        _ => {
            let weight = order as i32 + 2;
            let mut m = 0usize;
            while dist.survival(m + 1) * (m as f64 + 2.0).powi(weight) >= ORACLE_TAIL
                || (m as f64) < dist.mean().unwrap_or(0.0)
            {
                m += 1;
            }
            m
        }
    }
}

/// Survival tables `S^{k*}(0..=grid)` for `k = 0..=order`.
struct BruteLadder {
    survivals: Vec<Vec<f64>>,
    means: Vec<f64>,
}

fn brute_ladder(dist: &DiscreteDistribution, order: usize, grid: usize) -> Result<BruteLadder> {
    let base: Vec<f64> = (0..=grid).map(|h| dist.survival(h)).collect();
    let mut survivals = vec![base];
    let mut means = Vec::with_capacity(order);
    for k in 1..=order {
        let prev = &survivals[k - 1];
        let mean = prev[1..]
            .iter()
            .copied()
            .collect::<CompensatedSum>()
            .value();
        if !(mean >= ORACLE_ZERO_MEAN) {
            return Err(Error::ZeroMean { level: k });
        }
        // S^{k*}(x) = sum_{h = x+1}^{grid} S^{(k-1)*}(h) / mean, summed afresh per x
        let next: Vec<f64> = (0..=grid)
            .map(|x| {
                let mut acc = CompensatedSum::new();
                for h in (x + 1..=grid).rev() {
                    acc.add(prev[h]);
                }
                acc.value() / mean
            })
            .collect();
        means.push(mean);
        survivals.push(next);
    }
    Ok(BruteLadder { survivals, means })
}

/// pmf of the `order`-th equilibrium of `dist` on `0..=x_max`.
pub fn brute_equilibrium(
    dist: &DiscreteDistribution,
    order: usize,
    x_max: usize,
) -> Result<Vec<f64>> {
    if order == 0 {
        return Err(Error::InvalidParameter(
            "oracle order must be at least 1".into(),
        ));
    }
    let grid = default_support(dist, order).max(x_max) + order + 2;
    let ladder = brute_ladder(dist, order, grid)?;
    let below = &ladder.survivals[order - 1];
    let mean = ladder.means[order - 1];
    Ok((0..=x_max).map(|x| below[x + 1] / mean).collect())
}

/// Grid size used by the joint-law oracles for `model`.
pub fn default_grid(model: &SchurModel) -> usize {
    default_support(model.base(), model.dimension() - 1) + 2 * (model.dimension() - 1)
}

/// Joint pmfs of subvectors of `model`, rebuilt from scratch.
struct BruteJoint {
    /// `(-1)^j Δ^j S^{(n-1)*}` tabulated for each `j = 0..=n`.
    signed_differences: Vec<Vec<f64>>,
    survival: Vec<f64>,
}

impl BruteJoint {
    fn new(model: &SchurModel, grid: usize) -> Result<Self> {
        let n = model.dimension();
        let ladder = brute_ladder(model.base(), n - 1, grid + n + 1)?;
        let survival = ladder.survivals[n - 1].clone();
        let mut signed_differences = vec![survival.clone()];
        for j in 1..=n {
            let prev = &signed_differences[j - 1];
            // (-1)^j Δ^j S(x) = (-1)^{j-1} Δ^{j-1} S(x) - (-1)^{j-1} Δ^{j-1} S(x+1)
            let next: Vec<f64> = (0..prev.len() - 1).map(|x| prev[x] - prev[x + 1]).collect();
            signed_differences.push(next);
        }
        Ok(Self {
            signed_differences,
            survival,
        })
    }

    fn pmf(&self, j: usize, total: usize) -> f64 {
        self.signed_differences[j]
            .get(total)
            .copied()
            .unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointMomentEstimate {
    pub value: f64,
    /// Upper bound on the probability of the cells left out of the grid.
    pub omitted_mass_bound: f64,
}

/// `E[prod X_i^{p_i}]` over the first `powers.len()` coordinates, by direct
/// summation of the joint pmf over `[0, x_max]^j`.
pub fn brute_joint_moment(
    model: &SchurModel,
    powers: &[u32],
    x_max: usize,
) -> Result<JointMomentEstimate> {
    let j = powers.len();
    if j == 0 || j > model.dimension() {
        return Err(Error::InvalidParameter(format!(
            "need between 1 and {} powers, got {j}",
            model.dimension()
        )));
    }
    let joint = BruteJoint::new(model, x_max * j)?;
    let omitted = j as f64 * joint.survival.get(x_max + 1).copied().unwrap_or(0.0);
    if omitted > OMITTED_MASS_LIMIT {
        return Err(Error::NonConvergent(format!(
            "grid up to {x_max} omits probability up to {omitted:e}"
        )));
    }
    let mut acc = CompensatedSum::new();
    let mut point = vec![0usize; j];
    loop {
        let total: usize = point.iter().sum();
        let p = joint.pmf(j, total);
        if p != 0.0 {
            let weight: f64 = point
                .iter()
                .zip(powers)
                .map(|(&x, &k)| (x as f64).powi(k as i32))
                .product();
            acc.add(weight * p);
        }
        // odometer over [0, x_max]^j
        let mut slot = 0;
        loop {
            if slot == j {
                return Ok(JointMomentEstimate {
                    value: acc.value(),
                    omitted_mass_bound: omitted,
                });
            }
            point[slot] += 1;
            if point[slot] <= x_max {
                break;
            }
            point[slot] = 0;
            slot += 1;
        }
    }
}

/// `P(Z = z)` for `z = 0..=z_max`: every composition of `z` into `n` parts
/// has the same joint probability, so each cell is counted once and scaled
/// by the number of compositions.
pub fn brute_sum_pmf(model: &SchurModel, z_max: usize) -> Result<Vec<f64>> {
    let n = model.dimension();
    let joint = BruteJoint::new(model, z_max)?;
    Ok((0..=z_max)
        .map(|z| joint.pmf(n, z) * binomial((z + n - 1) as u64, (n - 1) as u64))
        .collect())
}

/// Mean and variance of `X_1` from the brute-force marginal.
pub fn brute_marginal_stats(model: &SchurModel, x_max: usize) -> Result<(f64, f64)> {
    let mean = brute_joint_moment(model, &[1], x_max)?.value;
    let second = brute_joint_moment(model, &[2], x_max)?.value;
    Ok((mean, second - mean * mean))
}

/// Pearson correlation of `(X_1, X_2)` from sums over the bivariate pmf.
pub fn brute_correlation(model: &SchurModel, x_max: usize) -> Result<f64> {
    let (mean, variance) = brute_marginal_stats(model, x_max)?;
    let cross = brute_joint_moment(model, &[1, 1], x_max)?.value;
    if !(variance > 1e-300) {
        return Err(Error::ZeroVariance);
    }
    Ok((cross - mean * mean) / variance)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub max_abs_error: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub location: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn record(
        &mut self,
        name: &str,
        max_abs_error: f64,
        tolerance: f64,
        location: Option<usize>,
    ) {
        self.checks.push(Check {
            name: name.to_string(),
            pass: max_abs_error <= tolerance,
            max_abs_error,
            tolerance,
            location,
        });
    }

    /// Records an operation that failed outright.
    fn record_error(&mut self, name: &str, tolerance: f64, err: &Error) {
        self.checks.push(Check {
            name: format!("{name} ({err})"),
            pass: false,
            max_abs_error: f64::INFINITY,
            tolerance,
            location: None,
        });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .checks
            .iter()
            .map(|c| c.name.len())
            .max()
            .unwrap_or(5)
            .max(5);
        writeln!(
            f,
            "{:<width$}  {:<4}  {:>12}  {:>9}  location",
            "check", "pass", "max |error|", "tolerance"
        )?;
        for c in &self.checks {
            writeln!(
                f,
                "{:<width$}  {:<4}  {:>12.3e}  {:>9.1e}  {}",
                c.name,
                if c.pass { "ok" } else { "FAIL" },
                c.max_abs_error,
                c.tolerance,
                c.location
                    .map_or_else(|| "-".to_string(), |l| l.to_string())
            )?;
        }
        Ok(())
    }
}

fn max_abs_diff(pairs: impl Iterator<Item = (usize, f64, f64)>) -> (f64, Option<usize>) {
    pairs.fold((0.0, None), |(worst, loc), (x, a, b)| {
        let d = (a - b).abs();
        if d > worst || d.is_nan() {
            (d, Some(x))
        } else {
            (worst, loc)
        }
    })
}

/// Runs the full consistency suite on `model`.
pub fn verify_model(model: &SchurModel) -> VerificationReport {
    let mut report = VerificationReport::default();
    let n = model.dimension();
    let marginal = model.marginal();
    let support = marginal.as_explicit().map_or(0, |e| e.len());

    let mono = check_n_monotone(marginal, n, support.min(400));
    report.record(
        "marginal_n_monotone",
        (-mono.worst_value).max(0.0),
        1e-12,
        mono.first_violation.map(|v| v.point),
    );

    let sums = model.sum_distribution();
    let total: f64 = sums.iter().copied().collect::<CompensatedSum>().value();
    report.record("sum_pmf_normalization", (total - 1.0).abs(), 1e-10, None);

    let marginal_total: f64 = marginal
        .as_explicit()
        .map(|e| e.pmf().iter().copied().collect::<CompensatedSum>().value())
        .unwrap_or(0.0);
    report.record(
        "marginal_normalization",
        (marginal_total - 1.0).abs(),
        1e-10,
        None,
    );

    let z_max = sums.len().min(400);
    let routes = (0..z_max).map(|z| {
        let diff = model
            .sum_pmf_via(z, SumRoute::Differences)
            .unwrap_or(f64::NAN);
        (z, sums[z], diff)
    });
    let (err, loc) = max_abs_diff(routes);
    report.record("sum_pmf_closed_vs_differences", err, 1e-10, loc);

    match brute_sum_pmf(model, z_max.saturating_sub(1)) {
        Ok(oracle) => {
            let (err, loc) = max_abs_diff(
                oracle
                    .iter()
                    .zip(&sums)
                    .enumerate()
                    .map(|(z, (&o, &s))| (z, o, s)),
            );
            report.record("sum_pmf_vs_oracle", err, 1e-10, loc);
        }
        Err(e) => report.record_error("sum_pmf_vs_oracle", 1e-10, &e),
    }

    if n == 2 {
        let x_max = support.min(400);
        match model.marginal_pmf_by_recursion(x_max) {
            Ok(rec) => {
                let (err, loc) = max_abs_diff(
                    rec.iter()
                        .enumerate()
                        .map(|(x, &r)| (x, r, model.marginal_pmf(x))),
                );
                report.record("marginal_bivariate_recursion", err, 1e-10, loc);
            }
            Err(e) => report.record_error("marginal_bivariate_recursion", 1e-10, &e),
        }
    }

    let x_max = support.min(400).saturating_sub(1);
    match brute_equilibrium(model.base(), n - 1, x_max) {
        Ok(oracle) => {
            let (err, loc) = max_abs_diff(
                oracle
                    .iter()
                    .enumerate()
                    .map(|(x, &o)| (x, o, model.marginal_pmf(x))),
            );
            report.record("marginal_vs_oracle", err, 1e-10, loc);
        }
        Err(e) => report.record_error("marginal_vs_oracle", 1e-10, &e),
    }

    match brute_marginal_stats(model, default_grid(model)) {
        Ok((mean, variance)) => {
            let (m, v) = model.marginal_stats();
            report.record("marginal_mean_vs_oracle", (m - mean).abs(), 1e-9, None);
            report.record(
                "marginal_variance_vs_oracle",
                (v - variance).abs(),
                1e-9,
                None,
            );
        }
        Err(e) => report.record_error("marginal_stats_vs_oracle", 1e-9, &e),
    }

    match model.correlation(RhoMethod::MarginalForm) {
        Ok(rho) => {
            let rho = rho.value;
            let bound = -1.0 / (n as f64 - 1.0);
            report.record("exchangeability_bound", (bound - rho).max(0.0), 1e-9, None);
            if n <= 4 {
                match model.correlation(RhoMethod::BaseMomentForm) {
                    Ok(other) => report.record(
                        "rho_marginal_vs_base_moments",
                        (rho - other.value).abs(),
                        1e-9,
                        None,
                    ),
                    Err(e) => report.record_error("rho_marginal_vs_base_moments", 1e-9, &e),
                }
            }
            if let Ok(closed) = model.correlation(RhoMethod::ClosedForm) {
                report.record("rho_closed_form", (rho - closed.value).abs(), 1e-9, None);
            }
            match brute_correlation(model, default_grid(model)) {
                Ok(brute) => report.record("rho_vs_oracle", (rho - brute).abs(), 1e-8, None),
                Err(e) => report.record_error("rho_vs_oracle", 1e-8, &e),
            }
        }
        Err(e) => report.record_error("rho_marginal_form", 1e-9, &e),
    }
    report
}
