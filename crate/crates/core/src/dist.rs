//! Discrete distributions on the non-negative integers.
//!
//! Survival functions follow the convention `S(x) = P(X >= x)`, so
//! `S(0) = 1` for every distribution and `p(x) = S(x) - S(x + 1)`.
//! Many libraries use `P(X > x)` instead; every formula in this crate
//! relies on the inclusive form.

use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, ln_factorial, stirling2_row, CompensatedSum};

pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-12;
/// Largest support point any expansion may materialize.
pub const DEFAULT_TRUNCATION_BOUND: usize = 1_000_000;
/// Slack for `(-1)^j Δ^j S(x) >= 0` checks.
pub const MONOTONICITY_TOLERANCE: f64 = 1e-12;
const EXPLICIT_SUM_TOLERANCE: f64 = 1e-12;
/// Beyond this rate the Poisson pmf is evaluated in log space.
const POISSON_DIRECT_LIMIT: f64 = 700.0;
const CLOSED_FORM_MOMENT_ORDER: u32 = 20;

/// A finite pmf on `{0, .., len - 1}` with precomputed suffix sums.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitPmf {
    pmf: Vec<f64>,
    /// `survival[x] = sum_{h >= x} pmf[h]`, one entry per support point.
    survival: Vec<f64>,
    discarded: f64,
}

impl ExplicitPmf {
    pub(crate) fn from_parts(pmf: Vec<f64>, discarded: f64) -> Self {
        let mut survival = vec![0.0; pmf.len()];
        let mut acc = CompensatedSum::new();
        for x in (0..pmf.len()).rev() {
            acc.add(pmf[x]);
            survival[x] = acc.value();
        }
        Self {
            pmf,
            survival,
            discarded,
        }
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn len(&self) -> usize {
        self.pmf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pmf.is_empty()
    }

    /// Probability mass dropped when this pmf was cut from an
    /// infinite-support law.
    pub fn discarded_mass(&self) -> f64 {
        self.discarded
    }

    pub(crate) fn suffix_sums(&self) -> &[f64] {
        &self.survival
    }

    fn survival_at(&self, x: usize) -> f64 {
        if x == 0 {
            1.0
        } else {
            self.survival.get(x).copied().unwrap_or(0.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Kind {
    Poisson {
        lambda: f64,
    },
    /// `P(X = x) = q^x (1 - q)`, survival `q^x`.
    Geometric {
        q: f64,
    },
    Explicit(ExplicitPmf),
}

/// A probability law on ℕ₀.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    kind: Kind,
    truncation_bound: usize,
    tail_tolerance: f64,
}

/// A moment together with a bound on its truncation error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentEstimate {
    pub value: f64,
    pub error_bound: f64,
}

/// A closed-form law laid out as a finite table plus its exact tail.
#[derive(Debug, Clone)]
pub(crate) struct Expansion {
    /// pmf on `{0..=M}`.
    pub pmf: Vec<f64>,
    /// `survival[x] = P(X >= x)` for `x in 0..=M + 1`, tail included.
    pub survival: Vec<f64>,
}

impl Expansion {
    pub fn discarded(&self) -> f64 {
        *self.survival.last().unwrap_or(&0.0)
    }
}

impl DiscreteDistribution {
    fn with_kind(kind: Kind) -> Self {
        Self {
            kind,
            truncation_bound: DEFAULT_TRUNCATION_BOUND,
            tail_tolerance: DEFAULT_TAIL_TOLERANCE,
        }
    }

    pub fn poisson(lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "poisson rate must be positive and finite, got {lambda}"
            )));
        }
        Ok(Self::with_kind(Kind::Poisson { lambda }))
    }

    pub fn geometric(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "geometric q must lie in (0, 1), got {q}"
            )));
        }
        Ok(Self::with_kind(Kind::Geometric { q }))
    }

    /// An explicit pmf indexed from 0. Entries must be finite, non-negative
    /// and sum to one within 1e-12.
    pub fn explicit(pmf: Vec<f64>) -> Result<Self> {
        if pmf.is_empty() {
            return Err(Error::InvalidDistribution("empty pmf".into()));
        }
        if let Some((x, p)) = pmf
            .iter()
            .enumerate()
            .find(|(_, p)| !(p.is_finite() && **p >= 0.0))
        {
            return Err(Error::InvalidDistribution(format!(
                "pmf entry {x} is {p}, expected a finite non-negative value"
            )));
        }
        let total = compensated_sum(pmf.iter().copied());
        if (total - 1.0).abs() > EXPLICIT_SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "pmf sums to {total}, expected 1 within {EXPLICIT_SUM_TOLERANCE:e}"
            )));
        }
        Ok(Self::with_kind(Kind::Explicit(ExplicitPmf::from_parts(
            pmf, 0.0,
        ))))
    }

    /// Wraps a pmf produced internally (equilibrium levels, truncations),
    /// which may be short of one by at most its discarded mass.
    pub(crate) fn from_explicit(pmf: ExplicitPmf, template: &DiscreteDistribution) -> Self {
        Self {
            kind: Kind::Explicit(pmf),
            truncation_bound: template.truncation_bound,
            tail_tolerance: template.tail_tolerance,
        }
    }

    pub fn with_tail_tolerance(mut self, tail_tolerance: f64) -> Result<Self> {
        if !(tail_tolerance.is_finite() && tail_tolerance > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tail tolerance must be positive, got {tail_tolerance}"
            )));
        }
        self.tail_tolerance = tail_tolerance;
        Ok(self)
    }

    pub fn with_truncation_bound(mut self, truncation_bound: usize) -> Self {
        self.truncation_bound = truncation_bound;
        self
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn tail_tolerance(&self) -> f64 {
        self.tail_tolerance
    }

    pub fn truncation_bound(&self) -> usize {
        self.truncation_bound
    }

    pub fn as_explicit(&self) -> Option<&ExplicitPmf> {
        match &self.kind {
            Kind::Explicit(e) => Some(e),
            _ => None,
        }
    }

    /// True for the point mass at 0, whose equilibrium is undefined.
    pub fn is_point_mass_at_zero(&self) -> bool {
        match &self.kind {
            Kind::Explicit(e) => e.pmf.iter().skip(1).all(|&p| p == 0.0),
            _ => false,
        }
    }

    /// P(X = x).
    pub fn pmf(&self, x: usize) -> f64 {
        match &self.kind {
            Kind::Poisson { lambda } => poisson_pmf(*lambda, x),
            Kind::Geometric { q } => q.powi(x as i32) * (1.0 - q),
            Kind::Explicit(e) => e.pmf.get(x).copied().unwrap_or(0.0),
        }
    }

    /// P(X >= x).
    pub fn survival(&self, x: usize) -> f64 {
        if x == 0 {
            return 1.0;
        }
        match &self.kind {
            Kind::Poisson { lambda } => poisson_survival(*lambda, x),
            Kind::Geometric { q } => geometric_survival(*q, x),
            Kind::Explicit(e) => e.survival_at(x),
        }
    }

    pub fn mean(&self) -> Result<f64> {
        self.moment(1).map(|m| m.value)
    }

    /// E(X^j) for `j >= 1`.
    pub fn moment(&self, j: u32) -> Result<MomentEstimate> {
        if j == 0 {
            return Err(Error::InvalidParameter(
                "moment order must be at least 1".into(),
            ));
        }
        match &self.kind {
            Kind::Poisson { lambda } if j <= CLOSED_FORM_MOMENT_ORDER => {
                // Touchard polynomial: E X^j = sum_k S(j, k) λ^k
                let row = stirling2_row(j as usize);
                let value = compensated_sum(
                    row.iter()
                        .enumerate()
                        .map(|(k, s)| s * lambda.powi(k as i32)),
                );
                Ok(MomentEstimate {
                    value,
                    error_bound: 0.0,
                })
            }
            Kind::Geometric { q } if j <= CLOSED_FORM_MOMENT_ORDER => {
                // factorial moments E (X)_k = k! r^k with r = q / (1 - q)
                let r = q / (1.0 - q);
                let row = stirling2_row(j as usize);
                let mut fact = 1.0;
                let mut terms = Vec::with_capacity(row.len());
                for (k, s) in row.iter().enumerate() {
                    if k > 0 {
                        fact *= k as f64;
                    }
                    terms.push(s * fact * r.powi(k as i32));
                }
                Ok(MomentEstimate {
                    value: compensated_sum(terms),
                    error_bound: 0.0,
                })
            }
            Kind::Explicit(e) => {
                let value = compensated_sum(
                    e.pmf
                        .iter()
                        .enumerate()
                        .map(|(x, p)| (x as f64).powi(j as i32) * p),
                );
                let error_bound = e.discarded * (self.truncation_bound as f64).powi(j as i32);
                Ok(MomentEstimate { value, error_bound })
            }
            _ => {
                let exp = self.expand(self.tail_tolerance, j)?;
                let value = compensated_sum(
                    exp.pmf
                        .iter()
                        .enumerate()
                        .map(|(x, p)| (x as f64).powi(j as i32) * p),
                );
                // the weighted tail sum_{x > M} (1 + x)^j p(x) is below the tolerance
                Ok(MomentEstimate {
                    value,
                    error_bound: self.tail_tolerance,
                })
            }
        }
    }

    /// Explicit pmf on `{0..=M}` with `M` minimal such that the mass beyond
    /// `M` is below `eps`. The dropped mass is recorded on the result.
    pub fn truncate(&self, eps: f64) -> Result<DiscreteDistribution> {
        if !(eps > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "eps must be positive, got {eps}"
            )));
        }
        match &self.kind {
            Kind::Explicit(e) => {
                let mut m = e.len() - 1;
                while m > 0 && e.survival_at(m) < eps {
                    m -= 1;
                }
                if m + 1 == e.len() {
                    return Ok(self.clone());
                }
                let discarded = e.discarded + e.survival[m + 1];
                Ok(Self::from_explicit(
                    ExplicitPmf::from_parts(e.pmf[..=m].to_vec(), discarded),
                    self,
                ))
            }
            _ => {
                let exp = self.expand(eps, 0)?;
                let discarded = exp.discarded();
                Ok(Self::from_explicit(
                    ExplicitPmf::from_parts(exp.pmf, discarded),
                    self,
                ))
            }
        }
    }

    /// Lays the law out on `{0..=M}`, `M` minimal with
    /// `sum_{x > M} (1 + x)^weight_power p(x) < eps`.
    ///
    /// Explicit laws are returned whole.
    pub(crate) fn expand(&self, eps: f64, weight_power: u32) -> Result<Expansion> {
        let table = match &self.kind {
            Kind::Explicit(e) => {
                let mut survival = e.survival.clone();
                survival[0] = 1.0;
                survival.push(0.0);
                return Ok(Expansion {
                    pmf: e.pmf.clone(),
                    survival,
                });
            }
            Kind::Poisson { lambda } => self.closed_form_table(weight_power, |x, prev| {
                if *lambda < POISSON_DIRECT_LIMIT {
                    match prev {
                        Some(p) => p * lambda / x as f64,
                        None => (-lambda).exp(),
                    }
                } else {
                    poisson_pmf(*lambda, x)
                }
            })?,
            Kind::Geometric { q } => {
                self.closed_form_table(weight_power, |x, prev| match prev {
                    Some(p) => p * q,
                    None => {
                        debug_assert_eq!(x, 0);
                        1.0 - q
                    }
                })?
            }
        };

        let len = table.len();
        let mut survival = vec![0.0; len + 1];
        let mut weighted_tail = vec![0.0; len + 1];
        let mut acc = CompensatedSum::new();
        let mut wacc = CompensatedSum::new();
        for x in (0..len).rev() {
            acc.add(table[x]);
            wacc.add(table[x] * (1.0 + x as f64).powi(weight_power as i32));
            survival[x] = acc.value();
            weighted_tail[x] = wacc.value();
        }
        // smallest M with weighted_tail[M + 1] < eps
        let m = (0..len)
            .find(|&m| weighted_tail[m + 1] < eps)
            .ok_or_else(|| {
                Error::NonConvergent("tail never dropped below tolerance within table".into())
            })?;
        if m > self.truncation_bound {
            return Err(Error::NonConvergent(format!(
                "support needed up to {m}, beyond truncation bound {}",
                self.truncation_bound
            )));
        }
        survival[0] = 1.0;
        survival.truncate(m + 2);
        let mut pmf = table;
        pmf.truncate(m + 1);
        Ok(Expansion { pmf, survival })
    }

    /// pmf values from 0 until the weighted terms are provably negligible.
    fn closed_form_table(
        &self,
        weight_power: u32,
        next: impl Fn(usize, Option<f64>) -> f64,
    ) -> Result<Vec<f64>> {
        let negligible = self.tail_tolerance * 1e-6;
        let mut table: Vec<f64> = Vec::new();
        let mut prev_weighted = f64::INFINITY;
        let mut prev = None;
        let mut x = 0usize;
        loop {
            let p = next(x, prev);
            table.push(p);
            prev = Some(p);
            let weighted = p * (1.0 + x as f64).powi(weight_power as i32);
            if x > 0 && weighted < prev_weighted {
                let ratio = weighted / prev_weighted;
                // terms shrink at a non-increasing ratio past this point
                if weighted == 0.0 || weighted / (1.0 - ratio) < negligible {
                    break;
                }
            }
            prev_weighted = weighted;
            x += 1;
            if x > self.truncation_bound.saturating_mul(2).max(16) {
                return Err(Error::NonConvergent(format!(
                    "tail mass still above {:e} at the truncation ceiling {}",
                    self.tail_tolerance, self.truncation_bound
                )));
            }
        }
        Ok(table)
    }
}

fn poisson_pmf(lambda: f64, x: usize) -> f64 {
    if lambda < POISSON_DIRECT_LIMIT {
        let mut p = (-lambda).exp();
        for k in 1..=x {
            p *= lambda / k as f64;
        }
        p
    } else {
        (x as f64 * lambda.ln() - lambda - ln_factorial(x as u64)).exp()
    }
}

fn poisson_survival(lambda: f64, x: usize) -> f64 {
    if x as f64 > lambda {
        // upper tail summed directly: terms fall off at ratio λ/(k+1) < 1
        let mut term = poisson_pmf(lambda, x);
        let mut acc = CompensatedSum::new();
        let mut k = x;
        while term > 0.0 {
            acc.add(term);
            k += 1;
            term *= lambda / k as f64;
            if term < acc.value() * 1e-18 {
                break;
            }
        }
        acc.value()
    } else {
        let mut acc = CompensatedSum::new();
        let mut term = poisson_pmf(lambda, 0);
        for k in 0..x {
            if lambda < POISSON_DIRECT_LIMIT {
                if k > 0 {
                    term *= lambda / k as f64;
                }
                acc.add(term);
            } else {
                acc.add(poisson_pmf(lambda, k));
            }
        }
        (1.0 - acc.value()).max(0.0)
    }
}

fn geometric_survival(q: f64, x: usize) -> f64 {
    if x <= i32::MAX as usize {
        q.powi(x as i32)
    } else {
        q.powf(x as f64)
    }
}

/// Δ^j f(x) via the alternating binomial sum
/// `sum_{k=0}^{j} (-1)^{j-k} C(j, k) f(x + k)`.
pub fn forward_difference<F: Fn(usize) -> f64>(f: F, x: usize, j: usize) -> f64 {
    let mut acc = CompensatedSum::new();
    let mut coeff = 1.0f64;
    for k in 0..=j {
        if k > 0 {
            coeff = coeff * (j - k + 1) as f64 / k as f64;
        }
        let sign = if (j - k).is_multiple_of(2) { 1.0 } else { -1.0 };
        acc.add(sign * coeff * f(x + k));
    }
    acc.value()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotonicityViolation {
    pub order: usize,
    pub point: usize,
    /// The offending value of `(-1)^j Δ^j S(x)`.
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotonicityReport {
    pub order_checked: usize,
    pub holds: bool,
    pub first_violation: Option<MonotonicityViolation>,
    /// Most negative `(-1)^j Δ^j S(x)` seen (0 if none were negative).
    pub worst_value: f64,
}

/// Checks `(-1)^j Δ^j S(x) >= -1e-12` for `j = 0..=n`, `x = 0..=x_max`.
pub fn check_n_monotone(dist: &DiscreteDistribution, n: usize, x_max: usize) -> MonotonicityReport {
    check_n_monotone_with_tolerance(dist, n, x_max, MONOTONICITY_TOLERANCE)
}

pub fn check_n_monotone_with_tolerance(
    dist: &DiscreteDistribution,
    n: usize,
    x_max: usize,
    tolerance: f64,
) -> MonotonicityReport {
    let survival: Vec<f64> = (0..=x_max + n).map(|x| dist.survival(x)).collect();
    let mut first_violation = None;
    let mut worst_value = 0.0f64;
    for order in 0..=n {
        let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
        for point in 0..=x_max {
            let value = sign * forward_difference(|y| survival[y], point, order);
            worst_value = worst_value.min(value);
            if value < -tolerance && first_violation.is_none() {
                first_violation = Some(MonotonicityViolation {
                    order,
                    point,
                    value,
                });
            }
        }
    }
    MonotonicityReport {
        order_checked: n,
        holds: first_violation.is_none(),
        first_violation,
        worst_value,
    }
}
