//! Exact sampling from a Schur-constant model.
//!
//! Given `Z = z`, the joint pmf is constant over the `C(z + n - 1, n - 1)`
//! compositions of `z` into `n` parts, so a draw is `z` from the sum law
//! followed by a uniform composition (stars and bars).

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::SchurModel;
use crate::numeric::CompensatedSum;

/// Draws `count` vectors from `model`, deterministically for a given `seed`.
pub fn sample(model: &SchurModel, seed: u64, count: usize) -> Result<Vec<Vec<usize>>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let mut cumulative = Vec::with_capacity(model.sum_support_len());
    let mut acc = CompensatedSum::new();
    for p in model.sum_distribution() {
        acc.add(p);
        cumulative.push(acc.value());
    }
    let total = acc.value();
    if !(total.is_finite() && total > 0.0) || (total - 1.0).abs() > 1e-6 {
        return Err(Error::NonConvergent(format!(
            "sum law has total mass {total} on its materialized support"
        )));
    }
    let n = model.dimension();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        // condition on the materialized support
        let u = rng.random::<f64>() * total;
        let z = cumulative
            .partition_point(|&c| c <= u)
            .min(cumulative.len() - 1);
        out.push(uniform_composition(&mut rng, z, n));
    }
    Ok(out)
}

/// A uniformly random composition of `z` into `n` non-negative parts.
fn uniform_composition<R: Rng>(rng: &mut R, z: usize, n: usize) -> Vec<usize> {
    let slots = z + n - 1;
    let mut bars = index::sample(rng, slots, n - 1).into_vec();
    bars.sort_unstable();
    let mut parts = Vec::with_capacity(n);
    let mut prev: Option<usize> = None;
    for &b in &bars {
        parts.push(match prev {
            None => b,
            Some(p) => b - p - 1,
        });
        prev = Some(b);
    }
    parts.push(match prev {
        None => z,
        Some(p) => slots - p - 1,
    });
    parts
}
