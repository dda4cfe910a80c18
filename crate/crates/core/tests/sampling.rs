use schur_equilibrium::{build_model, sample, DiscreteDistribution, SchurModel};
use statrs::distribution::{ChiSquared, ContinuousCDF};

const DRAWS: usize = 100_000;

fn hits(observed: &std::collections::HashMap<(usize, usize), usize>, i: usize, j: usize) -> f64 {
    observed.get(&(i, j)).copied().unwrap_or(0) as f64
}

/// Chi-square p-value of bivariate draws against the model on the cells
/// `i + j <= 10`; cells expecting fewer than 5 hits are pooled with the
/// region outside the grid.
fn chi_square_p_value(model: &SchurModel, draws: &[Vec<usize>]) -> f64 {
    let n = draws.len() as f64;
    let mut observed = std::collections::HashMap::<(usize, usize), usize>::new();
    let mut outside = 0usize;
    for d in draws {
        if d[0] + d[1] <= 10 {
            *observed.entry((d[0], d[1])).or_default() += 1;
        } else {
            outside += 1;
        }
    }
    let mut stat = 0.0;
    let mut cells = 0usize;
    let (mut pooled_obs, mut pooled_exp) = (outside as f64, 0.0);
    let mut inside_prob = 0.0;
    for i in 0..=10 {
        for j in 0..=10 - i {
            let p = model.joint_pmf(&[i, j]).unwrap().value;
            inside_prob += p;
            let expected = p * n;
            if expected >= 5.0 {
                let o = hits(&observed, i, j);
                stat += (o - expected).powi(2) / expected;
                cells += 1;
            } else {
                pooled_obs += hits(&observed, i, j);
                pooled_exp += expected;
            }
        }
    }
    pooled_exp += (1.0 - inside_prob).max(0.0) * n;
    stat += (pooled_obs - pooled_exp).powi(2) / pooled_exp;
    cells += 1;
    1.0 - ChiSquared::new((cells - 1) as f64).unwrap().cdf(stat)
}

/// Sample correlation and its batch-means standard error.
fn correlation_with_se(draws: &[Vec<usize>]) -> (f64, f64) {
    fn corr(d: &[Vec<usize>]) -> f64 {
        let n = d.len() as f64;
        let (mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for v in d {
            let (x, y) = (v[0] as f64, v[1] as f64);
            sx += x;
            sy += y;
            sxx += x * x;
            syy += y * y;
            sxy += x * y;
        }
        let cov = sxy / n - sx * sy / n / n;
        cov / ((sxx / n - (sx / n).powi(2)) * (syy / n - (sy / n).powi(2))).sqrt()
    }
    let batches: Vec<f64> = draws.chunks(draws.len() / 100).map(corr).collect();
    let k = batches.len() as f64;
    let mean = batches.iter().sum::<f64>() / k;
    let var = batches.iter().map(|b| (b - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (corr(draws), (var / k).sqrt())
}

#[test]
fn poisson_draws_fit_the_joint_law() {
    let m = build_model(&DiscreteDistribution::poisson(1.0).unwrap(), 2).unwrap();
    let draws = sample(&m, 20_240_601, DRAWS).unwrap();
    let p = chi_square_p_value(&m, &draws);
    assert!(p > 0.001, "p = {p}");

    let hits = draws.iter().filter(|d| d[0] == 0 && d[1] == 0).count() as f64 / DRAWS as f64;
    let target = (-1.0f64).exp();
    let se = (target * (1.0 - target) / DRAWS as f64).sqrt();
    assert!((hits - target).abs() < 3.0 * se, "{hits} vs {target}");

    let (rho, se) = correlation_with_se(&draws);
    assert!((rho + 1.0 / 7.0).abs() < 3.0 * se, "rho = {rho} ± {se}");
}

#[test]
fn geometric_draws_are_uncorrelated() {
    let m = build_model(&DiscreteDistribution::geometric(0.5).unwrap(), 2).unwrap();
    let draws = sample(&m, 7, DRAWS).unwrap();
    let (rho, se) = correlation_with_se(&draws);
    assert!(rho.abs() < 3.0 * se, "rho = {rho} ± {se}");
}

#[test]
fn higher_dimensional_draws_have_the_right_marginal() {
    let m = build_model(&DiscreteDistribution::poisson(2.0).unwrap(), 4).unwrap();
    let draws = sample(&m, 99, DRAWS).unwrap();
    for coord in 0..4 {
        let hits = draws.iter().filter(|d| d[coord] == 0).count() as f64 / DRAWS as f64;
        let p = m.marginal_pmf(0);
        let se = (p * (1.0 - p) / DRAWS as f64).sqrt();
        assert!((hits - p).abs() < 4.0 * se, "coord {coord}: {hits} vs {p}");
    }
}
