//! Browser bindings: three JSON-returning operations behind a static page.
//!
//! Each export takes a base law as a JSON document such as
//! `{"kind": "poisson", "params": {"lambda": 1.0}}` or
//! `{"kind": "explicit", "pmf": [0.25, 0.5, 0.25]}` and returns a JSON string.
//! Failures are thrown as JavaScript strings.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use schur_equilibrium::dist::DEFAULT_TAIL_TOLERANCE;
use schur_equilibrium::{
    build_model, nth_equilibrium, poisson_rho, BaseDescription, DiscreteDistribution, RhoMethod,
};

const MAX_JOINT_GRID: usize = 40;
const MAX_CURVE_POINTS: usize = 2000;

fn parse_base(base_json: &str) -> Result<DiscreteDistribution, String> {
    let desc: BaseDescription =
        serde_json::from_str(base_json).map_err(|e| format!("bad base law: {e}"))?;
    desc.to_distribution(DEFAULT_TAIL_TOLERANCE)
        .map_err(|e| e.to_string())
}

fn pmf_of(dist: &DiscreteDistribution) -> Vec<f64> {
    dist.as_explicit()
        .map(|e| e.pmf().to_vec())
        .unwrap_or_default()
}

/// pmfs and means of levels `0..=order` of the equilibrium ladder.
pub fn ladder(base_json: &str, order: usize) -> Result<Value, String> {
    let dist = parse_base(base_json)?;
    let chain = nth_equilibrium(&dist, order).map_err(|e| e.to_string())?;
    let levels: Vec<Vec<f64>> = chain.levels().iter().map(pmf_of).collect();
    Ok(json!({ "order": order, "levels": levels, "means": chain.means() }))
}

/// Marginal, sum law, correlation and the bivariate joint pmf on a
/// `grid x grid` window of the `n`-dimensional model.
pub fn model_summary(base_json: &str, n: usize, grid: usize) -> Result<Value, String> {
    let dist = parse_base(base_json)?;
    let model = build_model(&dist, n).map_err(|e| e.to_string())?;
    let grid = grid.clamp(1, MAX_JOINT_GRID);
    let joint = (0..grid)
        .map(|a| {
            (0..grid)
                .map(|b| {
                    model
                        .joint_pmf(&[a, b])
                        .map(|p| p.value)
                        .map_err(|e| e.to_string())
                })
                .collect::<Result<Vec<f64>, String>>()
        })
        .collect::<Result<Vec<_>, String>>()?;
    let rho = model
        .correlation(RhoMethod::MarginalForm)
        .ok()
        .map(|r| r.value);
    let (mean, variance) = model.marginal_stats();
    Ok(json!({
        "n": n,
        "marginal": pmf_of(model.marginal()),
        "sum": model.sum_distribution(),
        "mean": mean,
        "variance": variance,
        "rho": rho,
        "rho_lower_bound": -1.0 / (n as f64 - 1.0),
        "joint": joint,
    }))
}

/// Model correlation of Poisson(λ) bases over a log-spaced λ grid, next to
/// the closed form where one is known.
pub fn poisson_curve(
    n: usize,
    lambda_min: f64,
    lambda_max: f64,
    points: usize,
) -> Result<Value, String> {
    if !(lambda_min > 0.0 && lambda_max > lambda_min) {
        return Err("need 0 < lambda_min < lambda_max".into());
    }
    let points = points.clamp(2, MAX_CURVE_POINTS);
    let step = (lambda_max / lambda_min).ln() / (points - 1) as f64;
    let mut lambdas = Vec::with_capacity(points);
    let mut model_rho = Vec::with_capacity(points);
    let mut closed = Vec::with_capacity(points);
    for k in 0..points {
        let lambda = lambda_min * (step * k as f64).exp();
        let dist = DiscreteDistribution::poisson(lambda).map_err(|e| e.to_string())?;
        let model = build_model(&dist, n).map_err(|e| e.to_string())?;
        let rho = model
            .correlation(RhoMethod::MarginalForm)
            .map_err(|e| e.to_string())?
            .value;
        lambdas.push(lambda);
        model_rho.push(rho);
        closed.push(poisson_rho(lambda, n).ok());
    }
    Ok(json!({ "n": n, "lambda": lambdas, "rho": model_rho, "closed_form": closed }))
}

fn to_js(result: Result<Value, String>) -> Result<String, JsValue> {
    result
        .map(|v| v.to_string())
        .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = equilibriumLadder)]
pub fn equilibrium_ladder(base_json: &str, order: usize) -> Result<String, JsValue> {
    to_js(ladder(base_json, order))
}

#[wasm_bindgen(js_name = modelView)]
pub fn model_view(base_json: &str, n: usize, grid: usize) -> Result<String, JsValue> {
    to_js(model_summary(base_json, n, grid))
}

#[wasm_bindgen(js_name = poissonRhoCurve)]
pub fn poisson_rho_curve(
    n: usize,
    lambda_min: f64,
    lambda_max: f64,
    points: usize,
) -> Result<String, JsValue> {
    to_js(poisson_curve(n, lambda_min, lambda_max, points))
}

#[cfg(test)]
mod tests {
    use super::*;

    const POISSON: &str = r#"{"kind": "poisson", "params": {"lambda": 1.0}}"#;

    #[test]
    fn ladder_of_geometric_is_flat() {
        let v = ladder(r#"{"kind": "geometric", "params": {"q": 0.5}}"#, 3).unwrap();
        let levels = v["levels"].as_array().unwrap();
        assert_eq!(levels.len(), 4);
        for level in levels {
            assert!((level[0].as_f64().unwrap() - 0.5).abs() < 1e-12);
        }
        assert!(ladder(r#"{"kind": "explicit", "pmf": [0.5, 0.5]}"#, 2)
            .unwrap_err()
            .contains("mean"));
        assert!(ladder("{}", 1).is_err());
    }

    #[test]
    fn model_summary_fields() {
        let v = model_summary(POISSON, 2, 5).unwrap();
        assert!((v["rho"].as_f64().unwrap() + 1.0 / 7.0).abs() < 1e-12);
        assert!((v["joint"][0][0].as_f64().unwrap() - (-1.0f64).exp()).abs() < 1e-14);
        assert_eq!(v["joint"].as_array().unwrap().len(), 5);
        assert!((v["sum"][2].as_f64().unwrap() - (-1.0f64).exp() / 2.0).abs() < 1e-15);
        assert_eq!(
            model_summary(POISSON, 2, 1000).unwrap()["joint"]
                .as_array()
                .unwrap()
                .len(),
            MAX_JOINT_GRID
        );
        assert!(model_summary(POISSON, 1, 5).is_err());
    }

    #[test]
    fn curve_matches_closed_form() {
        let v = poisson_curve(3, 0.1, 50.0, 12).unwrap();
        let rho = v["rho"].as_array().unwrap();
        let closed = v["closed_form"].as_array().unwrap();
        assert_eq!(rho.len(), 12);
        for (a, b) in rho.iter().zip(closed) {
            assert!((a.as_f64().unwrap() - b.as_f64().unwrap()).abs() < 1e-12);
        }
        assert!((v["lambda"][11].as_f64().unwrap() - 50.0).abs() < 1e-9);
        assert!(poisson_curve(7, 1.0, 2.0, 3).unwrap()["closed_form"][0].is_null());
        assert!(poisson_curve(2, 0.0, 1.0, 3).is_err());
    }
}
