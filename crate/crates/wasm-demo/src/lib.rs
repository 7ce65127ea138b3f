//! Browser bindings: three operations on the model, each returning JSON
//! for the static page in `www/`.

use lorenz_lab::connecting::{connect, Family, PerturbationParams, Side};
use lorenz_lab::expanding_map::validate_map;
use lorenz_lab::symbolic::{find_periodic, parse_word};
use lorenz_lab::{ModelParams, QuotientMap};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn params(mu: f64, rho: f64) -> ModelParams {
    // keep the eigenvalue relation rho = -lambda2 / lambda3
    let base = ModelParams::default();
    ModelParams { mu, rho, lambda2: -rho * base.lambda3, ..base }
}

/// Samples of both branches of `f` plus the validity verdict.
pub fn map_graph_json(mu: f64, rho: f64, samples: usize) -> Result<Value, String> {
    let p = params(mu, rho);
    let report = validate_map(&p).map_err(|e| e.to_string())?;
    let n = samples.max(2);
    let branch = |sign: f64| -> Vec<[f64; 2]> {
        (0..n)
            .map(|i| {
                let t = 1e-9 + (1.0 - 1e-9) * i as f64 / (n - 1) as f64;
                let x = sign * t;
                [x, p.apply(x)]
            })
            .collect()
    };
    let failed: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    Ok(json!({
        "left": branch(-1.0),
        "right": branch(1.0),
        "valid": report.valid,
        "min_slope": report.min_slope,
        "sup_abs_f": report.sup_abs_f,
        "failed": failed,
    }))
}

/// Periodic orbit of `word` with its cobweb path.
pub fn periodic_json(word: &str, mu: f64, rho: f64) -> Result<Value, String> {
    let p = params(mu, rho);
    let w = parse_word(word).map_err(|e| e.to_string())?;
    let o = find_periodic(&p, &w).map_err(|e| e.to_string())?;
    let xs = o.xs();
    let mut cobweb = vec![[xs[0], xs[0]]];
    for k in 0..xs.len() {
        let next = xs[(k + 1) % xs.len()];
        cobweb.push([xs[k], next]);
        cobweb.push([next, next]);
    }
    Ok(json!({
        "word": o.word,
        "xs": xs,
        "ys": o.points.iter().map(|q| q.y).collect::<Vec<_>>(),
        "period": o.period,
        "multiplier": o.multiplier,
        "residual": o.residual_x.max(o.residual_y),
        "cobweb": cobweb,
    }))
}

/// Connect the unstable branch on `side` to `target` with the default
/// perturbation family.
pub fn connect_json(target: f64, side: &str) -> Result<Value, String> {
    let side = Side::parse(side).map_err(|e| e.to_string())?;
    let fam = Family::new(&ModelParams::default(), &PerturbationParams::with_side(side), Vec::new())
        .map_err(|e| e.to_string())?;
    let r = connect(&fam, target, 1e-10, 64).map_err(|e| e.to_string())?;
    Ok(json!({
        "s_star": r.s_star,
        "n": r.n,
        "residual": r.residual,
        "tau": r.tau,
        "revalidated": r.revalidated,
        "expansion_ok": r.expansion_ok,
        "orbit": r.orbit,
        "branch_counts": r.branch_counts,
    }))
}

fn to_js(v: Result<Value, String>) -> Result<String, JsValue> {
    v.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn map_graph(mu: f64, rho: f64) -> Result<String, JsValue> {
    to_js(map_graph_json(mu, rho, 400))
}

#[wasm_bindgen]
pub fn periodic(word: &str, mu: f64, rho: f64) -> Result<String, JsValue> {
    to_js(periodic_json(word, mu, rho))
}

#[wasm_bindgen]
pub fn connect_branch(target: f64, side: &str) -> Result<String, JsValue> {
    to_js(connect_json(target, side))
}
