//! Browser bindings: analyze an edited p-graph, classify a triangle, and
//! sample the Golod-Shafarevich curve. Every export returns JSON text.

use praag::gocha::{ggs_search, relator_valuation, GgsBounds, GgsOutcome, Weight, WeightAssignment};
use praag::graph::parse_pgraph;
use praag::lie::{classify_triangle as classify, is_metabelian, TriangleLabels};
use praag::presentation::praag_presentation;
use praag::report::{analyze, AnalyzeOptions};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn error(msg: impl std::fmt::Display) -> String {
    json!({ "error": msg.to_string() }).to_string()
}

/// Demo-sized bounds: the page recomputes on every edit.
fn demo_bounds() -> GgsBounds {
    GgsBounds {
        max_weight: 6,
        grid: 200,
        max_sweep: 20_000,
    }
}

#[wasm_bindgen]
pub fn analyze_pgraph(text: &str, depth: usize) -> String {
    let g = match parse_pgraph(text) {
        Ok(g) => g,
        Err(e) => return error(e),
    };
    let opts = AnalyzeOptions {
        mild_depth: depth.clamp(1, 10),
        matrix_limit: 2_000_000,
        ggs: demo_bounds(),
    };
    analyze(&g, &opts).to_json()
}

#[wasm_bindgen]
pub fn classify_triangle(p: u32, precision: u32, labels: &str) -> String {
    let vals: Result<Vec<i64>, _> = labels.split(',').map(|s| s.trim().parse::<i64>()).collect();
    let arr: [i64; 6] = match vals.map(|v| v.try_into()) {
        Ok(Ok(a)) => a,
        _ => return error("labels must be six integers a1,a2,b2,b3,g1,g3"),
    };
    if !praag::arith::is_prime(p as u64) || precision == 0 {
        return error("p must be prime and the precision positive");
    }
    let t = TriangleLabels::from_ints(p as u64, precision, arr);
    let c = match classify(&t) {
        Ok(c) => c,
        Err(e) => return error(e),
    };
    let metabelian = t.lattice().map(|l| is_metabelian(&l)).ok();
    let params: serde_json::Map<String, serde_json::Value> =
        c.family.params().iter().map(|(k, v)| (k.to_string(), json!(v.to_string()))).collect();
    json!({
        "family": c.family.name(),
        "display": c.family.to_string(),
        "params": params,
        "frame": c.frame.perm,
        "metabelian": metabelian,
    })
    .to_string()
}

/// Certificate search plus `samples` points of 1 - H_X(T) + H_R(T) on (0, 1)
/// for the certificate's weights (all weights 1 when none is found).
#[wasm_bindgen]
pub fn ggs_curve(text: &str, samples: usize) -> String {
    let g = match parse_pgraph(text) {
        Ok(g) => g,
        Err(e) => return error(e),
    };
    let pres = praag_presentation(&g);
    let outcome = match ggs_search(&pres, demo_bounds()) {
        Ok(o) => o,
        Err(e) => return error(e),
    };
    let weights = match &outcome {
        GgsOutcome::Certificate(c) => c.weights.clone(),
        GgsOutcome::NoneFound => WeightAssignment::integers(&vec![1; pres.d().max(1)]).expect("positive weights"),
    };
    let exps = |ws: &[Weight]| -> Vec<f64> {
        ws.iter()
            .filter_map(|w| match w {
                Weight::Finite(r) => Some(r.numer().to_string().parse::<f64>().ok()? / r.denom().to_string().parse::<f64>().ok()?),
                Weight::Infinite => None,
            })
            .collect()
    };
    let x = if pres.d() == 0 { Vec::new() } else { exps(weights.weights()) };
    let vals: Result<Vec<Weight>, _> = pres.relators().iter().map(|r| relator_valuation(r, &weights, pres.p())).collect();
    let r = match vals {
        Ok(v) => exps(&v),
        Err(e) => return error(e),
    };
    let n = samples.clamp(2, 2000);
    let curve: Vec<[f64; 2]> = (1..n)
        .map(|i| {
            let t = i as f64 / n as f64;
            let v = 1.0 - x.iter().map(|e| t.powf(*e)).sum::<f64>() + r.iter().map(|e| t.powf(*e)).sum::<f64>();
            [t, v]
        })
        .collect();
    json!({ "outcome": outcome, "curve": curve }).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    const C4: &str = "pgraph v1\nvertices a b c d\nedge a b 0 0\nedge b c 0 0\nedge c d 0 0\nedge d a 0 0\n";

    fn parse(s: &str) -> serde_json::Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn analyze_c4() {
        let r = parse(&analyze_pgraph(C4, 6));
        assert_eq!(r["mild_up_to"], 6);
        assert_eq!(r["predicted"]["betti"], json!([1, 4, 4]));
        assert!(parse(&analyze_pgraph("nonsense", 6))["error"].is_string());
    }

    #[test]
    fn triangle() {
        let r = parse(&classify_triangle(5, 4, "5,5,5,5,5,5"));
        assert_eq!(r["family"], "Lstar");
        assert_eq!(r["metabelian"], false);
        assert!(parse(&classify_triangle(5, 4, "1,2"))["error"].is_string());
    }

    #[test]
    fn curve_dips_below_zero() {
        let r = parse(&ggs_curve(C4, 100));
        assert_eq!(r["outcome"]["result"], "certificate");
        let pts = r["curve"].as_array().unwrap();
        assert_eq!(pts.len(), 99);
        assert!(pts.iter().any(|p| p[1].as_f64().unwrap() < 0.0));
    }
}
