//! Browser bindings for three small experiments on fixed graphs. Each export
//! wraps a plain function so the numbers can be tested natively.

use parw_core::eval::{bucket_degree_profile, rank_users, Aggregation, FilterRules};
use parw_core::graph::{build_graph, BipartiteGraph};
use parw_core::ingest::InteractionRecord;
use parw_core::ppr::{ppr_iterate, PprConfig};
use parw_core::solver::{aparw_sweep, lambda_vector, seed_vector, solve_exact, Execution, LambdaSpec};
use parw_core::synth::{planted_community, PlantedConfig};
use wasm_bindgen::prelude::*;

const TOY: [(&str, &str); 8] = [
    ("U1", "A1"),
    ("U1", "A2"),
    ("U1", "A3"),
    ("U2", "A2"),
    ("U3", "A2"),
    ("U3", "A3"),
    ("U3", "A4"),
    ("U3", "A5"),
];

fn toy_graph() -> BipartiteGraph {
    let records: Vec<_> = TOY.iter().map(|(u, i)| InteractionRecord::new(*u, *i)).collect();
    build_graph(&records).expect("toy graph is valid")
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Exact scores of U1..U3 on the 8-vertex toy graph seeded at A2, first with
/// `Λ = αI` and then with `Λ = αD`.
pub fn toy_user_scores(alpha: f64) -> Result<Vec<f64>, String> {
    let g = toy_graph();
    let seed = seed_vector(&g, &[g.item_by_key("A2").unwrap()]).map_err(err)?;
    let mut out = Vec::with_capacity(6);
    for spec in [LambdaSpec::IMode { alpha }, LambdaSpec::DMode { beta: alpha }] {
        let lam = lambda_vector(&g, &spec).map_err(err)?;
        let r = solve_exact(&g, &lam, &seed).map_err(err)?;
        out.extend(g.users().map(|u| r.get(u)));
    }
    Ok(out)
}

/// Pending mass after each superstep on a planted-community graph.
pub fn residual_trace(alpha: f64, gamma: f64, iters: usize, rng_seed: u64) -> Result<Vec<f64>, String> {
    let p = planted_community(&PlantedConfig::default(), rng_seed).map_err(err)?;
    let g = &p.graph;
    let lam = lambda_vector(g, &LambdaSpec::IMode { alpha }).map_err(err)?;
    let seed = seed_vector(g, &p.community_items[..3]).map_err(err)?;
    let st = aparw_sweep(g, &lam, &seed, gamma, iters, Execution::Serial).map_err(err)?;
    Ok(st.residual_trace)
}

/// Mean user degree per bucket for the I-mode ranking followed by the PPR
/// ranking, on a planted-community graph seeded with three community items.
pub fn degree_profiles(buckets: usize, rng_seed: u64) -> Result<Vec<f64>, String> {
    let p = planted_community(&PlantedConfig::default(), rng_seed).map_err(err)?;
    let g = &p.graph;
    let seed = seed_vector(g, &p.community_items[..3]).map_err(err)?;
    let lam = lambda_vector(g, &LambdaSpec::IMode { alpha: 0.01 }).map_err(err)?;
    let imode = solve_exact(g, &lam, &seed).map_err(err)?;
    let ppr = ppr_iterate(g, &PprConfig::default(), &seed).map_err(err)?.scores;
    let mut out = Vec::with_capacity(2 * buckets);
    for scores in [&imode, &ppr] {
        let ranking = rank_users(g, scores, &FilterRules::default()).map_err(err)?;
        out.extend(
            bucket_degree_profile(&ranking, g, buckets, Aggregation::Mean)
                .map_err(err)?
                .values,
        );
    }
    Ok(out)
}

#[wasm_bindgen(js_name = toyUserScores)]
pub fn toy_user_scores_js(alpha: f64) -> Result<Vec<f64>, JsError> {
    toy_user_scores(alpha).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = residualTrace)]
pub fn residual_trace_js(alpha: f64, gamma: f64, iters: usize, rng_seed: u32) -> Result<Vec<f64>, JsError> {
    residual_trace(alpha, gamma, iters, rng_seed.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = degreeProfiles)]
pub fn degree_profiles_js(buckets: usize, rng_seed: u32) -> Result<Vec<f64>, JsError> {
    degree_profiles(buckets, rng_seed.into()).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toy_orderings() {
        let s = toy_user_scores(0.01).unwrap();
        assert_eq!(s.len(), 6);
        assert!(s[1] > s[2] && s[1] > s[0]);
        assert!(s[5] > s[4]);
        assert!(toy_user_scores(0.0).is_err());
    }

    #[test]
    fn trace_decreases() {
        let t = residual_trace(0.01, 1e-8, 10, 1).unwrap();
        assert_eq!(t.len(), 10);
        assert!(t.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn profiles_have_both_rankings() {
        let p = degree_profiles(12, 1).unwrap();
        assert_eq!(p.len(), 24);
        assert!(p[12] > p[0], "PPR should start on busier users");
        assert!(degree_profiles(10_000, 1).is_err());
    }
}
