//! Browser bindings for the demo page: three interactive operations
//! (distance, gluing, identity suite), each taking and returning JSON
//! strings so the page stays a single static file with no framework.
//!
//! Every numeric value is reported both as an exact `p/q` string and as an
//! `*_approx` float for rendering.

use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use ghforge::{
    embed, format, gh_bruteforce, gh_exact_with, run_suite, EmbeddedSpace, EmbeddingParams,
    FiniteMetricSpace, GhResult, ProductPoint, Scalar, SearchOptions, SuiteConfig,
    DEFAULT_ENUMERATION_CAP,
};

fn error_json(message: impl std::fmt::Display) -> String {
    json!({ "error": message.to_string() }).to_string()
}

fn witness_pairs(result: &GhResult, x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Value {
    let pairs: std::collections::BTreeSet<(String, String)> = result
        .witness
        .pairs()
        .iter()
        .map(|&(i, j)| (x.label(i).to_owned(), y.label(j).to_owned()))
        .collect();
    Value::Array(pairs.into_iter().map(|(a, b)| json!([a, b])).collect())
}

fn embedded_json(glued: &EmbeddedSpace) -> Value {
    serde_json::from_str(&format::serialize_embedded(glued)).expect("own output is JSON")
}

/// Gromov-Hausdorff distance between two space documents.
///
/// `method` is `"exact"` or `"bruteforce"`; `budget` of 0 means unlimited.
#[wasm_bindgen]
pub fn gh_distance(space_a: &str, space_b: &str, method: &str, budget: u32) -> String {
    let x = match format::parse_space(space_a) {
        Ok(doc) => doc.space,
        Err(e) => return error_json(format!("first space: {e}")),
    };
    let y = match format::parse_space(space_b) {
        Ok(doc) => doc.space,
        Err(e) => return error_json(format!("second space: {e}")),
    };
    let result = match method {
        "bruteforce" => match gh_bruteforce(&x, &y, DEFAULT_ENUMERATION_CAP) {
            Ok(result) => result,
            Err(e) => return error_json(e),
        },
        "exact" => {
            let options = SearchOptions {
                budget: (budget > 0).then_some(budget as u64),
                workers: 1,
            };
            gh_exact_with(&x, &y, &options)
        }
        other => return error_json(format!("unknown method {other:?}")),
    };
    json!({
        "value": result.value.to_string(),
        "value_approx": result.value.approx_f64(),
        "witness": witness_pairs(&result, &x, &y),
        "nodes": result.nodes_explored,
        "method": result.method.to_string(),
        "exact": result.exact,
    })
    .to_string()
}

/// Glues the given spaces (JSON array of space documents) with diameter cap
/// `r`, returning the glued document plus block and diameter info.
#[wasm_bindgen]
pub fn build_gluing(spaces: &str, r: &str) -> String {
    let radius: Scalar = match r.parse() {
        Ok(radius) => radius,
        Err(e) => return error_json(format!("r: {e}")),
    };
    let docs: Vec<Value> = match serde_json::from_str(spaces) {
        Ok(Value::Array(docs)) => docs,
        Ok(_) => return error_json("expected a JSON array of space documents"),
        Err(e) => return error_json(e),
    };
    let mut blocks = Vec::with_capacity(docs.len());
    for (i, doc) in docs.iter().enumerate() {
        match format::parse_space(&doc.to_string()) {
            Ok(parsed) => blocks.push(parsed.space),
            Err(e) => return error_json(format!("space {i}: {e}")),
        }
    }
    let params = match EmbeddingParams::new(radius, blocks.len()) {
        Ok(params) => params,
        Err(e) => return error_json(e),
    };
    let tuple = match ProductPoint::new(blocks) {
        Ok(tuple) => tuple,
        Err(e) => return error_json(e),
    };
    let glued = match embed(&tuple, &params) {
        Ok(glued) => glued,
        Err(e) => return error_json(e),
    };
    let diameter = glued.space().diameter();
    json!({
        "document": embedded_json(&glued),
        "diameter": diameter.to_string(),
        "diameter_approx": diameter.approx_f64(),
        "expected_diameter": params.expected_diameter().to_string(),
        "labels": glued.space().labels(),
        "block_of": glued.block_of(),
    })
    .to_string()
}

/// Runs seeded random instances of the product identity check.
#[wasm_bindgen]
pub fn identity_suite(seed: u32, instances: u32, n: u32, r: &str, max_block_size: u32) -> String {
    let radius: Scalar = match r.parse() {
        Ok(radius) => radius,
        Err(e) => return error_json(format!("r: {e}")),
    };
    if n == 0 || max_block_size == 0 || instances == 0 || !radius.is_positive() {
        return error_json("instances, n, max_block_size, and r must all be positive");
    }
    let config = SuiteConfig {
        seed: seed as u64,
        instances: instances as usize,
        n: n as usize,
        r: radius,
        max_block_size: max_block_size as usize,
        budget: Some(1_000_000),
        workers: 1,
    };
    let results = match run_suite(&config) {
        Ok(results) => results,
        Err(e) => return error_json(e),
    };
    let mut equal = 0usize;
    let mut inconclusive = 0usize;
    let rows: Vec<Value> = results
        .iter()
        .map(|instance| {
            let report = &instance.report;
            if !report.conclusive {
                inconclusive += 1;
            } else if report.equal {
                equal += 1;
            }
            json!({
                "index": instance.index,
                "lhs": report.lhs.to_string(),
                "rhs": report.rhs.to_string(),
                "per_block": report.per_block.iter().map(Scalar::to_string).collect::<Vec<_>>(),
                "equal": report.equal,
                "conclusive": report.conclusive,
                "nodes": report.stats.glued_nodes + report.stats.block_nodes,
                "block_sizes_x": instance.x.blocks().iter().map(FiniteMetricSpace::len).collect::<Vec<_>>(),
                "block_sizes_y": instance.y.blocks().iter().map(FiniteMetricSpace::len).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "instances": rows,
        "summary": {
            "equal": equal,
            "total": results.len(),
            "inconclusive": inconclusive,
        },
    })
    .to_string()
}
