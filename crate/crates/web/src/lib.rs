//! Browser bindings for a few `vwseries` computations.
//!
//! Every export takes plain arguments and returns a JSON string: either the
//! result, or `{"error": "..."}`. Rationals are `"num/den"` strings.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use vwseries::hilb::hilb_numbers;
use vwseries::k3::{vw_k3_series_closed, vw_k3_series_termwise};
use vwseries::rational::format_rational;
use vwseries::wallcross::{pairs_breakdown, variant_select, vw_from_pairs};
use vwseries::{Charge, InvariantTable, SurfaceData, Theory, SCHEMA};

/// Largest series order the page will ask for.
pub const MAX_ORDER: i64 = 60;

fn respond(result: Result<Value, String>) -> String {
    let mut v = result.unwrap_or_else(|e| json!({ "error": e }));
    if let Value::Object(map) = &mut v {
        map.insert("schema".into(), json!(SCHEMA));
    }
    v.to_string()
}

fn parse_inputs(surface: &str, charge: &str, theory: &str) -> Result<(SurfaceData, Charge, Theory), String> {
    let s = SurfaceData::preset(surface).map_err(|e| e.to_string())?;
    let alpha: Charge = charge.parse().map_err(|e: vwseries::Error| e.to_string())?;
    let theory: Theory = theory.parse().map_err(|e: vwseries::Error| e.to_string())?;
    Ok((s, alpha, theory))
}

pub fn k3_series(rank: i64, order: i64) -> Result<Value, String> {
    if !(0..=MAX_ORDER).contains(&order) {
        return Err(format!("order must be between 0 and {MAX_ORDER}"));
    }
    let closed = vw_k3_series_closed(rank, order).map_err(|e| e.to_string())?;
    let toda = vw_k3_series_termwise(rank, order).map_err(|e| e.to_string())?;
    let coeffs: Vec<Value> = (0..order)
        .map(|c2| json!(format_rational(&closed.coeff_int(c2).expect("below order"))))
        .collect();
    Ok(json!({
        "rank": rank,
        "order": order,
        "coefficients": coeffs,
        "agrees_with_toda": closed == toda,
    }))
}

pub fn pairs(surface: &str, charge: &str, n: i64, theory: &str, table: &str) -> Result<Value, String> {
    let (s, alpha, theory) = parse_inputs(surface, charge, theory)?;
    let table: InvariantTable = table.parse().map_err(|e: vwseries::Error| e.to_string())?;
    let eval = pairs_breakdown(&alpha, &s, n, &table, variant_select(&s, theory))
        .map_err(|e| e.to_string())?;
    serde_json::to_value(eval).map_err(|e| e.to_string())
}

pub fn solve(surface: &str, charge: &str, n: i64, theory: &str, pair_values: &str) -> Result<Value, String> {
    let (s, alpha, theory) = parse_inputs(surface, charge, theory)?;
    let given: InvariantTable = pair_values.parse().map_err(|e: vwseries::Error| e.to_string())?;
    let variant = variant_select(&s, theory);
    let vw = vw_from_pairs(&alpha, &s, n, &given, variant).map_err(|e| e.to_string())?;
    Ok(json!({ "variant": variant, "vw": vw }))
}

pub fn hilbert(euler: i64, count: usize) -> Result<Value, String> {
    if count as i64 > MAX_ORDER {
        return Err(format!("at most {MAX_ORDER} values"));
    }
    let values: Vec<String> = hilb_numbers(euler, count).iter().map(|v| v.to_string()).collect();
    Ok(json!({ "euler": euler, "values": values }))
}

/// `vw_{r,c2}` of a K3 for `c2 < order`.
#[wasm_bindgen(js_name = k3Series)]
pub fn k3_series_js(rank: i32, order: i32) -> String {
    respond(k3_series(rank as i64, order as i64))
}

/// Pair invariant with its breakdown by composition.
#[wasm_bindgen(js_name = pairsFromVw)]
pub fn pairs_js(surface: &str, charge: &str, n: i32, theory: &str, table: &str) -> String {
    respond(pairs(surface, charge, n as i64, theory, table))
}

/// Vafa-Witten invariants of every multiple from pair invariants.
#[wasm_bindgen(js_name = vwFromPairs)]
pub fn solve_js(surface: &str, charge: &str, n: i32, theory: &str, pair_values: &str) -> String {
    respond(solve(surface, charge, n as i64, theory, pair_values))
}

/// Euler characteristics of Hilbert schemes of points.
#[wasm_bindgen(js_name = hilbertNumbers)]
pub fn hilbert_js(euler: i32, count: u32) -> String {
    respond(hilbert(euler as i64, count as usize))
}
