//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export returns a JSON string. Integers that may exceed 2^53 are sent
//! as decimal strings so the page never loses precision.

use germkit::cosets::{SubgroupFamily, SubgroupSpec};
use germkit::germ::{BaseCounts, CoefficientMap};
use germkit::gl2::catalog;
use germkit::partition::{enumerate_partitions, Dominance};
use germkit::Error;
use num_bigint::BigInt;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Larger tables are unreadable in a browser anyway.
const MAX_TABLE_N: usize = 12;

fn err(e: Error) -> String {
    e.to_string()
}

fn big(v: &BigInt) -> Value {
    Value::String(v.to_string())
}

/// Partitions of `n` with `d_λ`, duals and the dominance relation between
/// every pair (`<`, `=`, `>` or `|` for incomparable).
#[wasm_bindgen]
pub fn partition_table(n: usize) -> Result<String, String> {
    if n > MAX_TABLE_N {
        return Err(format!("n must be at most {MAX_TABLE_N}"));
    }
    let all = enumerate_partitions(n).map_err(err)?;
    let mut relation = Vec::with_capacity(all.len());
    for a in &all {
        let row = all
            .iter()
            .map(|b| {
                a.dominance(b).map(|r| match r {
                    Dominance::Less => "<",
                    Dominance::Equal => "=",
                    Dominance::Greater => ">",
                    Dominance::Incomparable => "|",
                })
            })
            .collect::<germkit::Result<Vec<_>>>()
            .map_err(err)?;
        relation.push(row);
    }
    let rows: Vec<Value> = all
        .iter()
        .map(|p| json!({ "partition": p.to_string(), "d": p.d(), "dual": p.dual().to_string() }))
        .collect();
    Ok(json!({ "n": n, "rows": rows, "relation": relation }).to_string())
}

/// The `GL_2` catalog at `(q, d)` for depths `0..=max_j`.
#[wasm_bindgen]
pub fn gl2_curves(q: u64, d: u32, max_j: u32) -> Result<String, String> {
    let rows = catalog(q, d, max_j).map_err(err)?;
    let rows: Vec<Value> = rows
        .iter()
        .map(|row| {
            let chains: Vec<Value> = row
                .dims
                .iter()
                .map(|c| {
                    json!({
                        "member": c.member.to_string(),
                        "values": c.values.as_ref().map(|v| v.iter().map(big).collect::<Vec<_>>()),
                    })
                })
                .collect();
            json!({
                "class": row.class,
                "a": row.a.as_ref().map(big),
                "b": row.b.as_ref().map(big),
                "chains": chains,
                "note": row.note,
            })
        })
        .collect();
    Ok(json!({ "q": q, "d": d, "rows": rows }).to_string())
}

/// Dimension polynomial of a coefficient map (in the CLI's JSON format) for one
/// subgroup family, with its values at depths `0..=max_j`.
#[wasm_bindgen]
pub fn dimension_curve(map_json: &str, family: &str, q: u64, d: u32, max_j: u32) -> Result<String, String> {
    let c: CoefficientMap = serde_json::from_str(map_json).map_err(|e| format!("malformed map: {e}"))?;
    let family: SubgroupFamily = family.parse().map_err(err)?;
    let poly = c.dimension_polynomial(&BaseCounts::Family(family), q, d).map_err(err)?;
    let depths = if family.is_parahoric() { 0 } else { max_j };
    let mut values = Vec::new();
    for j in 0..=depths {
        let spec = SubgroupSpec::new(family, j, q, d).map_err(err)?;
        values.push(json!({
            "member": family.member_symbol(j),
            "value": big(&c.dim_fixed(&spec).map_err(err)?),
        }));
    }
    Ok(json!({
        "map": c.to_string(),
        "family": family.name(),
        "poly": poly.poly.display_asc("X"),
        "gk_dimension": poly.formal_degree,
        "cancellation": poly.has_top_cancellation(),
        "values": values,
    })
    .to_string())
}
