//! Cycle files: JSON text with rationals written as `"p/q"` strings.
//!
//! ```text
//! {"blocks": [2], "facets": [{"vertices": [["0", "0"]], "rays": [[1, 0]], "lineality": [], "weight": 1}]}
//! ```

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cycles::{BlockStructure, TropicalCycle, WeightedFacet};
use crate::error::{Error, Result};
use crate::kernel::num::{format_rat, parse_rat, Int, IntVec, Rat, RatVec};
use crate::kernel::polyhedron::Polyhedron;

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn parse_rat_value(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => parse_rat(s),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_rat(&n.to_string()),
        _ => Err(bad(format!("expected a rational, found {v}"))),
    }
}

fn parse_int_value(v: &Value) -> Result<Int> {
    let s = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        _ => return Err(bad(format!("expected an integer, found {v}"))),
    };
    s.trim().parse::<Int>().map_err(|_| bad(format!("bad integer {s:?}")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(format!("{what} must be an array")))
}

fn vectors<T>(v: Option<&Value>, m: usize, what: &str, f: impl Fn(&Value) -> Result<T>) -> Result<Vec<Vec<T>>> {
    let Some(v) = v else { return Ok(Vec::new()) };
    array(v, what)?
        .iter()
        .map(|row| {
            let row = array(row, what)?;
            if row.len() != m {
                return Err(bad(format!("{what} entry has length {}, expected {m}", row.len())));
            }
            row.iter().map(&f).collect()
        })
        .collect()
}

/// A comma-separated rational vector such as `1/2,0,-3`.
pub fn parse_rat_list(s: &str) -> Result<RatVec> {
    s.split(',').map(|p| parse_rat(p.trim())).collect()
}

pub fn parse_int_list(s: &str) -> Result<IntVec> {
    s.split(',').map(|p| p.trim().parse::<Int>().map_err(|_| bad(format!("bad integer {p:?}")))).collect()
}

pub fn parse_cycle(text: &str) -> Result<TropicalCycle> {
    let root: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    let blocks: Vec<usize> = array(root.get("blocks").ok_or_else(|| bad("missing \"blocks\""))?, "blocks")?
        .iter()
        .map(|b| b.as_u64().map(|b| b as usize).ok_or_else(|| bad("blocks must be non-negative integers")))
        .collect::<Result<_>>()?;
    let ambient = BlockStructure::new(blocks).map_err(|e| bad(e.to_string()))?;
    let m = ambient.total();
    let mut facets = Vec::new();
    for f in array(root.get("facets").ok_or_else(|| bad("missing \"facets\""))?, "facets")? {
        let vertices = vectors(f.get("vertices"), m, "vertices", parse_rat_value)?;
        if vertices.is_empty() {
            return Err(bad("every facet needs at least one vertex"));
        }
        let rays = vectors(f.get("rays"), m, "rays", parse_int_value)?;
        let lineality = vectors(f.get("lineality"), m, "lineality", parse_int_value)?;
        let weight =
            f.get("weight").and_then(Value::as_u64).ok_or_else(|| bad("weight must be a non-negative integer"))?;
        facets.push(WeightedFacet { poly: Polyhedron::from_v(m, &vertices, &rays, &lineality), weight });
    }
    TropicalCycle::new(ambient, facets).map_err(|e| bad(e.to_string()))
}

pub fn rat_vec_json(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(format_rat(x))).collect())
}

pub fn int_vec_json(v: &[Int]) -> Value {
    Value::Array(
        v.iter()
            .map(|x| match i64::try_from(x) {
                Ok(n) => json!(n),
                Err(_) => Value::String(x.to_string()),
            })
            .collect(),
    )
}

pub fn polyhedron_json(p: &Polyhedron) -> Value {
    json!({
        "vertices": p.vertices().iter().map(|v| rat_vec_json(v)).collect::<Vec<_>>(),
        "rays": p.rays().iter().map(|v| int_vec_json(v)).collect::<Vec<_>>(),
        "lineality": p.lineality().iter().map(|v| int_vec_json(v)).collect::<Vec<_>>(),
    })
}

pub fn cycle_json(c: &TropicalCycle) -> Value {
    let facets: Vec<Value> = c
        .facets()
        .iter()
        .map(|f| {
            let mut v = polyhedron_json(&f.poly);
            v["weight"] = json!(f.weight);
            v
        })
        .collect();
    json!({ "blocks": c.ambient().blocks(), "facets": facets })
}

pub fn write_cycle(c: &TropicalCycle) -> String {
    let mut s = serde_json::to_string_pretty(&cycle_json(c)).expect("serializable");
    s.push('\n');
    s
}

pub fn sha256_hex(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn round_trip() {
        for c in [fixtures::standard_line(), fixtures::worked_b(), fixtures::parallel_lines(), fixtures::scaled_line(2)]
        {
            assert_eq!(parse_cycle(&write_cycle(&c)).unwrap(), c);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_cycle("{").is_err());
        assert!(parse_cycle(r#"{"blocks":[2],"facets":[{"vertices":[["0"]],"weight":1}]}"#).is_err());
        assert!(parse_cycle(r#"{"blocks":[2],"facets":[{"vertices":[[0.5,0]],"weight":1}]}"#).is_err());
        assert!(parse_cycle(r#"{"blocks":[2],"facets":[{"rays":[[1,0]],"weight":1}]}"#).is_err());
        let ok =
            parse_cycle(r#"{"blocks":[2],"facets":[{"vertices":[["1/2",0]],"rays":[[2,0]],"weight":3}]}"#).unwrap();
        assert_eq!(ok.facets()[0].poly.rays()[0], crate::kernel::num::int_vec(&[1, 0]));
    }
}
