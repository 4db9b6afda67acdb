//! JSON encodings of field elements, series, matrices and reports.
//!
//! Rationals are `"num/den"` strings (plain integers print without a
//! denominator). Every top-level document carries `"schema": "isolab/1"`.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::coeffs::{FFElem, FieldCtx};
use crate::cochar::{parse_rational, Cocharacter, Q};
use crate::error::{Error, Result};
use crate::invariants::{CongruenceReport, ConvergenceTrace, ScanReport, StrataSignature};
use crate::laurent::LaurentSeries;
use crate::matl::MatL;
use crate::resgroups::{BaseChangeReport, DisplayParams, GOType, ResElement};

pub const SCHEMA: &str = "isolab/1";

fn bad(path: &str, msg: impl std::fmt::Display) -> Error {
    let path = if path.is_empty() { "$" } else { path };
    Error::Parse(format!("{path}: {msg}"))
}

/// Parse a JSON document, reporting syntax errors with line and column.
pub fn parse_document(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        let msg = msg.split(" at line ").next().unwrap_or(&msg).to_string();
        Error::Parse(format!("invalid JSON at line {}, column {}: {msg}", e.line(), e.column()))
    })
}

/// Start a top-level document with the schema tag and field description.
pub fn document(ctx: &FieldCtx) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("field".into(), json!({"p": ctx.p(), "m": ctx.m(), "modulus": ctx.modulus()}));
    m
}

pub fn q_to_json(x: &Q) -> Value {
    Value::String(x.to_string())
}

pub fn q_from_json(v: &Value, path: &str) -> Result<Q> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| bad(path, e)),
        Value::Number(n) => n.as_i64().map(Q::from).ok_or_else(|| bad(path, "expected an integer or \"num/den\"")),
        _ => Err(bad(path, "expected a rational as \"num/den\"")),
    }
}

fn int_from_json(v: &Value, path: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| bad(path, "expected an integer"))
}

fn uint_from_json(v: &Value, path: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| bad(path, "expected a non-negative integer"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| bad(path, format!("missing field {key:?}")))
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| bad(path, "expected an object"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(path, "expected an array"))
}

pub fn elem_to_json(ctx: &FieldCtx, x: FFElem) -> Value {
    json!(ctx.coeffs(x))
}

/// Array of `m` coordinates in `[0, p)`; a bare integer is read in the prime field.
pub fn elem_from_json(ctx: &FieldCtx, v: &Value, path: &str) -> Result<FFElem> {
    match v {
        Value::Number(_) => Ok(ctx.from_int(int_from_json(v, path)?)),
        Value::Array(items) => {
            let coords = items
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let c = uint_from_json(c, &format!("{path}[{i}]"))?;
                    u32::try_from(c).map_err(|_| bad(&format!("{path}[{i}]"), "coordinate too large"))
                })
                .collect::<Result<Vec<u32>>>()?;
            ctx.from_coeffs(&coords).map_err(|e| bad(path, e))
        }
        _ => Err(bad(path, "expected an array of coordinates")),
    }
}

pub fn series_to_json(s: &LaurentSeries) -> Value {
    let ctx = s.ctx();
    let end = s.start() + s.coeffs().len() as i64;
    json!({
        "val": s.start(),
        "prec": s.prec().unwrap_or(end),
        "exact": s.is_exact(),
        "coeffs": s.coeffs().iter().map(|c| elem_to_json(ctx, *c)).collect::<Vec<_>>(),
    })
}

fn parse_monomial(ctx: &Arc<FieldCtx>, s: &str, path: &str) -> Result<LaurentSeries> {
    let t = s.trim();
    let k = match t {
        "pi" => 1,
        _ => match t.strip_prefix("pi^") {
            Some(e) => e.trim().parse::<i64>().map_err(|_| bad(path, format!("bad exponent in {s:?}")))?,
            None => {
                let n = t.parse::<i64>().map_err(|_| bad(path, format!("expected \"pi^k\" or an integer, got {s:?}")))?;
                return Ok(LaurentSeries::from_int(ctx, n));
            }
        },
    };
    Ok(LaurentSeries::monomial(ctx, FFElem::ONE, k))
}

/// Accepts the full object form, the shorthand `"pi^k"`, or an integer.
pub fn series_from_json(ctx: &Arc<FieldCtx>, v: &Value, path: &str) -> Result<LaurentSeries> {
    match v {
        Value::String(s) => parse_monomial(ctx, s, path),
        Value::Number(_) => Ok(LaurentSeries::from_int(ctx, int_from_json(v, path)?)),
        Value::Object(obj) => {
            let val = match obj.get("val") {
                Some(x) => int_from_json(x, &format!("{path}.val"))?,
                None => 0,
            };
            let coeffs = array(field(obj, "coeffs", path)?, &format!("{path}.coeffs"))?
                .iter()
                .enumerate()
                .map(|(i, c)| elem_from_json(ctx, c, &format!("{path}.coeffs[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            let prec = match obj.get("prec") {
                None | Some(Value::Null) => None,
                Some(p) => Some(int_from_json(p, &format!("{path}.prec"))?),
            };
            let exact = match obj.get("exact") {
                Some(e) => e.as_bool().ok_or_else(|| bad(&format!("{path}.exact"), "expected a boolean"))?,
                None => prec.is_none(),
            };
            if exact {
                return Ok(LaurentSeries::from_parts(ctx, val, coeffs, None));
            }
            let prec = prec.ok_or_else(|| bad(path, "inexact series needs \"prec\""))?;
            if prec < val {
                return Err(bad(&format!("{path}.prec"), format!("precision {prec} below valuation {val}")));
            }
            if coeffs.len() as i64 > prec - val {
                return Err(bad(path, "more coefficients than the precision allows"));
            }
            Ok(LaurentSeries::from_parts(ctx, val, coeffs, Some(prec)))
        }
        _ => Err(bad(path, "expected a series object, \"pi^k\" or an integer")),
    }
}

pub fn matrix_to_json(b: &MatL) -> Value {
    let rows: Vec<Value> = b.rows().iter().map(|r| Value::Array(r.iter().map(series_to_json).collect())).collect();
    json!({"n": b.n(), "entries": rows})
}

/// `{"n", "entries"}` or a bare array of rows.
pub fn matrix_from_json(ctx: &Arc<FieldCtx>, v: &Value, path: &str) -> Result<MatL> {
    let (rows_v, rows_path, declared) = match v {
        Value::Object(obj) => {
            let declared = match obj.get("n") {
                Some(n) => Some(uint_from_json(n, &format!("{path}.n"))? as usize),
                None => None,
            };
            (field(obj, "entries", path)?, format!("{path}.entries"), declared)
        }
        Value::Array(_) => (v, path.to_string(), None),
        _ => return Err(bad(path, "expected a matrix object")),
    };
    let rows = array(rows_v, &rows_path)?;
    let n = rows.len();
    if n == 0 {
        return Err(bad(&rows_path, "matrix has no rows"));
    }
    if let Some(d) = declared {
        if d != n {
            return Err(bad(path, format!("\"n\" is {d} but there are {n} rows")));
        }
    }
    let mut entries = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        let rp = format!("{rows_path}[{i}]");
        let row = array(row, &rp)?;
        if row.len() != n {
            return Err(bad(&rp, format!("row has {} entries, expected {n}", row.len())));
        }
        for (j, x) in row.iter().enumerate() {
            entries.push(series_from_json(ctx, x, &format!("{rp}[{j}]"))?);
        }
    }
    MatL::new(ctx, n, entries)
}

pub fn cochar_to_json(x: &Cocharacter) -> Value {
    Value::Array(x.slopes().iter().map(q_to_json).collect())
}

pub fn cochar_from_json(v: &Value, path: &str) -> Result<Cocharacter> {
    let items = array(v, path)?;
    let slopes =
        items.iter().enumerate().map(|(i, s)| q_from_json(s, &format!("{path}[{i}]"))).collect::<Result<Vec<_>>>()?;
    if slopes.is_empty() {
        return Err(bad(path, "empty cocharacter"));
    }
    Ok(Cocharacter::new(slopes))
}

pub fn signature_to_json(s: &StrataSignature) -> Value {
    Value::Array(s.mus.iter().map(cochar_to_json).collect())
}

/// Array of cocharacters, or `{"signature": [...]}`.
pub fn signature_from_json(v: &Value, path: &str) -> Result<StrataSignature> {
    let (v, path) = match v {
        Value::Object(obj) => (field(obj, "signature", path)?, format!("{path}.signature")),
        _ => (v, path.to_string()),
    };
    let mus = array(v, &path)?
        .iter()
        .enumerate()
        .map(|(i, x)| cochar_from_json(x, &format!("{path}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    if mus.is_empty() {
        return Err(bad(&path, "empty signature"));
    }
    StrataSignature::new(mus).map_err(|e| bad(&path, e))
}

pub fn gotype_to_json(t: &GOType) -> Value {
    json!({"g": t.g, "members": t.members.iter().collect::<Vec<_>>()})
}

pub fn gotype_from_json(v: &Value, path: &str) -> Result<GOType> {
    let obj = object(v, path)?;
    let g = uint_from_json(field(obj, "g", path)?, &format!("{path}.g"))? as usize;
    let members = array(field(obj, "members", path)?, &format!("{path}.members"))?
        .iter()
        .enumerate()
        .map(|(i, x)| uint_from_json(x, &format!("{path}.members[{i}]")).map(|u| u as usize))
        .collect::<Result<Vec<_>>>()?;
    GOType::new(g, members)
}

pub fn display_params_to_json(d: &DisplayParams) -> Value {
    json!({"g": d.g, "i": d.i, "j": d.j, "m": d.m, "c": series_to_json(&d.c)})
}

/// `"g"` may be omitted and is then `i + j`; `"c"` defaults to 1.
pub fn display_params_from_json(ctx: &Arc<FieldCtx>, v: &Value, path: &str) -> Result<DisplayParams> {
    let obj = object(v, path)?;
    let get = |k: &str| -> Result<u32> {
        let x = uint_from_json(field(obj, k, path)?, &format!("{path}.{k}"))?;
        u32::try_from(x).map_err(|_| bad(&format!("{path}.{k}"), "too large"))
    };
    let (i, j, m) = (get("i")?, get("j")?, get("m")?);
    let g = if obj.contains_key("g") { get("g")? } else { i + j };
    let c = match obj.get("c") {
        Some(c) => series_from_json(ctx, c, &format!("{path}.c"))?,
        None => LaurentSeries::one(ctx),
    };
    DisplayParams::new(g, i, j, m, c)
}

pub fn res_element_to_json(b: &ResElement) -> Value {
    json!({"g": b.g(), "parts": b.parts().iter().map(matrix_to_json).collect::<Vec<_>>()})
}

pub fn res_element_from_json(ctx: &Arc<FieldCtx>, v: &Value, path: &str) -> Result<ResElement> {
    let obj = object(v, path)?;
    let parts_v = array(field(obj, "parts", path)?, &format!("{path}.parts"))?;
    if let Some(g) = obj.get("g") {
        let g = uint_from_json(g, &format!("{path}.g"))? as usize;
        if g != parts_v.len() {
            return Err(bad(path, format!("\"g\" is {g} but there are {} parts", parts_v.len())));
        }
    }
    let parts = parts_v
        .iter()
        .enumerate()
        .map(|(i, p)| matrix_from_json(ctx, p, &format!("{path}.parts[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    ResElement::new(parts)
}

pub fn scan_to_json(r: &ScanReport) -> Value {
    json!({
        "signature": signature_to_json(&r.signature),
        "attempts": r.attempts,
        "accepted": r.accepted,
        "tallies": r.tallies.iter().map(|t| json!({
            "newton": cochar_to_json(&t.newton),
            "count": t.count,
            "first_trial": t.first_trial,
            "witness": matrix_to_json(&t.witness),
        })).collect::<Vec<_>>(),
    })
}

pub fn congruence_to_json(r: &CongruenceReport) -> Value {
    json!({
        "depth": r.depth,
        "level": r.level,
        "safe_level": r.safe_level,
        "trials": r.trials,
        "baseline": signature_to_json(&r.baseline),
        "preserved": r.preserved(),
        "violations": r.violations,
        "depth1_violations": r.depth1_violations,
    })
}

pub fn trace_to_json(t: &ConvergenceTrace) -> Value {
    json!({
        "newton": cochar_to_json(&t.newton),
        "fitted_c": q_to_json(&t.fitted_c),
        "mazur": t.mazur_ok(),
        "rows": t.rows.iter().map(|r| json!({
            "k": r.k,
            "slopes": cochar_to_json(&r.normalized),
            "distance": q_to_json(&r.distance),
            "unnormalized": q_to_json(&r.unnormalized),
            "mazur": r.mazur,
        })).collect::<Vec<_>>(),
    })
}

pub fn basechange_to_json(r: &BaseChangeReport) -> Value {
    json!({
        "e": r.e,
        "hodge": cochar_to_json(&r.hodge),
        "newton": cochar_to_json(&r.newton),
        "hodge_rebased": cochar_to_json(&r.hodge_rebased),
        "newton_rebased": cochar_to_json(&r.newton_rebased),
        "scales": r.scales(),
    })
}
