//! Canonical JSON encoding of every public value type.
//!
//! Canonical means byte-reproducible: object keys are emitted in a fixed
//! (alphabetical) order, integer-keyed coordinate maps are emitted in
//! ascending numeric order, vectors are sorted by the serialization of
//! their basis pattern, and no insignificant whitespace is produced.
//! Parsers accept any key order and reject unknown structure with a
//! parse error.

use std::collections::BTreeMap;

use serde_json::{Map, Value};

use crate::category_o::IntegralWeight;
use crate::error::{Error, Result};
use crate::fock::{ClassicalVector, FockVector};
use crate::indexset::{BlockKey, Pattern, Shape};
use crate::lattice::{EpsWeight, Level, RootCoeffs};
use crate::laurent::LaurentScalar;
use crate::report::Report;

/// Render a value in canonical form (compact separators; key order as
/// inserted by the builders in this module).
pub fn to_canonical_string(value: &Value) -> String {
    serde_json::to_string(value).expect("serialization of finite JSON values cannot fail")
}

fn obj(entries: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    for (k, v) in entries {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}

fn parse_err(what: impl Into<String>) -> Error {
    Error::Parse(what.into())
}

fn as_object<'v>(value: &'v Value, what: &str) -> Result<&'v Map<String, Value>> {
    value
        .as_object()
        .ok_or_else(|| parse_err(format!("{what}: expected a JSON object")))
}

fn as_array<'v>(value: &'v Value, what: &str) -> Result<&'v Vec<Value>> {
    value
        .as_array()
        .ok_or_else(|| parse_err(format!("{what}: expected a JSON array")))
}

fn field<'v>(map: &'v Map<String, Value>, key: &str, what: &str) -> Result<&'v Value> {
    map.get(key)
        .ok_or_else(|| parse_err(format!("{what}: missing field \"{key}\"")))
}

fn as_i64(value: &Value, what: &str) -> Result<i64> {
    value
        .as_i64()
        .ok_or_else(|| parse_err(format!("{what}: expected an integer")))
}

fn as_u32(value: &Value, what: &str) -> Result<u32> {
    let n = as_i64(value, what)?;
    u32::try_from(n).map_err(|_| parse_err(format!("{what}: expected a non-negative integer")))
}

fn as_bit(value: &Value, what: &str) -> Result<u8> {
    match as_i64(value, what)? {
        0 => Ok(0),
        1 => Ok(1),
        other => Err(parse_err(format!("{what}: expected 0 or 1, found {other}"))),
    }
}

/// Ascending-key encoding of an integer-indexed coordinate map.  Callers
/// supply entries already sorted by key.
fn int_map_to_json(entries: impl IntoIterator<Item = (i64, i64)>) -> Value {
    let mut out = Map::new();
    for (k, v) in entries {
        out.insert(k.to_string(), Value::from(v));
    }
    Value::Object(out)
}

fn int_map_from_json(value: &Value, what: &str) -> Result<BTreeMap<i64, i64>> {
    let map = as_object(value, what)?;
    let mut out = BTreeMap::new();
    for (k, v) in map {
        let index: i64 = k
            .parse()
            .map_err(|_| parse_err(format!("{what}: key \"{k}\" is not an integer")))?;
        if out.insert(index, as_i64(v, what)?).is_some() {
            return Err(parse_err(format!("{what}: duplicate key \"{k}\"")));
        }
    }
    Ok(out)
}

pub fn level_to_json(level: Level) -> Value {
    match level {
        Level::Finite(r) => Value::from(r),
        Level::Infinite => Value::from("inf"),
    }
}

pub fn level_from_json(value: &Value) -> Result<Level> {
    if let Some(s) = value.as_str() {
        if s == "inf" {
            return Ok(Level::Infinite);
        }
        return Err(parse_err(format!(
            "level: expected an integer or \"inf\", found \"{s}\""
        )));
    }
    Ok(Level::Finite(as_u32(value, "level")?))
}

pub fn shape_to_json(shape: &Shape) -> Value {
    obj(vec![
        (
            "c",
            Value::from(
                shape
                    .charges()
                    .iter()
                    .map(|&c| i64::from(c))
                    .collect::<Vec<_>>(),
            ),
        ),
        ("epsilon", Value::from(i64::from(shape.epsilon()))),
        (
            "n",
            Value::from(
                shape
                    .row_sizes()
                    .iter()
                    .map(|&n| i64::from(n))
                    .collect::<Vec<_>>(),
            ),
        ),
    ])
}

pub fn shape_from_json(value: &Value) -> Result<Shape> {
    let map = as_object(value, "shape")?;
    let n = as_array(field(map, "n", "shape")?, "shape.n")?
        .iter()
        .map(|v| as_u32(v, "shape.n"))
        .collect::<Result<Vec<_>>>()?;
    let c = as_array(field(map, "c", "shape")?, "shape.c")?
        .iter()
        .map(|v| as_bit(v, "shape.c"))
        .collect::<Result<Vec<_>>>()?;
    let epsilon = as_bit(field(map, "epsilon", "shape")?, "shape.epsilon")?;
    Shape::new(n, c, epsilon)
}

pub fn eps_weight_to_json(w: &EpsWeight) -> Value {
    obj(vec![
        ("coords", int_map_to_json(w.coords())),
        ("level", level_to_json(w.level())),
    ])
}

pub fn eps_weight_from_json(value: &Value) -> Result<EpsWeight> {
    let map = as_object(value, "weight")?;
    let level = level_from_json(field(map, "level", "weight")?)?;
    let coords = int_map_from_json(field(map, "coords", "weight")?, "weight.coords")?;
    EpsWeight::from_coords(level, coords)
}

pub fn root_coeffs_to_json(c: &RootCoeffs) -> Value {
    obj(vec![
        ("coords", int_map_to_json(c.coeffs())),
        ("level", level_to_json(c.level())),
    ])
}

pub fn pattern_to_json(p: &Pattern) -> Value {
    let native = p.native_level();
    let rows = p
        .window(native)
        .expect("the native-level window always exists");
    let rows_json: Vec<Value> = rows
        .into_iter()
        .map(|row| Value::from(row.into_iter().map(i64::from).collect::<Vec<_>>()))
        .collect();
    obj(vec![
        ("level", Value::from(native)),
        ("rows", Value::from(rows_json)),
        ("shape", shape_to_json(p.shape())),
    ])
}

pub fn pattern_from_json(value: &Value) -> Result<Pattern> {
    let map = as_object(value, "pattern")?;
    let shape = shape_from_json(field(map, "shape", "pattern")?)?;
    let level = as_u32(field(map, "level", "pattern")?, "pattern.level")?;
    let rows = as_array(field(map, "rows", "pattern")?, "pattern.rows")?
        .iter()
        .map(|row| {
            as_array(row, "pattern row")?
                .iter()
                .map(|v| as_bit(v, "pattern entry"))
                .collect::<Result<Vec<u8>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Pattern::from_windows(&shape, level, &rows)
}

fn laurent_to_json(c: &LaurentScalar) -> Value {
    let pairs: Vec<Value> = c
        .to_pairs()
        .into_iter()
        .map(|(exp, coeff)| Value::from(vec![exp, coeff]))
        .collect();
    Value::from(pairs)
}

fn laurent_from_json(value: &Value) -> Result<LaurentScalar> {
    let pairs = as_array(value, "coefficient")?;
    let mut out = Vec::with_capacity(pairs.len());
    for pair in pairs {
        let pair = as_array(pair, "coefficient pair")?;
        if pair.len() != 2 {
            return Err(parse_err("coefficient pair: expected [exponent, integer]"));
        }
        out.push((
            as_i64(&pair[0], "exponent")?,
            as_i64(&pair[1], "coefficient")?,
        ));
    }
    Ok(LaurentScalar::from_pairs(out))
}

/// Terms sorted by the canonical serialization of their pattern.
fn sorted_terms<T>(terms: Vec<(Value, T)>) -> Vec<(Value, T)> {
    let mut keyed: Vec<(String, Value, T)> = terms
        .into_iter()
        .map(|(p, c)| (to_canonical_string(&p), p, c))
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.into_iter().map(|(_, p, c)| (p, c)).collect()
}

pub fn fock_vector_to_json(v: &FockVector) -> Value {
    let terms: Vec<(Value, Value)> = v
        .terms()
        .map(|(p, c)| (pattern_to_json(p), laurent_to_json(c)))
        .collect();
    let entries: Vec<Value> = sorted_terms(terms)
        .into_iter()
        .map(|(p, c)| obj(vec![("coeff", c), ("pattern", p)]))
        .collect();
    Value::from(entries)
}

pub fn fock_vector_from_json(value: &Value, shape: &Shape) -> Result<FockVector> {
    let entries = as_array(value, "vector")?;
    let mut out = FockVector::zero(shape.clone());
    for entry in entries {
        let map = as_object(entry, "vector term")?;
        let pattern = pattern_from_json(field(map, "pattern", "vector term")?)?;
        let coeff = laurent_from_json(field(map, "coeff", "vector term")?)?;
        out.add_term(pattern, coeff)?;
    }
    Ok(out)
}

pub fn classical_vector_to_json(v: &ClassicalVector) -> Value {
    let terms: Vec<(Value, i64)> = v.terms().map(|(p, &c)| (pattern_to_json(p), c)).collect();
    let entries: Vec<Value> = sorted_terms(terms)
        .into_iter()
        .map(|(p, c)| obj(vec![("coeff", Value::from(c)), ("pattern", p)]))
        .collect();
    Value::from(entries)
}

pub fn classical_vector_from_json(value: &Value, shape: &Shape) -> Result<ClassicalVector> {
    let entries = as_array(value, "vector")?;
    let mut out = ClassicalVector::zero(shape.clone());
    for entry in entries {
        let map = as_object(entry, "vector term")?;
        let pattern = pattern_from_json(field(map, "pattern", "vector term")?)?;
        let coeff = as_i64(field(map, "coeff", "vector term")?, "vector term coeff")?;
        out.add_term(pattern, coeff)?;
    }
    Ok(out)
}

pub fn integral_weight_to_json(w: &IntegralWeight) -> Value {
    obj(vec![
        ("delta", Value::from(w.delta().to_vec())),
        ("level", Value::from(w.level())),
    ])
}

pub fn integral_weight_from_json(value: &Value, shape: &Shape) -> Result<IntegralWeight> {
    let map = as_object(value, "integral weight")?;
    let level = as_u32(
        field(map, "level", "integral weight")?,
        "integral weight level",
    )?;
    let delta = as_array(
        field(map, "delta", "integral weight")?,
        "integral weight delta",
    )?
    .iter()
    .map(|v| as_i64(v, "integral weight delta"))
    .collect::<Result<Vec<_>>>()?;
    IntegralWeight::new(shape.clone(), level, delta)
}

pub fn block_key_to_json(key: &BlockKey) -> Value {
    obj(vec![
        ("epsilon", Value::from(i64::from(key.epsilon()))),
        (
            "weight",
            int_map_to_json(key.weight().iter().map(|(&k, &v)| (k, v))),
        ),
    ])
}

pub fn report_to_json(report: &Report) -> Value {
    let checks: Vec<Value> = report
        .checks()
        .iter()
        .map(|c| {
            let mut entries = Vec::new();
            if let Some(detail) = &c.detail {
                entries.push(("detail", Value::from(detail.clone())));
            }
            entries.push(("name", Value::from(c.name.clone())));
            entries.push(("pass", Value::from(c.pass)));
            obj(entries)
        })
        .collect();
    let mut entries = vec![("checks", Value::from(checks))];
    if let Some(first) = report.first_failure() {
        let text = match &first.detail {
            Some(d) => format!("{}: {d}", first.name),
            None => first.name.clone(),
        };
        entries.push(("counterexample", Value::from(text)));
    }
    entries.push(("pass", Value::from(report.pass())));
    obj(entries)
}

/// Divided-power paths ordered as applied to a vector written on the right.
pub fn path_to_json(path: &[(u32, i64)]) -> Value {
    let steps: Vec<Value> = path
        .iter()
        .map(|&(power, index)| {
            obj(vec![
                ("index", Value::from(index)),
                ("power", Value::from(power)),
            ])
        })
        .collect();
    Value::from(steps)
}

pub fn path_from_json(value: &Value) -> Result<Vec<(u32, i64)>> {
    let steps = as_array(value, "path")?;
    steps
        .iter()
        .map(|step| {
            let map = as_object(step, "path step")?;
            let power = as_u32(field(map, "power", "path step")?, "path step power")?;
            let index = as_i64(field(map, "index", "path step")?, "path step index")?;
            Ok((power, index))
        })
        .collect()
}

/// The uniform error payload used by the CLI for malformed input.
pub fn error_to_json(err: &Error) -> Value {
    obj(vec![("error", Value::from(err.to_string()))])
}
