//! Text formats: state-set files and PVM literals.
//!
//! A state-set file is JSON of the form
//!
//! ```text
//! {"dims":[3,6],"splits":{"2":[2,3]},"states":[{"label":"phi1","factors":[[["1","0"],…],[…]]}]}
//! ```
//!
//! Each scalar is a `[re, im]` pair of rational strings (`"p/q"`, `"p"` or a
//! decimal). Parties are numbered from 1 in files. An optional leading
//! `"note"` string carries free-form remarks. The canonical serialization
//! is compact, keys in the order above, states in input order, rationals
//! reduced with positive denominators, followed by a single newline.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::measurement::{Projector, Pvm};
use crate::scalar::{format_rational, parse_rational, Scalar};
use crate::state::{LocalVector, ProductState, StateSet};

fn perr(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{path}: {msg}"))
}

pub fn scalar_to_json(s: &Scalar) -> Value {
    json!([format_rational(&s.re), format_rational(&s.im)])
}

pub fn vector_to_json(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(scalar_to_json).collect())
}

pub fn scalar_from_json(v: &Value, path: &str) -> Result<Scalar> {
    let part = |x: &Value, sub: &str| -> Result<_> {
        match x {
            Value::String(s) => parse_rational(s).map_err(|e| perr(&format!("{path}{sub}"), e)),
            Value::Number(n) if n.is_i64() => Ok(crate::scalar::rat(n.as_i64().unwrap())),
            _ => Err(perr(&format!("{path}{sub}"), "expected a rational string")),
        }
    };
    match v {
        Value::Array(pair) if pair.len() == 2 => {
            Ok(Scalar::new(part(&pair[0], "[0]")?, part(&pair[1], "[1]")?))
        }
        Value::String(_) | Value::Number(_) => Ok(Scalar::real(part(v, "")?)),
        _ => Err(perr(path, "expected [re, im]")),
    }
}

pub fn vector_from_json(v: &Value, path: &str) -> Result<Vec<Scalar>> {
    let arr = v
        .as_array()
        .ok_or_else(|| perr(path, "expected a vector"))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| scalar_from_json(x, &format!("{path}[{i}]")))
        .collect()
}

pub fn state_set_to_json(s: &StateSet) -> Value {
    let mut m = Map::new();
    if let Some(note) = s.note() {
        m.insert("note".into(), Value::String(note.to_string()));
    }
    m.insert("dims".into(), json!(s.dims()));
    let mut splits = Map::new();
    for (p, (a, b)) in s.splits() {
        splits.insert((p + 1).to_string(), json!([a, b]));
    }
    m.insert("splits".into(), Value::Object(splits));
    let states: Vec<Value> = s
        .states()
        .iter()
        .map(|st| {
            let mut o = Map::new();
            o.insert("label".into(), Value::String(st.label.clone()));
            o.insert(
                "factors".into(),
                Value::Array(
                    st.factors
                        .iter()
                        .map(|f| vector_to_json(&f.coords))
                        .collect(),
                ),
            );
            Value::Object(o)
        })
        .collect();
    m.insert("states".into(), Value::Array(states));
    Value::Object(m)
}

pub fn serialize_state_set(s: &StateSet) -> String {
    let mut out = serde_json::to_string(&state_set_to_json(s)).expect("serializable");
    out.push('\n');
    out
}

pub fn state_set_from_json(v: &Value) -> Result<StateSet> {
    let obj = v
        .as_object()
        .ok_or_else(|| perr("$", "expected an object"))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "note" | "dims" | "splits" | "states") {
            return Err(perr(key, "unknown field"));
        }
    }
    let dims: Vec<usize> = obj
        .get("dims")
        .and_then(Value::as_array)
        .ok_or_else(|| perr("dims", "missing or not an array"))?
        .iter()
        .enumerate()
        .map(|(i, d)| {
            d.as_u64()
                .filter(|&d| d > 0)
                .map(|d| d as usize)
                .ok_or_else(|| perr(&format!("dims[{i}]"), "expected a positive integer"))
        })
        .collect::<Result<_>>()?;
    let states_v = obj
        .get("states")
        .and_then(Value::as_array)
        .ok_or_else(|| perr("states", "missing or not an array"))?;
    let mut states = Vec::with_capacity(states_v.len());
    for (i, sv) in states_v.iter().enumerate() {
        let path = format!("states[{i}]");
        let so = sv
            .as_object()
            .ok_or_else(|| perr(&path, "expected an object"))?;
        let label = so
            .get("label")
            .and_then(Value::as_str)
            .ok_or_else(|| perr(&format!("{path}.label"), "missing or not a string"))?;
        let fv = so
            .get("factors")
            .and_then(Value::as_array)
            .ok_or_else(|| perr(&format!("{path}.factors"), "missing or not an array"))?;
        if fv.len() != dims.len() {
            return Err(perr(
                &format!("{path}.factors"),
                format!(
                    "has {} factors, dims declares {} parties",
                    fv.len(),
                    dims.len()
                ),
            ));
        }
        let mut factors = Vec::with_capacity(fv.len());
        for (p, f) in fv.iter().enumerate() {
            let fpath = format!("{path}.factors[{p}]");
            let coords = vector_from_json(f, &fpath)?;
            if coords.len() != dims[p] {
                return Err(Error::Dimension(format!(
                    "{fpath}: length {} but party {} has dimension {}",
                    coords.len(),
                    p + 1,
                    dims[p]
                )));
            }
            factors.push(LocalVector::new(p, coords));
        }
        states.push(ProductState::new(label, factors));
    }
    let mut set = StateSet::new(dims, states)?;
    if let Some(splits) = obj.get("splits") {
        let so = splits
            .as_object()
            .ok_or_else(|| perr("splits", "expected an object"))?;
        for (k, v) in so {
            let path = format!("splits.{k}");
            let party: usize = k
                .parse::<usize>()
                .ok()
                .filter(|&p| p >= 1)
                .ok_or_else(|| perr(&path, "party keys are integers from 1"))?;
            let pair = v
                .as_array()
                .filter(|a| a.len() == 2)
                .and_then(|a| Some((a[0].as_u64()? as usize, a[1].as_u64()? as usize)))
                .ok_or_else(|| perr(&path, "expected [d1, d2]"))?;
            set = set.with_split(party - 1, pair)?;
        }
    }
    if let Some(note) = obj.get("note") {
        let n = note
            .as_str()
            .ok_or_else(|| perr("note", "expected a string"))?;
        set = set.with_note(n);
    }
    Ok(set)
}

pub fn parse_state_set(text: &str) -> Result<StateSet> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    state_set_from_json(&v)
}

/// `{"party":P,"elements":[[v,…],…]}`, party numbered from 1, each element
/// given by a list of support vectors.
pub fn pvm_to_json(m: &Pvm) -> Value {
    let mut o = Map::new();
    o.insert("party".into(), json!(m.party() + 1));
    o.insert(
        "elements".into(),
        Value::Array(
            m.elements()
                .iter()
                .map(|e| Value::Array(e.support().iter().map(|v| vector_to_json(v)).collect()))
                .collect(),
        ),
    );
    Value::Object(o)
}

pub fn pvm_from_json(v: &Value, dims: &[usize]) -> Result<Pvm> {
    let obj = v
        .as_object()
        .ok_or_else(|| perr("pvm", "expected an object"))?;
    let party = obj
        .get("party")
        .and_then(Value::as_u64)
        .filter(|&p| p >= 1 && (p as usize) <= dims.len())
        .ok_or_else(|| {
            perr(
                "party",
                format!("expected an integer in 1..={}", dims.len()),
            )
        })? as usize
        - 1;
    let d = dims[party];
    let elems = obj
        .get("elements")
        .and_then(Value::as_array)
        .ok_or_else(|| perr("elements", "missing or not an array"))?;
    let mut projectors = Vec::new();
    for (k, e) in elems.iter().enumerate() {
        let path = format!("elements[{k}]");
        let vs = e
            .as_array()
            .ok_or_else(|| perr(&path, "expected a list of vectors"))?;
        let mut support = Vec::new();
        for (j, x) in vs.iter().enumerate() {
            let vp = format!("{path}[{j}]");
            let coords = vector_from_json(x, &vp)?;
            if coords.len() != d {
                return Err(Error::Dimension(format!(
                    "{vp}: length {} but party {} has dimension {d}",
                    coords.len(),
                    party + 1
                )));
            }
            support.push(coords);
        }
        projectors.push(Projector::new(party, d, support)?);
    }
    Pvm::new(party, d, projectors)
}

pub fn parse_pvm(text: &str, dims: &[usize]) -> Result<Pvm> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    pvm_from_json(&v, dims)
}
