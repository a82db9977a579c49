//! JSON reports for each analysis. Every report carries `"schema"` and
//! `"command"` fields; parties and bipartitions are numbered from 1.

use serde_json::{json, Map, Value};

use crate::activation::{witness_to_json, Activability, StrongLocalityReport};
use crate::constraints::{derive_constraint_space, only_trivial};
use crate::discrimination::{
    product_state_to_json, protocol_to_json, DistinguishabilityVerdict, UpbVerdict,
};
use crate::error::Result;
use crate::format::{pvm_to_json, scalar_to_json, state_set_to_json};
use crate::linalg::Operator;
use crate::measurement::{enumerate_op_pvms, is_orthogonality_preserving, measure, Pvm};
use crate::state::{classify_completeness, has_local_redundancy, is_orthogonal_set, StateSet};

pub const SCHEMA: &str = "opsets-report/1";

fn header(command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("command".into(), json!(command));
    m
}

pub fn operator_to_json(o: &Operator) -> Value {
    Value::Array(
        (0..o.dim())
            .map(|r| Value::Array(o.row(r).iter().map(scalar_to_json).collect()))
            .collect(),
    )
}

/// Orthogonality, completeness class and, for every declared split, local
/// redundancy.
pub fn analyze(s: &StateSet) -> Result<Value> {
    let mut m = header("analyze");
    m.insert("dims".into(), json!(s.dims()));
    m.insert("states".into(), json!(s.len()));
    let orth = is_orthogonal_set(s);
    m.insert("orthogonal".into(), json!(orth.orthogonal));
    if let Some((i, j)) = orth.violation {
        m.insert(
            "violation".into(),
            json!([s.states()[i].label, s.states()[j].label]),
        );
        return Ok(Value::Object(m));
    }
    let class = classify_completeness(s)?;
    m.insert("completeness".into(), json!(class.tag.as_str()));
    m.insert("local_span_dims".into(), json!(class.local_span_dims));
    let mut red = Vec::new();
    for (&p, &(a, b)) in s.splits() {
        red.push(json!({
            "party": p + 1,
            "split": [a, b],
            "redundant": has_local_redundancy(s, p, (a, b))?,
        }));
    }
    m.insert("redundancy".into(), Value::Array(red));
    Ok(Value::Object(m))
}

pub fn constraints(s: &StateSet, party: Option<usize>) -> Result<Value> {
    let mut m = header("constraints");
    let parties: Vec<usize> = match party {
        Some(p) => {
            s.check_party(p)?;
            vec![p]
        }
        None => (0..s.num_parties()).collect(),
    };
    let mut out = Vec::new();
    for p in parties {
        let (space, records) = derive_constraint_space(s, p)?;
        let enumeration = enumerate_op_pvms(s, p)?;
        let active: Vec<Value> = records
            .iter()
            .filter(|r| r.active)
            .map(|r| {
                json!({
                    "pair": [s.states()[r.pair.0].label, s.states()[r.pair.1].label],
                    "bystander_overlap": scalar_to_json(&r.bystander_overlap),
                })
            })
            .collect();
        out.push(json!({
            "party": p + 1,
            "dim": space.dim,
            "dim_space": space.dim_space(),
            "effective_dim": space.effective_dim,
            "only_trivial": only_trivial(&space),
            "commutative": space.is_commutative(),
            "active_constraints": active,
            "basis": space.basis.iter().map(operator_to_json).collect::<Vec<_>>(),
            "op_pvms": enumeration.pvms.iter().map(pvm_to_json).collect::<Vec<_>>(),
            "enumeration_complete": enumeration.complete,
        }));
    }
    m.insert("parties".into(), Value::Array(out));
    Ok(Value::Object(m))
}

pub fn measurement(s: &StateSet, pvm: &Pvm) -> Result<Value> {
    let mut m = header("measure");
    m.insert("pvm".into(), pvm_to_json(pvm));
    m.insert(
        "orthogonality_preserving".into(),
        json!(is_orthogonality_preserving(s, pvm)?),
    );
    let outcomes: Vec<Value> = measure(s, pvm)?
        .iter()
        .map(|o| {
            json!({
                "element": o.element_index,
                "survivors": state_set_to_json(&o.survivors),
                "eliminated": o.eliminated_labels,
                "closure": o.closure.as_str(),
            })
        })
        .collect();
    m.insert("outcomes".into(), Value::Array(outcomes));
    Ok(Value::Object(m))
}

pub fn distinguish(v: &DistinguishabilityVerdict) -> Value {
    let mut m = header("distinguish");
    m.insert("verdict".into(), json!(v.verdict.as_str()));
    m.insert("depth_used".into(), json!(v.depth_used));
    m.insert("exhaustive".into(), json!(v.exhaustive));
    m.insert(
        "blocking".into(),
        v.blocking
            .as_ref()
            .map_or(Value::Null, |b| json!(b.labels())),
    );
    m.insert("tree".into(), protocol_to_json(&v.tree));
    Value::Object(m)
}

pub fn upb(v: &UpbVerdict) -> Value {
    let mut m = header("upb");
    m.insert("upb".into(), json!(v.upb));
    m.insert(
        "witness".into(),
        v.witness
            .as_ref()
            .map_or(Value::Null, product_state_to_json),
    );
    Value::Object(m)
}

fn activability_fields(m: &mut Map<String, Value>, a: &Activability) {
    m.insert("verdict".into(), json!(a.label()));
    match a {
        Activability::NotActivable(r) => {
            m.insert("reason".into(), json!(r.as_str()));
        }
        Activability::Activable(w) => {
            m.insert("witness".into(), witness_to_json(w));
        }
        Activability::NotApplicable(v) => {
            m.insert("distinguishability".into(), json!(v.as_str()));
        }
        Activability::Unknown => {}
    }
}

pub fn activate(a: &Activability) -> Value {
    let mut m = header("activate");
    activability_fields(&mut m, a);
    Value::Object(m)
}

pub fn strong_local(r: &StrongLocalityReport) -> Value {
    let mut m = header("strong-local");
    m.insert("verdict".into(), json!(r.verdict.as_str()));
    let parts: Vec<Value> = r
        .bipartition_verdicts
        .iter()
        .map(|(b, a)| {
            let mut e = Map::new();
            e.insert("bipartition".into(), json!(b.to_string()));
            activability_fields(&mut e, a);
            Value::Object(e)
        })
        .collect();
    m.insert("bipartitions".into(), Value::Array(parts));
    m.insert(
        "regime_note".into(),
        r.regime_note.as_ref().map_or(Value::Null, |n| json!(n)),
    );
    Value::Object(m)
}

/// Pretty JSON with a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
