//! Local activation of nonlocality and strong locality.

use std::collections::HashSet;
use std::fmt;

use serde_json::{json, Map, Value};

use crate::constraints::is_locally_irreducible;
use crate::discrimination::{search_protocol_with, Verdict};
use crate::error::{Error, Result};
use crate::format::{pvm_to_json, state_set_to_json};
use crate::measurement::{enumerate_op_pvms_with, measure, EnumerationConfig, Projector, Pvm};
use crate::state::{classify_completeness, flatten, Bipartition, CompletenessTag, StateSet};

/// Cap on distinct sets visited by the activation search.
pub const MAX_REACHABLE_SETS: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActivationStep {
    pub party: usize,
    pub pvm: Pvm,
    pub outcome: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TerminalProperty {
    LocallyIrreducible,
    IndistinguishableProjective,
}

impl TerminalProperty {
    pub fn as_str(self) -> &'static str {
        match self {
            TerminalProperty::LocallyIrreducible => "LOCALLY_IRREDUCIBLE",
            TerminalProperty::IndistinguishableProjective => "INDISTINGUISHABLE_PROJECTIVE",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActivationWitness {
    /// Each step measures `{P, I − P}` and keeps outcome 0.
    pub steps: Vec<ActivationStep>,
    pub terminal: StateSet,
    pub terminal_property: TerminalProperty,
    /// Every nonempty outcome of the last step also ends in an activated set.
    pub deterministic: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NotActivableReason {
    /// Every reachable set is a subset of a complete basis.
    Closure,
    /// The reachable sets were all visited without finding a terminal.
    Exhausted,
}

impl NotActivableReason {
    pub fn as_str(self) -> &'static str {
        match self {
            NotActivableReason::Closure => "CLOSURE",
            NotActivableReason::Exhausted => "EXHAUSTED",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Activability {
    NotActivable(NotActivableReason),
    Activable(ActivationWitness),
    Unknown,
    /// The input is not known to be distinguishable; carries the
    /// discrimination verdict.
    NotApplicable(Verdict),
}

impl Activability {
    pub fn label(&self) -> &'static str {
        match self {
            Activability::NotActivable(_) => "NOT_ACTIVABLE",
            Activability::Activable(_) => "ACTIVABLE",
            Activability::Unknown => "UNKNOWN",
            Activability::NotApplicable(_) => "NOT_APPLICABLE",
        }
    }

    pub fn witness(&self) -> Option<&ActivationWitness> {
        match self {
            Activability::Activable(w) => Some(w),
            _ => None,
        }
    }
}

impl fmt::Display for Activability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

struct Frontier {
    set: StateSet,
    steps: Vec<ActivationStep>,
}

fn binary(pvm: &Pvm, k: usize) -> Pvm {
    let p: Projector = pvm.elements()[k].clone();
    Pvm::completed(pvm.party(), pvm.dim(), vec![p])
        .expect("a projector and its complement form a PVM")
}

fn activated(
    s: &StateSet,
    max_depth: usize,
    config: &EnumerationConfig,
) -> Result<Option<TerminalProperty>> {
    if s.len() < 2 {
        return Ok(None);
    }
    if is_locally_irreducible(s)?.irreducible {
        return Ok(Some(TerminalProperty::LocallyIrreducible));
    }
    let v = search_protocol_with(s, max_depth, config)?;
    Ok(
        (v.verdict == Verdict::IndistinguishableProjective && v.exhaustive)
            .then_some(TerminalProperty::IndistinguishableProjective),
    )
}

pub fn is_activable(s: &StateSet, max_depth: usize) -> Result<Activability> {
    is_activable_with(s, max_depth, &EnumerationConfig::default())
}

/// Breadth-first search over single outcome branches of orthogonality-
/// preserving measurements for a reachable set of at least two states that
/// is locally irreducible or not distinguishable by projective LPCC. Within
/// a layer every set is first tested for irreducibility, and only then is
/// the (costlier) protocol search run.
pub fn is_activable_with(
    s: &StateSet,
    max_depth: usize,
    config: &EnumerationConfig,
) -> Result<Activability> {
    let v = search_protocol_with(s, max_depth, config)?;
    if v.verdict != Verdict::Distinguishable {
        return Ok(Activability::NotApplicable(v.verdict));
    }
    let class = classify_completeness(s)?;
    if matches!(
        class.tag,
        CompletenessTag::Complete | CompletenessTag::SubspaceComplete
    ) {
        return Ok(Activability::NotActivable(NotActivableReason::Closure));
    }

    let mut visited: HashSet<String> = HashSet::from([s.canonical_key()]);
    let mut complete = true;
    let mut frontier = vec![Frontier {
        set: s.clone(),
        steps: Vec::new(),
    }];
    for _ in 0..max_depth {
        let mut layer: Vec<Frontier> = Vec::new();
        for node in &frontier {
            let key = node.set.canonical_key();
            for party in 0..node.set.num_parties() {
                let e = enumerate_op_pvms_with(&node.set, party, config)?;
                complete &= e.complete;
                for pvm in &e.pvms {
                    for o in measure(&node.set, pvm)? {
                        if o.survivors.len() < 2 {
                            continue;
                        }
                        let child_key = o.survivors.canonical_key();
                        if child_key == key || visited.contains(&child_key) {
                            continue;
                        }
                        if visited.len() >= MAX_REACHABLE_SETS {
                            complete = false;
                            continue;
                        }
                        visited.insert(child_key);
                        let mut steps = node.steps.clone();
                        steps.push(ActivationStep {
                            party,
                            pvm: binary(pvm, o.element_index),
                            outcome: 0,
                        });
                        layer.push(Frontier {
                            set: o.survivors,
                            steps,
                        });
                    }
                }
            }
        }
        if layer.is_empty() {
            return Ok(if complete {
                Activability::NotActivable(NotActivableReason::Exhausted)
            } else {
                Activability::Unknown
            });
        }
        for pass in [
            TerminalProperty::LocallyIrreducible,
            TerminalProperty::IndistinguishableProjective,
        ] {
            for f in &layer {
                let found = match pass {
                    TerminalProperty::LocallyIrreducible => {
                        is_locally_irreducible(&f.set)?.irreducible.then_some(pass)
                    }
                    TerminalProperty::IndistinguishableProjective => {
                        activated(&f.set, max_depth, config)?
                    }
                };
                if let Some(terminal_property) = found {
                    return Ok(Activability::Activable(finish(
                        s,
                        f,
                        terminal_property,
                        max_depth,
                        config,
                    )?));
                }
            }
        }
        frontier = layer;
    }
    Ok(Activability::Unknown)
}

fn finish(
    s: &StateSet,
    f: &Frontier,
    terminal_property: TerminalProperty,
    max_depth: usize,
    config: &EnumerationConfig,
) -> Result<ActivationWitness> {
    let last = f.steps.last().expect("a witness has at least one step");
    let parent = f.steps[..f.steps.len() - 1]
        .iter()
        .try_fold(s.clone(), |acc, st| {
            measure(&acc, &st.pvm).map(|o| o[st.outcome].survivors.clone())
        })?;
    let mut deterministic = true;
    for o in measure(&parent, &last.pvm)? {
        if o.survivors.is_empty() {
            continue;
        }
        if activated(&o.survivors, max_depth, config)?.is_none() {
            deterministic = false;
            break;
        }
    }
    Ok(ActivationWitness {
        steps: f.steps.clone(),
        terminal: f.set.clone(),
        terminal_property,
        deterministic,
    })
}

/// Replays the witness from `s`, checking that each step preserves
/// orthogonality, that the final set equals the recorded terminal byte for
/// byte and that the terminal property holds when recomputed.
pub fn replay_witness(s: &StateSet, w: &ActivationWitness, max_depth: usize) -> Result<bool> {
    let mut cur = s.clone();
    for step in &w.steps {
        if step.pvm.party() != step.party || step.outcome >= step.pvm.len() {
            return Ok(false);
        }
        let outcomes = measure(&cur, &step.pvm)?;
        if !outcomes
            .iter()
            .all(|o| crate::state::is_orthogonal_set(&o.survivors).orthogonal)
        {
            return Ok(false);
        }
        cur = outcomes[step.outcome].survivors.clone();
    }
    if crate::format::serialize_state_set(&cur) != crate::format::serialize_state_set(&w.terminal) {
        return Ok(false);
    }
    let holds = match w.terminal_property {
        TerminalProperty::LocallyIrreducible => is_locally_irreducible(&cur)?.irreducible,
        TerminalProperty::IndistinguishableProjective => {
            let v = search_protocol_with(&cur, max_depth, &EnumerationConfig::default())?;
            v.verdict == Verdict::IndistinguishableProjective
        }
    };
    Ok(holds && cur.len() >= 2)
}

pub fn witness_to_json(w: &ActivationWitness) -> Value {
    let steps: Vec<Value> = w
        .steps
        .iter()
        .map(|st| {
            json!({
                "party": st.party + 1,
                "pvm": pvm_to_json(&st.pvm),
                "outcome": st.outcome,
            })
        })
        .collect();
    let mut o = Map::new();
    o.insert("steps".into(), Value::Array(steps));
    o.insert("terminal".into(), state_set_to_json(&w.terminal));
    o.insert(
        "terminal_property".into(),
        json!(w.terminal_property.as_str()),
    );
    o.insert("deterministic".into(), json!(w.deterministic));
    Value::Object(o)
}

// ---------------------------------------------------------------------------
// Strong locality

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StrongLocality {
    StronglyLocal,
    NotStronglyLocal,
    Unknown,
}

impl StrongLocality {
    pub fn as_str(self) -> &'static str {
        match self {
            StrongLocality::StronglyLocal => "STRONGLY_LOCAL",
            StrongLocality::NotStronglyLocal => "NOT_STRONGLY_LOCAL",
            StrongLocality::Unknown => "UNKNOWN",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongLocalityReport {
    pub bipartition_verdicts: Vec<(Bipartition, Activability)>,
    pub verdict: StrongLocality,
    /// Set when the input has fewer than three parties or a party of
    /// dimension below three.
    pub regime_note: Option<String>,
}

pub fn is_strongly_local(s: &StateSet, max_depth: usize) -> Result<StrongLocalityReport> {
    is_strongly_local_with(s, max_depth, &EnumerationConfig::default())
}

pub fn is_strongly_local_with(
    s: &StateSet,
    max_depth: usize,
    config: &EnumerationConfig,
) -> Result<StrongLocalityReport> {
    let n = s.num_parties();
    if n < 2 {
        return Err(Error::InvalidBipartition(
            "strong locality needs at least two parties".into(),
        ));
    }
    strong_locality_over(s, &Bipartition::all(n), max_depth, config)
}

/// As [`is_strongly_local_with`], restricted to the given bipartitions.
pub fn strong_locality_over(
    s: &StateSet,
    bipartitions: &[Bipartition],
    max_depth: usize,
    config: &EnumerationConfig,
) -> Result<StrongLocalityReport> {
    let n = s.num_parties();
    let mut verdicts = Vec::new();
    for b in bipartitions {
        let flat = if n == 2 { s.clone() } else { flatten(s, b)? };
        verdicts.push((b.clone(), is_activable_with(&flat, max_depth, config)?));
    }
    let verdict = if verdicts
        .iter()
        .any(|(_, v)| matches!(v, Activability::Activable(_)))
    {
        StrongLocality::NotStronglyLocal
    } else if verdicts
        .iter()
        .all(|(_, v)| matches!(v, Activability::NotActivable(_)))
    {
        StrongLocality::StronglyLocal
    } else {
        StrongLocality::Unknown
    };
    let mut notes = Vec::new();
    if n < 3 {
        notes.push("fewer than three parties".to_string());
    }
    let small: Vec<String> = s
        .dims()
        .iter()
        .enumerate()
        .filter(|(_, &d)| d < 3)
        .map(|(p, d)| format!("party {} has dimension {d}", p + 1))
        .collect();
    notes.extend(small);
    let regime_note = (!notes.is_empty())
        .then(|| format!("outside the n >= 3, d_i >= 3 regime: {}", notes.join("; ")));
    Ok(StrongLocalityReport {
        bipartition_verdicts: verdicts,
        verdict,
        regime_note,
    })
}
