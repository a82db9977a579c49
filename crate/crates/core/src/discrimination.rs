//! Projective LPCC discrimination protocols and unextendibility.

use std::collections::HashMap;
use std::fmt;

use serde_json::{json, Map, Value};

use crate::constraints::is_locally_irreducible;
use crate::error::{Error, Result};
use crate::format::{pvm_to_json, state_set_to_json, vector_to_json};
use crate::linalg;
use crate::measurement::{enumerate_op_pvms_with, measure, EnumerationConfig, Pvm};
use crate::scalar::Scalar;
use crate::state::{require_orthogonal, LocalVector, ProductState, StateSet};

pub const DEFAULT_MAX_DEPTH: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeAction {
    /// Exactly one candidate remains.
    Identified(String),
    /// No candidates to tell apart.
    Empty,
    /// The search gave up at this node.
    Fail,
    /// Measure `pvm`; one child per element with nonempty survivors, keyed
    /// by element index.
    Measure {
        party: usize,
        pvm: Pvm,
        children: Vec<(usize, ProtocolNode)>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProtocolNode {
    pub candidates: StateSet,
    pub action: NodeAction,
}

impl ProtocolNode {
    fn leaf(candidates: StateSet, action: NodeAction) -> Self {
        Self { candidates, action }
    }

    /// Number of measurement rounds on the longest path.
    pub fn depth(&self) -> usize {
        match &self.action {
            NodeAction::Measure { children, .. } => {
                1 + children.iter().map(|(_, c)| c.depth()).max().unwrap_or(0)
            }
            _ => 0,
        }
    }

    /// Every leaf identifies a single candidate (or the set was empty).
    pub fn is_distinguishing(&self) -> bool {
        match &self.action {
            NodeAction::Identified(_) | NodeAction::Empty => true,
            NodeAction::Fail => false,
            NodeAction::Measure { children, .. } => {
                children.iter().all(|(_, c)| c.is_distinguishing())
            }
        }
    }

    /// Calls `f` on every node, parents before children.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a ProtocolNode)) {
        f(self);
        if let NodeAction::Measure { children, .. } = &self.action {
            for (_, c) in children {
                c.visit(f);
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Distinguishable,
    IndistinguishableProjective,
    UnknownDepthExceeded,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Distinguishable => "DISTINGUISHABLE",
            Verdict::IndistinguishableProjective => "INDISTINGUISHABLE_PROJECTIVE",
            Verdict::UnknownDepthExceeded => "UNKNOWN_DEPTH_EXCEEDED",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinguishabilityVerdict {
    pub verdict: Verdict,
    pub tree: ProtocolNode,
    pub depth_used: usize,
    /// For a negative verdict, a reachable candidate set on which no
    /// orthogonality-preserving measurement makes progress.
    pub blocking: Option<StateSet>,
    /// For a negative verdict: false when some measurement enumeration along
    /// the way was not known to be complete, so the verdict covers only the
    /// measurements that were tried.
    pub exhaustive: bool,
}

#[derive(Clone, Debug)]
enum Outcome {
    Solved(ProtocolNode),
    Failed {
        blocking: StateSet,
        exhaustive: bool,
    },
    Unknown,
}

struct Search<'a> {
    config: &'a EnumerationConfig,
    /// Failures are depth-independent; unknowns record the depth tried.
    failed: HashMap<String, (StateSet, bool)>,
    unknown: HashMap<String, usize>,
    solved: HashMap<String, ProtocolNode>,
}

impl Search<'_> {
    fn solve(&mut self, s: &StateSet, depth: usize) -> Result<Outcome> {
        match s.len() {
            0 => {
                return Ok(Outcome::Solved(ProtocolNode::leaf(
                    s.clone(),
                    NodeAction::Empty,
                )))
            }
            1 => {
                let label = s.states()[0].label.clone();
                return Ok(Outcome::Solved(ProtocolNode::leaf(
                    s.clone(),
                    NodeAction::Identified(label),
                )));
            }
            _ => {}
        }
        let key = s.canonical_key();
        if let Some(node) = self.solved.get(&key) {
            if node.depth() <= depth {
                let node = node.clone();
                return Ok(Outcome::Solved(replay_strategy(&node, s)?));
            }
        }
        if let Some((blocking, exhaustive)) = self.failed.get(&key) {
            return Ok(Outcome::Failed {
                blocking: blocking.clone(),
                exhaustive: *exhaustive,
            });
        }
        if self.unknown.get(&key).is_some_and(|&d| d >= depth) {
            return Ok(Outcome::Unknown);
        }
        let out = self.explore(s, &key, depth)?;
        match &out {
            Outcome::Solved(node) => {
                self.solved.insert(key, node.clone());
            }
            Outcome::Failed {
                blocking,
                exhaustive,
            } => {
                self.failed.insert(key, (blocking.clone(), *exhaustive));
            }
            Outcome::Unknown => {
                self.unknown.insert(key, depth);
            }
        }
        Ok(out)
    }

    fn explore(&mut self, s: &StateSet, key: &str, depth: usize) -> Result<Outcome> {
        let mut any_progress = false;
        let mut all_complete = true;
        let mut hit_depth = false;
        let mut first_failure: Option<(StateSet, bool)> = None;
        let mut children_exhaustive = true;
        for party in 0..s.num_parties() {
            let e = enumerate_op_pvms_with(s, party, self.config)?;
            all_complete &= e.complete;
            for pvm in e.pvms {
                let outcomes = measure(s, &pvm)?;
                let live: Vec<_> = outcomes
                    .into_iter()
                    .filter(|o| !o.survivors.is_empty())
                    .collect();
                if live.iter().all(|o| o.survivors.canonical_key() == key) {
                    continue;
                }
                any_progress = true;
                if depth == 0 {
                    hit_depth = true;
                    break;
                }
                let mut children = Vec::with_capacity(live.len());
                let mut ok = true;
                for o in live {
                    match self.solve(&o.survivors, depth - 1)? {
                        Outcome::Solved(node) => children.push((o.element_index, node)),
                        Outcome::Failed {
                            blocking,
                            exhaustive,
                        } => {
                            children_exhaustive &= exhaustive;
                            if first_failure.is_none() {
                                first_failure = Some((blocking, exhaustive));
                            }
                            ok = false;
                            break;
                        }
                        Outcome::Unknown => {
                            hit_depth = true;
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    return Ok(Outcome::Solved(ProtocolNode::leaf(
                        s.clone(),
                        NodeAction::Measure {
                            party,
                            pvm,
                            children,
                        },
                    )));
                }
            }
            if hit_depth && depth == 0 {
                break;
            }
        }
        if hit_depth {
            return Ok(Outcome::Unknown);
        }
        if !any_progress {
            let exhaustive = all_complete || is_locally_irreducible(s)?.irreducible;
            return Ok(Outcome::Failed {
                blocking: s.clone(),
                exhaustive,
            });
        }
        let (blocking, _) = first_failure.expect("progress without success records a failure");
        Ok(Outcome::Failed {
            blocking,
            exhaustive: all_complete && children_exhaustive,
        })
    }
}

/// Re-applies the measurements of `node` to `s`, which must have the same
/// canonical key as `node.candidates`.
fn replay_strategy(node: &ProtocolNode, s: &StateSet) -> Result<ProtocolNode> {
    let action = match &node.action {
        NodeAction::Measure {
            party,
            pvm,
            children,
        } => {
            let outcomes = measure(s, pvm)?;
            let mut next = Vec::with_capacity(children.len());
            for (k, child) in children {
                next.push((*k, replay_strategy(child, &outcomes[*k].survivors)?));
            }
            NodeAction::Measure {
                party: *party,
                pvm: pvm.clone(),
                children: next,
            }
        }
        NodeAction::Identified(_) => NodeAction::Identified(s.states()[0].label.clone()),
        other => other.clone(),
    };
    Ok(ProtocolNode::leaf(s.clone(), action))
}

pub fn search_protocol(s: &StateSet, max_depth: usize) -> Result<DistinguishabilityVerdict> {
    search_protocol_with(s, max_depth, &EnumerationConfig::default())
}

/// Depth-first search for a protocol of at most `max_depth` measurement
/// rounds. Parties are tried in index order and PVMs finest first; a PVM that
/// leaves every outcome equal to the current set is skipped.
pub fn search_protocol_with(
    s: &StateSet,
    max_depth: usize,
    config: &EnumerationConfig,
) -> Result<DistinguishabilityVerdict> {
    require_orthogonal(s)?;
    let mut search = Search {
        config,
        failed: HashMap::new(),
        unknown: HashMap::new(),
        solved: HashMap::new(),
    };
    Ok(match search.solve(s, max_depth)? {
        Outcome::Solved(tree) => DistinguishabilityVerdict {
            verdict: Verdict::Distinguishable,
            depth_used: tree.depth(),
            tree,
            blocking: None,
            exhaustive: true,
        },
        Outcome::Failed {
            blocking,
            exhaustive,
        } => DistinguishabilityVerdict {
            verdict: Verdict::IndistinguishableProjective,
            tree: ProtocolNode::leaf(s.clone(), NodeAction::Fail),
            depth_used: 0,
            blocking: Some(blocking),
            exhaustive,
        },
        Outcome::Unknown => DistinguishabilityVerdict {
            verdict: Verdict::UnknownDepthExceeded,
            tree: ProtocolNode::leaf(s.clone(), NodeAction::Fail),
            depth_used: max_depth,
            blocking: None,
            exhaustive: false,
        },
    })
}

/// Re-runs every measurement of `tree` starting from `s` and checks that
/// each recorded candidate set is reproduced byte for byte, that every PVM
/// preserves orthogonality at its node and that identified leaves hold one
/// candidate.
pub fn replay_protocol(s: &StateSet, tree: &ProtocolNode) -> Result<bool> {
    fn go(s: &StateSet, node: &ProtocolNode) -> Result<bool> {
        if crate::format::serialize_state_set(s)
            != crate::format::serialize_state_set(&node.candidates)
        {
            return Ok(false);
        }
        match &node.action {
            NodeAction::Identified(label) => Ok(s.len() == 1 && &s.states()[0].label == label),
            NodeAction::Empty => Ok(s.is_empty()),
            NodeAction::Fail => Ok(true),
            NodeAction::Measure {
                party,
                pvm,
                children,
            } => {
                if pvm.party() != *party {
                    return Ok(false);
                }
                let outcomes = measure(s, pvm)?;
                if !outcomes
                    .iter()
                    .all(|o| crate::state::is_orthogonal_set(&o.survivors).orthogonal)
                {
                    return Ok(false);
                }
                let live: Vec<usize> = outcomes
                    .iter()
                    .filter(|o| !o.survivors.is_empty())
                    .map(|o| o.element_index)
                    .collect();
                let recorded: Vec<usize> = children.iter().map(|(k, _)| *k).collect();
                if live != recorded {
                    return Ok(false);
                }
                for (k, child) in children {
                    if !go(&outcomes[*k].survivors, child)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
    go(s, tree)
}

pub fn protocol_to_json(node: &ProtocolNode) -> Value {
    let mut o = Map::new();
    o.insert("candidates".into(), json!(node.candidates.labels()));
    match &node.action {
        NodeAction::Identified(label) => {
            o.insert("type".into(), json!("identified"));
            o.insert("label".into(), json!(label));
        }
        NodeAction::Empty => {
            o.insert("type".into(), json!("empty"));
        }
        NodeAction::Fail => {
            o.insert("type".into(), json!("fail"));
        }
        NodeAction::Measure {
            party,
            pvm,
            children,
        } => {
            o.insert("type".into(), json!("measure"));
            o.insert("party".into(), json!(party + 1));
            o.insert("pvm".into(), pvm_to_json(pvm));
            o.insert(
                "children".into(),
                Value::Array(
                    children
                        .iter()
                        .map(|(k, c)| {
                            let mut m = Map::new();
                            m.insert("outcome".into(), json!(k));
                            m.insert("survivors".into(), state_set_to_json(&c.candidates));
                            m.insert("node".into(), protocol_to_json(c));
                            Value::Object(m)
                        })
                        .collect(),
                ),
            );
        }
    }
    Value::Object(o)
}

// ---------------------------------------------------------------------------
// Unextendibility

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpbVerdict {
    pub upb: bool,
    /// A product state orthogonal to every member, when one exists.
    pub witness: Option<ProductState>,
    /// Party each member was made orthogonal on, for the witness.
    pub assignment: Option<Vec<usize>>,
}

/// A product vector `⊗ w_p` is orthogonal to every member iff each member
/// has some party `p` with `w_p ⟂ a_p`. Such a vector exists iff the members
/// can be split among the parties so that no party's share spans its whole
/// space; the search tries those assignments with backtracking.
pub fn is_upb(s: &StateSet) -> Result<UpbVerdict> {
    require_orthogonal(s)?;
    let n = s.num_parties();
    let mut bases: Vec<Vec<Vec<Scalar>>> = vec![Vec::new(); n];
    let mut assignment = Vec::with_capacity(s.len());

    fn rec(
        s: &StateSet,
        i: usize,
        bases: &mut Vec<Vec<Vec<Scalar>>>,
        assignment: &mut Vec<usize>,
    ) -> bool {
        if i == s.len() {
            return true;
        }
        for p in 0..s.num_parties() {
            let v = s.states()[i].factor(p);
            let r = linalg::remove_components(&bases[p], v);
            let grows = !linalg::is_zero_vector(&r);
            if grows && bases[p].len() + 1 >= s.dims()[p] {
                continue;
            }
            if grows {
                bases[p].push(r);
            }
            assignment.push(p);
            if rec(s, i + 1, bases, assignment) {
                return true;
            }
            assignment.pop();
            if grows {
                bases[p].pop();
            }
        }
        false
    }

    if !rec(s, 0, &mut bases, &mut assignment) {
        return Ok(UpbVerdict {
            upb: true,
            witness: None,
            assignment: None,
        });
    }
    let factors = (0..n)
        .map(|p| {
            let comp = linalg::orthogonal_complement(&bases[p], s.dims()[p]);
            LocalVector::new(p, linalg::canonical_direction(&comp[0]))
        })
        .collect();
    Ok(UpbVerdict {
        upb: false,
        witness: Some(ProductState::new("witness", factors)),
        assignment: Some(assignment),
    })
}

pub fn product_state_to_json(st: &ProductState) -> Value {
    json!({
        "label": st.label,
        "factors": st.factors.iter().map(|f| vector_to_json(&f.coords)).collect::<Vec<_>>(),
    })
}

/// Checks a claimed extension vector: nonzero on every party and orthogonal
/// to every member.
pub fn verify_witness(s: &StateSet, w: &ProductState) -> Result<bool> {
    if w.factors.len() != s.num_parties() {
        return Err(Error::Dimension(
            "witness has the wrong number of factors".into(),
        ));
    }
    if w.factors.iter().any(|f| f.is_zero()) {
        return Ok(false);
    }
    Ok(s.states()
        .iter()
        .all(|st| (0..s.num_parties()).any(|p| linalg::inner(w.factor(p), st.factor(p)).is_zero())))
}
