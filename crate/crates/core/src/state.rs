//! Product states, state sets and their structural classifications.
//!
//! All vectors are stored unnormalized; every predicate in this module is
//! invariant under rescaling any factor by a nonzero scalar.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{self, Field};
use crate::scalar::{Rational, Scalar};

/// One party's factor of a product state.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalVector {
    pub party: usize,
    pub coords: Vec<Scalar>,
}

impl LocalVector {
    pub fn new(party: usize, coords: Vec<Scalar>) -> Self {
        Self { party, coords }
    }

    pub fn from_ints(party: usize, coords: &[i64]) -> Self {
        Self::new(party, coords.iter().map(|&x| Scalar::from_int(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        linalg::is_zero_vector(&self.coords)
    }

    /// Standard-basis indices with a nonzero coordinate.
    pub fn support(&self) -> BTreeSet<usize> {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect()
    }
}

/// `⟨u|v⟩` for two factors on the same party.
pub fn inner_product(u: &LocalVector, v: &LocalVector) -> Result<Scalar> {
    if u.party != v.party {
        return Err(Error::Dimension(format!(
            "vectors on parties {} and {}",
            u.party + 1,
            v.party + 1
        )));
    }
    if u.dim() != v.dim() {
        return Err(Error::Dimension(format!(
            "vector lengths {} and {}",
            u.dim(),
            v.dim()
        )));
    }
    Ok(linalg::inner(&u.coords, &v.coords))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProductState {
    pub label: String,
    pub factors: Vec<LocalVector>,
}

impl ProductState {
    pub fn new(label: impl Into<String>, factors: Vec<LocalVector>) -> Self {
        Self {
            label: label.into(),
            factors,
        }
    }

    pub fn factor(&self, party: usize) -> &[Scalar] {
        &self.factors[party].coords
    }

    /// Proportional as product vectors. For nonzero product vectors this is
    /// equivalent to every factor being proportional.
    pub fn proportional_to(&self, other: &ProductState) -> bool {
        self.factors.len() == other.factors.len()
            && self
                .factors
                .iter()
                .zip(&other.factors)
                .all(|(a, b)| linalg::proportional(&a.coords, &b.coords))
    }
}

/// A finite labeled set of product states on `H_1 ⊗ … ⊗ H_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateSet {
    dims: Vec<usize>,
    states: Vec<ProductState>,
    /// Declared factorizations `d = d1·d2` of individual parties.
    splits: BTreeMap<usize, (usize, usize)>,
    note: Option<String>,
}

impl StateSet {
    pub fn new(dims: Vec<usize>, states: Vec<ProductState>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Dimension("at least one party is required".into()));
        }
        if let Some(p) = dims.iter().position(|&d| d == 0) {
            return Err(Error::Dimension(format!("party {} has dimension 0", p + 1)));
        }
        let mut seen = HashSet::new();
        for s in &states {
            if !seen.insert(s.label.clone()) {
                return Err(Error::DuplicateLabel(s.label.clone()));
            }
            if s.factors.len() != dims.len() {
                return Err(Error::Dimension(format!(
                    "state {:?} has {} factors, expected {}",
                    s.label,
                    s.factors.len(),
                    dims.len()
                )));
            }
            for (p, f) in s.factors.iter().enumerate() {
                if f.party != p {
                    return Err(Error::Dimension(format!(
                        "state {:?}: factor {} is tagged with party {}",
                        s.label,
                        p + 1,
                        f.party + 1
                    )));
                }
                if f.dim() != dims[p] {
                    return Err(Error::Dimension(format!(
                        "state {:?}: party {} vector has length {}, expected {}",
                        s.label,
                        p + 1,
                        f.dim(),
                        dims[p]
                    )));
                }
                if f.is_zero() {
                    return Err(Error::Dimension(format!(
                        "state {:?}: party {} vector is zero",
                        s.label,
                        p + 1
                    )));
                }
            }
        }
        Ok(Self {
            dims,
            states,
            splits: BTreeMap::new(),
            note: None,
        })
    }

    /// Convenience constructor from integer coordinates.
    pub fn from_ints(dims: &[usize], states: &[(&str, Vec<Vec<i64>>)]) -> Result<Self> {
        let states = states
            .iter()
            .map(|(label, factors)| {
                ProductState::new(
                    *label,
                    factors
                        .iter()
                        .enumerate()
                        .map(|(p, c)| LocalVector::from_ints(p, c))
                        .collect(),
                )
            })
            .collect();
        Self::new(dims.to_vec(), states)
    }

    pub fn with_split(mut self, party: usize, split: (usize, usize)) -> Result<Self> {
        let d = *self.dims.get(party).ok_or(Error::InvalidParty(party + 1))?;
        if split.0 * split.1 != d {
            return Err(Error::InvalidSplit(format!(
                "{}x{} does not factor party {} of dimension {}",
                split.0,
                split.1,
                party + 1,
                d
            )));
        }
        self.splits.insert(party, split);
        Ok(self)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn states(&self) -> &[ProductState] {
        &self.states
    }

    pub fn splits(&self) -> &BTreeMap<usize, (usize, usize)> {
        &self.splits
    }

    pub fn split(&self, party: usize) -> Option<(usize, usize)> {
        self.splits.get(&party).copied()
    }

    pub fn note(&self) -> Option<&str> {
        self.note.as_deref()
    }

    pub fn num_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.states.iter().map(|s| s.label.clone()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn check_party(&self, party: usize) -> Result<()> {
        if party < self.dims.len() {
            Ok(())
        } else {
            Err(Error::InvalidParty(party + 1))
        }
    }

    /// `⟨ψ_i|ψ_j⟩`, the product of the per-party overlaps.
    pub fn overlap(&self, i: usize, j: usize) -> Scalar {
        let mut acc = Scalar::one();
        for p in 0..self.num_parties() {
            let o = linalg::inner(self.states[i].factor(p), self.states[j].factor(p));
            if o.is_zero() {
                return o;
            }
            acc = &acc * &o;
        }
        acc
    }

    /// Product of the overlaps on every party except `party`.
    pub fn bystander_overlap(&self, i: usize, j: usize, party: usize) -> Scalar {
        let mut acc = Scalar::one();
        for p in (0..self.num_parties()).filter(|&p| p != party) {
            let o = linalg::inner(self.states[i].factor(p), self.states[j].factor(p));
            if o.is_zero() {
                return o;
            }
            acc = &acc * &o;
        }
        acc
    }

    /// Same party dimensions and metadata, different members.
    pub fn with_states(&self, states: Vec<ProductState>) -> Self {
        Self {
            dims: self.dims.clone(),
            states,
            splits: self.splits.clone(),
            note: None,
        }
    }

    pub fn subset(&self, labels: &[&str]) -> Self {
        self.with_states(
            self.states
                .iter()
                .filter(|s| labels.contains(&s.label.as_str()))
                .cloned()
                .collect(),
        )
    }

    pub fn without(&self, label: &str) -> Self {
        self.with_states(
            self.states
                .iter()
                .filter(|s| s.label != label)
                .cloned()
                .collect(),
        )
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.states.iter().position(|s| s.label == label)
    }

    /// Rank of the stacked factor vectors on each party.
    pub fn local_span_dims(&self) -> Vec<usize> {
        (0..self.num_parties())
            .map(|p| {
                let rows: Vec<Vec<Scalar>> =
                    self.states.iter().map(|s| s.factor(p).to_vec()).collect();
                linalg::rank(&rows)
            })
            .collect()
    }

    /// Key identifying the set up to rescaling of factors: labels sorted, each
    /// factor replaced by its canonical direction.
    pub fn canonical_key(&self) -> String {
        let mut parts: Vec<String> = self
            .states
            .iter()
            .map(|s| {
                let mut out = s.label.clone();
                for f in &s.factors {
                    out.push('|');
                    let c = linalg::canonical_direction(&f.coords);
                    let coords: Vec<String> = c.iter().map(Scalar::to_string).collect();
                    out.push_str(&coords.join(","));
                }
                out
            })
            .collect();
        parts.sort();
        format!("{:?}#{}", self.dims, parts.join(";"))
    }

    /// Drops, per party, every standard-basis coordinate on which no member
    /// has support. Inner products are unchanged. Returns the kept indices.
    pub fn restrict_to_support(&self) -> (StateSet, Vec<Vec<usize>>) {
        let kept: Vec<Vec<usize>> = (0..self.num_parties())
            .map(|p| {
                let mut idx = BTreeSet::new();
                for s in &self.states {
                    idx.extend(s.factors[p].support());
                }
                idx.into_iter().collect()
            })
            .collect();
        let dims = kept.iter().map(|k| k.len().max(1)).collect();
        let states = self
            .states
            .iter()
            .map(|s| {
                ProductState::new(
                    s.label.clone(),
                    s.factors
                        .iter()
                        .enumerate()
                        .map(|(p, f)| {
                            LocalVector::new(
                                p,
                                kept[p].iter().map(|&i| f.coords[i].clone()).collect(),
                            )
                        })
                        .collect(),
                )
            })
            .collect();
        let set = StateSet {
            dims,
            states,
            splits: BTreeMap::new(),
            note: None,
        };
        (set, kept)
    }
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalityReport {
    pub orthogonal: bool,
    /// First pair `(i, j)`, `i < j`, with nonzero overlap.
    pub violation: Option<(usize, usize)>,
}

pub fn is_orthogonal_set(s: &StateSet) -> OrthogonalityReport {
    for i in 0..s.len() {
        for j in (i + 1)..s.len() {
            if !s.overlap(i, j).is_zero() {
                return OrthogonalityReport {
                    orthogonal: false,
                    violation: Some((i, j)),
                };
            }
        }
    }
    OrthogonalityReport {
        orthogonal: true,
        violation: None,
    }
}

pub(crate) fn require_orthogonal(s: &StateSet) -> Result<()> {
    match is_orthogonal_set(s).violation {
        None => Ok(()),
        Some((i, j)) => Err(Error::NotOrthogonal(
            s.states()[i].label.clone(),
            s.states()[j].label.clone(),
        )),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CompletenessTag {
    Complete,
    SubspaceComplete,
    IncompleteNonSubspace,
}

impl CompletenessTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CompletenessTag::Complete => "COMPLETE",
            CompletenessTag::SubspaceComplete => "SUBSPACE_COMPLETE",
            CompletenessTag::IncompleteNonSubspace => "INCOMPLETE_NON_SUBSPACE",
        }
    }
}

impl fmt::Display for CompletenessTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletenessClass {
    pub tag: CompletenessTag,
    pub local_span_dims: Vec<usize>,
}

impl CompletenessClass {
    pub fn is_closed_under_projection(&self) -> bool {
        self.tag != CompletenessTag::IncompleteNonSubspace
    }
}

pub fn classify_completeness(s: &StateSet) -> Result<CompletenessClass> {
    require_orthogonal(s)?;
    let spans = s.local_span_dims();
    let n = s.len();
    let tag = if n == s.total_dim() {
        CompletenessTag::Complete
    } else if n == spans.iter().product::<usize>() {
        CompletenessTag::SubspaceComplete
    } else {
        CompletenessTag::IncompleteNonSubspace
    };
    Ok(CompletenessClass {
        tag,
        local_span_dims: spans,
    })
}

/// Whether one of the two subsystems of `party` (factored as `split.0 ×
/// split.1`, first index major) can be discarded with every pair of states
/// staying orthogonal. Discarding is a partial trace; two reduced states are
/// orthogonal iff `Tr(ρ_i ρ_j) = 0`.
pub fn has_local_redundancy(s: &StateSet, party: usize, split: (usize, usize)) -> Result<bool> {
    s.check_party(party)?;
    let d = s.dims()[party];
    let (d1, d2) = split;
    if d1 < 2 || d2 < 2 || d1 * d2 != d {
        return Err(Error::InvalidSplit(format!(
            "{d1}x{d2} is not a nontrivial factorization of party {} (dimension {d})",
            party + 1
        )));
    }
    let keep_second = reduced_orthogonal(s, party, d1, d2, true);
    let keep_first = reduced_orthogonal(s, party, d1, d2, false);
    Ok(keep_second || keep_first)
}

/// All pairs stay orthogonal after tracing out the first (`discard_first`)
/// or second subsystem of `party`.
fn reduced_orthogonal(
    s: &StateSet,
    party: usize,
    d1: usize,
    d2: usize,
    discard_first: bool,
) -> bool {
    let entry = |v: &[Scalar], a: usize, b: usize| v[a * d2 + b].clone();
    for i in 0..s.len() {
        for j in (i + 1)..s.len() {
            if s.bystander_overlap(i, j, party).is_zero() {
                continue;
            }
            let u = s.states()[i].factor(party);
            let v = s.states()[j].factor(party);
            // Tr(σ_i σ_j) = Σ_{m,m'} |⟨row_m(u)|row_m'(v)⟩|² where rows run over
            // the discarded index.
            let (outer, inner_dim) = if discard_first { (d1, d2) } else { (d2, d1) };
            let slice = |w: &[Scalar], m: usize| -> Vec<Scalar> {
                (0..inner_dim)
                    .map(|k| {
                        if discard_first {
                            entry(w, m, k)
                        } else {
                            entry(w, k, m)
                        }
                    })
                    .collect()
            };
            let mut total = <Rational as Zero>::zero();
            for m in 0..outer {
                let um = slice(u, m);
                for m2 in 0..outer {
                    let vm = slice(v, m2);
                    total += linalg::inner(&um, &vm).norm_sqr();
                }
            }
            if !Field::is_zero(&total) {
                return false;
            }
        }
    }
    true
}

/// A split of the parties into two nonempty groups.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bipartition {
    pub group_a: BTreeSet<usize>,
    pub group_b: BTreeSet<usize>,
}

impl Bipartition {
    pub fn new(group_a: BTreeSet<usize>, group_b: BTreeSet<usize>, parties: usize) -> Result<Self> {
        if group_a.is_empty() || group_b.is_empty() {
            return Err(Error::InvalidBipartition(
                "both groups must be nonempty".into(),
            ));
        }
        if !group_a.is_disjoint(&group_b) {
            return Err(Error::InvalidBipartition("groups overlap".into()));
        }
        let all: BTreeSet<usize> = group_a.union(&group_b).copied().collect();
        if all != (0..parties).collect() {
            return Err(Error::InvalidBipartition(format!(
                "groups must cover parties 1..={parties} exactly"
            )));
        }
        Ok(Self { group_a, group_b })
    }

    /// Parses `"1|23"` or `"1,2|3"` (parties numbered from 1).
    pub fn parse(text: &str, parties: usize) -> Result<Self> {
        let (a, b) = text
            .split_once('|')
            .ok_or_else(|| Error::InvalidBipartition(format!("missing '|' in {text:?}")))?;
        let group = |g: &str| -> Result<BTreeSet<usize>> {
            let tokens: Vec<String> = if g.contains(',') {
                g.split(',').map(|t| t.trim().to_string()).collect()
            } else {
                g.trim().chars().map(|c| c.to_string()).collect()
            };
            tokens
                .iter()
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .ok()
                        .filter(|&p| p >= 1)
                        .map(|p| p - 1)
                        .ok_or_else(|| Error::InvalidBipartition(format!("bad party {t:?}")))
                })
                .collect()
        };
        Self::new(group(a)?, group(b)?, parties)
    }

    /// Every bipartition of `parties` parties, each listed once, with party 1
    /// always in the first group.
    pub fn all(parties: usize) -> Vec<Bipartition> {
        let mut out = Vec::new();
        if parties < 2 {
            return out;
        }
        let rest = parties - 1;
        for mask in 0..(1usize << rest) {
            let mut a = BTreeSet::from([0]);
            for k in 0..rest {
                if mask & (1 << k) != 0 {
                    a.insert(k + 1);
                }
            }
            if a.len() == parties {
                continue;
            }
            let b = (0..parties).filter(|p| !a.contains(p)).collect();
            out.push(Bipartition {
                group_a: a,
                group_b: b,
            });
        }
        out.sort_by_key(|b| {
            (
                b.group_a.len(),
                b.group_a.iter().copied().collect::<Vec<_>>(),
            )
        });
        out
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.group_a.iter().chain(&self.group_b).any(|&p| p >= 9) {
            ","
        } else {
            ""
        };
        let g = |s: &BTreeSet<usize>| {
            s.iter()
                .map(|p| (p + 1).to_string())
                .collect::<Vec<_>>()
                .join(sep)
        };
        write!(f, "{}|{}", g(&self.group_a), g(&self.group_b))
    }
}

fn kron_group(state: &ProductState, group: &BTreeSet<usize>) -> Vec<Scalar> {
    let mut acc = vec![Scalar::one()];
    for &p in group {
        acc = linalg::kron(&acc, state.factor(p));
    }
    acc
}

/// The two-party view of `s` across `b`: factors within each group are
/// combined by Kronecker product in increasing party order.
pub fn flatten(s: &StateSet, b: &Bipartition) -> Result<StateSet> {
    let b = Bipartition::new(b.group_a.clone(), b.group_b.clone(), s.num_parties())?;
    let dim = |g: &BTreeSet<usize>| g.iter().map(|&p| s.dims()[p]).product::<usize>();
    let dims = vec![dim(&b.group_a), dim(&b.group_b)];
    let states = s
        .states()
        .iter()
        .map(|st| {
            ProductState::new(
                st.label.clone(),
                vec![
                    LocalVector::new(0, kron_group(st, &b.group_a)),
                    LocalVector::new(1, kron_group(st, &b.group_b)),
                ],
            )
        })
        .collect();
    StateSet::new(dims, states)
}
