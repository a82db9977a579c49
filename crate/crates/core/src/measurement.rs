//! Local projective measurements and their action on state sets.

use std::collections::BTreeSet;
use std::fmt;

use crate::constraints::{derive_constraint_space, HermitianSpace};
use crate::error::{Error, Result};
use crate::linalg::{self, Operator};
use crate::poly;
use crate::scalar::Scalar;
use crate::state::{LocalVector, ProductState, StateSet};

/// Orthogonal projector onto the span of `support` on one party.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projector {
    party: usize,
    dim: usize,
    support: Vec<Vec<Scalar>>,
    ortho: Vec<Vec<Scalar>>,
}

impl Projector {
    pub fn new(party: usize, dim: usize, support: Vec<Vec<Scalar>>) -> Result<Self> {
        if let Some(v) = support.iter().find(|v| v.len() != dim) {
            return Err(Error::Dimension(format!(
                "projector support vector of length {}, party dimension {dim}",
                v.len()
            )));
        }
        let ortho = linalg::gram_schmidt(&support);
        if ortho.is_empty() {
            return Err(Error::InvalidMeasurement(
                "projector with empty support".into(),
            ));
        }
        Ok(Self {
            party,
            dim,
            support,
            ortho,
        })
    }

    /// Projector onto the span of the given standard-basis indices.
    pub fn coordinate(party: usize, dim: usize, indices: &[usize]) -> Result<Self> {
        let support = indices
            .iter()
            .map(|&i| {
                if i >= dim {
                    return Err(Error::Dimension(format!(
                        "basis index {i} outside dimension {dim}"
                    )));
                }
                let mut v = vec![Scalar::zero(); dim];
                v[i] = Scalar::one();
                Ok(v)
            })
            .collect::<Result<_>>()?;
        Self::new(party, dim, support)
    }

    pub fn full(party: usize, dim: usize) -> Self {
        Self::coordinate(party, dim, &(0..dim).collect::<Vec<_>>()).expect("valid full projector")
    }

    fn from_orthogonal(party: usize, dim: usize, ortho: Vec<Vec<Scalar>>) -> Self {
        Self {
            party,
            dim,
            support: ortho.clone(),
            ortho,
        }
    }

    pub fn party(&self) -> usize {
        self.party
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.ortho.len()
    }

    pub fn support(&self) -> &[Vec<Scalar>] {
        &self.support
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        linalg::project_onto(&self.ortho, v)
    }

    pub fn matrix(&self) -> Operator {
        Operator::projector_from_orthogonal(self.dim, &self.ortho)
    }

    pub fn is_orthogonal_to(&self, other: &Projector) -> bool {
        self.ortho
            .iter()
            .all(|a| other.ortho.iter().all(|b| linalg::inner(a, b).is_zero()))
    }

    /// Standard-basis indices `i` with `⟨i|P|i⟩ ≠ 0`.
    pub fn standard_support(&self) -> BTreeSet<usize> {
        (0..self.dim)
            .filter(|&i| self.ortho.iter().any(|w| !w[i].is_zero()))
            .collect()
    }

    fn sum(parts: &[&Projector]) -> Projector {
        let ortho = parts.iter().flat_map(|p| p.ortho.iter().cloned()).collect();
        Projector::from_orthogonal(parts[0].party, parts[0].dim, ortho)
    }
}

/// A complete family of mutually orthogonal projectors on one party.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pvm {
    party: usize,
    dim: usize,
    elements: Vec<Projector>,
}

impl Pvm {
    pub fn new(party: usize, dim: usize, elements: Vec<Projector>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidMeasurement(
                "a PVM needs at least one element".into(),
            ));
        }
        for e in &elements {
            if e.party != party || e.dim != dim {
                return Err(Error::InvalidMeasurement(format!(
                    "element on party {} (dimension {}) in a PVM on party {} (dimension {dim})",
                    e.party + 1,
                    e.dim,
                    party + 1
                )));
            }
        }
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate().skip(i + 1) {
                if !a.is_orthogonal_to(b) {
                    return Err(Error::InvalidMeasurement(format!(
                        "elements {i} and {j} are not orthogonal"
                    )));
                }
            }
        }
        let total: usize = elements.iter().map(Projector::rank).sum();
        if total != dim {
            return Err(Error::InvalidMeasurement(format!(
                "element ranks sum to {total}, party dimension is {dim}"
            )));
        }
        Ok(Self {
            party,
            dim,
            elements,
        })
    }

    /// Builds a PVM from some mutually orthogonal projectors, appending the
    /// projector onto the remaining complement when they do not sum to `I`.
    pub fn completed(party: usize, dim: usize, mut elements: Vec<Projector>) -> Result<Self> {
        let used: Vec<Vec<Scalar>> = elements
            .iter()
            .flat_map(|e| e.ortho.iter().cloned())
            .collect();
        if used.len() < dim {
            let rest = linalg::gram_schmidt(&linalg::orthogonal_complement(&used, dim));
            elements.push(Projector::from_orthogonal(party, dim, rest));
        }
        Self::new(party, dim, elements)
    }

    pub fn party(&self) -> usize {
        self.party
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[Projector] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Some element is neither `0` nor `I`.
    pub fn is_nontrivial(&self) -> bool {
        self.elements
            .iter()
            .any(|e| e.rank() > 0 && e.rank() < self.dim)
    }

    pub fn matrices(&self) -> Vec<Operator> {
        self.elements.iter().map(Projector::matrix).collect()
    }
}

impl fmt::Display for Pvm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "party {}: {{", self.party + 1)?;
        for (k, e) in self.elements.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "P[")?;
            for (j, v) in e.support.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                let c: Vec<String> = v.iter().map(Scalar::to_string).collect();
                write!(f, "({})", c.join(","))?;
            }
            write!(f, "]")?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Closure {
    /// Every survivor is proportional to a member of the input set.
    Subset,
    NewDirections,
}

impl Closure {
    pub fn as_str(self) -> &'static str {
        match self {
            Closure::Subset => "SUBSET",
            Closure::NewDirections => "NEW_DIRECTIONS",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutcomeResult {
    pub element_index: usize,
    pub survivors: StateSet,
    pub eliminated_labels: Vec<String>,
    pub closure: Closure,
}

/// Applies `P` on its party to every member of `s`; zero results are
/// eliminated, the rest keep their labels.
pub fn apply_projector(s: &StateSet, p: &Projector) -> Result<OutcomeResult> {
    apply_element(s, p, 0)
}

fn apply_element(s: &StateSet, p: &Projector, element_index: usize) -> Result<OutcomeResult> {
    s.check_party(p.party)?;
    if s.dims()[p.party] != p.dim {
        return Err(Error::Dimension(format!(
            "projector of dimension {} on party {} of dimension {}",
            p.dim,
            p.party + 1,
            s.dims()[p.party]
        )));
    }
    let mut survivors = Vec::new();
    let mut eliminated = Vec::new();
    for st in s.states() {
        let projected = p.apply(st.factor(p.party));
        if linalg::is_zero_vector(&projected) {
            eliminated.push(st.label.clone());
            continue;
        }
        let mut factors = st.factors.clone();
        factors[p.party] = LocalVector::new(p.party, projected);
        survivors.push(ProductState::new(st.label.clone(), factors));
    }
    let closure = if survivors
        .iter()
        .all(|sv| s.states().iter().any(|orig| sv.proportional_to(orig)))
    {
        Closure::Subset
    } else {
        Closure::NewDirections
    };
    Ok(OutcomeResult {
        element_index,
        survivors: s.with_states(survivors),
        eliminated_labels: eliminated,
        closure,
    })
}

/// One outcome per PVM element, in element order.
pub fn measure(s: &StateSet, m: &Pvm) -> Result<Vec<OutcomeResult>> {
    m.elements
        .iter()
        .enumerate()
        .map(|(k, e)| apply_element(s, e, k))
        .collect()
}

pub fn is_orthogonality_preserving(s: &StateSet, m: &Pvm) -> Result<bool> {
    Ok(measure(s, m)?
        .iter()
        .all(|o| crate::state::is_orthogonal_set(&o.survivors).orthogonal))
}

// ---------------------------------------------------------------------------
// Enumeration

#[derive(Clone, Debug)]
pub struct EnumerationConfig {
    /// Coarse-grainings are enumerated only up to this many atoms.
    pub max_atoms: usize,
    /// Cap on returned PVMs.
    pub max_pvms: usize,
    /// Search budget for assembling PVMs in the noncommutative case.
    pub max_assembly_nodes: usize,
    /// The center of a noncommutative space is computed only up to this
    /// many basis elements.
    pub max_center_basis: usize,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        Self {
            max_atoms: 6,
            max_pvms: 256,
            max_assembly_nodes: 20_000,
            max_center_basis: 48,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PvmEnumeration {
    pub party: usize,
    /// Nontrivial orthogonality-preserving PVMs, finest first.
    pub pvms: Vec<Pvm>,
    pub commutative: bool,
    /// False when the list may miss orthogonality-preserving PVMs
    /// (noncommutative constraint space, irrational spectra or caps hit).
    pub complete: bool,
}

pub fn enumerate_op_pvms(s: &StateSet, party: usize) -> Result<PvmEnumeration> {
    enumerate_op_pvms_with(s, party, &EnumerationConfig::default())
}

pub fn enumerate_op_pvms_with(
    s: &StateSet,
    party: usize,
    config: &EnumerationConfig,
) -> Result<PvmEnumeration> {
    s.check_party(party)?;
    let d = s.dims()[party];
    let mut support = BTreeSet::new();
    for st in s.states() {
        support.extend(st.factors[party].support());
    }
    if support.is_empty() || support.len() == d {
        let (space, _) = derive_constraint_space(s, party)?;
        return Ok(enumerate_in_space(s, &space, config));
    }
    // Work inside the coordinate support of the party's factors and lift
    // back, adding the projector onto the unused coordinates as one more
    // element. Measurements mixing the two regions are not explored.
    let (restricted, kept) = s.restrict_to_support();
    let kept = &kept[party];
    let (space, _) = derive_constraint_space(&restricted, party)?;
    let inner = enumerate_in_space(&restricted, &space, config);
    let rest: Vec<usize> = (0..d).filter(|i| !support.contains(i)).collect();
    let embed = |v: &[Scalar]| {
        let mut out = vec![Scalar::zero(); d];
        for (x, &i) in v.iter().zip(kept) {
            out[i] = x.clone();
        }
        out
    };
    let pvms = inner
        .pvms
        .iter()
        .map(|m| {
            let mut elements: Vec<Projector> = m
                .elements
                .iter()
                .map(|e| {
                    Projector::from_orthogonal(party, d, e.ortho.iter().map(|v| embed(v)).collect())
                })
                .collect();
            elements.push(Projector::coordinate(party, d, &rest).expect("in range"));
            Pvm::new(party, d, elements).expect("lifted PVM is complete")
        })
        .collect();
    Ok(PvmEnumeration {
        party,
        pvms,
        commutative: inner.commutative,
        complete: false,
    })
}

pub(crate) fn enumerate_in_space(
    s: &StateSet,
    space: &HermitianSpace,
    config: &EnumerationConfig,
) -> PvmEnumeration {
    let party = space.party;
    let d = space.dim;
    let commutative = space.is_commutative();
    if commutative {
        let (atoms, rational) = joint_eigenspaces(d, &space.basis);
        let atoms: Vec<Projector> = sorted_projectors(
            atoms
                .into_iter()
                .map(|o| Projector::from_orthogonal(party, d, o))
                .collect(),
        );
        let (pvms, capped) = coarse_grainings(party, d, &atoms, space, config);
        return PvmEnumeration {
            party,
            pvms,
            commutative,
            complete: rational && !capped,
        };
    }

    // Noncommutative: atoms of the center plus geometric candidates, each
    // verified against the constraints.
    let center = if space.basis.len() <= config.max_center_basis {
        space.center()
    } else {
        Vec::new()
    };
    let (center_atoms, _) = joint_eigenspaces(d, &center);
    let mut pool: Vec<Projector> = center_atoms
        .into_iter()
        .map(|o| Projector::from_orthogonal(party, d, o))
        .filter(|p| p.rank() < d)
        .collect();
    pool.extend(geometric_candidates(s, party, d));
    let mut seen: Vec<Operator> = Vec::new();
    let mut verified = Vec::new();
    for p in pool {
        let m = p.matrix();
        if seen.contains(&m) || !space.contains(&m) {
            continue;
        }
        seen.push(m);
        verified.push(p);
    }
    let verified = sorted_projectors(verified);
    let pvms = assemble_pvms(party, d, &verified, config);
    PvmEnumeration {
        party,
        pvms,
        commutative,
        complete: false,
    }
}

/// Standard-basis support (lexicographic), then rank, then matrix entries.
fn projector_key(p: &Projector) -> (Vec<usize>, usize, String) {
    let text: Vec<String> = p.matrix().entries().iter().map(Scalar::to_string).collect();
    (
        p.standard_support().into_iter().collect(),
        p.rank(),
        text.join(","),
    )
}

fn sorted_projectors(mut ps: Vec<Projector>) -> Vec<Projector> {
    ps.sort_by_cached_key(projector_key);
    ps
}

/// Splits `C^d` into the common eigenspaces of a commuting Hermitian family.
/// Blocks whose restricted spectrum is irrational stay unsplit; the flag is
/// false when that happens.
fn joint_eigenspaces(d: usize, family: &[Operator]) -> (Vec<Vec<Vec<Scalar>>>, bool) {
    let mut blocks: Vec<Vec<Vec<Scalar>>> = vec![(0..d)
        .map(|i| {
            let mut v = vec![Scalar::zero(); d];
            v[i] = Scalar::one();
            v
        })
        .collect()];
    let mut rational = true;
    for b in family {
        if b.is_scalar_multiple_of_identity() {
            continue;
        }
        let mut next = Vec::new();
        for block in blocks {
            let (parts, ok) = split_block(b, &block);
            rational &= ok;
            next.extend(parts);
        }
        blocks = next;
    }
    (blocks, rational)
}

/// Eigenspaces of `b` restricted to the invariant subspace spanned by the
/// mutually orthogonal `block`.
fn split_block(b: &Operator, block: &[Vec<Scalar>]) -> (Vec<Vec<Vec<Scalar>>>, bool) {
    let r = block.len();
    if r <= 1 {
        return (vec![block.to_vec()], true);
    }
    let mut m = Operator::zeros(r);
    for k in 0..r {
        let nk = Scalar::real(block[k].iter().map(Scalar::norm_sqr).sum());
        for l in 0..r {
            let z = &b.sandwich(&block[k], &block[l]) / &nk;
            m.set(k, l, z);
        }
    }
    if m.is_scalar_multiple_of_identity() {
        return (vec![block.to_vec()], true);
    }
    let Some(cp) = poly::characteristic_polynomial(&m) else {
        return (vec![block.to_vec()], false);
    };
    let mut parts: Vec<Vec<Vec<Scalar>>> = Vec::new();
    let mut found: Vec<Vec<Scalar>> = Vec::new();
    for lambda in poly::rational_roots(&cp) {
        let shifted = m.sub(&Operator::identity(r).scale(&Scalar::real(lambda)));
        let kernel = linalg::nullspace(&shifted.rows(), r);
        let vecs: Vec<Vec<Scalar>> = kernel
            .iter()
            .map(|c| {
                let mut v = vec![Scalar::zero(); block[0].len()];
                for (ck, wk) in c.iter().zip(block) {
                    if ck.is_zero() {
                        continue;
                    }
                    for (x, y) in v.iter_mut().zip(wk) {
                        *x += &(ck * y);
                    }
                }
                v
            })
            .collect();
        let ortho = linalg::gram_schmidt(&vecs);
        found.extend(ortho.iter().cloned());
        parts.push(ortho);
    }
    let mut rational = true;
    if found.len() < r {
        let rest: Vec<Vec<Scalar>> = block
            .iter()
            .map(|w| linalg::remove_components(&found, w))
            .collect();
        let rest = linalg::gram_schmidt(&rest);
        if !rest.is_empty() {
            rational = false;
            parts.push(rest);
        }
    }
    (parts, rational)
}

/// Set partitions of `0..n` as restricted growth strings, in lexicographic order.
fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max + 1 {
            if i == 0 && b > 0 {
                break;
            }
            cur.push(b);
            rec(i + 1, n, if b > max { b } else { max }, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut cur = Vec::with_capacity(n);
    // First element always goes to block 0; `max` tracks the highest block used.
    cur.push(0);
    rec(1, n, 0, &mut cur, &mut out);
    out
}

fn coarse_grainings(
    party: usize,
    d: usize,
    atoms: &[Projector],
    space: &HermitianSpace,
    config: &EnumerationConfig,
) -> (Vec<Pvm>, bool) {
    if atoms.len() < 2 {
        return (Vec::new(), false);
    }
    let mut capped = false;
    let partitions = if atoms.len() <= config.max_atoms {
        set_partitions(atoms.len())
    } else {
        capped = true;
        vec![(0..atoms.len()).collect()]
    };
    let mut pvms: Vec<Pvm> = Vec::new();
    for rgs in partitions {
        let blocks = rgs.iter().max().map_or(0, |m| m + 1);
        if blocks < 2 {
            continue;
        }
        let elements: Vec<Projector> = (0..blocks)
            .map(|b| {
                let parts: Vec<&Projector> = atoms
                    .iter()
                    .zip(&rgs)
                    .filter(|(_, &g)| g == b)
                    .map(|(a, _)| a)
                    .collect();
                Projector::sum(&parts)
            })
            .collect();
        if elements.iter().any(|e| !space.contains(&e.matrix())) {
            continue;
        }
        if let Ok(m) = Pvm::new(party, d, elements) {
            pvms.push(m);
        }
    }
    pvms.sort_by_key(|m| std::cmp::Reverse(m.len()));
    if pvms.len() > config.max_pvms {
        pvms.truncate(config.max_pvms);
        capped = true;
    }
    (pvms, capped)
}

fn geometric_candidates(s: &StateSet, party: usize, d: usize) -> Vec<Projector> {
    let mut out = Vec::new();
    let mut dirs: Vec<Vec<Scalar>> = Vec::new();
    for st in s.states() {
        let f = st.factor(party);
        if !dirs.iter().any(|g| linalg::proportional(g, f)) {
            dirs.push(f.to_vec());
        }
    }
    // Spans of small groups of the set's own directions, and their complements.
    let max_size = (d - 1).min(3);
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    fn choose(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            choose(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    for k in 1..=max_size {
        choose(0, dirs.len(), k, &mut Vec::new(), &mut subsets);
        if subsets.len() > 4096 {
            break;
        }
    }
    for sub in subsets {
        let vs: Vec<Vec<Scalar>> = sub.iter().map(|&i| dirs[i].clone()).collect();
        let ortho = linalg::gram_schmidt(&vs);
        if ortho.len() >= d {
            continue;
        }
        let comp = linalg::gram_schmidt(&linalg::orthogonal_complement(&ortho, d));
        out.push(Projector::from_orthogonal(party, d, ortho));
        out.push(Projector::from_orthogonal(party, d, comp));
    }
    if d <= 8 {
        for mask in 1..((1usize << d) - 1) {
            let idx: Vec<usize> = (0..d).filter(|i| mask & (1 << i) != 0).collect();
            out.push(Projector::coordinate(party, d, &idx).expect("in range"));
        }
    }
    out
}

/// Mutually orthogonal collections from `pool`, completed by their
/// complement (which lies in the constraint space by linearity).
fn assemble_pvms(
    party: usize,
    d: usize,
    pool: &[Projector],
    config: &EnumerationConfig,
) -> Vec<Pvm> {
    let mut results: Vec<Pvm> = Vec::new();
    let mut keys: Vec<Vec<Operator>> = Vec::new();
    let mut budget = config.max_assembly_nodes;
    let mut chosen: Vec<usize> = Vec::new();

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        start: usize,
        rank: usize,
        d: usize,
        party: usize,
        pool: &[Projector],
        chosen: &mut Vec<usize>,
        budget: &mut usize,
        results: &mut Vec<Pvm>,
        keys: &mut Vec<Vec<Operator>>,
    ) {
        if *budget == 0 {
            return;
        }
        *budget -= 1;
        if !chosen.is_empty() {
            let elems: Vec<Projector> = chosen.iter().map(|&i| pool[i].clone()).collect();
            if let Ok(m) = Pvm::completed(party, d, elems) {
                if m.is_nontrivial() {
                    let mut key = m.matrices();
                    key.sort_by_key(|o| {
                        o.entries()
                            .iter()
                            .map(Scalar::to_string)
                            .collect::<Vec<_>>()
                    });
                    if !keys.contains(&key) {
                        keys.push(key);
                        results.push(m);
                    }
                }
            }
        }
        for i in start..pool.len() {
            let p = &pool[i];
            if rank + p.rank() > d || !chosen.iter().all(|&c| pool[c].is_orthogonal_to(p)) {
                continue;
            }
            chosen.push(i);
            dfs(
                i + 1,
                rank + p.rank(),
                d,
                party,
                pool,
                chosen,
                budget,
                results,
                keys,
            );
            chosen.pop();
        }
    }
    dfs(
        0,
        0,
        d,
        party,
        pool,
        &mut chosen,
        &mut budget,
        &mut results,
        &mut keys,
    );
    results.sort_by_key(|m| std::cmp::Reverse(m.len()));
    results.truncate(config.max_pvms);
    results
}
