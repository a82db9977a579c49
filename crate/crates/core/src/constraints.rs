//! Orthogonality-preservation constraints on a single party.
//!
//! For a measurement element `M` on party `p`, the post-measurement states of
//! `ψ_i` and `ψ_j` stay orthogonal iff `⟨a_i|M†M|a_j⟩ · Π_{q≠p}⟨x_i|x_j⟩_q = 0`.
//! Whenever the bystander product is nonzero this is a linear condition on
//! the Hermitian operator `H = M†M`. Solving all of them exactly yields the
//! real vector space of admissible `H`, which always contains the identity.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{self, Operator};
use crate::scalar::{Rational, Scalar};
use crate::state::{require_orthogonal, StateSet};

pub type HermitianOperator = Operator;

/// One pair `(i, j)`, `i < j`, and whether it constrains the party.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintRecord {
    pub pair: (usize, usize),
    pub bystander_overlap: Scalar,
    pub active: bool,
}

/// Admissible `M†M` operators on one party.
#[derive(Clone, Debug)]
pub struct HermitianSpace {
    pub party: usize,
    pub dim: usize,
    /// Linearly independent (over the reals) Hermitian basis.
    pub basis: Vec<HermitianOperator>,
    /// Dimension of the space modulo operators that vanish on the span of the
    /// party's factors, i.e. the number of independent ways an admissible
    /// operator can act on the states actually present.
    pub effective_dim: usize,
    active: Vec<(Vec<Scalar>, Vec<Scalar>)>,
}

impl HermitianSpace {
    pub fn dim_space(&self) -> usize {
        self.basis.len()
    }

    pub fn active_constraints(&self) -> usize {
        self.active.len()
    }

    /// Hermitian and satisfying every active constraint.
    pub fn contains(&self, h: &Operator) -> bool {
        h.dim() == self.dim
            && h.is_hermitian()
            && self.active.iter().all(|(u, v)| h.sandwich(u, v).is_zero())
    }

    pub fn is_commutative(&self) -> bool {
        // Commuting Hermitian matrices diagonalize simultaneously, so a
        // commuting family spans at most `dim` dimensions.
        if self.basis.len() > self.dim {
            return false;
        }
        for (i, a) in self.basis.iter().enumerate() {
            for b in &self.basis[i + 1..] {
                if !a.commutes_with(b) {
                    return false;
                }
            }
        }
        true
    }

    /// Basis of the elements of the space commuting with the whole space.
    pub fn center(&self) -> Vec<Operator> {
        let n = self.basis.len();
        if self.is_commutative() {
            return self.basis.clone();
        }
        // Σ c_m [B_m, B_k] = 0 for all k, as real equations in c.
        let comms: Vec<Vec<Operator>> = self
            .basis
            .iter()
            .map(|bm| {
                self.basis
                    .iter()
                    .map(|bk| bm.mul(bk).sub(&bk.mul(bm)))
                    .collect()
            })
            .collect();
        let d2 = self.dim * self.dim;
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for k in 0..n {
            for e in 0..d2 {
                let re: Vec<Rational> = (0..n)
                    .map(|m| comms[m][k].entries()[e].re.clone())
                    .collect();
                let im: Vec<Rational> = (0..n)
                    .map(|m| comms[m][k].entries()[e].im.clone())
                    .collect();
                if re.iter().any(|x| !x.is_zero()) {
                    rows.push(re);
                }
                if im.iter().any(|x| !x.is_zero()) {
                    rows.push(im);
                }
            }
        }
        linalg::nullspace(&rows, n)
            .into_iter()
            .map(|c| {
                let mut z = Operator::zeros(self.dim);
                for (cm, bm) in c.iter().zip(&self.basis) {
                    if !cm.is_zero() {
                        z = z.add(&bm.scale(&Scalar::real(cm.clone())));
                    }
                }
                z
            })
            .collect()
    }
}

fn real_rows(coeffs: &[Scalar]) -> [Vec<Rational>; 2] {
    [
        coeffs.iter().map(|c| c.re.clone()).collect(),
        coeffs.iter().map(|c| c.im.clone()).collect(),
    ]
}

/// Coefficients of `⟨u|H|v⟩` in the real parameters of `H`: the `d` diagonal
/// entries, then `Re H_kl, Im H_kl` for each `k < l`.
fn sandwich_coefficients(u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
    let d = u.len();
    let mut out = Vec::with_capacity(d * d);
    for k in 0..d {
        out.push(&u[k].conj() * &v[k]);
    }
    for k in 0..d {
        for l in (k + 1)..d {
            let a = &u[k].conj() * &v[l];
            let b = &u[l].conj() * &v[k];
            out.push(&a + &b);
            out.push(&Scalar::i() * &(&a - &b));
        }
    }
    out
}

fn operator_from_params(d: usize, x: &[Rational]) -> Operator {
    let mut h = Operator::zeros(d);
    for k in 0..d {
        h.set(k, k, Scalar::real(x[k].clone()));
    }
    let mut idx = d;
    for k in 0..d {
        for l in (k + 1)..d {
            let z = Scalar::new(x[idx].clone(), x[idx + 1].clone());
            h.set(l, k, z.conj());
            h.set(k, l, z);
            idx += 2;
        }
    }
    h
}

fn distinct_directions(s: &StateSet, party: usize) -> Vec<Vec<Scalar>> {
    let mut out: Vec<Vec<Scalar>> = Vec::new();
    for st in s.states() {
        let f = st.factor(party);
        if !out.iter().any(|g| linalg::proportional(g, f)) {
            out.push(f.to_vec());
        }
    }
    out
}

fn effective_dimension(basis: &[Operator], directions: &[Vec<Scalar>]) -> usize {
    let rows: Vec<Vec<Rational>> = basis
        .iter()
        .map(|b| {
            let mut row = Vec::new();
            for (i, u) in directions.iter().enumerate() {
                for v in &directions[i..] {
                    let z = b.sandwich(u, v);
                    row.push(z.re);
                    row.push(z.im);
                }
            }
            row
        })
        .collect();
    if rows.first().is_none_or(|r| r.is_empty()) {
        return 0;
    }
    linalg::rank(&rows)
}

/// Solves the orthogonality-preservation constraints of `party` exactly.
pub fn derive_constraint_space(
    s: &StateSet,
    party: usize,
) -> Result<(HermitianSpace, Vec<ConstraintRecord>)> {
    s.check_party(party)?;
    require_orthogonal(s)?;
    let d = s.dims()[party];
    let mut records = Vec::new();
    let mut active = Vec::new();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for i in 0..s.len() {
        for j in (i + 1)..s.len() {
            let by = s.bystander_overlap(i, j, party);
            let is_active = !by.is_zero();
            if is_active {
                let u = s.states()[i].factor(party);
                let v = s.states()[j].factor(party);
                if linalg::proportional(u, v) {
                    // ⟨u|I|v⟩ ≠ 0 here, so the pair was not orthogonal.
                    return Err(Error::NotOrthogonal(
                        s.states()[i].label.clone(),
                        s.states()[j].label.clone(),
                    ));
                }
                for row in real_rows(&sandwich_coefficients(u, v)) {
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
                active.push((u.to_vec(), v.to_vec()));
            }
            records.push(ConstraintRecord {
                pair: (i, j),
                bystander_overlap: by,
                active: is_active,
            });
        }
    }
    let basis: Vec<Operator> = linalg::nullspace(&rows, d * d)
        .iter()
        .map(|x| operator_from_params(d, x))
        .collect();
    let effective_dim = effective_dimension(&basis, &distinct_directions(s, party));
    let space = HermitianSpace {
        party,
        dim: d,
        basis,
        effective_dim,
        active,
    };
    debug_assert!(space.contains(&Operator::identity(d)));
    Ok((space, records))
}

/// True iff every admissible operator acts on the party's states as a
/// multiple of the identity. When the factors span the whole party space this
/// is exactly `dim_space == 1`.
pub fn only_trivial(space: &HermitianSpace) -> bool {
    space.effective_dim <= 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartyIrreducibility {
    pub party: usize,
    pub dim_space: usize,
    pub effective_dim: usize,
    pub active_constraints: usize,
    pub only_trivial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibilityReport {
    pub irreducible: bool,
    pub parties: Vec<PartyIrreducibility>,
}

/// No party admits a nontrivial orthogonality-preserving measurement.
/// Sets with fewer than two states are reported reducible by convention.
pub fn is_locally_irreducible(s: &StateSet) -> Result<IrreducibilityReport> {
    require_orthogonal(s)?;
    let mut parties = Vec::new();
    for p in 0..s.num_parties() {
        let (space, _) = derive_constraint_space(s, p)?;
        parties.push(PartyIrreducibility {
            party: p,
            dim_space: space.dim_space(),
            effective_dim: space.effective_dim,
            active_constraints: space.active_constraints(),
            only_trivial: only_trivial(&space),
        });
    }
    let irreducible = s.len() >= 2 && parties.iter().all(|p| p.only_trivial);
    Ok(IrreducibilityReport {
        irreducible,
        parties,
    })
}
