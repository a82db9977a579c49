//! Exact linear algebra over the rationals and the Gaussian rationals.
//!
//! Everything here is exact Gauss-Jordan elimination; there is no tolerance
//! anywhere. Vectors are plain slices of [`Scalar`]; square operators live in
//! [`Operator`].

use num_traits::{One, Zero};

use crate::scalar::{Rational, Scalar};

/// The handful of field operations the elimination routines need.
pub trait Field: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
}

/// Reduces `rows` (each of length `ncols`) to reduced row echelon form in
/// place, dropping zero rows. Returns the pivot column of each kept row.
pub fn rref<F: Field>(rows: &mut Vec<Vec<F>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = F::one().div(&rows[r][c]);
        if inv != F::one() {
            for x in rows[r].iter_mut().skip(c) {
                *x = x.mul(&inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !p.is_zero() {
                    *x = x.sub(&factor.mul(p));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank<F: Field>(rows: &[Vec<F>]) -> usize {
    let Some(first) = rows.first() else {
        return 0;
    };
    let ncols = first.len();
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Basis of `{x : rows · x = 0}`, one vector per free column, in column order.
pub fn nullspace<F: Field>(rows: &[Vec<F>], ncols: usize) -> Vec<Vec<F>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![F::zero(); ncols];
        v[free] = F::one();
        for (row, &p) in m.iter().zip(&pivots) {
            if !row[free].is_zero() {
                v[p] = F::zero().sub(&row[free]);
            }
        }
        basis.push(v);
    }
    basis
}

// ---------------------------------------------------------------------------
// Vectors

/// `⟨u|v⟩`, conjugate-linear in `u`.
pub fn inner(u: &[Scalar], v: &[Scalar]) -> Scalar {
    debug_assert_eq!(u.len(), v.len());
    let mut acc = Scalar::zero();
    for (a, b) in u.iter().zip(v) {
        if a.is_zero() || b.is_zero() {
            continue;
        }
        acc += &(&a.conj() * b);
    }
    acc
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// Exact proportionality by cross ratios: `u_i v_j = u_j v_i` for all `i, j`.
/// Two zero vectors count as proportional; a zero and a nonzero vector do not.
pub fn proportional(u: &[Scalar], v: &[Scalar]) -> bool {
    if u.len() != v.len() {
        return false;
    }
    if is_zero_vector(u) != is_zero_vector(v) {
        return false;
    }
    for i in 0..u.len() {
        for j in (i + 1)..u.len() {
            if &u[i] * &v[j] != &u[j] * &v[i] {
                return false;
            }
        }
    }
    true
}

pub fn kron(u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(u.len() * v.len());
    for a in u {
        for b in v {
            out.push(a * b);
        }
    }
    out
}

pub fn scale(v: &[Scalar], s: &Scalar) -> Vec<Scalar> {
    v.iter().map(|x| x * s).collect()
}

pub fn sub(u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

/// Rescales so that the first nonzero coordinate is exactly 1. Proportional
/// vectors map to the same representative.
pub fn canonical_direction(v: &[Scalar]) -> Vec<Scalar> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(lead) => {
            let inv = lead.inv().expect("nonzero lead");
            scale(v, &inv)
        }
        None => v.to_vec(),
    }
}

/// Unnormalized Gram-Schmidt: a mutually orthogonal basis of `span(vectors)`.
pub fn gram_schmidt(vectors: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let mut basis: Vec<Vec<Scalar>> = Vec::new();
    for v in vectors {
        let w = remove_components(&basis, v);
        if !is_zero_vector(&w) {
            basis.push(w);
        }
    }
    basis
}

/// `v` minus its orthogonal projection onto `span(ortho)`; `ortho` must be
/// mutually orthogonal.
pub fn remove_components(ortho: &[Vec<Scalar>], v: &[Scalar]) -> Vec<Scalar> {
    let mut w = v.to_vec();
    for b in ortho {
        let c = inner(b, &w);
        if c.is_zero() {
            continue;
        }
        let coef = &c / &Scalar::real(b.iter().map(Scalar::norm_sqr).sum());
        for (x, y) in w.iter_mut().zip(b) {
            *x -= &(&coef * y);
        }
    }
    w
}

/// Orthogonal projection of `v` onto `span(ortho)`; `ortho` mutually orthogonal.
pub fn project_onto(ortho: &[Vec<Scalar>], v: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); v.len()];
    for b in ortho {
        let c = inner(b, v);
        if c.is_zero() {
            continue;
        }
        let coef = &c / &Scalar::real(b.iter().map(Scalar::norm_sqr).sum());
        for (x, y) in out.iter_mut().zip(b) {
            *x += &(&coef * y);
        }
    }
    out
}

/// Basis of the orthogonal complement of `span(vectors)` in `C^dim`.
pub fn orthogonal_complement(vectors: &[Vec<Scalar>], dim: usize) -> Vec<Vec<Scalar>> {
    let rows: Vec<Vec<Scalar>> = vectors
        .iter()
        .map(|v| v.iter().map(Scalar::conj).collect())
        .collect();
    nullspace(&rows, dim)
}

pub fn span_rank(vectors: &[Vec<Scalar>]) -> usize {
    rank(vectors)
}

// ---------------------------------------------------------------------------
// Square operators

/// A `dim × dim` matrix over the Gaussian rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Operator {
    dim: usize,
    entries: Vec<Scalar>,
}

impl Operator {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Scalar::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_entries(dim: usize, entries: Vec<Scalar>) -> Self {
        assert_eq!(entries.len(), dim * dim);
        Self { dim, entries }
    }

    pub fn diagonal(values: &[Scalar]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    /// `Σ w wᴴ / ⟨w|w⟩` over a mutually orthogonal family.
    pub fn projector_from_orthogonal(dim: usize, ortho: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(dim);
        for w in ortho {
            let n = Scalar::real(w.iter().map(Scalar::norm_sqr).sum());
            for i in 0..dim {
                if w[i].is_zero() {
                    continue;
                }
                for j in 0..dim {
                    if w[j].is_zero() {
                        continue;
                    }
                    let v = &(&w[i] * &w[j].conj()) / &n;
                    let e = &mut m.entries[i * dim + j];
                    *e += &v;
                }
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.dim).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        (0..self.dim)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    /// `⟨u|A|v⟩`.
    pub fn sandwich(&self, u: &[Scalar], v: &[Scalar]) -> Scalar {
        inner(u, &self.apply(v))
    }

    pub fn mul(&self, other: &Operator) -> Operator {
        let d = self.dim;
        let mut out = Operator::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    out.entries[i * d + j] += &(a * b);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Operator) -> Operator {
        Operator::from_entries(
            self.dim,
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Operator) -> Operator {
        Operator::from_entries(
            self.dim,
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, s: &Scalar) -> Operator {
        Operator::from_entries(self.dim, self.entries.iter().map(|a| a * s).collect())
    }

    pub fn adjoint(&self) -> Operator {
        let d = self.dim;
        let mut out = Operator::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn is_hermitian(&self) -> bool {
        *self == self.adjoint()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn is_projector(&self) -> bool {
        self.is_hermitian() && self.mul(self) == *self
    }

    pub fn commutes_with(&self, other: &Operator) -> bool {
        self.mul(other) == other.mul(self)
    }

    /// True iff the operator is `c·I` for some scalar `c`.
    pub fn is_scalar_multiple_of_identity(&self) -> bool {
        let d = self.dim;
        (0..d).all(|i| {
            (0..d).all(|j| {
                let e = self.get(i, j);
                if i == j {
                    e == self.get(0, 0)
                } else {
                    e.is_zero()
                }
            })
        })
    }

    pub fn trace(&self) -> Scalar {
        let mut t = Scalar::zero();
        for i in 0..self.dim {
            t += self.get(i, i);
        }
        t
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.dim).map(|i| self.row(i).to_vec()).collect()
    }

    /// Orthogonal basis of the column space.
    pub fn range_basis(&self) -> Vec<Vec<Scalar>> {
        let cols: Vec<Vec<Scalar>> = (0..self.dim).map(|j| self.column(j)).collect();
        gram_schmidt(&cols)
    }

    pub fn rank(&self) -> usize {
        rank(&self.rows())
    }
}
