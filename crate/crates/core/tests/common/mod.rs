//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use nalgebra::DMatrix;
use opsets_core::scalar::rat;
use opsets_core::{LocalVector, ProductState, Scalar, StateSet};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Unnormalized Gram–Schmidt on integer-valued real vectors, exact.
fn orthogonalize(vs: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let mut out: Vec<Vec<Scalar>> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for u in &out {
            let num: Scalar = u
                .iter()
                .zip(v)
                .map(|(a, b)| &a.conj() * b)
                .fold(Scalar::zero(), |x, y| &x + &y);
            let den: Scalar = u
                .iter()
                .map(|a| Scalar::real(a.norm_sqr()))
                .fold(Scalar::zero(), |x, y| &x + &y);
            let c = &num / &den;
            for (wi, ui) in w.iter_mut().zip(u) {
                *wi = &*wi - &(&c * ui);
            }
        }
        if w.iter().all(Scalar::is_zero) {
            return None;
        }
        out.push(w);
    }
    Some(out)
}

/// A random orthogonal basis of `span{|i⟩ : i ∈ coords}` inside `C^dim`,
/// with small integer seeds and, optionally, complex entries.
pub fn random_local_basis(
    rng: &mut TestRng,
    dim: usize,
    coords: &[usize],
    complex: bool,
) -> Vec<Vec<Scalar>> {
    loop {
        let seeds: Vec<Vec<Scalar>> = (0..coords.len())
            .map(|_| {
                let mut v = vec![Scalar::zero(); dim];
                for &c in coords {
                    let re = rng.gen_range(-2i64..=2);
                    let im = if complex { rng.gen_range(-1i64..=1) } else { 0 };
                    v[c] = Scalar::new(rat(re), rat(im));
                }
                v
            })
            .collect();
        if let Some(b) = orthogonalize(&seeds) {
            return b;
        }
    }
}

/// A box of coordinate subsets, one per party.
type Region = Vec<Vec<usize>>;

/// Complete orthogonal product basis from a random guillotine partition of
/// the coordinate grid. Each cut is a local projective measurement, so the
/// result is distinguishable by projective LPCC.
pub fn random_copb(rng: &mut TestRng, dims: &[usize], complex: bool) -> StateSet {
    let region: Region = dims.iter().map(|&d| (0..d).collect()).collect();
    let mut leaves = Vec::new();
    split(rng, region, &mut leaves);
    let mut states = Vec::new();
    for leaf in leaves {
        let bases: Vec<Vec<Vec<Scalar>>> = leaf
            .iter()
            .enumerate()
            .map(|(p, coords)| random_local_basis(rng, dims[p], coords, complex))
            .collect();
        let mut idx = vec![0usize; dims.len()];
        loop {
            let factors = (0..dims.len())
                .map(|p| LocalVector::new(p, bases[p][idx[p]].clone()))
                .collect();
            states.push(ProductState::new(format!("s{}", states.len()), factors));
            let mut p = 0;
            loop {
                if p == dims.len() {
                    break;
                }
                idx[p] += 1;
                if idx[p] < bases[p].len() {
                    break;
                }
                idx[p] = 0;
                p += 1;
            }
            if p == dims.len() {
                break;
            }
        }
    }
    StateSet::new(dims.to_vec(), states).expect("valid generated set")
}

fn split(rng: &mut TestRng, region: Region, out: &mut Vec<Region>) {
    let splittable: Vec<usize> = (0..region.len()).filter(|&p| region[p].len() > 1).collect();
    if splittable.is_empty() || rng.gen_bool(0.2) {
        out.push(region);
        return;
    }
    let p = splittable[rng.gen_range(0..splittable.len())];
    let mut coords = region[p].clone();
    // Random subset split, not only contiguous cuts.
    for i in (1..coords.len()).rev() {
        let j = rng.gen_range(0..=i);
        coords.swap(i, j);
    }
    let k = rng.gen_range(1..coords.len());
    let (a, b) = coords.split_at(k);
    for part in [a, b] {
        let mut r = region.clone();
        let mut part = part.to_vec();
        part.sort_unstable();
        r[p] = part;
        split(rng, r, out);
    }
}

pub fn random_subset(rng: &mut TestRng, s: &StateSet, size: usize) -> StateSet {
    let mut idx: Vec<usize> = (0..s.len()).collect();
    for i in (1..idx.len()).rev() {
        let j = rng.gen_range(0..=i);
        idx.swap(i, j);
    }
    idx.truncate(size);
    idx.sort_unstable();
    s.with_states(idx.iter().map(|&i| s.states()[i].clone()).collect())
}

pub fn to_f64(v: &[Scalar]) -> Vec<(f64, f64)> {
    v.iter().map(Scalar::to_f64_pair).collect()
}

/// Numerical rank by SVD.
pub fn dense_rank(rows: &[Vec<f64>], ncols: usize) -> usize {
    if rows.is_empty() || ncols == 0 {
        return 0;
    }
    let m = DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]);
    m.rank(1e-9)
}

/// Rank of complex vectors, via the real `2n × 2d` embedding (halved).
pub fn complex_rank(vs: &[Vec<Scalar>]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    let d = vs[0].len();
    let mut rows = Vec::new();
    for v in vs {
        let c = to_f64(v);
        let mut r1 = Vec::with_capacity(2 * d);
        let mut r2 = Vec::with_capacity(2 * d);
        for &(re, im) in &c {
            r1.extend([re, -im]);
            r2.extend([im, re]);
        }
        rows.push(r1);
        rows.push(r2);
    }
    dense_rank(&rows, 2 * d) / 2
}

/// Real dimension of `{H Hermitian : ⟨a_i|H|a_j⟩ = 0}` over active pairs,
/// from a dense floating-point solve.
pub fn dense_constraint_dim(s: &StateSet, party: usize) -> usize {
    let d = s.dims()[party];
    // Parameters: H = Σ x_k E_k with E_k the standard Hermitian basis.
    let mut herm: Vec<Vec<Vec<(f64, f64)>>> = Vec::new();
    for i in 0..d {
        let mut m = vec![vec![(0.0, 0.0); d]; d];
        m[i][i] = (1.0, 0.0);
        herm.push(m);
    }
    for i in 0..d {
        for j in i + 1..d {
            let mut m = vec![vec![(0.0, 0.0); d]; d];
            m[i][j] = (1.0, 0.0);
            m[j][i] = (1.0, 0.0);
            herm.push(m);
            let mut m = vec![vec![(0.0, 0.0); d]; d];
            m[i][j] = (0.0, 1.0);
            m[j][i] = (0.0, -1.0);
            herm.push(m);
        }
    }
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let n = s.len();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut by = (1.0f64, 0.0f64);
            for p in (0..s.num_parties()).filter(|&p| p != party) {
                let o = complex_inner(
                    &to_f64(s.states()[i].factor(p)),
                    &to_f64(s.states()[j].factor(p)),
                );
                by = cmul(by, o);
            }
            if by.0.abs() < 1e-12 && by.1.abs() < 1e-12 {
                continue;
            }
            let a = to_f64(s.states()[i].factor(party));
            let b = to_f64(s.states()[j].factor(party));
            let vals: Vec<(f64, f64)> = herm.iter().map(|e| sandwich(&a, e, &b)).collect();
            rows.push(vals.iter().map(|v| v.0).collect());
            rows.push(vals.iter().map(|v| v.1).collect());
        }
    }
    d * d - dense_rank(&rows, d * d)
}

fn cmul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn complex_inner(a: &[(f64, f64)], b: &[(f64, f64)]) -> (f64, f64) {
    a.iter().zip(b).fold((0.0, 0.0), |acc, (x, y)| {
        let p = cmul((x.0, -x.1), *y);
        (acc.0 + p.0, acc.1 + p.1)
    })
}

fn sandwich(a: &[(f64, f64)], m: &[Vec<(f64, f64)>], b: &[(f64, f64)]) -> (f64, f64) {
    let mb: Vec<(f64, f64)> = m
        .iter()
        .map(|row| {
            row.iter().zip(b).fold((0.0, 0.0), |acc, (x, y)| {
                let p = cmul(*x, *y);
                (acc.0 + p.0, acc.1 + p.1)
            })
        })
        .collect();
    complex_inner(a, &mb)
}

/// Brute-force unextendibility: over all `n^m` assignments of members to
/// parties, extendible iff some assignment leaves every party's share
/// short of spanning it.
pub fn upb_by_assignment(s: &StateSet) -> bool {
    let n = s.num_parties();
    let m = s.len();
    let total = n.pow(m as u32);
    for code in 0..total {
        let mut c = code;
        let mut groups: Vec<Vec<Vec<Scalar>>> = vec![Vec::new(); n];
        for i in 0..m {
            let p = c % n;
            c /= n;
            groups[p].push(s.states()[i].factor(p).to_vec());
        }
        if (0..n).all(|p| complex_rank(&groups[p]) < s.dims()[p]) {
            return false;
        }
    }
    true
}

/// Samples random assignments and, for each, a random vector from every
/// party's orthocomplement; returns a product state orthogonal to all
/// members if one is hit.
pub fn sample_extension(
    rng: &mut TestRng,
    s: &StateSet,
    samples: usize,
) -> Option<Vec<Vec<(f64, f64)>>> {
    let n = s.num_parties();
    'outer: for _ in 0..samples {
        let mut groups: Vec<Vec<Vec<(f64, f64)>>> = vec![Vec::new(); n];
        for st in s.states() {
            let p = rng.gen_range(0..n);
            groups[p].push(to_f64(st.factor(p)));
        }
        let mut factors = Vec::new();
        for p in 0..n {
            let d = s.dims()[p];
            // Random vector minus its projection on the group's span
            // (numerical Gram–Schmidt).
            let mut basis: Vec<Vec<(f64, f64)>> = Vec::new();
            for v in &groups[p] {
                let mut w = v.clone();
                for u in &basis {
                    let c = complex_inner(u, &w);
                    for (wi, ui) in w.iter_mut().zip(u) {
                        let t = cmul(c, *ui);
                        wi.0 -= t.0;
                        wi.1 -= t.1;
                    }
                }
                let nrm = complex_inner(&w, &w).0.sqrt();
                if nrm > 1e-9 {
                    basis.push(w.iter().map(|x| (x.0 / nrm, x.1 / nrm)).collect());
                }
            }
            let mut x: Vec<(f64, f64)> = (0..d)
                .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            for u in &basis {
                let c = complex_inner(u, &x);
                for (xi, ui) in x.iter_mut().zip(u) {
                    let t = cmul(c, *ui);
                    xi.0 -= t.0;
                    xi.1 -= t.1;
                }
            }
            if complex_inner(&x, &x).0.sqrt() < 1e-6 {
                continue 'outer;
            }
            factors.push(x);
        }
        // Confirm orthogonality to every member numerically.
        let ok = s.states().iter().all(|st| {
            let mut ov = (1.0, 0.0);
            for (p, f) in factors.iter().enumerate() {
                ov = cmul(ov, complex_inner(f, &to_f64(st.factor(p))));
            }
            ov.0.abs() < 1e-9 && ov.1.abs() < 1e-9
        });
        if ok {
            return Some(factors);
        }
    }
    None
}
