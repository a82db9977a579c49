//! Characteristic polynomials and exact rational root extraction.
//!
//! Roots are isolated with a Sturm sequence and then pinned down by the
//! simplest rational in a sufficiently narrow isolating interval; a rational
//! root `p/q` of an integer polynomial has `q` dividing the leading
//! coefficient, so once the interval is narrower than `1/a_n²` it holds at
//! most one such candidate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::linalg::Operator;
use crate::scalar::{Rational, Scalar};

/// Coefficients, lowest degree first.
pub type Poly = Vec<Rational>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub fn eval(p: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn derivative(p: &[Rational]) -> Poly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
            .collect(),
    )
}

fn divmod(a: &[Rational], b: &[Rational]) -> (Poly, Poly) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let lead = b.last().expect("division by zero polynomial").clone();
    let mut q = vec![Rational::zero(); r.len().saturating_sub(b.len()) + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lead;
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] -= &c * bc;
        }
        q[shift] = c;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

fn rem(a: &[Rational], b: &[Rational]) -> Poly {
    divmod(a, b).1
}

fn gcd(a: &[Rational], b: &[Rational]) -> Poly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

/// `p / gcd(p, p')`: same roots, all simple.
fn squarefree(p: &[Rational]) -> Poly {
    let d = derivative(p);
    if d.is_empty() {
        return trim(p.to_vec());
    }
    let g = gcd(p, &d);
    if g.len() <= 1 {
        return trim(p.to_vec());
    }
    divmod(p, &g).0
}

/// Characteristic polynomial `det(λI − A)` by Faddeev–LeVerrier. For a
/// matrix similar to a Hermitian one the coefficients are real; `None` is
/// returned otherwise.
pub fn characteristic_polynomial(a: &Operator) -> Option<Poly> {
    let n = a.dim();
    let mut coeffs = vec![Scalar::zero(); n + 1];
    coeffs[n] = Scalar::one();
    let mut m = Operator::zeros(n);
    let id = Operator::identity(n);
    for k in 1..=n {
        m = a.mul(&m).add(&id.scale(&coeffs[n - k + 1]));
        let t = a.mul(&m).trace();
        let kk = Scalar::from_int(k as i64);
        coeffs[n - k] = -(&t / &kk);
    }
    if coeffs.iter().any(|c| !c.is_real()) {
        return None;
    }
    Some(coeffs.into_iter().map(|c| c.re).collect())
}

struct Sturm {
    chain: Vec<Poly>,
}

impl Sturm {
    fn new(p: &[Rational]) -> Self {
        let mut chain = vec![trim(p.to_vec())];
        let d = derivative(p);
        if !d.is_empty() {
            chain.push(d);
        }
        loop {
            let n = chain.len();
            if n < 2 {
                break;
            }
            let r = rem(&chain[n - 2], &chain[n - 1]);
            if r.is_empty() {
                break;
            }
            chain.push(r.into_iter().map(|c| -c).collect());
        }
        Self { chain }
    }

    fn variations(&self, x: &Rational) -> usize {
        let mut count = 0;
        let mut last: Option<bool> = None;
        for p in &self.chain {
            let v = eval(p, x);
            if v.is_zero() {
                continue;
            }
            let pos = v.is_positive();
            if let Some(l) = last {
                if l != pos {
                    count += 1;
                }
            }
            last = Some(pos);
        }
        count
    }

    /// Distinct real roots in `(a, b]`.
    fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a) - self.variations(b)
    }
}

/// Simplest rational (smallest denominator, then smallest magnitude) in `[l, u]`.
pub fn simplest_between(l: &Rational, u: &Rational) -> Rational {
    debug_assert!(l <= u);
    if u.is_negative() {
        return -simplest_between(&-u.clone(), &-l.clone());
    }
    if !l.is_positive() {
        return Rational::zero();
    }
    let fl = l.floor();
    if &fl == l {
        return fl;
    }
    let next = &fl + Rational::one();
    if &next <= u {
        return next;
    }
    let inner = simplest_between(
        &(Rational::one() / (u - &fl)),
        &(Rational::one() / (l - &fl)),
    );
    fl + Rational::one() / inner
}

/// All distinct rational roots, ascending.
pub fn rational_roots(p: &[Rational]) -> Vec<Rational> {
    let p = squarefree(&trim(p.to_vec()));
    if p.len() <= 1 {
        return Vec::new();
    }
    // Make primitive with integer coefficients.
    let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .iter()
        .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let poly: Poly = ints
        .iter()
        .map(|c| Rational::from_integer(c / &g))
        .collect();
    let lead = poly.last().unwrap().abs();
    let width_bound = Rational::one() / (&lead * &lead);

    // Cauchy bound.
    let bound = Rational::one()
        + poly[..poly.len() - 1]
            .iter()
            .map(|c| (c / &lead).abs())
            .fold(Rational::zero(), |a, b| if b > a { b } else { a });
    let sturm = Sturm::new(&poly);

    let mut roots = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((a, b)) = stack.pop() {
        let n = sturm.count(&a, &b);
        if n == 0 {
            continue;
        }
        if n > 1 {
            let mid = (&a + &b) / Rational::from_integer(BigInt::from(2));
            stack.push((mid.clone(), b));
            stack.push((a, mid));
            continue;
        }
        let (mut a, mut b) = (a, b);
        while &b - &a >= width_bound {
            let mid = (&a + &b) / Rational::from_integer(BigInt::from(2));
            if sturm.count(&a, &mid) == 1 {
                b = mid;
            } else {
                a = mid;
            }
        }
        // The root lies in (a, b]; check b itself first.
        let candidate = if eval(&poly, &b).is_zero() {
            b
        } else {
            simplest_between(&a, &b)
        };
        if candidate > a && eval(&poly, &candidate).is_zero() {
            roots.push(candidate);
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};

    fn poly_from_roots(roots: &[Rational]) -> Poly {
        let mut p: Poly = vec![rat(1)];
        for r in roots {
            let mut next = vec![Rational::zero(); p.len() + 1];
            for (i, c) in p.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            p = next;
        }
        p
    }

    #[test]
    fn finds_rational_roots_with_multiplicity() {
        let roots = [ratio(1, 3), ratio(1, 3), rat(-2), ratio(7, 5)];
        let found = rational_roots(&poly_from_roots(&roots));
        assert_eq!(found, vec![rat(-2), ratio(1, 3), ratio(7, 5)]);
    }

    #[test]
    fn skips_irrational_roots() {
        // (x² − 2)(x − 1/2)
        let p = vec![rat(1), rat(-2), ratio(-1, 2), rat(1)];
        assert_eq!(rational_roots(&p), vec![ratio(1, 2)]);
    }

    #[test]
    fn zero_and_integer_roots() {
        let p = poly_from_roots(&[rat(0), rat(0), rat(3)]);
        assert_eq!(rational_roots(&p), vec![rat(0), rat(3)]);
    }

    #[test]
    fn characteristic_polynomial_of_diagonal() {
        let a = Operator::diagonal(&[
            Scalar::from_int(2),
            Scalar::from_int(3),
            Scalar::from_int(3),
        ]);
        let p = characteristic_polynomial(&a).unwrap();
        assert_eq!(p, poly_from_roots(&[rat(2), rat(3), rat(3)]));
    }

    #[test]
    fn simplest_rational() {
        assert_eq!(simplest_between(&ratio(3, 10), &ratio(4, 10)), ratio(1, 3));
        assert_eq!(
            simplest_between(&ratio(-4, 10), &ratio(-3, 10)),
            ratio(-1, 3)
        );
        assert_eq!(simplest_between(&ratio(-1, 10), &ratio(3, 10)), rat(0));
        assert_eq!(simplest_between(&ratio(5, 2), &ratio(5, 2)), ratio(5, 2));
    }
}
