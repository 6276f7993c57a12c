//! Slow reference implementations used to cross-check the production code.
//!
//! Each oracle follows a different route from the routine it checks, so that
//! agreement is meaningful: covector search instead of hyperplane
//! enumeration, cofactor expansion instead of fraction-free elimination, and
//! a closed-form sum instead of the Bernoulli recurrence.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact::{self, IntMatrix, Rational};
use crate::fan::StarFan;

/// Facets of the cone spanned by `gens` in `Z^n`, as sets of incident
/// generator indices.
///
/// A generator subset is a facet iff some integer covector in the box
/// `[-bound, bound]^n` is zero on exactly that subset and positive on the
/// rest, and the subset spans a hyperplane. The bound must exceed the entries
/// of every primitive facet normal.
pub fn brute_force_facets(gens: &[Vec<i64>], n: usize, bound: i64) -> BTreeSet<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    let mut cov = vec![-bound; n];
    loop {
        if cov.iter().any(|&x| x != 0) {
            let vals: Vec<i64> = gens
                .iter()
                .map(|g| g.iter().zip(&cov).map(|(a, b)| a * b).sum())
                .collect();
            if vals.iter().all(|&v| v >= 0) {
                let zero: BTreeSet<usize> = (0..gens.len()).filter(|&i| vals[i] == 0).collect();
                let rows: Vec<Vec<BigInt>> = zero.iter().map(|&i| exact::to_bigints(&gens[i])).collect();
                if !rows.is_empty()
                    && exact::rank(&IntMatrix::from_rows(&rows).expect("equal lengths").to_rational()) == n - 1
                {
                    out.insert(zero);
                }
            }
        }
        let mut k = 0;
        while k < n && cov[k] == bound {
            cov[k] = -bound;
            k += 1;
        }
        if k == n {
            break;
        }
        cov[k] += 1;
    }
    out
}

/// Determinant by Laplace expansion along the first row.
pub fn cofactor_det(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                .collect();
            let term = BigInt::from(m[0][j]) * cofactor_det(&minor);
            if j % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

/// `B_n = Σ_{k=0}^{n} 1/(k+1) Σ_{j=0}^{k} (-1)^j C(k,j) j^n`, with `B_1 = -1/2`.
pub fn bernoulli_closed_form(n: usize) -> Rational {
    let mut total = Rational::zero();
    for k in 0..=n {
        let mut inner = BigInt::zero();
        let mut binom = BigInt::one();
        for j in 0..=k {
            if j > 0 {
                binom = binom * BigInt::from(k + 1 - j) / BigInt::from(j);
            }
            let term = &binom * BigInt::from(j).pow(n as u32);
            if j % 2 == 0 {
                inner += term;
            } else {
                inner -= term;
            }
        }
        total += Rational::new(inner, BigInt::from(k + 1));
    }
    total
}

/// Left side of `Σ_{k=0}^{n} C(n+1, k) B_k = 0` for the given values `B_0..=B_n`.
pub fn bernoulli_recurrence_residual(values: &[Rational]) -> Rational {
    let n = values.len() - 1;
    let mut binom = BigInt::one();
    let mut s = Rational::zero();
    for (k, b) in values.iter().enumerate() {
        if k > 0 {
            binom = binom * BigInt::from(n + 2 - k) / BigInt::from(k);
        }
        s += b * &binom;
    }
    s
}

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Denominator of `B_n` for even `n ≥ 2`: the product of primes `p` with
/// `(p - 1) | n`.
pub fn staudt_clausen_denominator(n: usize) -> BigInt {
    (2..=n + 1)
        .filter(|&p| is_prime(p) && n % (p - 1) == 0)
        .map(BigInt::from)
        .product()
}

/// A star fan whose center has a classically known self-intersection.
pub struct ToyFan {
    pub name: &'static str,
    pub fan: StarFan,
    pub expected: Rational,
}

/// Stars of an exceptional ray: the projective plane (a line with `E^2 = 1`)
/// and the blow-up of a point on a surface (`E^2 = -1`).
pub fn toy_fans() -> Vec<ToyFan> {
    vec![
        ToyFan {
            name: "projective plane",
            fan: StarFan::from_i64(&[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[0, 2]]).expect("valid fan"),
            expected: exact::int(1),
        },
        ToyFan {
            name: "point blow-up of a surface",
            fan: StarFan::from_i64(&[&[1, 1], &[1, 0], &[0, 1]], &[&[0, 1], &[0, 2]]).expect("valid fan"),
            expected: exact::int(-1),
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cofactor_examples() {
        assert_eq!(cofactor_det(&[]), BigInt::one());
        assert_eq!(cofactor_det(&[vec![1, 2], vec![3, 4]]), BigInt::from(-2));
        assert_eq!(cofactor_det(&[vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 4]]), BigInt::from(24));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(bernoulli_closed_form(1), exact::rat(-1, 2));
        assert_eq!(bernoulli_closed_form(12), exact::rat(-691, 2730));
        assert_eq!(staudt_clausen_denominator(12), BigInt::from(2730));
    }

    #[test]
    fn brute_force_square_cone() {
        let gens = vec![vec![1, 0, 1], vec![0, 1, 1], vec![-1, 0, 1], vec![0, -1, 1]];
        assert_eq!(brute_force_facets(&gens, 3, 2).len(), 4);
    }
}
