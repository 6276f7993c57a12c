//! Intersection tables for the Igusa and second Voronoi compactifications.
//!
//! On the Igusa side `a_k = ⟨L^k D^{10-k}⟩`. Pulling back the Jacobian locus
//! class `8L - D` along the Torelli map gives `b_{k-1} = 8 a_k - a_{k-1}` with
//! `b_k = ⟨λ^k δ_0^{9-k}⟩` on the moduli space of stable genus-4 curves, so
//! the table follows from `a_10` and the `b_k`.
//!
//! On the Voronoi side `a_{k,l} = ⟨L^k E^l F^{10-k-l}⟩` with `F` the pullback
//! of the Igusa boundary. `L` and `F` are pullbacks and `E` is contracted to a
//! point, so only the pure-`E` column is new: `E^10` on the moduli space is the
//! toric number divided by the stabilizer order of the exceptional ray.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{rat, Rational};

pub const TOP_DEGREE: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TablesError {
    #[error("stabilizer order must be positive")]
    ZeroStabilizer,
    #[error("monomial L^{k} D^{m} E^{l} has degree {}, expected 10", .k + .m + .l)]
    Degree { k: usize, m: usize, l: usize },
}

/// Coefficients of the Picard-group relations between the two compactifications.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassConstants {
    /// `[J^Igu] = 8 L - D^Igu`: (L, D).
    pub jacobian_igusa: (i64, i64),
    /// `[J^Vor] = 8 L - D^Vor - 4 E`: (L, D, E).
    pub jacobian_voronoi: (i64, i64, i64),
    /// `π* D^Igu = D^Vor + 4 E`.
    pub pullback_e_coefficient: i64,
}

pub const CLASS_CONSTANTS: ClassConstants = ClassConstants {
    jacobian_igusa: (8, -1),
    jacobian_voronoi: (8, -1, -4),
    pullback_e_coefficient: 4,
};

/// `b_k = ⟨λ^k δ_0^{9-k}⟩` on the moduli space of stable genus-4 curves,
/// `k = 0..=9`.
///
/// These are input data obtained from Faber's algorithm, which is not
/// reimplemented here. Values are assigned in strictly descending index order
/// b_9, ..., b_0, the only ordering that closes the recurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaberData {
    pub b: [Rational; 10],
}

pub const FABER_HEADER_NOTE: &str =
    "b_k values assigned in descending index order b_9..b_0 (the tabulated header repeats an index); verify checks that this ordering closes the recurrence";

impl FaberData {
    pub fn genus_four() -> Self {
        Self {
            b: [
                rat(-251987683, 4320),
                rat(-1636249, 1080),
                rat(-1759, 210),
                rat(1759, 1680),
                rat(0, 1),
                rat(-2, 945),
                rat(1, 3780),
                rat(0, 1),
                rat(0, 1),
                rat(1, 113400),
            ],
        }
    }
}

impl Default for FaberData {
    fn default() -> Self {
        Self::genus_four()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IgusaTable {
    /// `a[k] = ⟨L^k D^{10-k}⟩`.
    pub a: [Rational; 11],
}

pub fn igusa_table(a_top: &Rational, b: &FaberData) -> IgusaTable {
    let mut a: [Rational; 11] = std::array::from_fn(|_| Rational::zero());
    a[TOP_DEGREE] = a_top.clone();
    for k in (1..=TOP_DEGREE).rev() {
        a[k - 1] = &a[k] * Rational::from_integer(BigInt::from(8)) - &b.b[k - 1];
    }
    IgusaTable { a }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceReport {
    pub holds: bool,
    /// Smallest k in 1..=10 with `b_{k-1} ≠ 8 a_k - a_{k-1}`.
    pub first_failure: Option<usize>,
}

pub fn verify_recurrence(igusa: &IgusaTable, b: &FaberData) -> RecurrenceReport {
    let eight = Rational::from_integer(BigInt::from(8));
    let first_failure =
        (1..=TOP_DEGREE).find(|&k| b.b[k - 1] != &eight * &igusa.a[k] - &igusa.a[k - 1]);
    RecurrenceReport {
        holds: first_failure.is_none(),
        first_failure,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoronoiTable {
    /// `rows[k][l] = a_{k,l}` for `k + l ≤ 10`.
    rows: Vec<Vec<Rational>>,
}

impl VoronoiTable {
    /// `a_{k,l}`, or zero outside `k + l ≤ 10`.
    pub fn get(&self, k: usize, l: usize) -> Rational {
        self.rows
            .get(k)
            .and_then(|r| r.get(l))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// All `(k, l, a_{k,l})` in order of increasing k, then l.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(k, r)| r.iter().enumerate().map(move |(l, v)| (k, l, v)))
    }
}

pub fn voronoi_table(
    igusa: &IgusaTable,
    e10_toric: &Rational,
    stabilizer_order: usize,
) -> Result<VoronoiTable, TablesError> {
    if stabilizer_order == 0 {
        return Err(TablesError::ZeroStabilizer);
    }
    let rows = (0..=TOP_DEGREE)
        .map(|k| {
            (0..=TOP_DEGREE - k)
                .map(|l| match l {
                    0 => igusa.a[k].clone(),
                    TOP_DEGREE => e10_toric / Rational::from_integer(BigInt::from(stabilizer_order)),
                    _ => Rational::zero(),
                })
                .collect()
        })
        .collect();
    Ok(VoronoiTable { rows })
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `⟨L^k (D^Vor)^m E^l⟩`, expanding `D^Vor = F - 4E`.
pub fn geometric_basis(v: &VoronoiTable, k: usize, m: usize, l: usize) -> Result<Rational, TablesError> {
    if k + m + l != TOP_DEGREE {
        return Err(TablesError::Degree { k, m, l });
    }
    let c = BigInt::from(-CLASS_CONSTANTS.pullback_e_coefficient);
    let mut total = Rational::zero();
    for j in 0..=m {
        let a = v.get(k, l + j);
        if a.is_zero() {
            continue;
        }
        total += a * Rational::from_integer(binomial(m, j) * c.pow(j as u32));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::proportionality::l_top;

    fn expected_igusa_values() -> [Rational; 11] {
        [
            rat(101449217, 1440),
            rat(1636249, 1080),
            int(0),
            rat(-1759, 1680),
            int(0),
            int(0),
            rat(-1, 3780),
            int(0),
            int(0),
            int(0),
            rat(1, 907200),
        ]
    }

    #[test]
    fn igusa_table_from_recurrence() {
        let t = igusa_table(&l_top(4).value, &FaberData::genus_four());
        assert_eq!(t.a[9], int(0));
        assert_eq!(t.a[3], rat(-1759, 1680));
        assert_eq!(t.a[0], rat(101449217, 1440));
        assert_eq!(t.a, expected_igusa_values());
    }

    #[test]
    fn recurrence_check_and_sensitivity() {
        let b = FaberData::genus_four();
        let mut t = igusa_table(&l_top(4).value, &b);
        assert!(verify_recurrence(&t, &b).holds);
        assert!(t.a[7..=9].iter().all(Zero::is_zero));
        assert!(b.b[7].is_zero() && b.b[8].is_zero());
        t.a[0] += int(1);
        let r = verify_recurrence(&t, &b);
        assert!(!r.holds);
        assert_eq!(r.first_failure, Some(1));
    }

    fn voronoi() -> VoronoiTable {
        let t = igusa_table(&l_top(4).value, &FaberData::genus_four());
        voronoi_table(&t, &int(-1680), 1152).unwrap()
    }

    #[test]
    fn voronoi_values() {
        let v = voronoi();
        assert_eq!(v.get(0, 10), rat(-35, 24));
        assert_eq!(v.get(6, 0), rat(-1, 3780));
        assert_eq!(v.get(3, 5), int(0));
        assert_eq!(v.entries().count(), 66);
        let t = igusa_table(&l_top(4).value, &FaberData::genus_four());
        assert!(matches!(voronoi_table(&t, &int(-1680), 0), Err(TablesError::ZeroStabilizer)));
    }

    #[test]
    fn geometric_basis_values() {
        let v = voronoi();
        assert_eq!(geometric_basis(&v, 10, 0, 0).unwrap(), rat(1, 907200));
        assert_eq!(geometric_basis(&v, 6, 4, 0).unwrap(), rat(-1, 3780));
        let expected = rat(101449217, 1440) + int(4i64.pow(10)) * rat(-35, 24);
        assert_eq!(geometric_basis(&v, 0, 10, 0).unwrap(), expected);
        assert_eq!(geometric_basis(&v, 0, 0, 10).unwrap(), rat(-35, 24));
        assert!(matches!(geometric_basis(&v, 1, 1, 1), Err(TablesError::Degree { .. })));
        for k in 0..=10 {
            assert_eq!(geometric_basis(&v, k, 10 - k, 0).unwrap() == v.get(k, 0), (1..=10 - k).all(|j| v.get(k, j).is_zero()));
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 0), BigInt::one());
        assert_eq!(binomial(10, 3), BigInt::from(120));
        assert_eq!(binomial(4, 4), BigInt::one());
    }
}
