//! Top self-intersection of the modular-forms line bundle `L` on the moduli
//! space of principally polarized abelian g-folds, from the leading
//! coefficient of the cusp-form dimension growth:
//!
//! `L^{g(g+1)/2} = (g(g+1)/2)! · 2^{(g-1)(g-2)/2} · Π_{j=1}^{g} (j-1)!/(2j)! · |B_{2j}|`

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exact::Rational;

/// Bernoulli numbers (`B_1 = -1/2`) from `Σ_{k=0}^{n} C(n+1, k) B_k = 0`,
/// extended on demand.
#[derive(Debug, Clone)]
pub struct BernoulliTable {
    values: Vec<Rational>,
}

impl Default for BernoulliTable {
    fn default() -> Self {
        Self::new()
    }
}

impl BernoulliTable {
    pub fn new() -> Self {
        Self {
            values: vec![Rational::one()],
        }
    }

    pub fn get(&mut self, n: usize) -> Rational {
        while self.values.len() <= n {
            let m = self.values.len();
            // B_m = -1/(m+1) Σ_{k<m} C(m+1, k) B_k
            let mut binom = BigInt::one();
            let mut acc = Rational::zero();
            for (k, b) in self.values.iter().enumerate() {
                if k > 0 {
                    binom = binom * BigInt::from(m + 2 - k) / BigInt::from(k);
                }
                if !b.is_zero() {
                    acc += b * &binom;
                }
            }
            let next = -acc / Rational::from_integer(BigInt::from(m + 1));
            self.values.push(next);
        }
        self.values[n].clone()
    }
}

/// `B_n`; zero for odd `n > 1`.
pub fn bernoulli(n: usize) -> Rational {
    BernoulliTable::new().get(n)
}

/// How the Bernoulli factors enter the product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignConvention {
    /// `|B_2j|`, which keeps the volume positive for every genus.
    #[default]
    Absolute,
    /// The raw signed `B_2j`; negative for g ≡ 2, 3 (mod 4).
    Signed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProportionalityResult {
    pub genus: usize,
    pub top_power: usize,
    pub value: Rational,
    /// Half the value: the number on the stack, where `-1` acts trivially on
    /// the coarse space.
    pub stack_value: Rational,
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn l_top(genus: usize) -> ProportionalityResult {
    l_top_with(genus, SignConvention::Absolute)
}

pub fn l_top_with(genus: usize, sign: SignConvention) -> ProportionalityResult {
    assert!(genus >= 1, "genus must be positive");
    let g = genus;
    let top_power = g * (g + 1) / 2;
    let mut table = BernoulliTable::new();
    let mut value = Rational::from_integer(factorial(top_power) << ((g - 1) * g.saturating_sub(2) / 2));
    for j in 1..=g {
        let b = table.get(2 * j);
        let b = match sign {
            SignConvention::Absolute => b.abs(),
            SignConvention::Signed => b,
        };
        value = value * Rational::new(factorial(j - 1), factorial(2 * j)) * b;
    }
    let stack_value = &value / Rational::from_integer(BigInt::from(2));
    ProportionalityResult {
        genus,
        top_power,
        value,
        stack_value,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::oracles::{bernoulli_closed_form, bernoulli_recurrence_residual, staudt_clausen_denominator};

    #[test]
    fn small_bernoulli_values() {
        assert_eq!(bernoulli(0), rat(1, 1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(4), rat(-1, 30));
        assert_eq!(bernoulli(8), rat(-1, 30));
        assert_eq!(bernoulli(7), rat(0, 1));
    }

    #[test]
    fn recurrence_matches_closed_form() {
        let mut t = BernoulliTable::new();
        for n in 0..=24 {
            assert_eq!(t.get(n), bernoulli_closed_form(n), "B_{n}");
        }
    }

    #[test]
    fn defining_recurrence_holds() {
        let mut t = BernoulliTable::new();
        for n in 1..=20usize {
            let values: Vec<Rational> = (0..=n).map(|k| t.get(k)).collect();
            assert!(bernoulli_recurrence_residual(&values).is_zero(), "n = {n}");
        }
    }

    #[test]
    fn von_staudt_clausen_denominators() {
        let mut t = BernoulliTable::new();
        for n in (2..=20).step_by(2) {
            let expected = staudt_clausen_denominator(n);
            assert_eq!(t.get(n).denom(), &expected, "B_{n}");
        }
    }

    #[test]
    fn genus_four_volume() {
        let r = l_top(4);
        assert_eq!(r.top_power, 10);
        assert_eq!(r.value, rat(1, 907200));
        assert_eq!(r.stack_value, rat(1, 1814400));
        assert_eq!(l_top_with(4, SignConvention::Signed).value, r.value);
    }

    #[test]
    fn genus_one_volume() {
        // 1! · 2^0 · (0!/2!) · |B_2| = 1/12
        assert_eq!(l_top(1).value, rat(1, 12));
    }

    #[test]
    fn absolute_convention_is_positive() {
        for g in 1..=8 {
            assert!(l_top(g).value.is_positive(), "g = {g}");
        }
        assert!(l_top_with(2, SignConvention::Signed).value.is_negative());
    }
}
