//! Recursive evaluation of E-divisible top intersection numbers.
//!
//! For a monomial with a repeated factor `D_ρ`, pick a covector `μ` that is 1
//! on `v_ρ` and 0 on the other rays of the support. The principal divisor of
//! `μ` lets one factor `D_ρ` be replaced by `-Σ ⟨μ, v_ρ'⟩ D_ρ'` over rays
//! outside the support. Each step enlarges the support, so the recursion ends
//! at square-free monomials, which are 0 or 1.

use std::collections::HashMap;

use num_traits::Zero;

use super::{check_degree, squarefree_value, DivisorMonomial, IntersectionError};
use crate::exact::{dot_rat_int, solve_exact, ExactError, RatMatrix, Rational};
use crate::fan::StarFan;

pub struct RecursiveEvaluator<'a> {
    fan: &'a StarFan,
    memo: HashMap<DivisorMonomial, Rational>,
}

impl<'a> RecursiveEvaluator<'a> {
    pub fn new(fan: &'a StarFan) -> Self {
        Self {
            fan,
            memo: HashMap::new(),
        }
    }

    pub fn fan(&self) -> &StarFan {
        self.fan
    }

    /// Number of cached non-square-free values.
    pub fn cached(&self) -> usize {
        self.memo.len()
    }

    pub fn evaluate(&mut self, m: &DivisorMonomial) -> Result<Rational, IntersectionError> {
        check_degree(m, self.fan)?;
        if m.exponent(0) == 0 {
            return Err(IntersectionError::NotLocalized(m.to_string()));
        }
        self.eval(m)
    }

    fn eval(&mut self, m: &DivisorMonomial) -> Result<Rational, IntersectionError> {
        let support = m.support();
        if !self.fan.is_face(support) {
            return Ok(Rational::zero());
        }
        if m.is_square_free() {
            return squarefree_value(m, self.fan);
        }
        if let Some(v) = self.memo.get(m) {
            return Ok(v.clone());
        }

        let rho = (0..m.ray_count())
            .find(|&i| m.exponent(i) >= 2)
            .expect("not square-free");
        let mu = self.isolating_covector(m, rho)?;
        let reduced = m.without(rho).expect("exponent >= 2");
        let mut total = Rational::zero();
        for other in 0..self.fan.ray_count() {
            if support.contains(other) || !self.fan.is_face(support.with(other)) {
                continue;
            }
            let c = dot_rat_int(&mu, self.fan.ray(other));
            if c.is_zero() {
                continue;
            }
            total -= c * self.eval(&reduced.times(other))?;
        }
        self.memo.insert(m.clone(), total.clone());
        Ok(total)
    }

    /// Solution of `⟨μ, v_t⟩ = [t = ρ]` for `t` in the support, with free
    /// coordinates set to zero.
    fn isolating_covector(&self, m: &DivisorMonomial, rho: usize) -> Result<Vec<Rational>, IntersectionError> {
        let support: Vec<usize> = m.support().iter().collect();
        let rows: Vec<Vec<Rational>> = support
            .iter()
            .map(|&t| self.fan.ray(t).iter().map(|x| Rational::from_integer(x.clone())).collect())
            .collect();
        let a = RatMatrix::from_rows(&rows)?;
        let rhs: Vec<Rational> = support
            .iter()
            .map(|&t| if t == rho { Rational::from_integer(1.into()) } else { Rational::zero() })
            .collect();
        match solve_exact(&a, &rhs) {
            Ok(s) => Ok(s.values),
            Err(ExactError::Inconsistent { .. }) => Err(IntersectionError::NoCovector {
                ray: rho,
                monomial: m.to_string(),
            }),
            Err(e) => Err(e.into()),
        }
    }
}
