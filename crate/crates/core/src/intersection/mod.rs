//! Top intersection numbers of torus-invariant divisors on the star of a
//! center ray, where the center divisor `E` has index 0 and `D_i` index `i`.
//!
//! Two independent routes are provided: the linear system obtained by
//! multiplying the linear equivalences with E-divisible monomials
//! ([`system`]), and a recursive rewrite of repeated factors ([`recursive`]).

pub mod recursive;
pub mod system;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact::{ExactError, Rational};
use crate::fan::{RaySet, StarFan};

pub use recursive::RecursiveEvaluator;
pub use system::{assemble_system, solve_e10, LinearSystem, MultiplierSet, SolvedSystem, SystemDiagnostics};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntersectionError {
    #[error("monomial {0} is not square-free")]
    NotSquareFree(String),
    #[error("monomial {monomial} has degree {got}, expected {expected}")]
    Degree {
        monomial: String,
        got: u32,
        expected: usize,
    },
    #[error("monomial {0} does not contain E and cannot be localized to the star")]
    NotLocalized(String),
    #[error("monomial has {got} exponents but the fan has {expected} rays")]
    Arity { got: usize, expected: usize },
    #[error("no covector isolates ray {ray} on the support of {monomial}")]
    NoCovector { ray: usize, monomial: String },
    #[error("E^top is not determined by the system; free unknowns: {}", .free.join(", "))]
    Underdetermined { free: Vec<String> },
    #[error("cannot parse monomial: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Exponent vector over the star rays; index 0 is `E`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorMonomial {
    exponents: Vec<u8>,
}

impl DivisorMonomial {
    pub fn new(exponents: Vec<u8>) -> Self {
        Self { exponents }
    }

    pub fn one(ray_count: usize) -> Self {
        Self::new(vec![0; ray_count])
    }

    /// `E^k` over `ray_count` rays.
    pub fn center_power(ray_count: usize, k: u8) -> Self {
        let mut m = Self::one(ray_count);
        m.exponents[0] = k;
        m
    }

    /// The square-free product of the given rays.
    pub fn from_rays(ray_count: usize, rays: RaySet) -> Self {
        let mut m = Self::one(ray_count);
        for r in rays.iter() {
            m.exponents[r] = 1;
        }
        m
    }

    pub fn exponents(&self) -> &[u8] {
        &self.exponents
    }

    pub fn exponent(&self, ray: usize) -> u8 {
        self.exponents[ray]
    }

    pub fn ray_count(&self) -> usize {
        self.exponents.len()
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().map(|&e| u32::from(e)).sum()
    }

    pub fn support(&self) -> RaySet {
        RaySet::from_indices(self.exponents.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i))
    }

    pub fn is_square_free(&self) -> bool {
        self.exponents.iter().all(|&e| e <= 1)
    }

    /// Multiplies by one more factor of `ray`.
    pub fn times(&self, ray: usize) -> Self {
        let mut m = self.clone();
        m.exponents[ray] += 1;
        m
    }

    /// Divides out one factor of `ray`, if present.
    pub fn without(&self, ray: usize) -> Option<Self> {
        let mut m = self.clone();
        m.exponents[ray] = m.exponents[ray].checked_sub(1)?;
        Some(m)
    }

    /// Relabels rays: ray `i` becomes ray `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let mut exponents = vec![0; self.exponents.len()];
        for (i, &e) in self.exponents.iter().enumerate() {
            exponents[perm[i]] = e;
        }
        Self { exponents }
    }

    /// Parses `E^2*D3*D5`-style products over `ray_count` rays (`E` plus
    /// `D1..D{ray_count-1}`). Repeated factors accumulate.
    pub fn parse(s: &str, ray_count: usize) -> Result<Self, IntersectionError> {
        let err = |msg: String| IntersectionError::Parse(msg);
        let mut m = Self::one(ray_count);
        if s.trim().is_empty() {
            return Err(err("empty monomial".into()));
        }
        for factor in s.split('*') {
            let factor = factor.trim();
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => {
                    let e: u8 = e
                        .trim()
                        .parse()
                        .map_err(|_| err(format!("bad exponent in '{factor}'")))?;
                    (b.trim(), e)
                }
                None => (factor, 1),
            };
            let ray = if base == "E" {
                0
            } else if let Some(k) = base.strip_prefix('D') {
                let k: usize = k.parse().map_err(|_| err(format!("bad divisor '{base}'")))?;
                if k == 0 || k >= ray_count {
                    return Err(err(format!("divisor index {k} out of range 1..={}", ray_count - 1)));
                }
                k
            } else {
                return Err(err(format!("unknown factor '{factor}'")));
            };
            m.exponents[ray] = m.exponents[ray]
                .checked_add(exp)
                .ok_or_else(|| err("exponent overflow".into()))?;
        }
        Ok(m)
    }
}

impl fmt::Display for DivisorMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if i == 0 {
                write!(f, "E")?;
            } else {
                write!(f, "D{i}")?;
            }
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

impl fmt::Debug for DivisorMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses against the 13 rays of the genus-4 star.
impl FromStr for DivisorMonomial {
    type Err = IntersectionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s, 13)
    }
}

fn check_arity(m: &DivisorMonomial, fan: &StarFan) -> Result<(), IntersectionError> {
    if m.ray_count() != fan.ray_count() {
        return Err(IntersectionError::Arity {
            got: m.ray_count(),
            expected: fan.ray_count(),
        });
    }
    Ok(())
}

fn check_degree(m: &DivisorMonomial, fan: &StarFan) -> Result<(), IntersectionError> {
    check_arity(m, fan)?;
    if m.degree() as usize != fan.dim() {
        return Err(IntersectionError::Degree {
            monomial: m.to_string(),
            got: m.degree(),
            expected: fan.dim(),
        });
    }
    Ok(())
}

/// Distinct divisors of a smooth fan meet transversally in one point when
/// their rays span a top cone, and not at all otherwise.
pub fn squarefree_value(m: &DivisorMonomial, fan: &StarFan) -> Result<Rational, IntersectionError> {
    check_degree(m, fan)?;
    if !m.is_square_free() {
        return Err(IntersectionError::NotSquareFree(m.to_string()));
    }
    Ok(if fan.is_top_cone(m.support()) {
        Rational::one()
    } else {
        Rational::zero()
    })
}

/// `Σ_ρ ⟨m_j, v_ρ⟩ D_ρ ~ 0` for the j-th coordinate functional `m_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearRelation {
    pub index: usize,
    /// Coefficient of each star ray, `E` first.
    pub coefficients: Vec<BigInt>,
}

impl LinearRelation {
    pub fn center_coefficient(&self) -> &BigInt {
        &self.coefficients[0]
    }
}

pub fn build_relations(fan: &StarFan) -> Vec<LinearRelation> {
    (0..fan.dim())
        .map(|j| LinearRelation {
            index: j,
            coefficients: fan.rays().iter().map(|r| r[j].clone()).collect(),
        })
        .collect()
}
