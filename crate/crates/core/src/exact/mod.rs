//! Exact arithmetic kernel: arbitrary-precision rationals, dense integer and
//! rational matrices, fraction-free determinants, and exact linear solves.
//!
//! Nothing in this crate uses floating point.

mod matrix;
mod sparse;

pub use matrix::{int_det, rank, nullspace, solve_exact, IntMatrix, Matrix, RatMatrix, Solution};
pub use sparse::{solve_sparse, SparseRow};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

/// Arbitrary-precision fraction, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// A column vector of rationals.
pub type RatVector = Vec<Rational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("inconsistent linear system: row {row} reduces to 0 = {residual}")]
    Inconsistent { row: usize, residual: Rational },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Exact `a op b`.
pub fn rational_arith(a: &Rational, b: &Rational, op: ArithOp) -> Result<Rational, ExactError> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => {
            if b.is_zero() {
                return Err(ExactError::DivisionByZero);
            }
            a / b
        }
    })
}

/// Shorthand for `n/d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// gcd of the absolute values of the entries; 0 for the zero vector.
pub fn gcd_content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

/// Divides a nonzero integer vector by its content.
pub fn primitive(v: &[BigInt]) -> Option<Vec<BigInt>> {
    let c = gcd_content(v);
    if c.is_zero() {
        return None;
    }
    Some(v.iter().map(|x| x / &c).collect())
}

/// Scales a rational vector to the unique primitive integer vector on the same
/// positive ray. Returns `None` for the zero vector.
pub fn primitive_integer(v: &[Rational]) -> Option<Vec<BigInt>> {
    let lcm = v.iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    primitive(&scaled)
}

pub fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_rat_int(a: &[Rational], b: &[BigInt]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, _)| !x.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

pub fn to_bigints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Renders `n/d`, or just `n` for integers.
pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Inverse of [`format_rational`]; accepts `n` or `n/d` with optional sign.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::from(1)),
    };
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}
