use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{ExactError, RatVector, Rational};

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<BigInt>;
pub type RatMatrix = Matrix<Rational>;

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }
}

impl<T: Clone> Matrix<T> {
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self, ExactError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(ExactError::Dimension("ragged rows".into()));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().cloned().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, f: F) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero,
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T>,
{
    pub fn mul(&self, other: &Self) -> Result<Self, ExactError> {
        if self.cols != other.rows {
            return Err(ExactError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] = out[(i, j)].clone() + prod;
                }
            }
        }
        Ok(out)
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl IntMatrix {
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::from_rows(&rows).expect("rectangular literal")
    }

    pub fn to_rational(&self) -> RatMatrix {
        self.map(|x| Rational::from_integer(x.clone()))
    }
}

/// Exact determinant by Bareiss fraction-free elimination.
pub fn int_det(a: &IntMatrix) -> Result<BigInt, ExactError> {
    if !a.is_square() {
        return Err(ExactError::Dimension(format!(
            "determinant of a non-square {}x{} matrix",
            a.rows, a.cols
        )));
    }
    let n = a.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                return Ok(BigInt::zero());
            };
            m.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                m[(i, j)] = v;
            }
            m[(i, k)] = BigInt::zero();
        }
        prev = m[(k, k)].clone();
    }
    Ok(sign * &m[(n - 1, n - 1)])
}

/// Reduced row echelon form in place; returns the pivot columns.
/// `width` limits pivot search to the first `width` columns.
fn rref(m: &mut RatMatrix, width: usize, origin: &mut [usize]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        m.swap_rows(r, p);
        origin.swap(r, p);
        let inv = m[(r, c)].recip();
        for j in c..m.cols {
            if !m[(r, j)].is_zero() {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
        }
        for i in 0..m.rows {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let f = m[(i, c)].clone();
            for j in c..m.cols {
                if m[(r, j)].is_zero() {
                    continue;
                }
                let v = &m[(i, j)] - &f * &m[(r, j)];
                m[(i, j)] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(a: &RatMatrix) -> usize {
    let mut m = a.clone();
    let mut origin: Vec<usize> = (0..m.rows).collect();
    rref(&mut m, a.cols, &mut origin).len()
}

/// Basis of the right kernel `{x : A x = 0}`, one vector per free column.
pub fn nullspace(a: &RatMatrix) -> Vec<RatVector> {
    let mut m = a.clone();
    let mut origin: Vec<usize> = (0..m.rows).collect();
    let pivots = rref(&mut m, a.cols, &mut origin);
    let free: Vec<usize> = (0..a.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); a.cols];
            v[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[(r, f)].clone();
            }
            v
        })
        .collect()
}

/// Result of an exact solve. Free unknowns are set to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub values: RatVector,
    /// Columns that carry a pivot after full reduction.
    pub pivots: Vec<usize>,
    /// Columns without a pivot.
    pub free: Vec<usize>,
    /// Pivot columns whose reduced row has no free-column entries, i.e.
    /// unknowns with the same value in every solution.
    pub determined: Vec<bool>,
}

impl Solution {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_unique(&self) -> bool {
        self.free.is_empty()
    }
}

/// Gauss-Jordan solve of `A x = rhs` over the rationals. Overdetermined
/// systems are reduced fully and every leftover row is checked.
pub fn solve_exact(a: &RatMatrix, rhs: &[Rational]) -> Result<Solution, ExactError> {
    if rhs.len() != a.rows {
        return Err(ExactError::Dimension(format!(
            "rhs has length {} but matrix has {} rows",
            rhs.len(),
            a.rows
        )));
    }
    let n = a.cols;
    let mut aug = RatMatrix::zeros(a.rows, n + 1);
    for i in 0..a.rows {
        for j in 0..n {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, n)] = rhs[i].clone();
    }
    let mut origin: Vec<usize> = (0..a.rows).collect();
    let pivots = rref(&mut aug, n, &mut origin);
    for i in pivots.len()..a.rows {
        if !aug[(i, n)].is_zero() {
            return Err(ExactError::Inconsistent {
                row: origin[i],
                residual: aug[(i, n)].clone(),
            });
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut values = vec![Rational::zero(); n];
    let mut determined = vec![false; n];
    for (r, &p) in pivots.iter().enumerate() {
        values[p] = aug[(r, n)].clone();
        determined[p] = free.iter().all(|&f| aug[(r, f)].is_zero());
    }
    Ok(Solution {
        values,
        pivots,
        free,
        determined,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use proptest::prelude::*;

    fn to_int(m: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(&m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn det_examples() {
        assert_eq!(int_det(&IntMatrix::identity(10)).unwrap(), BigInt::one());
        let mut d = IntMatrix::identity(10);
        d[(9, 9)] = BigInt::from(2);
        assert_eq!(int_det(&d).unwrap(), BigInt::from(2));
        let z = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(int_det(&z).unwrap(), BigInt::from(-1));
    }

    #[test]
    fn det_of_non_square_is_an_error() {
        let m = IntMatrix::from_i64(&[&[1, 2, 3]]);
        assert!(matches!(int_det(&m), Err(ExactError::Dimension(_))));
    }

    #[test]
    fn solve_identity_and_diagonal() {
        let id = RatMatrix::identity(3);
        let v = vec![rat(1, 2), int(-4), rat(7, 3)];
        assert_eq!(solve_exact(&id, &v).unwrap().values, v);

        let d = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]).to_rational();
        let s = solve_exact(&d, &[int(1), int(1)]).unwrap();
        assert_eq!(s.values, vec![rat(1, 2), rat(1, 3)]);
        assert!(s.is_unique());
    }

    #[test]
    fn inconsistent_system_names_the_row() {
        let a = IntMatrix::from_i64(&[&[1, 1], &[2, 2], &[1, -1]]).to_rational();
        let err = solve_exact(&a, &[int(1), int(3), int(0)]).unwrap_err();
        assert!(matches!(err, ExactError::Inconsistent { row: 1, .. }));
    }

    #[test]
    fn underdetermined_reports_free_and_determined_columns() {
        // x0 + x1 = 1, x2 = 5
        let a = IntMatrix::from_i64(&[&[1, 1, 0], &[0, 0, 1]]).to_rational();
        let s = solve_exact(&a, &[int(1), int(5)]).unwrap();
        assert_eq!(s.pivots, vec![0, 2]);
        assert_eq!(s.free, vec![1]);
        assert_eq!(s.determined, vec![false, false, true]);
        assert_eq!(s.values[2], int(5));
    }

    #[test]
    fn nullspace_is_annihilated() {
        let a = IntMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6]]).to_rational();
        let ns = nullspace(&a);
        assert_eq!(ns.len(), 2);
        for v in ns {
            for i in 0..2 {
                let s: Rational = (0..3).map(|j| &a[(i, j)] * &v[j]).sum();
                assert!(s.is_zero());
            }
        }
    }

    fn small_matrix(max_n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1..=max_n).prop_flat_map(|n| proptest::collection::vec(proptest::collection::vec(-5i64..=5, n), n))
    }

    proptest! {
        #[test]
        fn bareiss_matches_cofactor_expansion(m in small_matrix(4)) {
            prop_assert_eq!(int_det(&to_int(&m)).unwrap(), crate::oracles::cofactor_det(&m));
        }

        #[test]
        fn solution_substitutes_back_exactly(
            rows in 1usize..7,
            cols in 1usize..6,
            seed in proptest::collection::vec((-6i64..=6, 1i64..=4), 49),
            x in proptest::collection::vec(-9i64..=9, 7),
        ) {
            let mut a = RatMatrix::zeros(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    let (n, d) = seed[i * 7 + j];
                    a[(i, j)] = rat(n, d);
                }
            }
            // rhs built from a known solution, so the system is consistent.
            let rhs: Vec<Rational> = (0..rows)
                .map(|i| (0..cols).map(|j| &a[(i, j)] * int(x[j])).sum())
                .collect();
            let s = solve_exact(&a, &rhs).unwrap();
            for i in 0..rows {
                let lhs: Rational = (0..cols).map(|j| &a[(i, j)] * &s.values[j]).sum();
                prop_assert_eq!(&lhs, &rhs[i]);
            }
            for (j, &det) in s.determined.iter().enumerate() {
                if det {
                    prop_assert_eq!(&s.values[j], &int(x[j]));
                }
            }
        }
    }
}
