use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use super::{ExactError, Rational, Solution};

/// One equation `Σ entries[c]·x_c = rhs` with only nonzero coefficients stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SparseRow {
    pub entries: BTreeMap<usize, Rational>,
    pub rhs: Rational,
}

impl SparseRow {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `coef` to the coefficient of column `col`, dropping it if it cancels.
    pub fn add(&mut self, col: usize, coef: Rational) {
        if coef.is_zero() {
            return;
        }
        let slot = self.entries.entry(col).or_insert_with(Rational::zero);
        *slot += coef;
        if slot.is_zero() {
            self.entries.remove(&col);
        }
    }
}

/// Sparse Gauss-Jordan elimination over the rationals.
///
/// Columns are processed in index order, so callers control the elimination
/// order through their column numbering. Among the unreduced rows that touch a
/// column, the pivot is the one whose largest column index is smallest, then
/// the one with fewest entries. Same contract as [`super::solve_exact`].
pub fn solve_sparse(ncols: usize, rows: Vec<SparseRow>) -> Result<Solution, ExactError> {
    let mut rows = rows;
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ncols];
    for (i, row) in rows.iter().enumerate() {
        if let Some((&c, _)) = row.entries.last_key_value() {
            if c >= ncols {
                return Err(ExactError::Dimension(format!(
                    "row {i} references column {c} of {ncols}"
                )));
            }
        }
        for &c in row.entries.keys() {
            col_rows[c].insert(i);
        }
    }

    let mut is_pivot_row = vec![false; rows.len()];
    let mut pivot_row_of: Vec<Option<usize>> = vec![None; ncols];

    for c in 0..ncols {
        let pick = col_rows[c]
            .iter()
            .copied()
            .filter(|&r| !is_pivot_row[r])
            .min_by_key(|&r| {
                let row = &rows[r];
                let last = row.entries.last_key_value().map_or(0, |(&k, _)| k);
                (last, row.entries.len(), r)
            });
        let Some(p) = pick else { continue };
        is_pivot_row[p] = true;
        pivot_row_of[c] = Some(p);

        let inv = rows[p].entries[&c].recip();
        if !inv.is_one() {
            for v in rows[p].entries.values_mut() {
                *v *= &inv;
            }
            rows[p].rhs *= &inv;
        }
        let pivot = rows[p].clone();

        let targets: Vec<usize> = col_rows[c].iter().copied().filter(|&r| r != p).collect();
        for r in targets {
            let f = rows[r].entries[&c].clone();
            for (&k, v) in &pivot.entries {
                let delta = -(&f * v);
                let row = &mut rows[r];
                let had = row.entries.contains_key(&k);
                row.add(k, delta);
                let has = row.entries.contains_key(&k);
                if had && !has {
                    col_rows[k].remove(&r);
                } else if !had && has {
                    col_rows[k].insert(r);
                }
            }
            rows[r].rhs -= &f * &pivot.rhs;
        }
    }

    for (i, row) in rows.iter().enumerate() {
        if !is_pivot_row[i] && !row.rhs.is_zero() {
            debug_assert!(row.entries.is_empty());
            return Err(ExactError::Inconsistent {
                row: i,
                residual: row.rhs.clone(),
            });
        }
    }

    let mut values = vec![Rational::zero(); ncols];
    let mut determined = vec![false; ncols];
    let mut pivots = Vec::new();
    let mut free = Vec::new();
    for c in 0..ncols {
        match pivot_row_of[c] {
            Some(p) => {
                pivots.push(c);
                values[c] = rows[p].rhs.clone();
                determined[c] = rows[p].entries.len() == 1;
            }
            None => free.push(c),
        }
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
    use crate::exact::{int, rat, solve_exact, RatMatrix};
    use proptest::prelude::*;

    fn to_sparse(a: &RatMatrix, rhs: &[Rational]) -> Vec<SparseRow> {
        (0..a.rows())
            .map(|i| {
                let mut row = SparseRow::new();
                for j in 0..a.cols() {
                    row.add(j, a[(i, j)].clone());
                }
                row.rhs = rhs[i].clone();
                row
            })
            .collect()
    }

    #[test]
    fn add_cancels_entries() {
        let mut row = SparseRow::new();
        row.add(3, int(2));
        row.add(3, int(-2));
        row.add(1, int(0));
        assert!(row.entries.is_empty());
    }

    #[test]
    fn detects_inconsistency() {
        let mut r0 = SparseRow::new();
        r0.add(0, int(1));
        r0.rhs = int(1);
        let mut r1 = SparseRow::new();
        r1.add(0, int(2));
        r1.rhs = int(3);
        let err = solve_sparse(1, vec![r0, r1]).unwrap_err();
        assert_eq!(
            err,
            ExactError::Inconsistent {
                row: 1,
                residual: int(1)
            }
        );
    }

    #[test]
    fn rejects_out_of_range_columns() {
        let mut r0 = SparseRow::new();
        r0.add(5, int(1));
        assert!(matches!(solve_sparse(2, vec![r0]), Err(ExactError::Dimension(_))));
    }

    proptest! {
        #[test]
        fn agrees_with_dense_solver(
            rows in 1usize..8,
            cols in 1usize..7,
            seed in proptest::collection::vec((-3i64..=3, 1i64..=3), 56),
            x in proptest::collection::vec(-5i64..=5, 7),
            perturb in proptest::option::of(0usize..8),
        ) {
            let mut a = RatMatrix::zeros(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    let (n, d) = seed[i * 7 + j];
                    // Sparsify: roughly half the entries are zero.
                    if (n + d) % 2 == 0 {
                        a[(i, j)] = rat(n, d);
                    }
                }
            }
            let mut rhs: Vec<Rational> = (0..rows)
                .map(|i| (0..cols).map(|j| &a[(i, j)] * int(x[j])).sum())
                .collect();
            if let Some(p) = perturb.filter(|&p| p < rows) {
                rhs[p] += int(1);
            }
            let dense = solve_exact(&a, &rhs);
            let sparse = solve_sparse(cols, to_sparse(&a, &rhs));
            match (dense, sparse) {
                (Ok(d), Ok(s)) => {
                    prop_assert_eq!(&d.pivots, &s.pivots);
                    prop_assert_eq!(&d.determined, &s.determined);
                    for j in 0..cols {
                        if d.determined[j] {
                            prop_assert_eq!(&d.values[j], &s.values[j]);
                        }
                    }
                    for i in 0..rows {
                        let lhs: Rational = (0..cols).map(|j| &a[(i, j)] * &s.values[j]).sum();
                        prop_assert_eq!(&lhs, &rhs[i]);
                    }
                }
                (Err(ExactError::Inconsistent { .. }), Err(ExactError::Inconsistent { .. })) => {}
                (d, s) => prop_assert!(false, "dense {:?} vs sparse {:?}", d, s),
            }
        }
    }
}
