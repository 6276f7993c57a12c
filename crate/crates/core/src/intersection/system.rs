//! The linear system for E-divisible intersection numbers.
//!
//! Each linear equivalence is multiplied by a monomial `M` of degree `dim-1`
//! that contains `E`. Every product `D_ρ·M` is then either zero (its rays span
//! no cone), a known 0/1 constant (square-free), or an unknown.

use std::cmp::Reverse;
use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{build_relations, squarefree_value, DivisorMonomial, IntersectionError, LinearRelation};
use crate::exact::{solve_sparse, Rational, Solution, SparseRow};
use crate::fan::StarFan;

/// Which degree-(dim-1) multipliers generate rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MultiplierSet {
    /// `E^(dim-1-k)·D_{i1}···D_{ik}` for each face `{i1..ik}` of the link,
    /// `k ≤ dim-2`.
    #[default]
    FacePowers,
    /// Every degree-(dim-1) monomial with `E` in its support and rays
    /// spanning a cone. Only practical for small fans.
    AllEPositive,
}

#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub ray_count: usize,
    pub dim: usize,
    pub multiplier_set: MultiplierSet,
    /// Unknowns ordered by decreasing support size.
    pub unknowns: Vec<DivisorMonomial>,
    pub index: HashMap<DivisorMonomial, usize>,
    pub rows: Vec<SparseRow>,
    /// The (relation, multiplier) pair behind each row.
    pub row_origins: Vec<(usize, DivisorMonomial)>,
    pub multipliers: Vec<DivisorMonomial>,
    /// Rows whose terms all vanished, so they carry no information.
    pub empty_rows: usize,
}

impl LinearSystem {
    pub fn center_power(&self) -> DivisorMonomial {
        DivisorMonomial::center_power(self.ray_count, self.dim as u8)
    }

    pub fn column(&self, m: &DivisorMonomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

fn multipliers(fan: &StarFan, set: MultiplierSet) -> Vec<DivisorMonomial> {
    let n = fan.dim();
    let rc = fan.ray_count();
    let mut out = Vec::new();
    for face in fan.center_faces() {
        let k = face.len() - 1;
        match set {
            MultiplierSet::FacePowers => {
                if k + 2 <= n {
                    let mut m = DivisorMonomial::from_rays(rc, face);
                    m = (1..n - 1 - k).fold(m, |acc, _| acc.times(0));
                    out.push(m);
                }
            }
            MultiplierSet::AllEPositive => {
                if face.len() < n {
                    let rays: Vec<usize> = face.iter().collect();
                    compositions(n - 1 - face.len(), rays.len(), &mut |extra| {
                        let mut m = DivisorMonomial::from_rays(rc, face);
                        for (r, &x) in rays.iter().zip(extra) {
                            for _ in 0..x {
                                m = m.times(*r);
                            }
                        }
                        out.push(m);
                    });
                }
            }
        }
    }
    out.sort();
    out
}

/// Calls `f` with every way to write `total` as an ordered sum of `parts`
/// non-negative integers.
fn compositions(total: usize, parts: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(left: usize, buf: &mut Vec<usize>, parts: usize, f: &mut dyn FnMut(&[usize])) {
        if buf.len() + 1 == parts {
            buf.push(left);
            f(buf);
            buf.pop();
            return;
        }
        for x in 0..=left {
            buf.push(x);
            go(left - x, buf, parts, f);
            buf.pop();
        }
    }
    if parts == 0 {
        if total == 0 {
            f(&[]);
        }
        return;
    }
    go(total, &mut Vec::with_capacity(parts), parts, f);
}

pub fn assemble_system(
    fan: &StarFan,
    relations: &[LinearRelation],
    set: MultiplierSet,
) -> Result<LinearSystem, IntersectionError> {
    let mults = multipliers(fan, set);
    let mut raw_rows: Vec<(Vec<(DivisorMonomial, BigInt)>, Rational)> = Vec::new();
    let mut row_origins = Vec::new();
    let mut unknowns: BTreeSet<(Reverse<usize>, DivisorMonomial)> = BTreeSet::new();
    let mut empty_rows = 0;

    for m in &mults {
        for rel in relations {
            let mut terms = Vec::new();
            let mut rhs = Rational::zero();
            for (ray, coef) in rel.coefficients.iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                let term = m.times(ray);
                if !fan.is_face(term.support()) {
                    continue;
                }
                if term.is_square_free() {
                    rhs -= squarefree_value(&term, fan)? * coef;
                } else {
                    unknowns.insert((Reverse(term.support().len()), term.clone()));
                    terms.push((term, coef.clone()));
                }
            }
            if terms.is_empty() && rhs.is_zero() {
                empty_rows += 1;
                continue;
            }
            raw_rows.push((terms, rhs));
            row_origins.push((rel.index, m.clone()));
        }
    }

    let unknowns: Vec<DivisorMonomial> = unknowns.into_iter().map(|(_, m)| m).collect();
    let index: HashMap<DivisorMonomial, usize> =
        unknowns.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    let mut rows = Vec::with_capacity(raw_rows.len());
    for (terms, rhs) in raw_rows {
        let mut row = SparseRow::new();
        for (term, coef) in terms {
            let col = index.get(&term).copied().ok_or_else(|| {
                IntersectionError::Internal(format!("{term} is neither constant, zero, nor an unknown"))
            })?;
            row.add(col, Rational::from_integer(coef));
        }
        row.rhs = rhs;
        rows.push(row);
    }

    Ok(LinearSystem {
        ray_count: fan.ray_count(),
        dim: fan.dim(),
        multiplier_set: set,
        unknowns,
        index,
        rows,
        row_origins,
        multipliers: mults,
        empty_rows,
    })
}

/// Rank information for an assembled and solved system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemDiagnostics {
    pub rows: usize,
    pub unknowns: usize,
    pub multipliers: usize,
    pub rank: usize,
    pub free_unknowns: Vec<String>,
    pub determined_unknowns: usize,
    pub center_power_determined: bool,
}

#[derive(Debug, Clone)]
pub struct SolvedSystem {
    pub system: LinearSystem,
    pub solution: Solution,
}

impl SolvedSystem {
    pub fn solve(system: LinearSystem) -> Result<Self, IntersectionError> {
        let solution = solve_sparse(system.unknowns.len(), system.rows.clone())?;
        Ok(Self { system, solution })
    }

    /// Assembles and solves in one step.
    pub fn for_fan(fan: &StarFan, set: MultiplierSet) -> Result<Self, IntersectionError> {
        let relations = build_relations(fan);
        Self::solve(assemble_system(fan, &relations, set)?)
    }

    /// The solved value of an unknown, if it is an unknown and determined.
    pub fn unknown_value(&self, m: &DivisorMonomial) -> Option<&Rational> {
        let col = self.system.column(m)?;
        self.solution.determined[col].then(|| &self.solution.values[col])
    }

    /// Value of any E-divisible top-degree monomial the system knows about:
    /// zero off the fan, 0/1 for square-free monomials, or a determined unknown.
    pub fn value(&self, m: &DivisorMonomial, fan: &StarFan) -> Option<Rational> {
        if !fan.is_face(m.support()) {
            return Some(Rational::zero());
        }
        if m.is_square_free() {
            return squarefree_value(m, fan).ok();
        }
        self.unknown_value(m).cloned()
    }

    pub fn diagnostics(&self) -> SystemDiagnostics {
        let s = &self.system;
        let center = s.center_power();
        SystemDiagnostics {
            rows: s.rows.len(),
            unknowns: s.unknowns.len(),
            multipliers: s.multipliers.len(),
            rank: self.solution.rank(),
            free_unknowns: self.solution.free.iter().map(|&c| s.unknowns[c].to_string()).collect(),
            determined_unknowns: self.solution.determined.iter().filter(|&&d| d).count(),
            center_power_determined: s
                .column(&center)
                .is_some_and(|c| self.solution.determined[c]),
        }
    }

    /// `E^dim`, erroring unless it is uniquely determined.
    pub fn center_power_value(&self) -> Result<Rational, IntersectionError> {
        let center = self.system.center_power();
        match self.unknown_value(&center) {
            Some(v) => Ok(v.clone()),
            None => Err(IntersectionError::Underdetermined {
                free: self.diagnostics().free_unknowns,
            }),
        }
    }
}

/// Solves the system and returns the top self-intersection of `E`.
pub fn solve_e10(system: LinearSystem) -> Result<Rational, IntersectionError> {
    SolvedSystem::solve(system)?.center_power_value()
}

/// The number of 1-valued square-free monomials (one per top cone).
pub fn point_count(fan: &StarFan) -> usize {
    fan.top_cones()
        .iter()
        .filter(|c| squarefree_value(&DivisorMonomial::from_rays(fan.ray_count(), **c), fan).is_ok_and(|v| v.is_one()))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    pub(crate) fn projective_plane() -> StarFan {
        StarFan::from_i64(&[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[0, 2]]).unwrap()
    }

    /// Star of the exceptional ray (1,1) in the blow-up of the plane at a point.
    pub(crate) fn blown_up_plane() -> StarFan {
        StarFan::from_i64(&[&[1, 1], &[1, 0], &[0, 1]], &[&[0, 1], &[0, 2]]).unwrap()
    }

    #[test]
    fn compositions_enumerate() {
        let mut seen = Vec::new();
        compositions(2, 2, &mut |c| seen.push(c.to_vec()));
        assert_eq!(seen, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        let mut n = 0;
        compositions(0, 0, &mut |_| n += 1);
        assert_eq!(n, 1);
    }

    #[test]
    fn first_row_is_center_times_relation() {
        let fan = projective_plane();
        let rels = build_relations(&fan);
        let sys = assemble_system(&fan, &rels, MultiplierSet::FacePowers).unwrap();
        assert_eq!(sys.multipliers, vec![DivisorMonomial::parse("E", 3).unwrap()]);
        // relation 0: 1·E² + 0·E·D1 - 1·E·D2 = 0, with E·D2 = 1.
        assert_eq!(sys.unknowns, vec![DivisorMonomial::parse("E^2", 3).unwrap()]);
        let row = &sys.rows[0];
        assert_eq!(row.entries[&0], int(1));
        assert_eq!(row.rhs, int(1));
    }

    #[test]
    fn toy_self_intersections() {
        for set in [MultiplierSet::FacePowers, MultiplierSet::AllEPositive] {
            assert_eq!(solve_e10(assemble_system(&projective_plane(), &build_relations(&projective_plane()), set).unwrap()).unwrap(), int(1));
            let bl = blown_up_plane();
            assert_eq!(solve_e10(assemble_system(&bl, &build_relations(&bl), set).unwrap()).unwrap(), int(-1));
        }
    }

    #[test]
    fn underdetermined_is_reported() {
        // Drop every row: nothing determines E^2.
        let fan = projective_plane();
        let mut sys = assemble_system(&fan, &build_relations(&fan), MultiplierSet::FacePowers).unwrap();
        sys.rows.clear();
        let err = solve_e10(sys).unwrap_err();
        assert!(matches!(err, IntersectionError::Underdetermined { ref free } if free == &vec!["E^2".to_string()]));
    }

    #[test]
    fn inconsistency_is_reported() {
        let fan = projective_plane();
        let mut sys = assemble_system(&fan, &build_relations(&fan), MultiplierSet::FacePowers).unwrap();
        let mut extra = sys.rows[0].clone();
        extra.rhs += int(1);
        sys.rows.push(extra);
        assert!(matches!(solve_e10(sys), Err(IntersectionError::Exact(_))));
    }

    #[test]
    fn point_count_matches_top_cones() {
        assert_eq!(point_count(&projective_plane()), 2);
    }
}
