//! Rational polyhedral cones in a lattice `Z^n`, given by generators.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{self, dot_int, int_det, nullspace, primitive, primitive_integer, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("generator {0} is the zero vector")]
    ZeroGenerator(usize),
    #[error("generator {0} has length {1}, expected {2}")]
    Length(usize, usize, usize),
    #[error("generators {0} and {1} span the same ray")]
    DuplicateRay(usize, usize),
    #[error("cone of dimension {dim} is not full-dimensional in Z^{ambient}")]
    NotFullDimensional { dim: usize, ambient: usize },
    #[error("cone is not pointed")]
    NotPointed,
    #[error("cone with {generators} generators has dimension {dim}, so it is not simplicial")]
    NotSimplicial { generators: usize, dim: usize },
    #[error("ray index {index} out of range (fan has {count} rays)")]
    UnknownRay { index: usize, count: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    ambient: usize,
    generators: Vec<Vec<BigInt>>,
    dim: usize,
}

impl Cone {
    /// Builds a cone from nonzero generators, scaling each to its primitive
    /// vector. Two generators on the same ray are rejected.
    pub fn new(ambient: usize, generators: Vec<Vec<BigInt>>) -> Result<Self, ConeError> {
        let mut prims: Vec<Vec<BigInt>> = Vec::with_capacity(generators.len());
        for (i, g) in generators.iter().enumerate() {
            if g.len() != ambient {
                return Err(ConeError::Length(i, g.len(), ambient));
            }
            let p = primitive(g).ok_or(ConeError::ZeroGenerator(i))?;
            if let Some(j) = prims.iter().position(|q| *q == p) {
                return Err(ConeError::DuplicateRay(j, i));
            }
            prims.push(p);
        }
        let dim = if prims.is_empty() {
            0
        } else {
            exact::rank(&generator_matrix(&prims).to_rational())
        };
        Ok(Self {
            ambient,
            generators: prims,
            dim,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self, ConeError> {
        let ambient = rows.first().map_or(0, |r| r.len());
        Self::new(ambient, rows.iter().map(|r| exact::to_bigints(r)).collect())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_simplicial(&self) -> bool {
        self.dim == self.generators.len()
    }
}

fn generator_matrix(gens: &[Vec<BigInt>]) -> IntMatrix {
    IntMatrix::from_rows(gens).expect("generators share one length")
}

pub fn cone_dim(c: &Cone) -> usize {
    c.dim()
}

/// A codimension-one face: an inward primitive functional and the generators
/// it vanishes on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub normal: Vec<BigInt>,
    pub incident: BTreeSet<usize>,
}

impl Facet {
    pub fn evaluate(&self, v: &[BigInt]) -> BigInt {
        dot_int(&self.normal, v)
    }
}

/// All facets of a full-dimensional pointed cone, sorted by incident set.
///
/// Every facet contains `n-1` linearly independent generators, so it is found
/// by testing each such subset: take its one-dimensional kernel covector and
/// keep it if all generators lie weakly on one side.
pub fn enumerate_facets(c: &Cone) -> Result<Vec<Facet>, ConeError> {
    let n = c.ambient;
    if c.dim != n {
        return Err(ConeError::NotFullDimensional {
            dim: c.dim,
            ambient: n,
        });
    }
    let gens = &c.generators;
    let sum: Vec<BigInt> = (0..n).map(|k| gens.iter().map(|g| &g[k]).sum()).collect();
    let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let mut facets = Vec::new();

    for subset in Combinations::new(gens.len(), n - 1) {
        let sub: Vec<Vec<BigInt>> = subset.iter().map(|&i| gens[i].clone()).collect();
        let m = if sub.is_empty() {
            IntMatrix::zeros(0, n)
        } else {
            generator_matrix(&sub)
        };
        let kernel = nullspace(&m.to_rational());
        if kernel.len() != 1 {
            continue;
        }
        let mut normal = primitive_integer(&kernel[0]).expect("kernel vector is nonzero");
        let values: Vec<BigInt> = gens.iter().map(|g| dot_int(&normal, g)).collect();
        let has_pos = values.iter().any(|v| v.is_positive());
        let has_neg = values.iter().any(|v| v.is_negative());
        if has_pos && has_neg {
            continue;
        }
        if has_neg || (!has_pos && dot_int(&normal, &sum).is_negative()) {
            normal.iter_mut().for_each(|x| *x = -x.clone());
        }
        let incident: BTreeSet<usize> = values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_zero())
            .map(|(i, _)| i)
            .collect();
        if seen.insert(incident.clone()) {
            facets.push(Facet { normal, incident });
        }
    }

    // Pointed iff the facet normals span the dual space.
    let normals: Vec<Vec<BigInt>> = facets.iter().map(|f| f.normal.clone()).collect();
    if normals.is_empty() || exact::rank(&generator_matrix(&normals).to_rational()) < n {
        return Err(ConeError::NotPointed);
    }
    facets.sort_by(|a, b| a.incident.cmp(&b.incident));
    Ok(facets)
}

/// True iff the primitive generators of a simplicial cone extend to a basis of
/// `Z^lattice_dim`, i.e. the gcd of the maximal minors of the generator matrix is 1.
pub fn is_basic(c: &Cone, lattice_dim: usize) -> Result<bool, ConeError> {
    if !c.is_simplicial() {
        return Err(ConeError::NotSimplicial {
            generators: c.generators.len(),
            dim: c.dim,
        });
    }
    if c.ambient != lattice_dim {
        return Err(ConeError::Length(0, c.ambient, lattice_dim));
    }
    let k = c.generators.len();
    if k == 0 {
        return Ok(true);
    }
    let m = generator_matrix(&c.generators);
    if k == lattice_dim {
        return Ok(int_det(&m).expect("square").abs().is_one());
    }
    let mut g = BigInt::zero();
    for cols in Combinations::new(lattice_dim, k) {
        let minor: Vec<Vec<BigInt>> = (0..k)
            .map(|i| cols.iter().map(|&j| m[(i, j)].clone()).collect())
            .collect();
        let d = int_det(&IntMatrix::from_rows(&minor).expect("rectangular")).expect("square");
        g = num_integer::Integer::gcd(&g, &d);
        if g.is_one() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// True iff some cone (given by ray indices) contains every listed ray.
pub fn spans_cone(
    cones: &[BTreeSet<usize>],
    ray_count: usize,
    rays: &[usize],
) -> Result<bool, ConeError> {
    if let Some(&bad) = rays.iter().find(|&&r| r >= ray_count) {
        return Err(ConeError::UnknownRay {
            index: bad,
            count: ray_count,
        });
    }
    Ok(cones.iter().any(|c| rays.iter().all(|r| c.contains(r))))
}

/// Lexicographic k-subsets of `0..n`.
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}
