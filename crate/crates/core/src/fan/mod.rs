//! Fans localized at one ray: the star of a center ray together with its
//! top-dimensional cones, plus the concrete D4 construction.

pub mod d4;

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use num_traits::One;
use thiserror::Error;

use crate::cones::ConeError;
use crate::exact::{gcd_content, int_det, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("found {0} minimal vectors, expected 24")]
    MinimalVectorCount(usize),
    #[error("sum of ray generators is zero")]
    ZeroSum,
    #[error("ray {index} is not primitive (content {content})")]
    NonPrimitiveRay { index: usize, content: BigInt },
    #[error("ray {0} has the wrong length")]
    RayLength(usize),
    #[error("top cone {cone} is invalid: {reason}")]
    InvalidCone { cone: usize, reason: String },
    #[error("facet {facet} contains {rays} rays, so span(center, facet) is not simplicial")]
    NonSimplicialFacet { facet: usize, rays: usize },
    #[error("cone over facet {facet} has determinant {det} under {lattice} (not basic)")]
    NotBasic {
        facet: usize,
        det: BigInt,
        lattice: String,
    },
    #[error("star is not basic under either lattice: {0}; {1}")]
    NoBasicLattice(Box<FanError>, Box<FanError>),
    #[error("no lattice basis among the minimal vectors")]
    NoMinimalBasis,
    #[error("automorphism {0} does not permute the top cones")]
    ConePermutation(usize),
    #[error("automorphism {0} does not fix the center ray")]
    CenterNotFixed(usize),
    #[error("automorphism {0} does not permute the rays")]
    RayPermutation(usize),
    #[error(transparent)]
    Cone(#[from] ConeError),
}

/// A set of ray indices, at most 64 rays.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RaySet(pub u64);

impl RaySet {
    pub const EMPTY: RaySet = RaySet(0);

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        RaySet(it.into_iter().fold(0, |acc, i| acc | (1u64 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        RaySet(self.0 | (1 << i))
    }

    pub fn is_subset(self, other: RaySet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }
}

impl fmt::Debug for RaySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// The star of a center ray (index 0) in a smooth fan: every ray adjacent to
/// the center and every top-dimensional cone containing it.
#[derive(Debug, Clone)]
pub struct StarFan {
    dim: usize,
    rays: Vec<Vec<BigInt>>,
    top_cones: Vec<RaySet>,
    faces: HashSet<RaySet>,
}

impl StarFan {
    /// Validates primitivity of the rays and that every top cone contains
    /// the center, has `dim` rays, and is unimodular.
    pub fn new(rays: Vec<Vec<BigInt>>, top_cones: Vec<RaySet>) -> Result<Self, FanError> {
        let dim = rays.first().map_or(0, Vec::len);
        if rays.len() > 64 {
            return Err(FanError::RayLength(64));
        }
        for (i, r) in rays.iter().enumerate() {
            if r.len() != dim {
                return Err(FanError::RayLength(i));
            }
            let content = gcd_content(r);
            if !content.is_one() {
                return Err(FanError::NonPrimitiveRay { index: i, content });
            }
        }
        for (k, &cone) in top_cones.iter().enumerate() {
            let invalid = |reason: String| FanError::InvalidCone { cone: k, reason };
            if !cone.contains(0) {
                return Err(invalid("does not contain the center ray".into()));
            }
            if cone.len() != dim {
                return Err(invalid(format!("has {} rays in dimension {dim}", cone.len())));
            }
            if cone.iter().any(|i| i >= rays.len()) {
                return Err(invalid("references an unknown ray".into()));
            }
            let m = IntMatrix::from_rows(&cone.iter().map(|i| rays[i].clone()).collect::<Vec<_>>())
                .expect("equal lengths");
            let det = int_det(&m).expect("square");
            if !det.abs().is_one() {
                return Err(invalid(format!("determinant {det}")));
            }
        }
        let mut faces = HashSet::new();
        for &cone in &top_cones {
            let bits: Vec<usize> = cone.iter().collect();
            for mask in 0u64..(1 << bits.len()) {
                faces.insert(RaySet::from_indices(
                    bits.iter().enumerate().filter(|(j, _)| mask >> j & 1 == 1).map(|(_, &b)| b),
                ));
            }
        }
        Ok(Self {
            dim,
            rays,
            top_cones,
            faces,
        })
    }

    pub fn from_i64(rays: &[&[i64]], top_cones: &[&[usize]]) -> Result<Self, FanError> {
        Self::new(
            rays.iter().map(|r| crate::exact::to_bigints(r)).collect(),
            top_cones.iter().map(|c| RaySet::from_indices(c.iter().copied())).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ray_count(&self) -> usize {
        self.rays.len()
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[BigInt] {
        &self.rays[i]
    }

    pub fn top_cones(&self) -> &[RaySet] {
        &self.top_cones
    }

    /// True iff the rays lie in a common cone of the star.
    pub fn is_face(&self, rays: RaySet) -> bool {
        self.faces.contains(&rays)
    }

    pub fn is_top_cone(&self, rays: RaySet) -> bool {
        rays.len() == self.dim && self.faces.contains(&rays)
    }

    /// Index-list form of [`StarFan::is_face`] that rejects unknown rays.
    pub fn spans_cone(&self, rays: &[usize]) -> Result<bool, ConeError> {
        if let Some(&bad) = rays.iter().find(|&&r| r >= self.rays.len()) {
            return Err(ConeError::UnknownRay {
                index: bad,
                count: self.rays.len(),
            });
        }
        Ok(self.is_face(RaySet::from_indices(rays.iter().copied())))
    }

    /// All faces containing the center, i.e. the possible monomial supports.
    pub fn center_faces(&self) -> Vec<RaySet> {
        let mut out: Vec<RaySet> = self.faces.iter().copied().filter(|f| f.contains(0)).collect();
        out.sort_by_key(|f| (f.len(), f.0));
        out
    }
}
