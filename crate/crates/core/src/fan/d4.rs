//! The second perfect cone in genus 4 and the subdivision of its star.
//!
//! The cone is realized as the domain of the D4 perfect form: with `Q` the
//! Gram matrix of a D4 root basis, its rays are `c cᵀ` for the 12 antipodal
//! pairs `±c` of minimal vectors of `Q`, living in `Sym²(Z⁴) ≅ Z¹⁰`. The
//! center ray is the primitive vector on the sum of those 12 generators, and
//! the star is the cone over each of the 64 facets with the center added.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{FanError, RaySet, StarFan};
use crate::cones::{enumerate_facets, Combinations, Cone, Facet};
use crate::exact::{gcd_content, int_det, IntMatrix};

pub type Vec4 = [i64; 4];
pub type Mat4 = [[i64; 4]; 4];

pub const IDENTITY: Mat4 = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];

/// Simple roots e1-e2, e2-e3, e3-e4, e3+e4 of D4, one per column.
pub const SIMPLE_ROOT_BASIS: Mat4 = [[1, 0, 0, 0], [-1, 1, 0, 0], [0, -1, 1, 1], [0, 0, -1, 1]];

/// Order of the (off-diagonal) coordinates after the diagonal ones.
const OFF_DIAGONAL: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn transpose(a: &Mat4) -> Mat4 {
    let mut out = [[0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[j][i];
        }
    }
    out
}

pub fn apply(a: &Mat4, v: &Vec4) -> Vec4 {
    let mut out = [0; 4];
    for i in 0..4 {
        out[i] = (0..4).map(|k| a[i][k] * v[k]).sum();
    }
    out
}

fn to_int_matrix(a: &Mat4) -> IntMatrix {
    IntMatrix::from_rows(
        &a.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect::<Vec<_>>(),
    )
    .expect("4x4")
}

pub fn det4(a: &Mat4) -> i64 {
    int_det(&to_int_matrix(a))
        .expect("square")
        .try_into()
        .expect("small determinant")
}

/// Inverse of a unimodular integer matrix.
pub fn unimodular_inverse(a: &Mat4) -> Option<Mat4> {
    let d = det4(a);
    if d.abs() != 1 {
        return None;
    }
    // adj(A)_{ij} = (-1)^{i+j} det(minor_{ji})
    let mut out = [[0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let minor: Vec<Vec<BigInt>> = (0..4)
                .filter(|&r| r != j)
                .map(|r| {
                    (0..4)
                        .filter(|&c| c != i)
                        .map(|c| BigInt::from(a[r][c]))
                        .collect()
                })
                .collect();
            let m: i64 = int_det(&IntMatrix::from_rows(&minor).expect("3x3"))
                .expect("square")
                .try_into()
                .expect("small");
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            out[i][j] = sign * m * d;
        }
    }
    Some(out)
}

/// An integer symmetric 4x4 matrix.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymMatrix(Mat4);

impl SymMatrix {
    /// Returns `None` unless `m` is symmetric.
    pub fn new(m: Mat4) -> Option<Self> {
        (m == transpose(&m)).then_some(Self(m))
    }

    /// The rank-one matrix `c cᵀ`.
    pub fn outer(c: &Vec4) -> Self {
        let mut m = [[0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = c[i] * c[j];
            }
        }
        Self(m)
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.0[i][j]
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    /// Coordinates `(S11, S22, S33, S44, S12, S13, S14, S23, S24, S34)`.
    pub fn coords(&self) -> [i64; 10] {
        let mut out = [0; 10];
        for i in 0..4 {
            out[i] = self.0[i][i];
        }
        for (k, &(i, j)) in OFF_DIAGONAL.iter().enumerate() {
            out[4 + k] = self.0[i][j];
        }
        out
    }

    pub fn from_coords(c: &[i64; 10]) -> Self {
        let mut m = [[0; 4]; 4];
        for i in 0..4 {
            m[i][i] = c[i];
        }
        for (k, &(i, j)) in OFF_DIAGONAL.iter().enumerate() {
            m[i][j] = c[4 + k];
            m[j][i] = c[4 + k];
        }
        Self(m)
    }

    /// `g S gᵀ`.
    pub fn congruence(&self, g: &Mat4) -> Self {
        Self(mat_mul(&mat_mul(g, &self.0), &transpose(g)))
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a SymMatrix>>(items: I) -> Self {
        let mut m = [[0; 4]; 4];
        for s in items {
            for i in 0..4 {
                for j in 0..4 {
                    m[i][j] += s.0[i][j];
                }
            }
        }
        Self(m)
    }
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sym{:?}", self.coords())
    }
}

/// Which lattice of symmetric matrices the cones are measured in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lattice {
    /// Integer symmetric matrices, coordinates `S_ii` and `S_ij` (i < j).
    Symmetric,
    /// The dual candidate: coordinates `S_ii` and `2 S_ij`.
    EvenDiagonal,
}

impl Lattice {
    pub fn coords(self, s: &SymMatrix) -> Vec<BigInt> {
        let c = s.coords();
        c.iter()
            .enumerate()
            .map(|(k, &x)| match self {
                Lattice::EvenDiagonal if k >= 4 => BigInt::from(2 * x),
                _ => BigInt::from(x),
            })
            .collect()
    }

    pub fn name(self) -> &'static str {
        match self {
            Lattice::Symmetric => "Sym2(Z4)",
            Lattice::EvenDiagonal => "even-diagonal dual",
        }
    }
}

/// A positive definite quadratic form on `Z⁴` given by its Gram matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadraticForm {
    gram: Mat4,
}

impl QuadraticForm {
    /// `Bᵀ B` for a basis given column-wise.
    pub fn from_basis(b: &Mat4) -> Self {
        Self {
            gram: mat_mul(&transpose(b), b),
        }
    }

    pub fn from_gram(gram: Mat4) -> Self {
        Self { gram }
    }

    /// The D4 form in the simple-root basis.
    pub fn d4() -> Self {
        Self::from_basis(&SIMPLE_ROOT_BASIS)
    }

    /// The same form in the basis given by the columns of `u`: `Uᵀ Q U`.
    pub fn change_basis(&self, u: &Mat4) -> Self {
        Self {
            gram: mat_mul(&mat_mul(&transpose(u), &self.gram), u),
        }
    }

    pub fn gram(&self) -> &Mat4 {
        &self.gram
    }

    pub fn gram_matrix(&self) -> IntMatrix {
        to_int_matrix(&self.gram)
    }

    pub fn inner(&self, a: &Vec4, b: &Vec4) -> i64 {
        (0..4)
            .map(|i| (0..4).map(|j| a[i] * self.gram[i][j] * b[j]).sum::<i64>())
            .sum()
    }

    pub fn norm(&self, a: &Vec4) -> i64 {
        self.inner(a, a)
    }

    /// All nonzero vectors of norm at most `bound`, via the box
    /// `c_i² ≤ bound·(Q⁻¹)_ii`.
    pub fn short_vectors(&self, bound: i64) -> Vec<Vec4> {
        let det = det4(&self.gram);
        assert!(det > 0, "form must be positive definite");
        let mut radius = [0i64; 4];
        for (i, r) in radius.iter_mut().enumerate() {
            let minor: Vec<Vec<BigInt>> = (0..4)
                .filter(|&a| a != i)
                .map(|a| (0..4).filter(|&b| b != i).map(|b| BigInt::from(self.gram[a][b])).collect())
                .collect();
            let cof: i64 = int_det(&IntMatrix::from_rows(&minor).expect("3x3"))
                .expect("square")
                .try_into()
                .expect("small");
            while (*r + 1) * (*r + 1) * det <= bound * cof {
                *r += 1;
            }
        }
        let mut out = Vec::new();
        for a in -radius[0]..=radius[0] {
            for b in -radius[1]..=radius[1] {
                for c in -radius[2]..=radius[2] {
                    for d in -radius[3]..=radius[3] {
                        let v = [a, b, c, d];
                        if v != [0; 4] && self.norm(&v) <= bound {
                            out.push(v);
                        }
                    }
                }
            }
        }
        out
    }

    /// Vectors of minimal nonzero norm.
    pub fn minimal_vectors(&self) -> Vec<Vec4> {
        let start = (0..4).map(|i| self.gram[i][i]).min().expect("4x4");
        let short = self.short_vectors(start);
        let min = short.iter().map(|v| self.norm(v)).min().unwrap_or(start);
        short.into_iter().filter(|v| self.norm(v) == min).collect()
    }
}

/// Gram matrix of D4 in the simple-root basis.
pub fn build_d4_form() -> IntMatrix {
    QuadraticForm::d4().gram_matrix()
}

fn canonical_sign(c: &Vec4) -> Vec4 {
    let first = c.iter().find(|&&x| x != 0).copied().unwrap_or(0);
    if first < 0 {
        c.map(|x| -x)
    } else {
        *c
    }
}

/// One representative `c` per antipodal pair, and the ray `c cᵀ`, sorted by
/// coordinates (descending) so the labeling does not depend on input order.
pub fn build_rays(minimal_vectors: &[Vec4]) -> Result<Vec<(Vec4, SymMatrix)>, FanError> {
    if minimal_vectors.len() != 24 {
        return Err(FanError::MinimalVectorCount(minimal_vectors.len()));
    }
    let reps: BTreeSet<Vec4> = minimal_vectors.iter().map(canonical_sign).collect();
    if reps.len() != 12 {
        return Err(FanError::MinimalVectorCount(minimal_vectors.len()));
    }
    let mut rays: Vec<(Vec4, SymMatrix)> = reps.into_iter().map(|c| (c, SymMatrix::outer(&c))).collect();
    rays.sort_by(|a, b| b.1.coords().cmp(&a.1.coords()));
    Ok(rays)
}

/// The center ray: the sum of the ray generators, divided by its content in
/// the chosen lattice. Returns (sum matrix, primitive coordinates, content).
pub fn build_eta(
    rays: &[SymMatrix],
    lattice: Lattice,
) -> Result<(SymMatrix, Vec<BigInt>, BigInt), FanError> {
    let sum = SymMatrix::sum(rays);
    let coords = lattice.coords(&sum);
    let content = gcd_content(&coords);
    if content.is_zero() {
        return Err(FanError::ZeroSum);
    }
    let eta = coords.iter().map(|x| x / &content).collect();
    Ok((sum, eta, content))
}

/// The concrete fan: rays, center, facets of the perfect cone, and the
/// 64-cone star. Star index 0 is the center, index `i + 1` is ray `i`.
#[derive(Debug, Clone)]
pub struct D4Fan {
    pub form: QuadraticForm,
    pub lattice: Lattice,
    pub minimal_vectors: Vec<Vec4>,
    /// Representative minimal vector of each ray.
    pub representatives: Vec<Vec4>,
    pub rays: Vec<SymMatrix>,
    pub ray_coords: Vec<Vec<BigInt>>,
    pub ray_sum: SymMatrix,
    pub eta: Vec<BigInt>,
    pub eta_content: BigInt,
    pub perfect_cone: Cone,
    pub facets: Vec<Facet>,
    /// Determinant of each top cone's generator matrix, center first.
    pub cone_dets: Vec<BigInt>,
    pub star: StarFan,
}

impl D4Fan {
    pub fn build(form: QuadraticForm, lattice: Lattice) -> Result<Self, FanError> {
        let minimal_vectors = form.minimal_vectors();
        let pairs = build_rays(&minimal_vectors)?;
        let representatives: Vec<Vec4> = pairs.iter().map(|p| p.0).collect();
        let rays: Vec<SymMatrix> = pairs.iter().map(|p| p.1).collect();
        let ray_coords: Vec<Vec<BigInt>> = rays
            .iter()
            .map(|r| {
                let c = lattice.coords(r);
                let g = gcd_content(&c);
                c.iter().map(|x| x / &g).collect()
            })
            .collect();
        let (ray_sum, eta, eta_content) = build_eta(&rays, lattice)?;
        let perfect_cone = Cone::new(10, ray_coords.clone())?;
        let facets = enumerate_facets(&perfect_cone)?;

        let mut top_cones = Vec::with_capacity(facets.len());
        let mut cone_dets = Vec::with_capacity(facets.len());
        for (k, facet) in facets.iter().enumerate() {
            if facet.incident.len() != 9 {
                return Err(FanError::NonSimplicialFacet {
                    facet: k,
                    rays: facet.incident.len(),
                });
            }
            let mut gens = vec![eta.clone()];
            gens.extend(facet.incident.iter().map(|&i| ray_coords[i].clone()));
            let det = int_det(&IntMatrix::from_rows(&gens).expect("10x10")).expect("square");
            if !det.abs().is_one() {
                return Err(FanError::NotBasic {
                    facet: k,
                    det,
                    lattice: lattice.name().into(),
                });
            }
            cone_dets.push(det);
            top_cones.push(RaySet::from_indices(
                std::iter::once(0).chain(facet.incident.iter().map(|&i| i + 1)),
            ));
        }

        let mut star_rays = vec![eta.clone()];
        star_rays.extend(ray_coords.iter().cloned());
        let star = StarFan::new(star_rays, top_cones)?;
        Ok(Self {
            form,
            lattice,
            minimal_vectors,
            representatives,
            rays,
            ray_coords,
            ray_sum,
            eta,
            eta_content,
            perfect_cone,
            facets,
            cone_dets,
            star,
        })
    }

    /// Index of the ray `c cᵀ`, if it is one of the generators.
    pub fn ray_index(&self, s: &SymMatrix) -> Option<usize> {
        self.rays.iter().position(|r| r == s)
    }
}

/// Builds the star for the D4 form. Basicness is tested in `Sym²(Z⁴)` first;
/// if that fails the even-diagonal dual is tried, and if both fail the error
/// reports both.
pub fn build_star_fan() -> Result<D4Fan, FanError> {
    build_star_fan_for(QuadraticForm::d4())
}

pub fn build_star_fan_for(form: QuadraticForm) -> Result<D4Fan, FanError> {
    match D4Fan::build(form, Lattice::Symmetric) {
        Err(first @ FanError::NotBasic { .. }) => D4Fan::build(form, Lattice::EvenDiagonal)
            .map_err(|second| FanError::NoBasicLattice(Box::new(first), Box::new(second))),
        other => other,
    }
}

/// An automorphism of the form together with the permutation it induces on
/// the 12 rays (0-based ray indices).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeAutomorphism {
    pub matrix: Mat4,
    pub ray_permutation: Vec<usize>,
}

impl LatticeAutomorphism {
    /// Permutation of the star indices: center fixed, ray `i` at `i + 1`.
    pub fn star_permutation(&self) -> Vec<usize> {
        std::iter::once(0)
            .chain(self.ray_permutation.iter().map(|&i| i + 1))
            .collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            matrix: mat_mul(&self.matrix, &other.matrix),
            ray_permutation: other.ray_permutation.iter().map(|&i| self.ray_permutation[i]).collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Stabilizer {
    pub elements: Vec<LatticeAutomorphism>,
}

impl Stabilizer {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &Mat4) -> bool {
        self.elements.iter().any(|e| &e.matrix == g)
    }
}

/// All `g ∈ GL(4, Z)` with `gᵀ Q g = Q`.
///
/// An automorphism maps minimal vectors to minimal vectors, so it is fixed by
/// the images of a lattice basis made of minimal vectors. Each candidate tuple
/// of images with matching Gram matrix is checked, and every element is
/// verified to fix the center and permute the rays and top cones.
pub fn compute_stabilizer(fan: &D4Fan) -> Result<Stabilizer, FanError> {
    let form = &fan.form;
    let mins = &fan.minimal_vectors;
    let basis = Combinations::new(fan.representatives.len(), 4)
        .map(|idx| {
            let mut m = [[0; 4]; 4];
            for (col, &k) in idx.iter().enumerate() {
                for row in 0..4 {
                    m[row][col] = fan.representatives[k][row];
                }
            }
            m
        })
        .find(|m| det4(m).abs() == 1)
        .ok_or(FanError::NoMinimalBasis)?;
    let basis_inv = unimodular_inverse(&basis).expect("unimodular");
    let cols: Vec<Vec4> = (0..4).map(|c| [basis[0][c], basis[1][c], basis[2][c], basis[3][c]]).collect();
    let target: Vec<Vec<i64>> = (0..4)
        .map(|a| (0..4).map(|b| form.inner(&cols[a], &cols[b])).collect())
        .collect();

    let ray_lookup: HashMap<SymMatrix, usize> =
        fan.rays.iter().enumerate().map(|(i, r)| (*r, i)).collect();
    let top: HashSet<RaySet> = fan.star.top_cones().iter().copied().collect();

    let mut images: Vec<Mat4> = Vec::new();
    let mut chosen = [[0i64; 4]; 4];
    fn search(
        depth: usize,
        chosen: &mut [Vec4; 4],
        mins: &[Vec4],
        form: &QuadraticForm,
        target: &[Vec<i64>],
        out: &mut Vec<[Vec4; 4]>,
    ) {
        if depth == 4 {
            out.push(*chosen);
            return;
        }
        for w in mins {
            if form.norm(w) != target[depth][depth] {
                continue;
            }
            if (0..depth).all(|k| form.inner(&chosen[k], w) == target[k][depth]) {
                chosen[depth] = *w;
                search(depth + 1, chosen, mins, form, target, out);
            }
        }
    }
    let mut tuples = Vec::new();
    search(0, &mut chosen, mins, form, &target, &mut tuples);
    for t in tuples {
        let mut w = [[0; 4]; 4];
        for (col, v) in t.iter().enumerate() {
            for row in 0..4 {
                w[row][col] = v[row];
            }
        }
        images.push(mat_mul(&w, &basis_inv));
    }

    let mut elements = Vec::with_capacity(images.len());
    for (k, g) in images.into_iter().enumerate() {
        debug_assert_eq!(mat_mul(&mat_mul(&transpose(&g), form.gram()), &g), *form.gram());
        if fan.ray_sum.congruence(&g) != fan.ray_sum {
            return Err(FanError::CenterNotFixed(k));
        }
        let ray_permutation = fan
            .representatives
            .iter()
            .map(|c| ray_lookup.get(&SymMatrix::outer(&apply(&g, c))).copied())
            .collect::<Option<Vec<usize>>>()
            .ok_or(FanError::RayPermutation(k))?;
        let auto = LatticeAutomorphism {
            matrix: g,
            ray_permutation,
        };
        let perm = auto.star_permutation();
        for cone in fan.star.top_cones() {
            let image = RaySet::from_indices(cone.iter().map(|i| perm[i]));
            if !top.contains(&image) {
                return Err(FanError::ConePermutation(k));
            }
        }
        elements.push(auto);
    }
    elements.sort_by(|a, b| a.matrix.cmp(&b.matrix));
    Ok(Stabilizer { elements })
}
