//! The symplectic polar space `W(2N-1, d)`: points of `PG(2N-1, d)`, the
//! canonical alternating form, generators (maximal totally isotropic
//! subspaces), perps, and the transversal machinery used by the spread
//! constructions.

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use thiserror::Error;

use crate::algebra::{
    self, contains, kernel, projective_points, span, subspace_meet, AlgebraError, FMatrix,
    FVector, FieldSpec,
};
use crate::mask::BitMask;

/// Generator catalogs larger than this are refused.
pub const MAX_GENERATORS: u128 = 100_000;
/// Ambient vector spaces larger than this are refused (point lookup tables).
pub const MAX_AMBIENT: u128 = 1 << 22;

pub type PointIndex = usize;
pub type GenIndex = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolarError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("rank must be at least 1, got {0}")]
    BadRank(usize),
    #[error("{what} would have {count} elements, above the limit {limit}")]
    ScaleExceeded { what: &'static str, count: u128, limit: u128 },
    #[error("expected vectors of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point {0} lies on the generator")]
    PointOnGenerator(PointIndex),
    #[error("generators {0} and {1} are not disjoint")]
    NotDisjoint(GenIndex, GenIndex),
    #[error("subspace is not totally isotropic")]
    NotIsotropic,
    #[error("expected a subspace of rank {expected}, got rank {got}")]
    WrongRank { expected: usize, got: usize },
    #[error("operation needs N = 2, space has N = {0}")]
    NotRankTwo(usize),
    #[error("subspace is not a generator of this space")]
    UnknownGenerator,
}

pub type Result<T> = std::result::Result<T, PolarError>;

/// A maximal totally isotropic subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub gen_index: GenIndex,
    pub basis: FMatrix,
    pub point_mask: BitMask,
    /// Sorted point indices, the same set as `point_mask`.
    pub points: Vec<PointIndex>,
}

impl Generator {
    pub fn meets(&self, other: &Generator) -> bool {
        self.point_mask.intersects(&other.point_mask)
    }
}

#[derive(Debug)]
struct Catalog {
    gens: Vec<Generator>,
    by_basis: HashMap<FMatrix, GenIndex>,
    disjoint: OnceLock<Vec<BitMask>>,
}

/// `W(2N-1, d)` with the form `sum_i (x_{2i} y_{2i+1} - x_{2i+1} y_{2i})`.
#[derive(Debug)]
pub struct PolarSpace {
    spec: FieldSpec,
    n: usize,
    points: Vec<FVector>,
    /// Base-`d` code of any vector to the index of its projective point.
    code_to_point: Vec<u32>,
    form_matrix: Vec<Vec<u8>>,
    catalog: OnceLock<Catalog>,
}

/// `(d^N + 1)(d^(N-1) + 1)...(d + 1)`
pub fn generator_count(d: u128, n: u32) -> u128 {
    (1..=n).map(|i| d.pow(i) + 1).product()
}

/// `d^(2N-1) + ... + d + 1`
pub fn point_count(d: u128, n: u32) -> u128 {
    (0..2 * n).map(|i| d.pow(i)).sum()
}

impl PolarSpace {
    pub fn new(d: u32, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(PolarError::BadRank(n));
        }
        let spec = FieldSpec::new(d, n)?;
        let ambient = (d as u128).pow(2 * n as u32);
        if ambient > MAX_AMBIENT {
            return Err(PolarError::ScaleExceeded {
                what: "ambient vector space",
                count: ambient,
                limit: MAX_AMBIENT,
            });
        }
        let len = 2 * n;
        let dd = spec.d();
        let mut points = Vec::new();
        let mut code_to_point = vec![u32::MAX; ambient as usize];
        for code in 1..ambient as usize {
            let v = FVector::from_code(code, len, dd);
            let normal = v.normalized(&spec);
            if normal == v {
                code_to_point[code] = points.len() as u32;
                points.push(v);
            }
        }
        // Normalized vectors precede their multiples in code order.
        for code in 1..ambient as usize {
            if code_to_point[code] == u32::MAX {
                let normal = FVector::from_code(code, len, dd).normalized(&spec);
                code_to_point[code] = code_to_point[normal.code(dd)];
            }
        }
        let mut form_matrix = vec![vec![0u8; len]; len];
        for i in 0..n {
            form_matrix[2 * i][2 * i + 1] = 1;
            form_matrix[2 * i + 1][2 * i] = spec.neg(1);
        }
        Ok(PolarSpace { spec, n, points, code_to_point, form_matrix, catalog: OnceLock::new() })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn d(&self) -> u8 {
        self.spec.d()
    }

    /// Rank `N`; the ambient vector space has dimension `2N`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn form_matrix(&self) -> &[Vec<u8>] {
        &self.form_matrix
    }

    pub fn points(&self) -> &[FVector] {
        &self.points
    }

    pub fn point(&self, i: PointIndex) -> &FVector {
        &self.points[i]
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    /// Projective point of a nonzero vector.
    pub fn point_index(&self, v: &FVector) -> Option<PointIndex> {
        if v.len() != self.dim() || v.is_zero() {
            return None;
        }
        Some(self.code_to_point[v.code(self.d())] as usize)
    }

    #[inline]
    pub(crate) fn form_raw(&self, u: &[u8], v: &[u8]) -> u8 {
        let s = &self.spec;
        let mut acc = 0u8;
        for i in 0..self.n {
            let plus = s.mul(u[2 * i], v[2 * i + 1]);
            let minus = s.mul(u[2 * i + 1], v[2 * i]);
            acc = s.add(acc, s.sub(plus, minus));
        }
        acc
    }

    pub fn is_isotropic(&self, m: &FMatrix) -> bool {
        let rows = m.rows();
        rows.iter().enumerate().all(|(i, u)| {
            rows[i + 1..].iter().all(|v| self.form_raw(u.coords(), v.coords()) == 0)
        })
    }

    pub fn collinear(&self, p: PointIndex, q: PointIndex) -> bool {
        self.form_raw(self.points[p].coords(), self.points[q].coords()) == 0
    }

    /// Point set of an arbitrary subspace given in rref.
    pub fn subspace_mask(&self, m: &FMatrix) -> BitMask {
        let mut mask = BitMask::new(self.num_points());
        for v in projective_points(m, &self.spec) {
            mask.insert(self.point_index(&v).expect("nonzero"));
        }
        mask
    }

    pub fn point_subspace(&self, p: PointIndex) -> FMatrix {
        span(self.dim(), std::slice::from_ref(&self.points[p]), &self.spec)
    }

    /// Rref basis of `s^⊥`.
    pub fn perp(&self, s: &FMatrix) -> FMatrix {
        let coeffs: Vec<FVector> = s
            .rows()
            .iter()
            .map(|w| {
                let w = w.coords();
                let mut c = vec![0u8; self.dim()];
                for i in 0..self.n {
                    c[2 * i] = self.spec.neg(w[2 * i + 1]);
                    c[2 * i + 1] = w[2 * i];
                }
                FVector::new(c, &self.spec)
            })
            .collect();
        let m = FMatrix::new(self.dim(), coeffs, &self.spec).expect("row lengths match");
        kernel(&m, &self.spec)
    }

    // ---- generator catalog ----

    fn catalog(&self) -> Result<&Catalog> {
        if let Some(c) = self.catalog.get() {
            return Ok(c);
        }
        let count = generator_count(self.d() as u128, self.n as u32);
        if count > MAX_GENERATORS {
            return Err(PolarError::ScaleExceeded {
                what: "generator catalog",
                count,
                limit: MAX_GENERATORS,
            });
        }
        Ok(self.catalog.get_or_init(|| self.build_catalog()))
    }

    /// Grows totally isotropic subspaces one dimension at a time; the rref
    /// representative deduplicates and the set keeps them sorted.
    fn build_catalog(&self) -> Catalog {
        let spec = &self.spec;
        let mut level: BTreeSet<FMatrix> =
            (0..self.num_points()).map(|p| self.point_subspace(p)).collect();
        for _ in 1..self.n {
            let mut next = BTreeSet::new();
            for s in &level {
                let p = self.perp(s);
                for v in projective_points(&p, spec) {
                    if contains(s, &v, spec) {
                        continue;
                    }
                    let mut rows = s.rows().to_vec();
                    rows.push(v);
                    next.insert(span(self.dim(), &rows, spec));
                }
            }
            level = next;
        }
        let gens: Vec<Generator> = level
            .into_iter()
            .enumerate()
            .map(|(gen_index, basis)| {
                let point_mask = self.subspace_mask(&basis);
                let points = point_mask.iter().collect();
                Generator { gen_index, basis, point_mask, points }
            })
            .collect();
        let by_basis = gens.iter().map(|g| (g.basis.clone(), g.gen_index)).collect();
        Catalog { gens, by_basis, disjoint: OnceLock::new() }
    }

    /// All generators, sorted by their rref basis.
    pub fn generators(&self) -> Result<&[Generator]> {
        Ok(&self.catalog()?.gens)
    }

    /// Panics if the catalog cannot be built; indices are only obtainable
    /// from a built catalog.
    pub fn generator(&self, idx: GenIndex) -> &Generator {
        &self.generators().expect("generator catalog")[idx]
    }

    pub fn num_generators(&self) -> Result<usize> {
        Ok(self.generators()?.len())
    }

    pub fn generator_index(&self, basis: &FMatrix) -> Option<GenIndex> {
        let c = self.catalog().ok()?;
        let r = algebra::rref(basis, &self.spec);
        c.by_basis.get(&r).copied()
    }

    /// Bitmask over generators disjoint from `idx`.
    pub fn disjoint_from(&self, idx: GenIndex) -> &BitMask {
        let c = self.catalog().expect("generator catalog");
        &c.disjoint.get_or_init(|| {
            let n = c.gens.len();
            c.gens
                .iter()
                .map(|g| {
                    BitMask::from_indices(
                        n,
                        c.gens.iter().filter(|h| !g.meets(h)).map(|h| h.gen_index),
                    )
                })
                .collect()
        })[idx]
    }

    // ---- geometric operations ----

    /// The unique generator on `x` meeting `g` in an `(N-2)`-space:
    /// `<x, x^⊥ ∩ g>`.
    pub fn nearest_generator(&self, x: PointIndex, g: &Generator) -> Result<&Generator> {
        if g.point_mask.contains(x) {
            return Err(PolarError::PointOnGenerator(x));
        }
        let xs = self.point_subspace(x);
        let trace = subspace_meet(&self.perp(&xs), &g.basis, &self.spec)?;
        debug_assert_eq!(trace.rank(), self.n - 1);
        let mut rows = trace.rows().to_vec();
        rows.push(self.points[x].clone());
        let basis = span(self.dim(), &rows, &self.spec);
        let idx = self.generator_index(&basis).ok_or(PolarError::UnknownGenerator)?;
        Ok(self.generator(idx))
    }

    /// `x ↦ x^⊥ ∩ g2` for every point `x` of `g`; the images are the
    /// hyperplanes of `g2`.
    pub fn hyperplane_map(
        &self,
        g: &Generator,
        g2: &Generator,
    ) -> Result<Vec<(PointIndex, FMatrix)>> {
        if g.meets(g2) {
            return Err(PolarError::NotDisjoint(g.gen_index, g2.gen_index));
        }
        g.points
            .iter()
            .map(|&x| {
                let h = subspace_meet(&self.perp(&self.point_subspace(x)), &g2.basis, &self.spec)?;
                Ok((x, h))
            })
            .collect()
    }

    /// The `d + 1` generators through a totally isotropic subspace of rank
    /// `N - 1`, in index order.
    pub fn generators_through(&self, s: &FMatrix) -> Result<Vec<&Generator>> {
        if s.cols() != self.dim() {
            return Err(PolarError::DimensionMismatch { expected: self.dim(), got: s.cols() });
        }
        let s = algebra::rref(s, &self.spec);
        if s.rank() != self.n - 1 {
            return Err(PolarError::WrongRank { expected: self.n - 1, got: s.rank() });
        }
        if !self.is_isotropic(&s) {
            return Err(PolarError::NotIsotropic);
        }
        let mut found = BTreeSet::new();
        for v in projective_points(&self.perp(&s), &self.spec) {
            if contains(&s, &v, &self.spec) {
                continue;
            }
            let mut rows = s.rows().to_vec();
            rows.push(v);
            let basis = span(self.dim(), &rows, &self.spec);
            found.insert(self.generator_index(&basis).ok_or(PolarError::UnknownGenerator)?);
        }
        Ok(found.into_iter().map(|i| self.generator(i)).collect())
    }

    /// Lines meeting every member of a set of pairwise disjoint lines
    /// (`N = 2` only). Members themselves are excluded.
    pub fn common_transversals(&self, gens: &[&Generator]) -> Result<Vec<&Generator>> {
        if self.n != 2 {
            return Err(PolarError::NotRankTwo(self.n));
        }
        for (i, a) in gens.iter().enumerate() {
            for b in &gens[i + 1..] {
                if a.meets(b) {
                    return Err(PolarError::NotDisjoint(a.gen_index, b.gen_index));
                }
            }
        }
        Ok(self
            .generators()?
            .iter()
            .filter(|l| {
                gens.iter().all(|g| g.gen_index != l.gen_index && l.meets(g))
            })
            .collect())
    }

    /// `|{V, W}^⊥⊥|`: 3 in `W(3, 2)`, 2 for odd order.
    pub fn double_perp_size(&self, v: &Generator, w: &Generator) -> Result<usize> {
        let first = self.common_transversals(&[v, w])?;
        Ok(self.common_transversals(&first)?.len())
    }
}

/// Value of the canonical alternating form.
pub fn symp_form(u: &FVector, v: &FVector, space: &PolarSpace) -> Result<u8> {
    for w in [u, v] {
        if w.len() != space.dim() {
            return Err(PolarError::DimensionMismatch { expected: space.dim(), got: w.len() });
        }
    }
    Ok(space.form_raw(u.coords(), v.coords()))
}
