//! Exact arithmetic over prime fields `F_d`, subspaces in reduced row echelon
//! form, and the degree-`N` extension field `F_{d^N}` used by field reduction.
//!
//! Residues are stored as `u8` and every operation reduces eagerly, so a value
//! outside `[0, d)` never escapes this module.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest prime modulus accepted by [`FieldSpec`].
pub const MAX_MODULUS: u32 = 13;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("{0} is not a supported prime modulus (2 <= d <= {MAX_MODULUS})")]
    NotPrime(u32),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("polynomial {0:?} is not monic and irreducible of degree {1}")]
    NotIrreducible(Vec<u8>, usize),
}

pub type Result<T> = std::result::Result<T, AlgebraError>;

pub fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|p| p * p <= n).all(|p| n % p != 0)
}

/// Prime modulus `d` together with a monic irreducible polynomial of degree
/// `ext_degree` defining `F_{d^N}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    d: u8,
    ext_degree: usize,
    /// Coefficients from the constant term upwards; the last entry is 1.
    ext_poly: Vec<u8>,
}

impl FieldSpec {
    /// Builds `F_d` with the lexicographically least monic irreducible
    /// polynomial of degree `ext_degree` (coefficient lists compared from the
    /// constant term upwards).
    pub fn new(d: u32, ext_degree: usize) -> Result<Self> {
        let d8 = Self::check_modulus(d)?;
        if ext_degree == 0 {
            return Err(AlgebraError::ZeroDegree);
        }
        let poly = least_irreducible(d8, ext_degree);
        Ok(FieldSpec { d: d8, ext_degree, ext_poly: poly })
    }

    /// Prime field only; the extension is the trivial `F_d[t]/(t)`.
    pub fn prime(d: u32) -> Result<Self> {
        Self::new(d, 1)
    }

    pub fn with_poly(d: u32, poly: Vec<u8>) -> Result<Self> {
        let d8 = Self::check_modulus(d)?;
        if poly.len() < 2 {
            return Err(AlgebraError::ZeroDegree);
        }
        let n = poly.len() - 1;
        if poly[n] != 1 || poly.iter().any(|&c| c >= d8) || !is_irreducible(&poly, d8) {
            return Err(AlgebraError::NotIrreducible(poly, n));
        }
        Ok(FieldSpec { d: d8, ext_degree: n, ext_poly: poly })
    }

    fn check_modulus(d: u32) -> Result<u8> {
        if d > MAX_MODULUS || !is_prime(d) {
            return Err(AlgebraError::NotPrime(d));
        }
        Ok(d as u8)
    }

    #[inline]
    pub fn d(&self) -> u8 {
        self.d
    }

    pub fn ext_degree(&self) -> usize {
        self.ext_degree
    }

    pub fn ext_poly(&self) -> &[u8] {
        &self.ext_poly
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        ((a as u16 + b as u16) % self.d as u16) as u8
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        ((a as u16 + self.d as u16 - b as u16) % self.d as u16) as u8
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.sub(0, a)
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.d as u16) as u8
    }

    pub fn reduce(&self, a: i64) -> u8 {
        a.rem_euclid(self.d as i64) as u8
    }

    pub fn inv(&self, a: u8) -> Result<u8> {
        field_inv(a, self)
    }
}

/// Multiplicative inverse in `F_d`.
pub fn field_inv(a: u8, spec: &FieldSpec) -> Result<u8> {
    let a = a % spec.d;
    if a == 0 {
        return Err(AlgebraError::ZeroInverse);
    }
    // a^(d-2) by Fermat
    let mut acc = 1u8;
    for _ in 0..spec.d - 2 {
        acc = spec.mul(acc, a);
    }
    Ok(acc)
}

/// A coordinate vector over `F_d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FVector(Vec<u8>);

impl FVector {
    /// Reduces every coordinate mod `d`.
    pub fn new(coords: Vec<u8>, spec: &FieldSpec) -> Self {
        FVector(coords.into_iter().map(|c| c % spec.d).collect())
    }

    pub fn from_signed(coords: &[i64], spec: &FieldSpec) -> Self {
        FVector(coords.iter().map(|&c| spec.reduce(c)).collect())
    }

    pub fn zero(len: usize) -> Self {
        FVector(vec![0; len])
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = vec![0; len];
        v[i] = 1;
        FVector(v)
    }

    /// `(self_0, other_0, self_1, other_1, ...)`.
    pub fn interleave(&self, other: &FVector) -> FVector {
        debug_assert_eq!(self.len(), other.len());
        FVector(self.0.iter().zip(&other.0).flat_map(|(&x, &y)| [x, y]).collect())
    }

    pub fn coords(&self) -> &[u8] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<u8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &FVector, spec: &FieldSpec) -> FVector {
        debug_assert_eq!(self.len(), other.len());
        FVector(self.0.iter().zip(&other.0).map(|(&a, &b)| spec.add(a, b)).collect())
    }

    pub fn sub(&self, other: &FVector, spec: &FieldSpec) -> FVector {
        debug_assert_eq!(self.len(), other.len());
        FVector(self.0.iter().zip(&other.0).map(|(&a, &b)| spec.sub(a, b)).collect())
    }

    pub fn scale(&self, k: u8, spec: &FieldSpec) -> FVector {
        FVector(self.0.iter().map(|&a| spec.mul(a, k)).collect())
    }

    /// `self + k * other`
    pub fn axpy(&self, k: u8, other: &FVector, spec: &FieldSpec) -> FVector {
        FVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| spec.add(a, spec.mul(k, b)))
                .collect(),
        )
    }

    pub fn dot(&self, other: &FVector, spec: &FieldSpec) -> u8 {
        self.0
            .iter()
            .zip(&other.0)
            .fold(0, |acc, (&a, &b)| spec.add(acc, spec.mul(a, b)))
    }

    /// Scales so that the first nonzero coordinate is 1. The zero vector is
    /// returned unchanged.
    pub fn normalized(&self, spec: &FieldSpec) -> FVector {
        match self.0.iter().find(|&&c| c != 0) {
            None => self.clone(),
            Some(&lead) => self.scale(spec.inv(lead).expect("nonzero lead"), spec),
        }
    }

    /// Base-`d` code with coordinate 0 most significant. Codes order vectors
    /// lexicographically.
    pub fn code(&self, d: u8) -> usize {
        self.0.iter().fold(0usize, |acc, &c| acc * d as usize + c as usize)
    }

    pub fn from_code(mut code: usize, len: usize, d: u8) -> FVector {
        let mut v = vec![0u8; len];
        for slot in v.iter_mut().rev() {
            *slot = (code % d as usize) as u8;
            code /= d as usize;
        }
        FVector(v)
    }
}

/// A list of equal-length row vectors with its rank cached.
///
/// Subspaces are always stored in reduced row echelon form, so structural
/// equality is subspace equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FMatrix {
    cols: usize,
    rows: Vec<FVector>,
    rank: usize,
}

impl FMatrix {
    pub fn new(cols: usize, rows: Vec<FVector>, spec: &FieldSpec) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(AlgebraError::DimensionMismatch(cols, r.len()));
        }
        let rank = rref_rows(rows.iter().map(|r| r.0.clone()).collect(), cols, spec).len();
        Ok(FMatrix { cols, rows, rank })
    }

    /// Rows of an `F_d` vector each; convenient in tests.
    pub fn from_slices(cols: usize, rows: &[&[u8]], spec: &FieldSpec) -> Result<Self> {
        Self::new(cols, rows.iter().map(|r| FVector::new(r.to_vec(), spec)).collect(), spec)
    }

    pub fn empty(cols: usize) -> Self {
        FMatrix { cols, rows: Vec::new(), rank: 0 }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[FVector] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_nested(&self) -> Vec<Vec<u8>> {
        self.rows.iter().map(|r| r.0.clone()).collect()
    }
}

fn rref_rows(mut rows: Vec<Vec<u8>>, cols: usize, spec: &FieldSpec) -> Vec<Vec<u8>> {
    let mut lead = 0;
    for col in 0..cols {
        if lead == rows.len() {
            break;
        }
        let Some(piv) = (lead..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(lead, piv);
        let inv = field_inv(rows[lead][col], spec).expect("pivot is nonzero");
        for x in rows[lead].iter_mut() {
            *x = spec.mul(*x, inv);
        }
        let pivot_row = rows[lead].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == lead || row[col] == 0 {
                continue;
            }
            let f = spec.neg(row[col]);
            for (x, &p) in row.iter_mut().zip(&pivot_row) {
                *x = spec.add(*x, spec.mul(f, p));
            }
        }
        lead += 1;
    }
    rows.truncate(lead);
    rows
}

/// Reduced row echelon form with zero rows removed.
pub fn rref(m: &FMatrix, spec: &FieldSpec) -> FMatrix {
    let rows = rref_rows(m.rows.iter().map(|r| r.0.clone()).collect(), m.cols, spec);
    let rank = rows.len();
    FMatrix { cols: m.cols, rows: rows.into_iter().map(FVector).collect(), rank }
}

/// Rref basis of the row space of `vectors`.
pub fn span(cols: usize, vectors: &[FVector], spec: &FieldSpec) -> FMatrix {
    let rows = rref_rows(vectors.iter().map(|r| r.0.clone()).collect(), cols, spec);
    let rank = rows.len();
    FMatrix { cols, rows: rows.into_iter().map(FVector).collect(), rank }
}

/// Rref basis of `a + b`.
pub fn subspace_sum(a: &FMatrix, b: &FMatrix, spec: &FieldSpec) -> Result<FMatrix> {
    if a.cols != b.cols {
        return Err(AlgebraError::DimensionMismatch(a.cols, b.cols));
    }
    let all: Vec<FVector> = a.rows.iter().chain(&b.rows).cloned().collect();
    Ok(span(a.cols, &all, spec))
}

fn pivot_of(row: &FVector) -> usize {
    row.0.iter().position(|&c| c != 0).expect("rref rows are nonzero")
}

/// Whether `v` lies in the row space of the rref matrix `m`.
pub fn contains(m: &FMatrix, v: &FVector, spec: &FieldSpec) -> bool {
    let mut r = v.clone();
    for row in &m.rows {
        let p = pivot_of(row);
        if r.0[p] != 0 {
            r = r.axpy(spec.neg(r.0[p]), row, spec);
        }
    }
    r.is_zero()
}

/// Whether rowspace(`a`) ⊆ rowspace(`b`), both in rref.
pub fn is_subspace(a: &FMatrix, b: &FMatrix, spec: &FieldSpec) -> bool {
    a.rows.iter().all(|r| contains(b, r, spec))
}

/// Rref basis of `{v : row · v = 0 for every row of m}`.
pub fn kernel(m: &FMatrix, spec: &FieldSpec) -> FMatrix {
    let r = rref(m, spec);
    let cols = m.cols;
    let pivots: Vec<usize> = r.rows.iter().map(pivot_of).collect();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u8; cols];
        v[free] = 1;
        for (row, &p) in r.rows.iter().zip(&pivots) {
            v[p] = spec.neg(row.0[free]);
        }
        basis.push(FVector(v));
    }
    span(cols, &basis, spec)
}

/// Rref basis of the intersection of two subspaces (Zassenhaus).
pub fn subspace_meet(a: &FMatrix, b: &FMatrix, spec: &FieldSpec) -> Result<FMatrix> {
    if a.cols != b.cols {
        return Err(AlgebraError::DimensionMismatch(a.cols, b.cols));
    }
    let n = a.cols;
    let mut rows = Vec::with_capacity(a.rows.len() + b.rows.len());
    for r in &a.rows {
        let mut v = r.0.clone();
        v.extend_from_slice(&r.0);
        rows.push(v);
    }
    for r in &b.rows {
        let mut v = r.0.clone();
        v.extend(std::iter::repeat(0).take(n));
        rows.push(v);
    }
    let reduced = rref_rows(rows, 2 * n, spec);
    let sum_dim = reduced.iter().filter(|r| r[..n].iter().any(|&c| c != 0)).count();
    let meet: Vec<FVector> = reduced
        .into_iter()
        .filter(|r| r[..n].iter().all(|&c| c == 0))
        .map(|r| FVector(r[n..].to_vec()))
        .collect();
    let meet = span(n, &meet, spec);
    assert_eq!(
        meet.rank + sum_dim,
        a.rank + b.rank,
        "dimension formula violated in subspace_meet"
    );
    Ok(meet)
}

/// All `(d^k - 1)/(d - 1)` projective points of the row space of an rref
/// matrix of rank `k`, as normalized combinations of its rows.
pub fn projective_points(m: &FMatrix, spec: &FieldSpec) -> Vec<FVector> {
    let k = m.rank;
    let d = spec.d as usize;
    let total = d.pow(k as u32);
    let mut out = Vec::with_capacity(total.saturating_sub(1) / (d - 1).max(1));
    for code in 1..total {
        let coeffs = FVector::from_code(code, k, spec.d);
        if coeffs.0.iter().find(|&&c| c != 0) != Some(&1) {
            continue;
        }
        let mut v = FVector::zero(m.cols);
        for (c, row) in coeffs.0.iter().zip(&m.rows) {
            if *c != 0 {
                v = v.axpy(*c, row, spec);
            }
        }
        out.push(v);
    }
    out
}

// ---- polynomials over F_d, coefficients from the constant term upward ----

fn trim(p: &mut Vec<u8>) {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem(a: &[u8], m: &[u8], d: u8) -> Vec<u8> {
    let spec = FieldSpec { d, ext_degree: 1, ext_poly: vec![0, 1] };
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm && !(r.len() == 1 && r[0] == 0) {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            r[shift + i] = spec.sub(r[shift + i], spec.mul(lead, c));
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn is_irreducible(poly: &[u8], d: u8) -> bool {
    let n = poly.len() - 1;
    for deg in 1..=n / 2 {
        for code in 0..(d as usize).pow(deg as u32) {
            let mut divisor = FVector::from_code(code, deg, d).0;
            divisor.reverse();
            divisor.push(1);
            let r = poly_rem(poly, &divisor, d);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn least_irreducible(d: u8, n: usize) -> Vec<u8> {
    for code in 0..(d as usize).pow(n as u32) {
        let mut poly = FVector::from_code(code, n, d).0;
        poly.push(1);
        if is_irreducible(&poly, d) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

// ---- F_{d^N} as F_d[t]/(ext_poly), elements are length-N coefficient vectors ----

pub fn ext_one(spec: &FieldSpec) -> FVector {
    FVector::unit(spec.ext_degree, 0)
}

/// Product in `F_{d^N}`.
pub fn ext_mul(x: &FVector, y: &FVector, spec: &FieldSpec) -> FVector {
    let n = spec.ext_degree;
    debug_assert!(x.len() == n && y.len() == n);
    let mut prod = vec![0u8; 2 * n - 1];
    for (i, &a) in x.0.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in y.0.iter().enumerate() {
            prod[i + j] = spec.add(prod[i + j], spec.mul(a, b));
        }
    }
    let mut r = poly_rem(&prod, &spec.ext_poly, spec.d);
    r.resize(n, 0);
    FVector(r)
}

pub fn ext_pow(x: &FVector, mut e: u64, spec: &FieldSpec) -> FVector {
    let mut base = x.clone();
    let mut acc = ext_one(spec);
    while e > 0 {
        if e & 1 == 1 {
            acc = ext_mul(&acc, &base, spec);
        }
        base = ext_mul(&base, &base, spec);
        e >>= 1;
    }
    acc
}

pub fn ext_order(spec: &FieldSpec) -> u64 {
    (spec.d as u64).pow(spec.ext_degree as u32)
}

pub fn ext_inv(x: &FVector, spec: &FieldSpec) -> Result<FVector> {
    if x.is_zero() {
        return Err(AlgebraError::ZeroInverse);
    }
    Ok(ext_pow(x, ext_order(spec) - 2, spec))
}

/// Absolute trace `F_{d^N} -> F_d`.
pub fn ext_trace(x: &FVector, spec: &FieldSpec) -> u8 {
    let mut acc = FVector::zero(spec.ext_degree);
    let mut conj = x.clone();
    for _ in 0..spec.ext_degree {
        acc = acc.add(&conj, spec);
        conj = ext_pow(&conj, spec.d as u64, spec);
    }
    debug_assert!(acc.0[1..].iter().all(|&c| c == 0), "trace must lie in the prime field");
    acc.0[0]
}
