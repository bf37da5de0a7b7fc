//! Generalized Pauli operators on `N` qudits of prime dimension `d`, their
//! matrices, and the correspondence between maximal commuting classes and
//! generators of `W(2N-1, d)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{span, FVector, FieldSpec};
use crate::dense::{DenseMatrix, MAX_DIM};
use crate::polar::{symp_form, GenIndex, Generator, PolarError, PolarSpace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PauliError {
    #[error(transparent)]
    Polar(#[from] PolarError),
    #[error("Hilbert space dimension {got} exceeds {limit}")]
    ScaleExceeded { got: u128, limit: u128 },
    #[error("operator has {got} tensor factors, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("exponent {value} out of range for modulus {modulus}")]
    BadExponent { value: u64, modulus: u64 },
    #[error("not a maximal commuting class: {0}")]
    NotAClass(String),
    #[error("class member does not have order d")]
    NonDiagonalizable,
}

pub type Result<T> = std::result::Result<T, PauliError>;

/// `ω^phase_exp X^a Z^b` (with `i^phase_exp` in place of `ω^phase_exp` when
/// `d = 2`). Factor 0 is the leftmost tensor slot.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PauliOp {
    pub a: FVector,
    pub b: FVector,
    pub phase_exp: u8,
}

fn phase_modulus(d: u8) -> u8 {
    if d == 2 {
        4
    } else {
        d
    }
}

impl PauliOp {
    pub fn new(a: Vec<u8>, b: Vec<u8>, phase_exp: u8, spec: &FieldSpec) -> Result<Self> {
        if a.len() != b.len() {
            return Err(PauliError::LengthMismatch { expected: a.len(), got: b.len() });
        }
        let d = spec.d();
        if let Some(&bad) = a.iter().chain(&b).find(|&&x| x >= d) {
            return Err(PauliError::BadExponent { value: bad as u64, modulus: d as u64 });
        }
        if phase_exp >= phase_modulus(d) {
            return Err(PauliError::BadExponent {
                value: phase_exp as u64,
                modulus: phase_modulus(d) as u64,
            });
        }
        Ok(PauliOp { a: FVector::new(a, spec), b: FVector::new(b, spec), phase_exp })
    }

    pub fn identity(n: usize) -> Self {
        PauliOp { a: FVector::zero(n), b: FVector::zero(n), phase_exp: 0 }
    }

    /// The canonical coset representative over a symplectic vector: phase 0
    /// for odd `d`, `i^{a·b}` for `d = 2` so that every representative
    /// squares to the identity.
    pub fn from_symplectic(v: &FVector, spec: &FieldSpec) -> Self {
        let c = v.coords();
        assert!(c.len() % 2 == 0, "symplectic vectors have even length");
        let a: Vec<u8> = c.iter().step_by(2).copied().collect();
        let b: Vec<u8> = c.iter().skip(1).step_by(2).copied().collect();
        let phase_exp = if spec.d() == 2 {
            (a.iter().zip(&b).filter(|(x, y)| **x == 1 && **y == 1).count() % 4) as u8
        } else {
            0
        };
        PauliOp { a: FVector::new(a, spec), b: FVector::new(b, spec), phase_exp }
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    /// Interleaved `(a_0, b_0, a_1, b_1, ...)`.
    pub fn symplectic(&self) -> FVector {
        self.a.interleave(&self.b)
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.phase_exp == 0
    }
}

/// `d^n` when it does not exceed the dense-matrix limit.
pub fn hilbert_dim(d: u8, n: usize) -> Result<usize> {
    let dim = (d as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if dim > MAX_DIM as u128 {
        return Err(PauliError::ScaleExceeded { got: dim, limit: MAX_DIM as u128 });
    }
    Ok(dim as usize)
}

pub fn omega(d: u8) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI / d as f64)
}

/// The phase unit raised to `k`: `ω^k` for odd `d`, `i^k` for `d = 2`.
fn phase_unit(d: u8, k: u8) -> Complex64 {
    let m = phase_modulus(d);
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64)
}

/// `X_d|s> = |s+1>`, `Z_d|s> = ω^s|s>` on each factor, tensored with factor
/// 0 leftmost, times the phase.
pub fn pauli_matrix(op: &PauliOp, spec: &FieldSpec) -> Result<DenseMatrix> {
    let d = spec.d();
    let n = op.n();
    let dim = hilbert_dim(d, n)?;
    let w = omega(d);
    let phase = phase_unit(d, op.phase_exp);
    let mut m = DenseMatrix::zeros(dim);
    for s in 0..dim {
        let digits = FVector::from_code(s, n, d);
        let target = digits.add(&op.a, spec).code(d);
        let e: u32 = digits
            .coords()
            .iter()
            .zip(op.b.coords())
            .map(|(&x, &z)| x as u32 * z as u32)
            .sum::<u32>()
            % d as u32;
        m[(target, s)] = phase * w.powu(e);
    }
    Ok(m)
}

/// Commutation through the symplectic form on the images.
pub fn commutes(p: &PauliOp, q: &PauliOp, space: &PolarSpace) -> bool {
    symp_form(&p.symplectic(), &q.symplectic(), space).expect("operators over the same (d, N)") == 0
}

/// The nonidentity operators over one generator: one per nonzero vector of
/// its subspace, ordered by coefficient code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommutingClass {
    pub ops: Vec<PauliOp>,
    pub generator_image: GenIndex,
}

pub fn class_from_generator(g: &Generator, space: &PolarSpace) -> CommutingClass {
    let spec = space.spec();
    let d = spec.d();
    let n = space.n();
    let rows = g.basis.rows();
    let total = (d as usize).pow(n as u32);
    let ops = (1..total)
        .map(|code| {
            let coeffs = FVector::from_code(code, n, d);
            let v = coeffs
                .coords()
                .iter()
                .zip(rows)
                .fold(FVector::zero(2 * n), |acc, (&c, r)| acc.axpy(c, r, spec));
            PauliOp::from_symplectic(&v, spec)
        })
        .collect();
    CommutingClass { ops, generator_image: g.gen_index }
}

/// Inverse of [`class_from_generator`]: the span of the symplectic images.
pub fn generator_from_class<'a>(c: &CommutingClass, space: &'a PolarSpace) -> Result<&'a Generator> {
    let n = space.n();
    let expected = (space.d() as usize).pow(n as u32) - 1;
    if c.ops.len() != expected {
        return Err(PauliError::NotAClass(format!("{} operators, expected {expected}", c.ops.len())));
    }
    if let Some(op) = c.ops.iter().find(|op| op.n() != n) {
        return Err(PauliError::LengthMismatch { expected: n, got: op.n() });
    }
    let images: Vec<FVector> = c.ops.iter().map(PauliOp::symplectic).collect();
    let distinct: std::collections::BTreeSet<&FVector> = images.iter().collect();
    if distinct.len() != images.len() || images.iter().any(FVector::is_zero) {
        return Err(PauliError::NotAClass("repeated or central operator".into()));
    }
    let sub = span(2 * n, &images, space.spec());
    if sub.rank() != n || !space.is_isotropic(&sub) {
        return Err(PauliError::NotAClass("images do not span a generator".into()));
    }
    let idx = space
        .generator_index(&sub)
        .ok_or_else(|| PauliError::NotAClass("span is not catalogued".into()))?;
    Ok(space.generator(idx))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CenterReport {
    pub d: u8,
    pub n: usize,
    /// `d^{2N+1}` elements `ω^k X^a Z^b`.
    pub group_order: usize,
    pub center_size: usize,
    /// Center elements that are scalar multiples of the identity.
    pub scalar_center: usize,
    pub nonabelian: bool,
    pub exponent: u32,
    /// Element orders and how often they occur.
    pub order_counts: BTreeMap<u32, usize>,
    /// Elements `X^a Z^b` whose square is `-I`.
    pub squares_to_minus_identity: usize,
}

/// Enumerates the group `{ω^k X^a Z^b}` (with `ω = -1` when `d = 2`) as
/// matrices and measures its center and exponent.
pub fn center_check(spec: &FieldSpec, n: usize) -> Result<CenterReport> {
    const MAX_ELEMENTS: usize = 4096;
    let d = spec.d();
    let dim = hilbert_dim(d, n)?;
    let count = (d as usize).pow(2 * n as u32 + 1);
    if count > MAX_ELEMENTS {
        return Err(PauliError::ScaleExceeded { got: count as u128, limit: MAX_ELEMENTS as u128 });
    }
    let w = omega(d);
    let tol = 1e-9;
    let id = DenseMatrix::identity(dim);
    let mut reps = Vec::new();
    for code in 0..(d as usize).pow(2 * n as u32) {
        let v = FVector::from_code(code, 2 * n, d);
        let c = v.coords();
        let a = c.iter().step_by(2).copied().collect();
        let b = c.iter().skip(1).step_by(2).copied().collect();
        let raw = PauliOp { a: FVector::new(a, spec), b: FVector::new(b, spec), phase_exp: 0 };
        reps.push(pauli_matrix(&raw, spec)?);
    }
    let elements: Vec<DenseMatrix> = (0..d as u32)
        .flat_map(|k| reps.iter().map(move |m| m.scale(w.powu(k))))
        .collect();

    let central = |m: &DenseMatrix| reps.iter().all(|r| m.commutator(r).max_abs() < tol);
    let center: Vec<&DenseMatrix> = elements.iter().filter(|m| central(m)).collect();
    let is_scalar = |m: &DenseMatrix| {
        let s = m[(0, 0)];
        m.distance(&id.scale(s)) < tol
    };
    let scalar_center = center.iter().filter(|m| is_scalar(m)).count();
    let nonabelian = reps.iter().any(|m| !central(m));

    let mut order_counts = BTreeMap::new();
    let mut exponent = 1u32;
    for m in &elements {
        let mut p = m.clone();
        let mut order = 1u32;
        while p.distance(&id) >= tol {
            p = &p * m;
            order += 1;
            assert!(order <= 4 * d as u32, "element order exceeds 4d");
        }
        *order_counts.entry(order).or_insert(0) += 1;
        exponent = lcm(exponent, order);
    }
    let minus_id = id.scale(Complex64::new(-1.0, 0.0));
    let squares_to_minus_identity =
        reps.iter().filter(|m| (*m * *m).distance(&minus_id) < tol).count();
    Ok(CenterReport {
        d,
        n,
        group_order: count,
        center_size: center.len(),
        scalar_center,
        nonabelian,
        exponent,
        order_counts,
        squares_to_minus_identity,
    })
}

fn lcm(a: u32, b: u32) -> u32 {
    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}
