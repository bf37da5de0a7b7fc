//! Joint eigenbases of commuting classes and certificates for weakly
//! unextendible sets of mutually unbiased bases.

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::FVector;
use crate::dense::DenseMatrix;
use crate::pauli::{
    class_from_generator, hilbert_dim, omega, pauli_matrix, CommutingClass, PauliError, PauliOp,
    Result,
};
use crate::polar::{GenIndex, PolarSpace};
use crate::spread::{is_complete, CompletenessCert, PartialSpread};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Rank-1 joint eigenprojectors of one class, indexed by characters of
/// `(Z_d)^N` in lexicographic order.
#[derive(Debug, Clone)]
pub struct ProjectorBasis {
    pub dim: usize,
    pub projectors: Vec<DenseMatrix>,
    pub source_class: GenIndex,
}

/// `P_χ = Π_j (1/d) Σ_k ω^{-k χ_j} g_j^k` over class members `g_j` whose
/// images are the rref basis rows of the generator.
pub fn eigenprojectors(c: &CommutingClass, space: &PolarSpace) -> Result<ProjectorBasis> {
    let spec = space.spec();
    let d = spec.d();
    let n = space.n();
    let dim = hilbert_dim(d, n)?;
    let g = space.generator(c.generator_image);
    let id = DenseMatrix::identity(dim);
    let w = omega(d);
    let mut powers: Vec<Vec<DenseMatrix>> = Vec::with_capacity(n);
    for row in g.basis.rows() {
        let op = PauliOp::from_symplectic(row, spec);
        if !c.ops.contains(&op) {
            return Err(PauliError::NotAClass("class lacks a basis representative".into()));
        }
        let m = pauli_matrix(&op, spec)?;
        let mut ps = vec![id.clone()];
        for k in 1..=d as usize {
            ps.push(&ps[k - 1] * &m);
        }
        if ps[d as usize].distance(&id) > DEFAULT_TOLERANCE {
            return Err(PauliError::NonDiagonalizable);
        }
        ps.truncate(d as usize);
        powers.push(ps);
    }
    let inv_d = Complex64::new(1.0 / d as f64, 0.0);
    let projectors = (0..dim)
        .map(|code| {
            let chi = FVector::from_code(code, n, d);
            chi.coords().iter().zip(&powers).fold(id.clone(), |acc, (&x, ps)| {
                let mut factor = DenseMatrix::zeros(dim);
                for (k, p) in ps.iter().enumerate() {
                    let e = ((d as usize - x as usize) * k) % d as usize;
                    factor = &factor + &p.scale(w.powu(e as u32));
                }
                &acc * &factor.scale(inv_d)
            })
        })
        .collect();
    Ok(ProjectorBasis { dim, projectors, source_class: c.generator_image })
}

/// Maximum residuals of the projector identities for one basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProjectorResiduals {
    pub idempotency: f64,
    pub hermiticity: f64,
    pub trace_one: f64,
    pub orthogonality: f64,
    pub completeness: f64,
    pub class_commutation: f64,
}

impl ProjectorResiduals {
    pub fn max(&self) -> f64 {
        [
            self.idempotency,
            self.hermiticity,
            self.trace_one,
            self.orthogonality,
            self.completeness,
            self.class_commutation,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn projector_residuals(
    basis: &ProjectorBasis,
    class: &CommutingClass,
    space: &PolarSpace,
) -> Result<ProjectorResiduals> {
    let ps = &basis.projectors;
    let mut r = ProjectorResiduals {
        idempotency: 0.0,
        hermiticity: 0.0,
        trace_one: 0.0,
        orthogonality: 0.0,
        completeness: 0.0,
        class_commutation: 0.0,
    };
    let mut sum = DenseMatrix::zeros(basis.dim);
    for (i, p) in ps.iter().enumerate() {
        r.idempotency = r.idempotency.max((p * p).distance(p));
        r.hermiticity = r.hermiticity.max(p.adjoint().distance(p));
        r.trace_one = r.trace_one.max((p.trace() - 1.0).norm());
        for q in &ps[i + 1..] {
            r.orthogonality = r.orthogonality.max((p * q).max_abs());
        }
        sum = &sum + p;
    }
    r.completeness = sum.distance(&DenseMatrix::identity(basis.dim));
    for op in &class.ops {
        let m = pauli_matrix(op, space.spec())?;
        for p in ps {
            r.class_commutation = r.class_commutation.max(p.commutator(&m).max_abs());
        }
    }
    Ok(r)
}

/// `max_{i,j} |tr(P_i Q_j) - 1/dim|`.
pub fn unbiasedness(p: &ProjectorBasis, q: &ProjectorBasis) -> Result<f64> {
    if p.dim != q.dim {
        return Err(PauliError::LengthMismatch { expected: p.dim, got: q.dim });
    }
    let target = 1.0 / p.dim as f64;
    let mut worst: f64 = 0.0;
    for a in &p.projectors {
        for b in &q.projectors {
            worst = worst.max((a.trace_product(b) - target).norm());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UmubCertificate {
    pub classes: Vec<GenIndex>,
    pub order: usize,
    pub completeness: CompletenessCert,
    /// `1 / d^N`.
    pub target: f64,
    /// Worst cross-pair deviation; absent when `d^N` is beyond the dense
    /// matrix limit.
    pub max_deviation: Option<f64>,
    pub tolerance: f64,
    pub valid: bool,
}

/// Completeness plus pairwise unbiasedness of the member eigenbases.
pub fn certify_weak_umub(ps: &PartialSpread<'_>, tolerance: f64) -> Result<UmubCertificate> {
    let space = ps.space();
    let completeness = is_complete(ps);
    let numeric = hilbert_dim(space.d(), space.n()).is_ok();
    let max_deviation = if numeric {
        let bases = ps
            .generators()
            .into_iter()
            .map(|g| eigenprojectors(&class_from_generator(g, space), space))
            .collect::<Result<Vec<_>>>()?;
        let mut worst: f64 = 0.0;
        for (i, p) in bases.iter().enumerate() {
            for q in &bases[i + 1..] {
                worst = worst.max(unbiasedness(p, q)?);
            }
        }
        Some(worst)
    } else {
        None
    };
    let dim = (space.d() as f64).powi(space.n() as i32);
    Ok(UmubCertificate {
        classes: ps.members().to_vec(),
        order: ps.len(),
        completeness,
        target: 1.0 / dim,
        max_deviation,
        tolerance,
        valid: completeness.complete && max_deviation.is_none_or(|x| x < tolerance),
    })
}
