//! Dense operator algebra: role-typed operators, spectral decomposition,
//! unitary evolution and subspace geometry.

pub mod eigen;
pub mod operator;
mod spectral;
mod subspace;

use std::ops::Deref;

pub use operator::{inner, norm, pauli, Operator};
pub use spectral::{
    evolution_operator, spectral_decompose, spectral_projectors, Eigenspace, SpectralWindow,
};
pub use subspace::{
    alternating_projection_limit, commutator_norm, projector_from_span, subspace_inclusion,
    subspace_intersection,
};

use crate::error::{Error, Result};
use crate::scalar::{Cx, Real};
use crate::tolerance::Tolerances;

fn hermiticity_residual<T: Real>(op: &Operator<T>) -> T {
    op.max_abs_diff(&op.adjoint())
}

/// A self-adjoint operator (Hamiltonian or observable).
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator<T> {
    op: Operator<T>,
}

impl<T: Real> HermitianOperator<T> {
    pub fn new(op: Operator<T>, tol: &Tolerances) -> Result<Self> {
        let residual = hermiticity_residual(&op);
        if !(residual < T::of(tol.herm_tol)) {
            return Err(Error::NonHermitianInput {
                residual: residual.to_f64(),
            });
        }
        Ok(HermitianOperator {
            op: op.hermitian_part(),
        })
    }

    pub fn zero(dim: usize) -> Self {
        HermitianOperator {
            op: Operator::zeros(dim),
        }
    }

    pub fn diagonal(values: &[T]) -> Self {
        HermitianOperator {
            op: Operator::diagonal(values),
        }
    }

    pub fn into_inner(self) -> Operator<T> {
        self.op
    }
}

impl<T> Deref for HermitianOperator<T> {
    type Target = Operator<T>;
    fn deref(&self) -> &Operator<T> {
        &self.op
    }
}

/// An orthogonal projector together with its rank.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector<T> {
    op: Operator<T>,
    rank: usize,
}

impl<T: Real> Projector<T> {
    /// Validate Hermiticity and idempotence.
    pub fn new(op: Operator<T>, tol: &Tolerances) -> Result<Self> {
        let residual = hermiticity_residual(&op);
        if !(residual < T::of(tol.herm_tol)) {
            return Err(Error::NonHermitianInput {
                residual: residual.to_f64(),
            });
        }
        let op = op.hermitian_part();
        let residual = (&op * &op).max_abs_diff(&op);
        if !(residual < T::of(tol.proj_tol)) {
            return Err(Error::NotAProjector {
                residual: residual.to_f64(),
            });
        }
        Ok(Self::from_hermitian(op))
    }

    /// Wrap an operator known to be a projector up to rounding.
    pub(crate) fn from_hermitian(op: Operator<T>) -> Self {
        let rank = op.trace().re.round().to_f64().max(0.0) as usize;
        Projector { op, rank }
    }

    /// `Σ v v†` over an orthonormal set.
    pub(crate) fn from_orthonormal(dim: usize, vectors: &[Vec<Cx<T>>]) -> Self {
        let mut op = Operator::zeros(dim);
        for v in vectors {
            op = &op + &Operator::outer(v, v);
        }
        Projector {
            op: op.hermitian_part(),
            rank: vectors.len(),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Projector {
            op: Operator::zeros(dim),
            rank: 0,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Projector {
            op: Operator::identity(dim),
            rank: dim,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `I - P`
    pub fn complement(&self) -> Self {
        let dim = self.op.dim();
        Projector {
            op: &Operator::identity(dim) - &self.op,
            rank: dim - self.rank.min(dim),
        }
    }

    /// `U P U†`, re-symmetrised.
    pub fn conjugate_by(&self, u: &UnitaryOperator<T>) -> Self {
        Projector {
            op: self.op.conjugate_by(u).hermitian_part(),
            rank: self.rank,
        }
    }

    pub fn as_operator(&self) -> &Operator<T> {
        &self.op
    }

    pub fn into_inner(self) -> Operator<T> {
        self.op
    }
}

impl<T> Deref for Projector<T> {
    type Target = Operator<T>;
    fn deref(&self) -> &Operator<T> {
        &self.op
    }
}

/// A unitary operator, typically `exp(-iH Δt / ħ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOperator<T> {
    op: Operator<T>,
}

impl<T: Real> UnitaryOperator<T> {
    pub fn new(op: Operator<T>, tol: &Tolerances) -> Result<Self> {
        let u = UnitaryOperator { op };
        let residual = u.unitarity_residual();
        if !(residual < T::of(tol.unit_tol)) {
            return Err(Error::NotUnitary {
                residual: residual.to_f64(),
            });
        }
        Ok(u)
    }

    pub(crate) fn from_trusted(op: Operator<T>) -> Self {
        UnitaryOperator { op }
    }

    pub fn identity(dim: usize) -> Self {
        UnitaryOperator {
            op: Operator::identity(dim),
        }
    }

    /// Max-entry deviation of `U U†` from the identity.
    pub fn unitarity_residual(&self) -> T {
        (&self.op * &self.op.adjoint()).max_abs_diff(&Operator::identity(self.op.dim()))
    }

    /// The inverse, `U†`.
    pub fn inverse(&self) -> Self {
        UnitaryOperator {
            op: self.op.adjoint(),
        }
    }

    pub fn compose(&self, other: &Self) -> Self {
        UnitaryOperator {
            op: &self.op * &other.op,
        }
    }
}

impl<T> Deref for UnitaryOperator<T> {
    type Target = Operator<T>;
    fn deref(&self) -> &Operator<T> {
        &self.op
    }
}

/// A statistical operator: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator<T> {
    op: Operator<T>,
}

impl<T: Real> DensityOperator<T> {
    pub fn new(op: Operator<T>, tol: &Tolerances) -> Result<Self> {
        let residual = hermiticity_residual(&op);
        if !(residual < T::of(tol.herm_tol)) {
            return Err(Error::InvalidDensity {
                reason: format!("not Hermitian (residual {:.3e})", residual.to_f64()),
            });
        }
        let op = op.hermitian_part();
        let trace = op.trace().re;
        if !((trace - T::one()).abs() < T::of(tol.trace_tol)) {
            return Err(Error::InvalidDensity {
                reason: format!("trace {} differs from 1", trace.to_f64()),
            });
        }
        let (values, _) = eigen::hermitian_eigen(&op);
        if let Some(&min) = values.first() {
            if min < -T::of(tol.psd_tol) {
                return Err(Error::InvalidDensity {
                    reason: format!("negative eigenvalue {}", min.to_f64()),
                });
            }
        }
        Ok(DensityOperator { op })
    }

    /// `|ψ⟩⟨ψ| / ⟨ψ|ψ⟩`
    pub fn pure(state: &[Cx<T>]) -> Result<Self> {
        let n = norm(state);
        if n.is_zero() {
            return Err(Error::ZeroSpan);
        }
        let v: Vec<_> = state.iter().map(|z| *z / n).collect();
        Ok(DensityOperator {
            op: Operator::outer(&v, &v),
        })
    }

    /// Rank-normalised projector, `P / rank(P)`.
    pub fn from_projector(p: &Projector<T>) -> Result<Self> {
        if p.rank() == 0 {
            return Err(Error::InvalidDensity {
                reason: "zero projector".into(),
            });
        }
        Ok(DensityOperator {
            op: p.scale_real(T::one() / T::of(p.rank() as f64)),
        })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityOperator {
            op: Operator::identity(dim).scale_real(T::one() / T::of(dim as f64)),
        }
    }

    /// `U ρ U†`
    pub fn evolve(&self, u: &UnitaryOperator<T>) -> Self {
        DensityOperator {
            op: self.op.conjugate_by(u).hermitian_part(),
        }
    }

    /// Born rule `Tr(ρ A)`, real part.
    pub fn expectation(&self, a: &Operator<T>) -> T {
        (&self.op * a).trace().re
    }
}

impl<T> Deref for DensityOperator<T> {
    type Target = Operator<T>;
    fn deref(&self) -> &Operator<T> {
        &self.op
    }
}

/// Clamp a probability that may stray outside `[0, 1]` by rounding.
pub(crate) fn clamp_probability<T: Real>(p: T) -> T {
    p.max(T::zero()).min(T::one())
}
