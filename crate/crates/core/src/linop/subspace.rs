use super::eigen::hermitian_eigen;
use super::operator::{inner, norm};
use super::{Operator, Projector};
use crate::error::{Error, Result};
use crate::scalar::{Cx, Real};
use crate::tolerance::Tolerances;

/// Orthogonal projector onto the span of `vectors`.
///
/// Uses modified Gram-Schmidt with one re-orthogonalisation pass; a vector
/// whose remainder is below `rank_tol` times its own norm is treated as
/// linearly dependent.
pub fn projector_from_span<T: Real>(
    vectors: &[Vec<Cx<T>>],
    tol: &Tolerances,
) -> Result<Projector<T>> {
    let dim = match vectors.first() {
        Some(v) => v.len(),
        None => return Err(Error::ZeroSpan),
    };
    if dim == 0 {
        return Err(Error::ZeroSpan);
    }
    if let Some(v) = vectors.iter().find(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: v.len(),
        });
    }
    let largest = vectors.iter().map(|v| norm(v)).fold(T::zero(), T::max);
    let cutoff = T::of(tol.rank_tol);
    let mut basis: Vec<Vec<Cx<T>>> = Vec::new();
    for v in vectors {
        let original = norm(v);
        if original <= cutoff * largest || original.is_zero() {
            continue;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = inner(b, &w);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= *bi * c;
                }
            }
        }
        let n = norm(&w);
        if n > cutoff * original {
            basis.push(w.into_iter().map(|z| z / n).collect());
        }
    }
    if basis.is_empty() {
        return Err(Error::ZeroSpan);
    }
    Ok(Projector::from_orthonormal(dim, &basis))
}

/// Projector onto `range(P) ∩ range(Q)`.
///
/// The intersection is the kernel of the positive semidefinite operator
/// `(I - P) + (I - Q)`; eigenvectors with eigenvalue below `rank_tol` span it.
pub fn subspace_intersection<T: Real>(
    p: &Projector<T>,
    q: &Projector<T>,
    tol: &Tolerances,
) -> Result<Projector<T>> {
    p.check_dim(q)?;
    let dim = p.dim();
    let gap = p.complement().as_operator() + q.complement().as_operator();
    let (values, vectors) = hermitian_eigen(&gap);
    let cutoff = T::of(tol.rank_tol);
    let kernel: Vec<Vec<Cx<T>>> = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v < cutoff)
        .map(|(k, _)| vectors.column(k))
        .collect();
    Ok(Projector::from_orthonormal(dim, &kernel))
}

/// Nearest orthogonal projector to a Hermitian operator: eigenvalues at or
/// above one half are rounded to one, the rest to zero.
fn round_to_projector<T: Real>(m: &Operator<T>) -> Projector<T> {
    let (values, vectors) = hermitian_eigen(m);
    let half = T::of(0.5);
    let kept: Vec<Vec<Cx<T>>> = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v >= half)
        .map(|(k, _)| vectors.column(k))
        .collect();
    Projector::from_orthonormal(m.dim(), &kept)
}

/// The limit of `(PQ)^n`, which projects onto `range(P) ∩ range(Q)`.
///
/// The sequence is advanced by repeated squaring, `M_{2n} = M_n²`, so
/// `max_iter` bounds the number of squarings (step `k` reaches power `2^k`).
/// Iteration stops once the Hermitian part changes by less than `tol`
/// (max entry). The result is rounded to the nearest projector and must agree
/// with [`subspace_intersection`] within `meet_tol`.
pub fn alternating_projection_limit<T: Real>(
    p: &Projector<T>,
    q: &Projector<T>,
    tol: T,
    max_iter: usize,
    tols: &Tolerances,
) -> Result<Projector<T>> {
    p.check_dim(q)?;
    let mut m = p.as_operator() * q.as_operator();
    let mut herm = m.hermitian_part();
    let mut converged = false;
    for _ in 0..max_iter {
        let next = &m * &m;
        let next_herm = next.hermitian_part();
        let change = next_herm.max_abs_diff(&herm);
        m = next;
        herm = next_herm;
        if change < tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            iterations: max_iter,
        });
    }
    let limit = round_to_projector(&herm);
    let exact = subspace_intersection(p, q, tols)?;
    let residual = limit.max_abs_diff(&exact);
    if !(residual < T::of(tols.meet_tol)) {
        return Err(Error::MeetMismatch {
            residual: residual.to_f64(),
        });
    }
    Ok(limit)
}

/// Max-entry magnitude of `AB - BA`.
pub fn commutator_norm<T: Real>(a: &Operator<T>, b: &Operator<T>) -> Result<T> {
    a.check_dim(b)?;
    Ok(a.commutator(b).max_abs())
}

/// `range(P) ⊆ range(Q)`, decided by `QP = P` within `incl_tol`.
pub fn subspace_inclusion<T: Real>(
    p: &Projector<T>,
    q: &Projector<T>,
    tol: &Tolerances,
) -> Result<bool> {
    p.check_dim(q)?;
    let qp = q.as_operator() * p.as_operator();
    Ok(qp.max_abs_diff(p) < T::of(tol.incl_tol))
}
