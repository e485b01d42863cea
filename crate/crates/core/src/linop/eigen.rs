//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq`, then applies a
//! real Jacobi rotation to the resulting real symmetric 2×2 block. The
//! accumulated unitary holds the eigenvectors as columns.

use num_traits::Zero;

use super::operator::Operator;
use crate::scalar::{Cx, Real};

const MAX_SWEEPS: usize = 100;

fn off_diagonal_norm<T: Real>(a: &Operator<T>) -> T {
    let n = a.dim();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigenvalues in ascending order and the matching orthonormal eigenvectors
/// (column `k` of the returned operator belongs to eigenvalue `k`).
///
/// Only the Hermitian part of `a` is used.
pub fn hermitian_eigen<T: Real>(a: &Operator<T>) -> (Vec<T>, Operator<T>) {
    let n = a.dim();
    let mut m = a.hermitian_part();
    let mut v = Operator::<T>::identity(n);
    let scale = m.frobenius_norm();
    if scale.is_zero() || n == 1 {
        let values = (0..n).map(|i| m[(i, i)].re).collect();
        return (values, v);
    }
    let eps = T::epsilon();
    let threshold = eps * scale * T::of(0.01);

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&m) <= threshold {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let mag = apq.norm();
                if mag <= eps * eps * scale {
                    continue;
                }
                rotate(&mut m, &mut v, p, q, apq, mag);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        m[(i, i)]
            .re
            .partial_cmp(&m[(j, j)].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = Operator::from_fn(n, |i, k| v[(i, order[k])]);
    (values, vectors)
}

fn rotate<T: Real>(
    m: &mut Operator<T>,
    v: &mut Operator<T>,
    p: usize,
    q: usize,
    apq: Cx<T>,
    mag: T,
) {
    let n = m.dim();
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let phase = apq / mag;
    let tau = (aqq - app) / (T::of(2.0) * mag);
    let t = if tau >= T::zero() {
        T::one() / (tau + (T::one() + tau * tau).sqrt())
    } else {
        -T::one() / (-tau + (T::one() + tau * tau).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;
    // J = diag(1, conj(phase)) · [[c, s], [-s, c]]
    let j00 = Cx::new(c, T::zero());
    let j01 = Cx::new(s, T::zero());
    let j10 = phase.conj() * (-s);
    let j11 = phase.conj() * c;

    // columns: M ← M J
    for k in 0..n {
        let mp = m[(k, p)];
        let mq = m[(k, q)];
        m[(k, p)] = mp * j00 + mq * j10;
        m[(k, q)] = mp * j01 + mq * j11;
    }
    // rows: M ← J† M
    for k in 0..n {
        let mp = m[(p, k)];
        let mq = m[(q, k)];
        m[(p, k)] = j00.conj() * mp + j10.conj() * mq;
        m[(q, k)] = j01.conj() * mp + j11.conj() * mq;
    }
    m[(p, q)] = Cx::zero();
    m[(q, p)] = Cx::zero();
    m[(p, p)] = Cx::new(m[(p, p)].re, T::zero());
    m[(q, q)] = Cx::new(m[(q, q)].re, T::zero());

    for k in 0..n {
        let vp = v[(k, p)];
        let vq = v[(k, q)];
        v[(k, p)] = vp * j00 + vq * j10;
        v[(k, q)] = vp * j01 + vq * j11;
    }
}
