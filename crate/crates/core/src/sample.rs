//! Random operators for randomized checks.
//!
//! All draws are Gaussian in `f64` and converted to `T` at the end.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linop::{DensityOperator, HermitianOperator, Operator, Projector, UnitaryOperator};
use crate::scalar::{Cx, Real};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

pub fn complex_vector<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Cx<T>> {
    (0..dim)
        .map(|_| Cx::new(T::of(gaussian(rng)), T::of(gaussian(rng))))
        .collect()
}

/// Gaussian Hermitian matrix with entries of order one.
pub fn hermitian<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianOperator<T> {
    let g = Operator::from_fn(dim, |_, _| {
        Cx::new(T::of(gaussian(rng)), T::of(gaussian(rng)))
    });
    let h = (&g + &g.adjoint()).scale_real(T::of(0.5));
    HermitianOperator::new(h, &T::default_tolerances()).expect("symmetrised matrix is Hermitian")
}

/// Haar-distributed unitary from Gram-Schmidt on a Gaussian matrix.
pub fn unitary<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> UnitaryOperator<T> {
    let columns = orthonormal_columns::<T, R>(dim, dim, rng);
    let op = Operator::from_fn(dim, |i, j| columns[j][i]);
    UnitaryOperator::new(op, &T::default_tolerances()).expect("orthonormal columns form a unitary")
}

/// `count` random orthonormal vectors in dimension `dim` (`count <= dim`).
pub fn orthonormal_columns<T: Real, R: Rng + ?Sized>(
    dim: usize,
    count: usize,
    rng: &mut R,
) -> Vec<Vec<Cx<T>>> {
    assert!(count <= dim);
    let mut basis: Vec<Vec<Cx<T>>> = Vec::with_capacity(count);
    while basis.len() < count {
        let mut v = complex_vector::<T, R>(dim, rng);
        for _ in 0..2 {
            for b in &basis {
                let c = crate::linop::inner(b, &v);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= *bi * c;
                }
            }
        }
        let n = crate::linop::norm(&v);
        if n > T::of(1e-6) {
            basis.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    basis
}

/// Uniformly oriented projector of the given rank.
pub fn projector<T: Real, R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> Projector<T> {
    let vectors = orthonormal_columns::<T, R>(dim, rank, rng);
    Projector::from_orthonormal(dim, &vectors)
}

/// Projector with rank drawn uniformly from `0..=dim`.
pub fn projector_any_rank<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Projector<T> {
    let rank = rng.random_range(0..=dim);
    projector(dim, rank, rng)
}

/// Random mixed state `G G† / Tr(G G†)`.
pub fn density<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityOperator<T> {
    let g = Operator::from_fn(dim, |_, _| {
        Cx::new(T::of(gaussian(rng)), T::of(gaussian(rng)))
    });
    let gg = &g * &g.adjoint();
    let tr = gg.trace().re;
    DensityOperator::new(gg.scale_real(T::one() / tr), &T::default_tolerances())
        .expect("Wishart state is valid")
}

pub fn pure_state<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityOperator<T> {
    DensityOperator::pure(&complex_vector::<T, R>(dim, rng)).expect("Gaussian vector is non-zero")
}
