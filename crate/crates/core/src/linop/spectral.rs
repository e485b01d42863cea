use num_traits::Zero;

use super::eigen::hermitian_eigen;
use super::{HermitianOperator, Operator, Projector, UnitaryOperator};
use crate::error::{Error, Result};
use crate::scalar::{Cx, Real};
use crate::tolerance::Tolerances;

/// One eigenvalue cluster of a Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenspace<T> {
    pub value: T,
    /// Orthonormal basis of the eigenspace.
    pub vectors: Vec<Vec<Cx<T>>>,
}

impl<T: Real> Eigenspace<T> {
    pub fn multiplicity(&self) -> usize {
        self.vectors.len()
    }
}

/// Half-open interval `[lo, hi)` of the eigenvalue axis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralWindow<T> {
    pub label: String,
    pub lo: T,
    pub hi: T,
}

impl<T: Real> SpectralWindow<T> {
    pub fn new(label: impl Into<String>, lo: T, hi: T) -> Self {
        SpectralWindow {
            label: label.into(),
            lo,
            hi,
        }
    }

    pub fn contains(&self, v: T) -> bool {
        self.lo <= v && v < self.hi
    }

    fn overlaps(&self, other: &Self) -> bool {
        self.lo < other.hi && other.lo < self.hi
    }
}

/// Eigenspaces in ascending eigenvalue order. Eigenvalues closer than
/// `rank_tol` to their neighbour are merged into one eigenspace whose value
/// is the cluster mean.
pub fn spectral_decompose<T: Real>(
    a: &HermitianOperator<T>,
    tol: &Tolerances,
) -> Vec<Eigenspace<T>> {
    let (values, vectors) = hermitian_eigen(a);
    let gap = T::of(tol.rank_tol);
    type Cluster<T> = (Vec<T>, Vec<Vec<Cx<T>>>);
    let mut spaces: Vec<Cluster<T>> = Vec::new();
    for (k, &value) in values.iter().enumerate() {
        let column = vectors.column(k);
        match spaces.last_mut() {
            Some((vals, vecs)) if value - *vals.last().unwrap() < gap => {
                vals.push(value);
                vecs.push(column);
            }
            _ => spaces.push((vec![value], vec![column])),
        }
    }
    spaces
        .into_iter()
        .map(|(vals, vectors)| {
            let value = vals.iter().copied().sum::<T>() / T::of(vals.len() as f64);
            Eigenspace { value, vectors }
        })
        .collect()
}

/// Projectors onto the spectral subspaces selected by each window, in window
/// order. A window that captures no eigenvalue yields the zero projector.
pub fn spectral_projectors<T: Real>(
    a: &HermitianOperator<T>,
    partition: &[SpectralWindow<T>],
    tol: &Tolerances,
) -> Result<Vec<Projector<T>>> {
    for w in partition {
        if !(w.lo < w.hi) {
            return Err(Error::EmptyWindow {
                label: w.label.clone(),
            });
        }
    }
    for (i, a) in partition.iter().enumerate() {
        for b in &partition[i + 1..] {
            if a.overlaps(b) {
                return Err(Error::OverlappingWindows {
                    first: a.label.clone(),
                    second: b.label.clone(),
                });
            }
        }
    }
    let dim = a.dim();
    let mut buckets: Vec<Vec<Vec<Cx<T>>>> = vec![Vec::new(); partition.len()];
    for space in spectral_decompose(a, tol) {
        let slot = partition
            .iter()
            .position(|w| w.contains(space.value))
            .ok_or(Error::UncoveredEigenvalue {
                value: space.value.to_f64(),
            })?;
        buckets[slot].extend(space.vectors);
    }
    Ok(buckets
        .iter()
        .map(|vs| Projector::from_orthonormal(dim, vs))
        .collect())
}

/// `exp(-i H (t_to - t_from) / ħ)` through the eigenbasis of `H`.
pub fn evolution_operator<T: Real>(
    h: &HermitianOperator<T>,
    t_from: T,
    t_to: T,
    hbar: T,
) -> Result<UnitaryOperator<T>> {
    if !(hbar > T::zero()) {
        return Err(Error::InvalidHbar {
            value: hbar.to_f64(),
        });
    }
    let dim = h.dim();
    let dt = t_to - t_from;
    if dt.is_zero() || h.max_abs().is_zero() {
        return Ok(UnitaryOperator::identity(dim));
    }
    let (values, vectors) = hermitian_eigen(h);
    let phases: Vec<Cx<T>> = values
        .iter()
        .map(|&l| Cx::new(T::zero(), -l * dt / hbar).exp())
        .collect();
    let u = Operator::from_fn(dim, |i, j| {
        (0..dim).fold(Cx::zero(), |acc, k| {
            acc + vectors[(i, k)] * phases[k] * vectors[(j, k)].conj()
        })
    });
    Ok(UnitaryOperator::from_trusted(u))
}
