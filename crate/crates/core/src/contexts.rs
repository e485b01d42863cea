//! Single-time contexts and generalized (multi-time) contexts.
//!
//! A [`Context`] is a complete family of mutually exclusive atoms at one time.
//! Several contexts at increasing times form a [`GeneralizedContext`] when
//! all their atoms, translated to a common reference time, commute across
//! contexts. The ordered products of translated atoms (one per context) are
//! the composed atoms; sums of composed atoms are the [`CompositeProperty`]
//! values of the resulting Boolean algebra, with Born-rule probabilities.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{ContextViolation, Error, IncompatiblePair, Result};
use crate::lattice::{translate, Frame, TimedProperty};
use crate::linop::{clamp_probability, commutator_norm, DensityOperator, Operator, Projector};
use crate::scalar::Real;
use crate::tolerance::Tolerances;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// A complete set of mutually exclusive atomic projectors at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct Context<T> {
    pub time: T,
    pub atoms: Vec<Projector<T>>,
    pub labels: Vec<String>,
}

impl<T: Real> Context<T> {
    /// Validate exclusivity (`Π_i Π_j = δ_ij Π_i`) and completeness
    /// (`Σ Π_i = I`). Every violation is collected into the error.
    pub fn new(
        time: T,
        atoms: Vec<Projector<T>>,
        labels: Vec<String>,
        tol: &Tolerances,
    ) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::EmptyContext);
        }
        if labels.len() != atoms.len() {
            return Err(Error::LabelMismatch {
                labels: labels.len(),
                atoms: atoms.len(),
            });
        }
        let dim = atoms[0].dim();
        for a in &atoms {
            atoms[0].check_dim(a)?;
        }
        let limit = T::of(tol.proj_tol);
        let mut violations = Vec::new();
        for i in 0..atoms.len() {
            for j in i..atoms.len() {
                let prod = atoms[i].as_operator() * atoms[j].as_operator();
                let residual = if i == j {
                    prod.max_abs_diff(&atoms[i])
                } else {
                    prod.max_abs()
                };
                if !(residual < limit) {
                    violations.push(ContextViolation::Exclusivity {
                        i,
                        j,
                        residual: residual.to_f64(),
                    });
                }
            }
        }
        let sum = atoms
            .iter()
            .fold(Operator::zeros(dim), |acc, a| &acc + a.as_operator());
        let residual = sum.max_abs_diff(&Operator::identity(dim));
        if !(residual < limit) {
            violations.push(ContextViolation::Completeness {
                residual: residual.to_f64(),
            });
        }
        if !violations.is_empty() {
            return Err(Error::InvalidContext { violations });
        }
        Ok(Context {
            time,
            atoms,
            labels,
        })
    }

    pub fn dim(&self) -> usize {
        self.atoms[0].dim()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// [`Context::new`] with labels `"0"`, `"1"`, ...
pub fn validate_context<T: Real>(
    time: T,
    atoms: Vec<Projector<T>>,
    tol: &Tolerances,
) -> Result<Context<T>> {
    let labels = (0..atoms.len()).map(|i| i.to_string()).collect();
    Context::new(time, atoms, labels, tol)
}

/// Contexts at several times whose translated atoms pairwise commute.
#[derive(Debug, Clone)]
pub struct GeneralizedContext<T> {
    id: u64,
    contexts: Vec<Context<T>>,
    frame: Frame<T>,
    translated: Vec<Vec<Projector<T>>>,
    grid: LabelGrid,
    composed: Vec<Projector<T>>,
    max_commutator: T,
}

impl<T: Real> GeneralizedContext<T> {
    pub fn contexts(&self) -> &[Context<T>] {
        &self.contexts
    }

    pub fn frame(&self) -> &Frame<T> {
        &self.frame
    }

    pub fn ref_time(&self) -> T {
        self.frame.ref_time
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    /// Atom counts per context.
    pub fn shape(&self) -> &[usize] {
        &self.grid.shape
    }

    /// Atoms of context `k` translated to the reference time.
    pub fn translated_atoms(&self, k: usize) -> &[Projector<T>] {
        &self.translated[k]
    }

    /// Largest cross-context commutator norm observed while building.
    pub fn max_commutator(&self) -> T {
        self.max_commutator
    }

    pub fn num_composed(&self) -> usize {
        self.composed.len()
    }

    /// Composed atoms in row-major label order (first context varies slowest).
    pub fn composed_atoms(&self) -> &[Projector<T>] {
        &self.composed
    }

    pub fn composed_atom(&self, tuple: &[usize]) -> Result<&Projector<T>> {
        Ok(&self.composed[self.index_of(tuple)?])
    }

    pub fn grid(&self) -> &LabelGrid {
        &self.grid
    }

    /// Flat index of a label tuple.
    pub fn index_of(&self, tuple: &[usize]) -> Result<usize> {
        self.grid.index_of(tuple)
    }

    pub fn tuple_of(&self, index: usize) -> Vec<usize> {
        self.grid.tuple_of(index)
    }

    pub fn tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.grid.tuples()
    }

    /// Human-readable labels of a tuple.
    pub fn tuple_labels(&self, tuple: &[usize]) -> Vec<String> {
        tuple
            .iter()
            .zip(&self.contexts)
            .map(|(&i, c)| c.labels[i].clone())
            .collect()
    }

    /// Property selecting the given label tuples.
    pub fn property<I, V>(&self, tuples: I) -> Result<CompositeProperty>
    where
        I: IntoIterator<Item = V>,
        V: AsRef<[usize]>,
    {
        let selected = tuples
            .into_iter()
            .map(|t| self.index_of(t.as_ref()))
            .collect::<Result<_>>()?;
        Ok(CompositeProperty {
            parent: self.id,
            selected,
        })
    }

    /// Product property `Δ^(1) × Δ^(2) × ...`: one subset of atom indices per context.
    pub fn product_property(&self, subsets: &[Vec<usize>]) -> Result<CompositeProperty> {
        if subsets.len() != self.grid.shape.len() {
            return Err(Error::UnknownTuple {
                tuple: subsets.iter().map(|s| s.len()).collect(),
            });
        }
        let selected = (0..self.composed.len())
            .filter(|&i| {
                self.tuple_of(i)
                    .iter()
                    .zip(subsets)
                    .all(|(k, set)| set.contains(k))
            })
            .collect::<BTreeSet<_>>();
        for (set, &n) in subsets.iter().zip(&self.grid.shape) {
            if let Some(&bad) = set.iter().find(|&&k| k >= n) {
                return Err(Error::UnknownTuple { tuple: vec![bad] });
            }
        }
        Ok(CompositeProperty {
            parent: self.id,
            selected,
        })
    }

    pub fn full(&self) -> CompositeProperty {
        CompositeProperty {
            parent: self.id,
            selected: (0..self.composed.len()).collect(),
        }
    }

    pub fn empty(&self) -> CompositeProperty {
        CompositeProperty {
            parent: self.id,
            selected: BTreeSet::new(),
        }
    }

    /// `Σ Π_tuple` over the selection.
    pub fn projector_of(&self, prop: &CompositeProperty) -> Result<Projector<T>> {
        self.owns(prop)?;
        let sum = prop
            .selected
            .iter()
            .fold(Operator::zeros(self.dim()), |acc, &i| {
                &acc + self.composed[i].as_operator()
            });
        Ok(Projector::from_hermitian(sum))
    }

    fn owns(&self, prop: &CompositeProperty) -> Result<()> {
        if prop.parent != self.id {
            return Err(Error::ForeignProperty);
        }
        Ok(())
    }
}

/// Mixed-radix enumeration of label tuples, first position varying slowest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelGrid {
    shape: Vec<usize>,
}

impl LabelGrid {
    pub fn new(shape: Vec<usize>) -> Self {
        LabelGrid { shape }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index_of(&self, tuple: &[usize]) -> Result<usize> {
        if tuple.len() != self.shape.len() || tuple.iter().zip(&self.shape).any(|(i, n)| i >= n) {
            return Err(Error::UnknownTuple {
                tuple: tuple.to_vec(),
            });
        }
        Ok(tuple
            .iter()
            .zip(&self.shape)
            .fold(0, |acc, (i, n)| acc * n + i))
    }

    pub fn tuple_of(&self, mut index: usize) -> Vec<usize> {
        let mut tuple = vec![0; self.shape.len()];
        for (slot, n) in tuple.iter_mut().zip(&self.shape).rev() {
            *slot = index % n;
            index /= n;
        }
        tuple
    }

    pub fn tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.len()).map(move |i| self.tuple_of(i))
    }
}

/// A disjunction of composed atoms, identified by their flat indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeProperty {
    parent: u64,
    selected: BTreeSet<usize>,
}

impl CompositeProperty {
    pub fn selected(&self) -> &BTreeSet<usize> {
        &self.selected
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }
}

/// Reference time used for the independent re-check of compatibility.
fn secondary_ref_time<T: Real>(contexts: &[Context<T>], ref_time: T) -> T {
    let last = contexts.last().map(|c| c.time).unwrap_or(ref_time);
    let span = (last - ref_time).abs() + T::one();
    ref_time + span * T::of(0.618_033_988_749_894_9)
}

fn translate_all<T: Real>(
    contexts: &[Context<T>],
    frame: &Frame<T>,
) -> Result<Vec<Vec<Projector<T>>>> {
    contexts
        .iter()
        .map(|c| {
            c.atoms
                .iter()
                .map(|a| {
                    let p = TimedProperty::new(a.clone(), c.time);
                    Ok(translate(&p, frame.ref_time, &frame.hamiltonian, frame.hbar)?.projector)
                })
                .collect()
        })
        .collect()
}

fn incompatible_pairs<T: Real>(
    translated: &[Vec<Projector<T>>],
    tol: &Tolerances,
) -> Result<(Vec<IncompatiblePair>, T)> {
    let limit = T::of(tol.commute_tol);
    let mut pairs = Vec::new();
    let mut largest = T::zero();
    for a in 0..translated.len() {
        for b in a + 1..translated.len() {
            for (i, pa) in translated[a].iter().enumerate() {
                for (j, pb) in translated[b].iter().enumerate() {
                    let residual = commutator_norm(pa, pb)?;
                    largest = largest.max(residual);
                    if !(residual < limit) {
                        pairs.push(IncompatiblePair {
                            context_a: a,
                            atom_a: i,
                            context_b: b,
                            atom_b: j,
                            residual: residual.to_f64(),
                        });
                    }
                }
            }
        }
    }
    Ok((pairs, largest))
}

/// Combine contexts into a generalized context at `frame.ref_time`.
///
/// Compatibility is decided by pairwise commutation of translated atoms from
/// different contexts and re-checked at a second reference time. On success
/// the composed atoms are the ordered products (earliest context leftmost)
/// and must again be exclusive and complete.
pub fn build_generalized_context<T: Real>(
    contexts: Vec<Context<T>>,
    frame: &Frame<T>,
    tol: &Tolerances,
) -> Result<GeneralizedContext<T>> {
    if contexts.is_empty() {
        return Err(Error::EmptyContext);
    }
    for (k, w) in contexts.windows(2).enumerate() {
        if !(w[0].time < w[1].time) {
            return Err(Error::TimeOrderViolation { position: k + 1 });
        }
    }
    let dim = frame.dim();
    for c in &contexts {
        if c.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: c.dim(),
            });
        }
    }

    let translated = translate_all(&contexts, frame)?;
    let (pairs, max_commutator) = incompatible_pairs(&translated, tol)?;

    let other = frame.at(secondary_ref_time(&contexts, frame.ref_time));
    let (other_pairs, _) = incompatible_pairs(&translate_all(&contexts, &other)?, tol)?;
    if pairs.is_empty() != other_pairs.is_empty() {
        return Err(Error::ReferenceTimeDependence);
    }
    if !pairs.is_empty() {
        return Err(Error::IncompatibleContexts { pairs });
    }

    let grid = LabelGrid::new(contexts.iter().map(|c| c.len()).collect());
    let total = grid.len();
    let mut composed = Vec::with_capacity(total);
    let mut gc = GeneralizedContext {
        id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
        contexts,
        frame: frame.clone(),
        translated,
        grid,
        composed: Vec::new(),
        max_commutator,
    };
    for index in 0..total {
        let tuple = gc.tuple_of(index);
        let product = tuple
            .iter()
            .enumerate()
            .fold(Operator::identity(dim), |acc, (k, &i)| {
                &acc * gc.translated[k][i].as_operator()
            });
        composed.push(Projector::from_hermitian(product.hermitian_part()));
    }
    let residual = composed_atoms_residual(&composed, dim);
    if !(residual < T::of(tol.proj_tol)) {
        return Err(Error::ComposedAtomsInvalid {
            residual: residual.to_f64(),
        });
    }
    gc.composed = composed;
    Ok(gc)
}

/// Largest deviation from `Π_a Π_b = δ_ab Π_a` and `Σ Π_a = I`.
pub fn composed_atoms_residual<T: Real>(atoms: &[Projector<T>], dim: usize) -> T {
    let mut worst = T::zero();
    for (a, pa) in atoms.iter().enumerate() {
        for (b, pb) in atoms.iter().enumerate().skip(a) {
            let prod = pa.as_operator() * pb.as_operator();
            let r = if a == b {
                prod.max_abs_diff(pa)
            } else {
                prod.max_abs()
            };
            worst = worst.max(r);
        }
    }
    let sum = atoms
        .iter()
        .fold(Operator::zeros(dim), |acc, p| &acc + p.as_operator());
    worst.max(sum.max_abs_diff(&Operator::identity(dim)))
}

/// `Σ_selected Tr(ρ Π_tuple)` for a state given at the reference time.
pub fn composite_probability<T: Real>(
    gc: &GeneralizedContext<T>,
    prop: &CompositeProperty,
    rho: &DensityOperator<T>,
) -> Result<T> {
    gc.owns(prop)?;
    rho.check_dim(&gc.composed[0])?;
    let total = prop
        .selected
        .iter()
        .map(|&i| rho.expectation(&gc.composed[i]))
        .sum::<T>();
    Ok(clamp_probability(total))
}

pub fn composite_meet<T: Real>(
    gc: &GeneralizedContext<T>,
    a: &CompositeProperty,
    b: &CompositeProperty,
) -> Result<CompositeProperty> {
    gc.owns(a)?;
    gc.owns(b)?;
    Ok(CompositeProperty {
        parent: gc.id,
        selected: a.selected.intersection(&b.selected).copied().collect(),
    })
}

pub fn composite_join<T: Real>(
    gc: &GeneralizedContext<T>,
    a: &CompositeProperty,
    b: &CompositeProperty,
) -> Result<CompositeProperty> {
    gc.owns(a)?;
    gc.owns(b)?;
    Ok(CompositeProperty {
        parent: gc.id,
        selected: a.selected.union(&b.selected).copied().collect(),
    })
}

pub fn composite_negate<T: Real>(
    gc: &GeneralizedContext<T>,
    a: &CompositeProperty,
) -> Result<CompositeProperty> {
    gc.owns(a)?;
    let selected = (0..gc.num_composed())
        .filter(|i| !a.selected.contains(i))
        .collect();
    Ok(CompositeProperty {
        parent: gc.id,
        selected,
    })
}

/// Outcome of a conditional probability; conditioning on a null property is
/// flagged rather than treated as a failure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Conditional<T> {
    Defined(T),
    /// `Pr(a)` fell below `prob_tol`.
    ConditionOnNull {
        prior: T,
    },
}

impl<T: Real> Conditional<T> {
    pub fn value(self) -> Option<T> {
        match self {
            Conditional::Defined(v) => Some(v),
            Conditional::ConditionOnNull { .. } => None,
        }
    }
}

/// `Pr(b | a) = Pr(b ∧ a) / Pr(a)`.
pub fn conditional_probability<T: Real>(
    gc: &GeneralizedContext<T>,
    a: &CompositeProperty,
    b: &CompositeProperty,
    rho: &DensityOperator<T>,
    tol: &Tolerances,
) -> Result<Conditional<T>> {
    let prior = composite_probability(gc, a, rho)?;
    let both = composite_probability(gc, &composite_meet(gc, b, a)?, rho)?;
    if prior < T::of(tol.prob_tol) {
        return Ok(Conditional::ConditionOnNull { prior });
    }
    Ok(Conditional::Defined(clamp_probability(both / prior)))
}
