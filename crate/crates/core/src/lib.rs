//! Time translation of quantum properties for finite-dimensional systems.
//!
//! Properties are orthogonal projectors tagged with a time. Translating them
//! with the unitary dynamics gives equivalence classes that form an
//! orthocomplemented lattice ([`lattice`]). Contexts at several times whose
//! translated atoms commute combine into generalized contexts with Born-rule
//! probabilities ([`contexts`]); these are compared with the consistent
//! histories formalism in [`histories`]. The [`spin`] module holds the
//! spin-1/2 direction searches.
//!
//! Every routine is generic over the real scalar [`Real`] (`f32` or `f64`).
//! The `*64` aliases below fix double precision.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod contexts;
pub mod error;
pub mod histories;
pub mod lattice;
pub mod linop;
pub mod sample;
pub mod scalar;
pub mod spin;
pub mod tolerance;

pub use error::{ContextViolation, Error, IncompatiblePair, Result};
pub use scalar::{Cx, Real};
pub use tolerance::Tolerances;

pub type C64 = Cx<f64>;
pub type Operator64 = linop::Operator<f64>;
pub type Hermitian64 = linop::HermitianOperator<f64>;
pub type Projector64 = linop::Projector<f64>;
pub type Unitary64 = linop::UnitaryOperator<f64>;
pub type Density64 = linop::DensityOperator<f64>;
pub type TimedProperty64 = lattice::TimedProperty<f64>;
pub type PropertyClass64 = lattice::PropertyClass<f64>;
pub type Context64 = contexts::Context<f64>;
pub type GeneralizedContext64 = contexts::GeneralizedContext<f64>;
pub type HistoryFamily64 = histories::HistoryFamily<f64>;
pub type Direction64 = spin::Direction<f64>;

pub type Operator32 = linop::Operator<f32>;
pub type Projector32 = linop::Projector<f32>;
pub type Density32 = linop::DensityOperator<f32>;
