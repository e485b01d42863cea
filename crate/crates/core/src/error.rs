use thiserror::Error;

/// A failed exclusivity or completeness check inside a single context.
#[derive(Debug, Clone, PartialEq)]
pub enum ContextViolation {
    /// `Π_i Π_j` differs from `δ_ij Π_i` by `residual` (max entry).
    Exclusivity { i: usize, j: usize, residual: f64 },
    /// `Σ Π_i` differs from the identity by `residual` (max entry).
    Completeness { residual: f64 },
}

impl std::fmt::Display for ContextViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ContextViolation::Exclusivity { i, j, residual } => {
                write!(
                    f,
                    "atoms {i} and {j} are not mutually exclusive (residual {residual:.3e})"
                )
            }
            ContextViolation::Completeness { residual } => {
                write!(
                    f,
                    "atoms do not sum to the identity (residual {residual:.3e})"
                )
            }
        }
    }
}

/// Two translated atoms from different contexts that fail to commute.
#[derive(Debug, Clone, PartialEq)]
pub struct IncompatiblePair {
    pub context_a: usize,
    pub atom_a: usize,
    pub context_b: usize,
    pub atom_b: usize,
    /// Max-entry magnitude of the commutator at the reference time.
    pub residual: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square or rows have inconsistent length")]
    NotSquare,
    #[error("operator is not Hermitian (max |A - A†| = {residual:.3e})")]
    NonHermitianInput { residual: f64 },
    #[error("operator is not a projector (max |P² - P| = {residual:.3e})")]
    NotAProjector { residual: f64 },
    #[error("operator is not unitary (max |UU† - I| = {residual:.3e})")]
    NotUnitary { residual: f64 },
    #[error("invalid density operator: {reason}")]
    InvalidDensity { reason: String },
    #[error("eigenvalue {value} lies in no spectral window")]
    UncoveredEigenvalue { value: f64 },
    #[error("spectral windows `{first}` and `{second}` overlap")]
    OverlappingWindows { first: String, second: String },
    #[error("spectral window `{label}` is empty (lo >= hi)")]
    EmptyWindow { label: String },
    #[error("spanning vectors are all numerically zero")]
    ZeroSpan,
    #[error("alternating projections did not stabilise after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error(
        "alternating-projection limit disagrees with the subspace intersection by {residual:.3e}"
    )]
    MeetMismatch { residual: f64 },
    #[error("non-positive hbar {value}")]
    InvalidHbar { value: f64 },
    #[error("property classes belong to different dynamical frames")]
    FrameMismatch,
    #[error("implication verdict changed between reference times")]
    ReferenceTimeDependence,
    #[error("invalid context: {}", join_display(.violations))]
    InvalidContext { violations: Vec<ContextViolation> },
    #[error("context needs at least one atom")]
    EmptyContext,
    #[error("label count {labels} does not match atom count {atoms}")]
    LabelMismatch { labels: usize, atoms: usize },
    #[error("times must be strictly increasing (position {position})")]
    TimeOrderViolation { position: usize },
    #[error("{} pair(s) of translated atoms do not commute", .pairs.len())]
    IncompatibleContexts { pairs: Vec<IncompatiblePair> },
    #[error("composed atoms violate exclusivity/completeness (residual {residual:.3e})")]
    ComposedAtomsInvalid { residual: f64 },
    #[error("property belongs to a different generalized context")]
    ForeignProperty,
    #[error("label tuple {tuple:?} is not part of the generalized context")]
    UnknownTuple { tuple: Vec<usize> },
    #[error("history choice {choice} at time index {time_index} has no atom")]
    InvalidChoice { time_index: usize, choice: usize },
    #[error("operation requires {expected}")]
    UnsupportedShape { expected: &'static str },
    #[error("conditioning property has probability {probability:.3e}")]
    ConditionOnNull { probability: f64 },
    #[error("history family fails the consistency condition")]
    InconsistentFamily,
    #[error("direction norm {norm} is not 1")]
    NonUnitDirection { norm: f64 },
}

fn join_display<D: std::fmt::Display>(items: &[D]) -> String {
    items
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
