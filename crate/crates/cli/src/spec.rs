//! The system description file.
//!
//! JSON with complex numbers as `[re, im]` pairs and matrices as row-major
//! nested arrays. Directions are 3-vectors.

use serde::{Deserialize, Serialize};

use timeprops::contexts::Context;
use timeprops::lattice::{Frame, TimedProperty};
use timeprops::linop::{
    projector_from_span, spectral_projectors, DensityOperator, HermitianOperator, Operator,
    Projector, SpectralWindow,
};
use timeprops::spin::{spin_projectors, spin_state, Direction};
use timeprops::{Cx, Error as CoreError, Tolerances};

use crate::InputError;

pub type Complex = [f64; 2];
pub type Matrix = Vec<Vec<Complex>>;

/// Directions further than this from unit length are reported when normalized.
pub const NORMALIZE_WARN: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub dimension: usize,
    #[serde(default = "one")]
    pub hbar: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<Matrix>,
    #[serde(default)]
    pub initial_time: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<StateSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_time: Option<f64>,
    #[serde(default)]
    pub contexts: Vec<ContextSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub properties: Vec<PropertySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spin_search: Option<SpinSearchSpec>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    Density(Matrix),
    /// State vector, normalized on load.
    Pure(Vec<Complex>),
    /// Spin-1/2 pure state along a direction.
    Spin([f64; 3]),
    MaximallyMixed,
}

/// One of `atoms`, `observable` + `windows`, or `spin` must be given.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextSpec {
    pub time: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<Matrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observable: Option<Matrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub windows: Option<Vec<WindowSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spin: Option<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    pub label: String,
    pub lo: f64,
    pub hi: f64,
}

/// A timed property: a projector matrix, the span of vectors, or a spin
/// direction with sign.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropertySpec {
    pub time: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projector: Option<Matrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span: Option<Vec<Vec<Complex>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spin: Option<[f64; 3]>,
    /// `"+"` or `"-"` for spin properties; defaults to `"+"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinSearchSpec {
    /// Initial spin direction; falls back to a spin initial state.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n0: Option<[f64; 3]>,
    /// Final measurement direction; defaults to `z`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n2: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_points: Option<usize>,
    /// Defaults to `initial_time + 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t1: Option<f64>,
    /// Defaults to `initial_time + 2`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t2: Option<f64>,
}

pub fn parse(text: &str) -> Result<SystemSpec, InputError> {
    serde_json::from_str(text)
        .map_err(|e| InputError::parse(format!("line {}, column {}", e.line(), e.column()), e))
}

pub fn to_json(spec: &SystemSpec) -> String {
    serde_json::to_string_pretty(spec).expect("spec serializes")
}

/// Time, atoms and labels of a context before validation.
pub type RawContext = (f64, Vec<Projector<f64>>, Vec<String>);

/// Contexts, or the index and error of the first invalid one.
pub type CheckedContexts = Result<Vec<Context<f64>>, (usize, CoreError)>;

/// A spec checked against the engine's types.
#[derive(Debug, Clone)]
pub struct System {
    pub spec: SystemSpec,
    pub hamiltonian: HermitianOperator<f64>,
    pub hbar: f64,
    pub initial_time: f64,
    pub reference_time: f64,
    pub initial_state: DensityOperator<f64>,
    pub warnings: Vec<String>,
}

fn at(location: impl Into<String>) -> impl FnOnce(CoreError) -> InputError {
    let location = location.into();
    move |e| InputError::validation(location, e.to_string())
}

fn complex(c: &Complex) -> Cx<f64> {
    Cx::new(c[0], c[1])
}

fn matrix(m: &Matrix, dim: usize, location: &str) -> Result<Operator<f64>, InputError> {
    let rows = m.iter().map(|r| r.iter().map(complex).collect()).collect();
    let op = Operator::from_rows(rows).map_err(at(location))?;
    if op.dim() != dim {
        return Err(InputError::validation(
            location,
            format!("expected a {dim}x{dim} matrix, found {0}x{0}", op.dim()),
        ));
    }
    Ok(op)
}

fn vector(v: &[Complex], dim: usize, location: &str) -> Result<Vec<Cx<f64>>, InputError> {
    if v.len() != dim {
        return Err(InputError::validation(
            location,
            format!("expected {dim} components, found {}", v.len()),
        ));
    }
    Ok(v.iter().map(complex).collect())
}

impl System {
    pub fn load(spec: SystemSpec, tol: &Tolerances) -> Result<Self, InputError> {
        let dim = spec.dimension;
        if dim == 0 {
            return Err(InputError::validation("dimension", "must be positive"));
        }
        if !(spec.hbar > 0.0) {
            return Err(InputError::validation("hbar", "must be positive"));
        }
        let hamiltonian = match &spec.hamiltonian {
            Some(m) => HermitianOperator::new(matrix(m, dim, "hamiltonian")?, tol)
                .map_err(at("hamiltonian"))?,
            None => HermitianOperator::zero(dim),
        };
        let mut warnings = Vec::new();
        let initial_state = match &spec.initial_state {
            None => DensityOperator::maximally_mixed(dim),
            Some(StateSpec::MaximallyMixed) => DensityOperator::maximally_mixed(dim),
            Some(StateSpec::Density(m)) => {
                DensityOperator::new(matrix(m, dim, "initial_state.density")?, tol)
                    .map_err(at("initial_state.density"))?
            }
            Some(StateSpec::Pure(v)) => {
                DensityOperator::pure(&vector(v, dim, "initial_state.pure")?)
                    .map_err(at("initial_state.pure"))?
            }
            Some(StateSpec::Spin(n)) => {
                require_qubit(dim, "initial_state.spin")?;
                let d = direction(n, "initial_state.spin", &mut warnings)?;
                spin_state(&d).map_err(at("initial_state.spin"))?
            }
        };
        for (k, c) in spec.contexts.iter().enumerate() {
            if !(c.time > spec.initial_time) {
                return Err(InputError::validation(
                    format!("contexts[{k}].time"),
                    "must be later than initial_time",
                ));
            }
            if k > 0 && !(c.time > spec.contexts[k - 1].time) {
                return Err(InputError::validation(
                    format!("contexts[{k}].time"),
                    "times must increase strictly",
                ));
            }
        }
        let reference_time = spec.reference_time.unwrap_or(spec.initial_time);
        Ok(System {
            hbar: spec.hbar,
            initial_time: spec.initial_time,
            reference_time,
            hamiltonian,
            initial_state,
            warnings,
            spec,
        })
    }

    pub fn dim(&self) -> usize {
        self.spec.dimension
    }

    pub fn frame(&self) -> Frame<f64> {
        Frame::new(self.hamiltonian.clone(), self.hbar, self.reference_time)
            .expect("hbar checked on load")
    }

    /// Atoms and labels of every context, not yet checked for exclusivity
    /// and completeness.
    pub fn raw_contexts(&mut self, tol: &Tolerances) -> Result<Vec<RawContext>, InputError> {
        let dim = self.dim();
        let specs = self.spec.contexts.clone();
        specs
            .iter()
            .enumerate()
            .map(|(k, c)| self.raw_context(k, c, dim, tol))
            .collect()
    }

    fn raw_context(
        &mut self,
        k: usize,
        c: &ContextSpec,
        dim: usize,
        tol: &Tolerances,
    ) -> Result<RawContext, InputError> {
        let loc = format!("contexts[{k}]");
        let sources = [c.atoms.is_some(), c.observable.is_some(), c.spin.is_some()];
        if sources.iter().filter(|s| **s).count() != 1 {
            return Err(InputError::validation(
                loc,
                "give exactly one of atoms, observable or spin",
            ));
        }
        if c.windows.is_some() != c.observable.is_some() {
            return Err(InputError::validation(
                loc,
                "observable and windows go together",
            ));
        }
        let (atoms, default_labels) = if let Some(atoms) = &c.atoms {
            let ps = atoms
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    let l = format!("{loc}.atoms[{i}]");
                    Projector::new(matrix(m, dim, &l)?, tol).map_err(at(l))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let labels = (0..ps.len()).map(|i| i.to_string()).collect();
            (ps, labels)
        } else if let Some(obs) = &c.observable {
            let l = format!("{loc}.observable");
            let h = HermitianOperator::new(matrix(obs, dim, &l)?, tol).map_err(at(l.clone()))?;
            let windows: Vec<SpectralWindow<f64>> = c
                .windows
                .as_ref()
                .expect("checked above")
                .iter()
                .map(|w| SpectralWindow::new(w.label.clone(), w.lo, w.hi))
                .collect();
            let labels = windows.iter().map(|w| w.label.clone()).collect();
            (
                spectral_projectors(&h, &windows, tol).map_err(at(format!("{loc}.windows")))?,
                labels,
            )
        } else {
            let l = format!("{loc}.spin");
            require_qubit(dim, &l)?;
            let d = direction(
                c.spin.as_ref().expect("checked above"),
                &l,
                &mut self.warnings,
            )?;
            let (up, down) = spin_projectors(&d).map_err(at(l))?;
            (vec![up, down], vec!["+".to_string(), "-".to_string()])
        };
        let labels = c.labels.clone().unwrap_or(default_labels);
        if labels.len() != atoms.len() {
            return Err(InputError::validation(
                format!("{loc}.labels"),
                format!("{} labels for {} atoms", labels.len(), atoms.len()),
            ));
        }
        Ok((c.time, atoms, labels))
    }

    /// Contexts that must be exclusive and complete. A violation is returned
    /// as the engine error so callers can report it as a failed check.
    pub fn contexts(&mut self, tol: &Tolerances) -> Result<CheckedContexts, InputError> {
        let raw = self.raw_contexts(tol)?;
        if raw.is_empty() {
            return Err(InputError::validation(
                "contexts",
                "at least one context is required",
            ));
        }
        let mut out = Vec::with_capacity(raw.len());
        for (k, (time, atoms, labels)) in raw.into_iter().enumerate() {
            match Context::new(time, atoms, labels, tol) {
                Ok(c) => out.push(c),
                Err(e @ CoreError::InvalidContext { .. }) => return Ok(Err((k, e))),
                Err(e) => return Err(at(format!("contexts[{k}]"))(e)),
            }
        }
        Ok(Ok(out))
    }

    pub fn properties(&mut self, tol: &Tolerances) -> Result<Vec<TimedProperty<f64>>, InputError> {
        let dim = self.dim();
        let specs = self.spec.properties.clone();
        specs
            .iter()
            .enumerate()
            .map(|(k, p)| {
                let loc = format!("properties[{k}]");
                let sources = [p.projector.is_some(), p.span.is_some(), p.spin.is_some()];
                if sources.iter().filter(|s| **s).count() != 1 {
                    return Err(InputError::validation(
                        loc,
                        "give exactly one of projector, span or spin",
                    ));
                }
                let projector = if let Some(m) = &p.projector {
                    let l = format!("{loc}.projector");
                    Projector::new(matrix(m, dim, &l)?, tol).map_err(at(l))?
                } else if let Some(vs) = &p.span {
                    let l = format!("{loc}.span");
                    let vs = vs
                        .iter()
                        .map(|v| vector(v, dim, &l))
                        .collect::<Result<Vec<_>, _>>()?;
                    projector_from_span(&vs, tol).map_err(at(l))?
                } else {
                    let l = format!("{loc}.spin");
                    require_qubit(dim, &l)?;
                    let d = direction(
                        p.spin.as_ref().expect("checked above"),
                        &l,
                        &mut self.warnings,
                    )?;
                    let (up, down) = spin_projectors(&d).map_err(at(l))?;
                    match p.sign.as_deref().unwrap_or("+") {
                        "+" => up,
                        "-" => down,
                        other => {
                            return Err(InputError::validation(
                                format!("{loc}.sign"),
                                format!("expected + or -, found {other:?}"),
                            ))
                        }
                    }
                };
                Ok(TimedProperty::new(projector, p.time))
            })
            .collect()
    }

    pub fn direction(
        &mut self,
        n: &[f64; 3],
        location: &str,
    ) -> Result<Direction<f64>, InputError> {
        direction(n, location, &mut self.warnings)
    }
}

fn require_qubit(dim: usize, location: &str) -> Result<(), InputError> {
    if dim != 2 {
        return Err(InputError::validation(
            location,
            "spin directions need dimension 2",
        ));
    }
    Ok(())
}

fn direction(
    n: &[f64; 3],
    location: &str,
    warnings: &mut Vec<String>,
) -> Result<Direction<f64>, InputError> {
    let (d, deviation) = Direction::normalized(n[0], n[1], n[2]).map_err(at(location))?;
    if deviation > NORMALIZE_WARN {
        warnings.push(format!(
            "{location}: direction normalized (norm was off by {deviation:.3e})"
        ));
    }
    Ok(d)
}
