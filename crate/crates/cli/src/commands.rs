use clap::ValueEnum;
use timeprops::contexts::{build_generalized_context, composite_probability, Context};
use timeprops::histories::{consistency_check, history_probability, Criterion, HistoryFamily};
use timeprops::lattice::{
    class_implies, class_join, class_meet, class_negate, class_of, PropertyClass,
};
use timeprops::linop::{evolution_operator, DensityOperator, Operator};
use timeprops::spin::{
    compatible_directions, gmh_directions, griffiths_directions, spin_state, Direction,
    DirectionHit, SphereGrid, SpinSetup,
};
use timeprops::{Error as CoreError, Tolerances};

use crate::report::{Cell, Report};
use crate::spec::System;
use crate::InputError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    Gmh,
    Griffiths,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LatticeOp {
    Meet,
    Join,
    Neg,
    Implies,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SearchMode {
    Commute,
    Gmh,
    Griffiths,
}

fn core(location: &str) -> impl FnOnce(CoreError) -> InputError + '_ {
    move |e| InputError::validation(location, e.to_string())
}

/// Push context violations into the report; returns the contexts when all
/// are valid.
fn checked_contexts(
    sys: &mut System,
    tol: &Tolerances,
    report: &mut Report,
) -> Result<Option<Vec<Context<f64>>>, InputError> {
    match sys.contexts(tol)? {
        Ok(cs) => Ok(Some(cs)),
        Err((k, CoreError::InvalidContext { violations })) => {
            for v in &violations {
                report.violation(format!("contexts[{k}]: {v}"), violation_residual(v));
            }
            report.check(
                &format!("contexts[{k}]"),
                false,
                "not exclusive and complete",
            );
            Ok(None)
        }
        Err((k, e)) => Err(InputError::validation(
            format!("contexts[{k}]"),
            e.to_string(),
        )),
    }
}

fn violation_residual(v: &timeprops::ContextViolation) -> f64 {
    match v {
        timeprops::ContextViolation::Exclusivity { residual, .. } => *residual,
        timeprops::ContextViolation::Completeness { residual } => *residual,
    }
}

fn finish(sys: &System, mut report: Report) -> Report {
    report.warnings.extend(sys.warnings.iter().cloned());
    report
}

pub fn validate_context(sys: &mut System, tol: &Tolerances) -> Result<Report, InputError> {
    let mut report = Report::new("validate-context", tol);
    let raw = sys.raw_contexts(tol)?;
    if raw.is_empty() {
        return Err(InputError::validation(
            "contexts",
            "at least one context is required",
        ));
    }
    for (k, (time, atoms, labels)) in raw.into_iter().enumerate() {
        let n = atoms.len();
        match Context::new(time, atoms, labels, tol) {
            Ok(c) => report.check(
                &format!("contexts[{k}]"),
                true,
                format!("{n} atoms at t = {time}: {}", c.labels.join(", ")),
            ),
            Err(CoreError::InvalidContext { violations }) => {
                for v in &violations {
                    report.violation(format!("contexts[{k}]: {v}"), violation_residual(v));
                }
                report.check(
                    &format!("contexts[{k}]"),
                    false,
                    format!("{} violation(s)", violations.len()),
                );
            }
            Err(e) => {
                return Err(InputError::validation(
                    format!("contexts[{k}]"),
                    e.to_string(),
                ))
            }
        }
    }
    Ok(finish(sys, report))
}

/// The initial state carried from `initial_time` to `reference_time`.
fn state_at_reference(sys: &System) -> Result<DensityOperator<f64>, InputError> {
    let u = evolution_operator(
        &sys.hamiltonian,
        sys.initial_time,
        sys.reference_time,
        sys.hbar,
    )
    .map_err(core("hbar"))?;
    Ok(sys.initial_state.evolve(&u))
}

pub fn gc_check(sys: &mut System, tol: &Tolerances) -> Result<Report, InputError> {
    let mut report = Report::new("gc-check", tol);
    let Some(contexts) = checked_contexts(sys, tol, &mut report)? else {
        return Ok(finish(sys, report));
    };
    let labels: Vec<Vec<String>> = contexts.iter().map(|c| c.labels.clone()).collect();
    match build_generalized_context(contexts, &sys.frame(), tol) {
        Ok(gc) => {
            report.check(
                "compatibility",
                true,
                format!(
                    "max commutator {:.3e} at reference time {}",
                    gc.max_commutator(),
                    gc.ref_time()
                ),
            );
            let rho = state_at_reference(sys)?;
            let mut rows = Vec::new();
            let mut total = 0.0;
            for tuple in gc.tuples().collect::<Vec<_>>() {
                let p =
                    composite_probability(&gc, &gc.property([&tuple]).expect("own tuple"), &rho)
                        .map_err(core("initial_state"))?;
                total += p;
                let rank = gc.composed_atom(&tuple).expect("own tuple").rank();
                rows.push(vec![
                    gc.tuple_labels(&tuple).join(",").into(),
                    rank.into(),
                    p.into(),
                ]);
            }
            report.table("composed atoms", &["atoms", "rank", "probability"], rows);
            report.check(
                "normalization",
                (total - 1.0).abs() < tol.prob_tol,
                format!("total probability {total:.12}"),
            );
        }
        Err(CoreError::IncompatibleContexts { pairs }) => {
            let worst = pairs.iter().map(|p| p.residual).fold(0.0, f64::max);
            for p in &pairs {
                report.violation(
                    format!(
                        "[{}] at contexts[{}] vs [{}] at contexts[{}]",
                        labels[p.context_a][p.atom_a],
                        p.context_a,
                        labels[p.context_b][p.atom_b],
                        p.context_b
                    ),
                    p.residual,
                );
            }
            report.check(
                "compatibility",
                false,
                format!(
                    "{} non-commuting pair(s), max commutator {worst:.3e}",
                    pairs.len()
                ),
            );
        }
        Err(e @ (CoreError::ReferenceTimeDependence | CoreError::ComposedAtomsInvalid { .. })) => {
            report.check("compatibility", false, e.to_string());
        }
        Err(e) => return Err(InputError::validation("contexts", e.to_string())),
    }
    Ok(finish(sys, report))
}

fn family(
    sys: &mut System,
    tol: &Tolerances,
    report: &mut Report,
) -> Result<Option<HistoryFamily<f64>>, InputError> {
    let Some(contexts) = checked_contexts(sys, tol, report)? else {
        return Ok(None);
    };
    let fam = HistoryFamily::new(
        contexts,
        sys.hamiltonian.clone(),
        sys.hbar,
        sys.initial_time,
        sys.initial_state.clone(),
    )
    .map_err(core("contexts"))?;
    Ok(Some(fam))
}

pub fn history_prob(
    sys: &mut System,
    tol: &Tolerances,
    history: Option<&str>,
) -> Result<Report, InputError> {
    let mut report = Report::new("history-prob", tol);
    let Some(fam) = family(sys, tol, &mut report)? else {
        return Ok(finish(sys, report));
    };
    let rows = match history {
        Some(spec) => {
            let labels: Vec<&str> = spec.split(',').map(str::trim).collect();
            let h = fam
                .history_by_labels(&labels)
                .map_err(|e| InputError::validation("--history", e.to_string()))?;
            vec![vec![
                h.labels().join(",").into(),
                history_probability(&h).into(),
            ]]
        }
        None => fam
            .histories()
            .map(|h| vec![h.labels().join(",").into(), history_probability(&h).into()])
            .collect(),
    };
    report.table("histories", &["history", "probability"], rows);
    Ok(finish(sys, report))
}

pub fn consistency(
    sys: &mut System,
    tol: &Tolerances,
    criterion: CriterionArg,
) -> Result<Report, InputError> {
    let mut report = Report::new("consistency", tol);
    let Some(fam) = family(sys, tol, &mut report)? else {
        return Ok(finish(sys, report));
    };
    let criterion = match criterion {
        CriterionArg::Gmh => Criterion::Gmh,
        CriterionArg::Griffiths => Criterion::Griffiths,
    };
    let result = consistency_check(&fam, criterion, tol).map_err(core("contexts"))?;
    for v in &result.violations {
        report.violation(
            format!(
                "({}) vs ({})",
                fam.labels_of(&v.a).join(","),
                fam.labels_of(&v.b).join(",")
            ),
            v.residual,
        );
    }
    let detail = if result.verdict {
        "consistent".to_string()
    } else {
        format!(
            "{} interfering pair(s), max residual {:.3e}",
            result.violations.len(),
            result.max_residual()
        )
    };
    report.check(&criterion.to_string(), result.verdict, detail);
    let rows = result
        .probabilities
        .iter()
        .map(|(c, p)| vec![fam.labels_of(c).join(",").into(), (*p).into()])
        .collect();
    report.table("histories", &["history", "probability"], rows);
    Ok(finish(sys, report))
}

fn matrix_rows(op: &Operator<f64>) -> Vec<Vec<Cell>> {
    op.rows()
        .iter()
        .map(|r| {
            r.iter()
                .map(|z| Cell::Text(format!("{:+.9}{:+.9}i", z.re + 0.0, z.im + 0.0)))
                .collect()
        })
        .collect()
}

pub fn lattice(sys: &mut System, tol: &Tolerances, op: LatticeOp) -> Result<Report, InputError> {
    let mut report = Report::new("lattice", tol);
    let props = sys.properties(tol)?;
    let needed = if op == LatticeOp::Neg { 1 } else { 2 };
    if props.len() < needed {
        return Err(InputError::validation(
            "properties",
            format!("this operation needs {needed} properties"),
        ));
    }
    let frame = sys.frame();
    let classes: Vec<PropertyClass<f64>> = props
        .iter()
        .take(needed)
        .map(|p| class_of(p, &frame))
        .collect::<Result<_, _>>()
        .map_err(core("properties"))?;
    let result = match op {
        LatticeOp::Meet => class_meet(&classes[0], &classes[1], tol),
        LatticeOp::Join => class_join(&classes[0], &classes[1], tol),
        LatticeOp::Neg => Ok(class_negate(&classes[0])),
        LatticeOp::Implies => {
            let verdict =
                class_implies(&classes[0], &classes[1], tol).map_err(core("properties"))?;
            report.check(
                "implies",
                verdict,
                format!(
                    "properties[0] {} properties[1]",
                    if verdict { "implies" } else { "does not imply" }
                ),
            );
            return Ok(finish(sys, report));
        }
    };
    let class = match result {
        Ok(c) => c,
        Err(e @ (CoreError::MeetMismatch { .. } | CoreError::NoConvergence { .. })) => {
            report.check("meet cross-check", false, e.to_string());
            return Ok(finish(sys, report));
        }
        Err(e) => return Err(InputError::validation("properties", e.to_string())),
    };
    let rank = class.representative.rank();
    report.check(
        &format!("{op:?}").to_lowercase(),
        true,
        format!(
            "rank {rank} representative at reference time {}",
            frame.ref_time
        ),
    );
    let columns: Vec<String> = (0..sys.dim()).map(|j| format!("col {j}")).collect();
    let columns: Vec<&str> = columns.iter().map(String::as_str).collect();
    report.table(
        "representative",
        &columns,
        matrix_rows(&class.representative),
    );
    Ok(finish(sys, report))
}

fn hit_rows(hits: &[DirectionHit<f64>]) -> Vec<Vec<Cell>> {
    hits.iter()
        .map(|h| {
            let antipode = h
                .antipode
                .map(|a| a.to_string())
                .unwrap_or_else(|| "-".into());
            vec![
                h.index.into(),
                h.direction.to_string().into(),
                antipode.into(),
            ]
        })
        .collect()
}

pub fn spin_search(
    sys: &mut System,
    tol: &Tolerances,
    mode: SearchMode,
) -> Result<Report, InputError> {
    let mut report = Report::new("spin-search", tol);
    if sys.dim() != 2 {
        return Err(InputError::validation(
            "dimension",
            "spin-search needs dimension 2",
        ));
    }
    let search = sys.spec.spin_search.clone().unwrap_or_default();
    let n2 = match &search.n2 {
        Some(n) => sys.direction(n, "spin_search.n2")?,
        None => Direction::z_axis(),
    };
    let n0 = match (&search.n0, &sys.spec.initial_state) {
        (Some(n), _) => Some(sys.direction(n, "spin_search.n0")?),
        (None, Some(crate::spec::StateSpec::Spin(n))) => Some(
            Direction::normalized(n[0], n[1], n[2])
                .map_err(core("initial_state.spin"))?
                .0,
        ),
        _ => None,
    };
    let t0 = sys.initial_time;
    let setup = SpinSetup {
        hamiltonian: sys.hamiltonian.clone(),
        hbar: sys.hbar,
        t0,
        t1: search.t1.unwrap_or(t0 + 1.0),
        t2: search.t2.unwrap_or(t0 + 2.0),
    };
    if !(setup.t0 < setup.t1 && setup.t1 < setup.t2) {
        return Err(InputError::validation(
            "spin_search",
            "need initial_time < t1 < t2",
        ));
    }
    let grid = SphereGrid::fibonacci(
        search
            .grid_points
            .unwrap_or(SphereGrid::<f64>::DEFAULT_COUNT),
    );
    let columns = ["grid index", "direction", "antipode"];
    match mode {
        SearchMode::Commute => {
            let hits =
                compatible_directions(&n2, &grid, &setup, tol).map_err(core("spin_search"))?;
            report.check(
                "commute",
                true,
                format!(
                    "{} of {} grid directions compatible with n2 = {n2}",
                    hits.len(),
                    grid.len()
                ),
            );
            report.table("compatible directions", &columns, hit_rows(&hits));
        }
        SearchMode::Gmh => {
            let rho = match n0 {
                Some(n) => spin_state(&n).map_err(core("spin_search.n0"))?,
                None => sys.initial_state.clone(),
            };
            let hits =
                gmh_directions(&n2, &rho, &grid, &setup, tol).map_err(core("spin_search"))?;
            report.check(
                "gmh",
                true,
                format!(
                    "{} of {} grid directions consistent",
                    hits.len(),
                    grid.len()
                ),
            );
            report.table("gmh-consistent directions", &columns, hit_rows(&hits));
        }
        SearchMode::Griffiths => {
            let n0 = n0.ok_or_else(|| {
                InputError::validation(
                    "spin_search.n0",
                    "griffiths mode needs n0 or a spin initial state",
                )
            })?;
            let found =
                griffiths_directions(&n0, &n2, &grid, &setup, tol).map_err(core("spin_search"))?;
            for &i in &found.disagreements {
                report.violation(format!("grid index {i} ({})", grid.points()[i]), 0.0);
            }
            report.check(
                "coplanarity agreement",
                found.disagreements.is_empty(),
                format!(
                    "{} of {} grid directions consistent, {} disagreement(s)",
                    found.hits.len(),
                    grid.len(),
                    found.disagreements.len()
                ),
            );
            report.table(
                "griffiths-consistent directions",
                &columns,
                hit_rows(&found.hits),
            );
        }
    }
    Ok(finish(sys, report))
}
