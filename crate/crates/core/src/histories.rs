//! Consistent histories: history operators, history probabilities and the
//! Griffiths / Gell-Mann–Hartle consistency conditions, plus the bridge from
//! generalized contexts to history families.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::contexts::{composite_probability, Context, GeneralizedContext, LabelGrid};
use crate::error::{Error, Result};
use crate::linop::{evolution_operator, DensityOperator, HermitianOperator, Operator, Projector};
use crate::scalar::{Cx, Real};
use crate::tolerance::Tolerances;

/// Heisenberg-picture projector `e^{iH(t_j - t_0)/ħ} E e^{-iH(t_j - t_0)/ħ}`.
pub fn heisenberg_projector<T: Real>(
    e: &Projector<T>,
    t_j: T,
    t_0: T,
    h: &HermitianOperator<T>,
    hbar: T,
) -> Result<Projector<T>> {
    e.check_dim(h)?;
    // w = e^{-iH(t_j - t_0)/ħ}
    let w = evolution_operator(h, t_0, t_j, hbar)?;
    let op = &(&w.adjoint() * e.as_operator()) * &w;
    Ok(Projector::from_hermitian(op.hermitian_part()))
}

/// Per-time projector families, dynamics and an initial state at `t_0`.
#[derive(Debug, Clone)]
pub struct HistoryFamily<T> {
    contexts: Vec<Context<T>>,
    hamiltonian: HermitianOperator<T>,
    hbar: T,
    initial_time: T,
    initial_state: DensityOperator<T>,
    grid: LabelGrid,
    heisenberg: Vec<Vec<Projector<T>>>,
}

impl<T: Real> HistoryFamily<T> {
    /// The contexts supply the times and the exclusive, complete families;
    /// times must increase strictly and all exceed `initial_time`.
    pub fn new(
        contexts: Vec<Context<T>>,
        hamiltonian: HermitianOperator<T>,
        hbar: T,
        initial_time: T,
        initial_state: DensityOperator<T>,
    ) -> Result<Self> {
        if contexts.is_empty() {
            return Err(Error::EmptyContext);
        }
        if !(contexts[0].time > initial_time) {
            return Err(Error::TimeOrderViolation { position: 0 });
        }
        for (k, w) in contexts.windows(2).enumerate() {
            if !(w[0].time < w[1].time) {
                return Err(Error::TimeOrderViolation { position: k + 1 });
            }
        }
        let dim = hamiltonian.dim();
        initial_state.check_dim(&hamiltonian)?;
        for c in &contexts {
            if c.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: c.dim(),
                });
            }
        }
        let heisenberg = contexts
            .iter()
            .map(|c| {
                c.atoms
                    .iter()
                    .map(|e| heisenberg_projector(e, c.time, initial_time, &hamiltonian, hbar))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let grid = LabelGrid::new(contexts.iter().map(|c| c.len()).collect());
        Ok(HistoryFamily {
            contexts,
            hamiltonian,
            hbar,
            initial_time,
            initial_state,
            grid,
            heisenberg,
        })
    }

    pub fn contexts(&self) -> &[Context<T>] {
        &self.contexts
    }

    pub fn times(&self) -> Vec<T> {
        self.contexts.iter().map(|c| c.time).collect()
    }

    pub fn hamiltonian(&self) -> &HermitianOperator<T> {
        &self.hamiltonian
    }

    pub fn hbar(&self) -> T {
        self.hbar
    }

    pub fn initial_time(&self) -> T {
        self.initial_time
    }

    pub fn initial_state(&self) -> &DensityOperator<T> {
        &self.initial_state
    }

    pub fn grid(&self) -> &LabelGrid {
        &self.grid
    }

    /// Same projectors and dynamics, another initial state.
    pub fn with_state(&self, initial_state: DensityOperator<T>) -> Result<Self> {
        initial_state.check_dim(&self.hamiltonian)?;
        Ok(HistoryFamily {
            initial_state,
            ..self.clone()
        })
    }

    pub fn history(&self, choices: Vec<usize>) -> Result<History<'_, T>> {
        if choices.len() != self.contexts.len() {
            return Err(Error::UnknownTuple { tuple: choices });
        }
        for (time_index, (&choice, c)) in choices.iter().zip(&self.contexts).enumerate() {
            if choice >= c.len() {
                return Err(Error::InvalidChoice { time_index, choice });
            }
        }
        Ok(History {
            family: self,
            choices,
        })
    }

    /// Look a history up by atom labels, one per time.
    pub fn history_by_labels(&self, labels: &[&str]) -> Result<History<'_, T>> {
        if labels.len() != self.contexts.len() {
            return Err(Error::UnsupportedShape {
                expected: "one label per time",
            });
        }
        let mut choices = Vec::with_capacity(labels.len());
        for (time_index, (label, c)) in labels.iter().zip(&self.contexts).enumerate() {
            let choice = c.label_index(label).ok_or(Error::InvalidChoice {
                time_index,
                choice: usize::MAX,
            })?;
            choices.push(choice);
        }
        self.history(choices)
    }

    /// Every elementary history, in grid order.
    pub fn histories(&self) -> impl Iterator<Item = History<'_, T>> + '_ {
        self.grid.tuples().map(move |choices| History {
            family: self,
            choices,
        })
    }

    pub fn labels_of(&self, choices: &[usize]) -> Vec<String> {
        choices
            .iter()
            .zip(&self.contexts)
            .map(|(&i, c)| c.labels[i].clone())
            .collect()
    }

    /// History-set of all elementary histories satisfying `pred`.
    pub fn history_set(&self, pred: impl Fn(&[usize]) -> bool) -> HistorySet {
        (0..self.grid.len())
            .filter(|&i| pred(&self.grid.tuple_of(i)))
            .collect()
    }

    /// Probabilities of all elementary histories, in grid order.
    pub fn probabilities(&self) -> Vec<T> {
        self.histories().map(|h| history_probability(&h)).collect()
    }
}

/// One atom choice per time of a family.
#[derive(Debug, Clone)]
pub struct History<'a, T> {
    family: &'a HistoryFamily<T>,
    choices: Vec<usize>,
}

impl<T: Real> History<'_, T> {
    pub fn choices(&self) -> &[usize] {
        &self.choices
    }

    pub fn labels(&self) -> Vec<String> {
        self.family.labels_of(&self.choices)
    }
}

/// Subset of elementary histories, by flat grid index.
pub type HistorySet = BTreeSet<usize>;

/// `C_a = E_n(t_n) ⋯ E_1(t_1)`, latest time leftmost.
pub fn history_operator<T: Real>(h: &History<'_, T>) -> Operator<T> {
    let fam = h.family;
    h.choices
        .iter()
        .enumerate()
        .fold(Operator::identity(fam.hamiltonian.dim()), |acc, (k, &i)| {
            fam.heisenberg[k][i].as_operator() * &acc
        })
}

/// `Tr(C_a ρ C_a†)`
pub fn history_probability<T: Real>(h: &History<'_, T>) -> T {
    let c = history_operator(h);
    let value = (&(&c * &h.family.initial_state) * &c.adjoint()).trace().re;
    value.max(T::zero())
}

/// `Tr(X Y†)` without forming the product.
fn trace_with_adjoint<T: Real>(x: &Operator<T>, y: &Operator<T>) -> Cx<T> {
    x.entries()
        .iter()
        .zip(y.entries())
        .fold(Cx::zero(), |acc, (a, b)| acc + *a * b.conj())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    Griffiths,
    Gmh,
}

impl std::fmt::Display for Criterion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Criterion::Griffiths => "griffiths",
            Criterion::Gmh => "gmh",
        })
    }
}

/// A pair of distinct histories whose consistency trace is not negligible.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyViolation<T> {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub residual: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport<T> {
    pub criterion: Criterion,
    pub verdict: bool,
    pub violations: Vec<ConsistencyViolation<T>>,
    /// Every elementary history with its probability, in grid order.
    pub probabilities: Vec<(Vec<usize>, T)>,
}

impl<T: Real> ConsistencyReport<T> {
    fn new(
        criterion: Criterion,
        family: &HistoryFamily<T>,
        violations: Vec<ConsistencyViolation<T>>,
    ) -> Self {
        let probabilities = family
            .histories()
            .map(|h| (h.choices.clone(), history_probability(&h)))
            .collect();
        ConsistencyReport {
            criterion,
            verdict: violations.is_empty(),
            violations,
            probabilities,
        }
    }

    pub fn probability_of(&self, choices: &[usize]) -> Option<T> {
        self.probabilities
            .iter()
            .find(|(c, _)| c == choices)
            .map(|(_, p)| *p)
    }

    pub fn max_residual(&self) -> T {
        self.violations
            .iter()
            .map(|v| v.residual)
            .fold(T::zero(), T::max)
    }
}

/// Gell-Mann–Hartle condition: `|Tr(C_a ρ C_b†)| < consist_tol` for every
/// unordered pair of distinct histories.
pub fn gmh_check<T: Real>(family: &HistoryFamily<T>, tol: &Tolerances) -> ConsistencyReport<T> {
    let limit = T::of(tol.consist_tol);
    let ops: Vec<(Vec<usize>, Operator<T>)> = family
        .histories()
        .map(|h| (h.choices.clone(), history_operator(&h)))
        .collect();
    let weighted: Vec<Operator<T>> = ops.iter().map(|(_, c)| c * &family.initial_state).collect();
    let mut violations = Vec::new();
    for a in 0..ops.len() {
        for b in a + 1..ops.len() {
            let residual = trace_with_adjoint(&weighted[a], &ops[b].1).norm();
            if !(residual < limit) {
                violations.push(ConsistencyViolation {
                    a: ops[a].0.clone(),
                    b: ops[b].0.clone(),
                    residual,
                });
            }
        }
    }
    ConsistencyReport::new(Criterion::Gmh, family, violations)
}

/// `Tr(E_1(t_1) ρ Ē_1(t_1) E_2(t_2))` for a two-time family with binary
/// partitions; atom 0 is the property and atom 1 its complement.
pub fn two_time_interference<T: Real>(family: &HistoryFamily<T>) -> Result<Cx<T>> {
    if family.contexts.len() != 2 || family.contexts.iter().any(|c| c.len() != 2) {
        return Err(Error::UnsupportedShape {
            expected: "two times with two atoms each",
        });
    }
    let e1 = family.heisenberg[0][0].as_operator();
    let e1_bar = family.heisenberg[0][1].as_operator();
    let e2 = family.heisenberg[1][0].as_operator();
    let prod = &(&(e1 * &family.initial_state) * e1_bar) * e2;
    Ok(prod.trace())
}

/// Griffiths condition for two times with binary partitions:
/// `Re Tr(E_1(t_1) ρ Ē_1(t_1) E_2(t_2)) = 0`.
pub fn griffiths_check<T: Real>(
    family: &HistoryFamily<T>,
    tol: &Tolerances,
) -> Result<ConsistencyReport<T>> {
    let value = two_time_interference(family)?.re;
    let mut violations = Vec::new();
    if !(value.abs() < T::of(tol.consist_tol)) {
        violations.push(ConsistencyViolation {
            a: vec![0, 0],
            b: vec![1, 0],
            residual: value.abs(),
        });
    }
    Ok(ConsistencyReport::new(
        Criterion::Griffiths,
        family,
        violations,
    ))
}

pub fn consistency_check<T: Real>(
    family: &HistoryFamily<T>,
    criterion: Criterion,
    tol: &Tolerances,
) -> Result<ConsistencyReport<T>> {
    match criterion {
        Criterion::Gmh => Ok(gmh_check(family, tol)),
        Criterion::Griffiths => griffiths_check(family, tol),
    }
}

/// History family with the generalized context's times and atoms, started
/// from `rho` at the context's reference time (which must precede every
/// context time).
pub fn family_from_generalized_context<T: Real>(
    gc: &GeneralizedContext<T>,
    rho: DensityOperator<T>,
) -> Result<HistoryFamily<T>> {
    let frame = gc.frame();
    HistoryFamily::new(
        gc.contexts().to_vec(),
        frame.hamiltonian.clone(),
        frame.hbar,
        frame.ref_time,
        rho,
    )
}

/// Outcome of comparing a generalized context with its history family.
#[derive(Debug, Clone)]
pub struct TheoremCheck<T> {
    pub gmh: ConsistencyReport<T>,
    /// Largest `|Pr(history) - Pr(composed atom)|` over all tuples.
    pub max_probability_gap: T,
}

impl<T: Real> TheoremCheck<T> {
    pub fn holds(&self, prob_tol: T) -> bool {
        self.gmh.verdict && self.max_probability_gap < prob_tol
    }
}

/// Build the history family of `gc`, run the GMH check and compare each
/// history probability with the Born probability of its composed atom.
pub fn check_generalized_context<T: Real>(
    gc: &GeneralizedContext<T>,
    rho: &DensityOperator<T>,
    tol: &Tolerances,
) -> Result<TheoremCheck<T>> {
    let family = family_from_generalized_context(gc, rho.clone())?;
    let gmh = gmh_check(&family, tol);
    let mut gap = T::zero();
    for (choices, p_hist) in &gmh.probabilities {
        let p_ctx = composite_probability(gc, &gc.property([choices])?, rho)?;
        gap = gap.max((*p_hist - p_ctx).abs());
    }
    Ok(TheoremCheck {
        gmh,
        max_probability_gap: gap,
    })
}

/// Omnès implication inside a consistent family: `Pr(a ∧ b) / Pr(a) ≈ 1`.
pub fn omnes_implies<T: Real>(
    family: &HistoryFamily<T>,
    a: &HistorySet,
    b: &HistorySet,
    criterion: Criterion,
    tol: &Tolerances,
) -> Result<bool> {
    let report = consistency_check(family, criterion, tol)?;
    if !report.verdict {
        return Err(Error::InconsistentFamily);
    }
    let prob = |set: &HistorySet| set.iter().map(|&i| report.probabilities[i].1).sum::<T>();
    let pa = prob(a);
    if pa < T::of(tol.prob_tol) {
        return Err(Error::ConditionOnNull {
            probability: pa.to_f64(),
        });
    }
    let both: HistorySet = a.intersection(b).copied().collect();
    Ok((prob(&both) / pa - T::one()).abs() < T::of(tol.prob_tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contexts::build_generalized_context;
    use crate::lattice::{translate, Frame, TimedProperty};
    use crate::linop::projector_from_span;
    use crate::scalar::cx;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn ray(a: Cx<f64>, b: Cx<f64>) -> Projector<f64> {
        projector_from_span(&[vec![a, b]], &tol()).unwrap()
    }

    fn r(v: f64) -> Cx<f64> {
        cx(v, 0.0)
    }

    fn binary(time: f64, up: Projector<f64>, name: &str) -> Context<f64> {
        let down = up.complement();
        Context::new(
            time,
            vec![up, down],
            vec![format!("{name}+"), format!("{name}-")],
            &tol(),
        )
        .unwrap()
    }

    fn x_up() -> Projector<f64> {
        ray(r(FRAC_1_SQRT_2), r(FRAC_1_SQRT_2))
    }

    fn z_up() -> Projector<f64> {
        ray(r(1.0), r(0.0))
    }

    fn rho_x() -> DensityOperator<f64> {
        DensityOperator::from_projector(&x_up()).unwrap()
    }

    fn family(first: Context<f64>, second: Context<f64>) -> HistoryFamily<f64> {
        HistoryFamily::new(
            vec![first, second],
            HermitianOperator::zero(2),
            1.0,
            0.0,
            rho_x(),
        )
        .unwrap()
    }

    /// Spin projector pair along (x, y, z), built from the Bloch vector.
    fn spin_up(n: [f64; 3]) -> Projector<f64> {
        let theta = n[2].clamp(-1.0, 1.0).acos();
        let phi = n[1].atan2(n[0]);
        ray(
            r((theta / 2.0).cos()),
            cx(0.0, phi).exp() * (theta / 2.0).sin(),
        )
    }

    #[test]
    fn heisenberg_trivial_cases() {
        let p = heisenberg_projector(&x_up(), 3.0, 0.0, &HermitianOperator::zero(2), 1.0).unwrap();
        assert_eq!(p, x_up());
        let h = HermitianOperator::diagonal(&[1.0, -1.0]);
        let p = heisenberg_projector(&x_up(), 1.5, 1.5, &h, 1.0).unwrap();
        assert!(p.max_abs_diff(&x_up()) < 1e-15);
    }

    #[test]
    fn heisenberg_phase_conjugation() {
        let h = HermitianOperator::diagonal(&[1.0, -1.0]);
        let p = heisenberg_projector(&x_up(), FRAC_PI_4, 0.0, &h, 1.0).unwrap();
        let s = FRAC_1_SQRT_2;
        let expected = ray(cx(0.0, FRAC_PI_4).exp() * s, cx(0.0, -FRAC_PI_4).exp() * s);
        assert!(p.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn heisenberg_matches_translation_to_initial_time() {
        let h = HermitianOperator::new(
            Operator::from_rows(vec![
                vec![r(0.3), cx(0.2, -0.7)],
                vec![cx(0.2, 0.7), r(-1.1)],
            ])
            .unwrap(),
            &tol(),
        )
        .unwrap();
        let (t0, tj) = (0.4, 2.3);
        let heis = heisenberg_projector(&x_up(), tj, t0, &h, 0.8).unwrap();
        let moved = translate(&TimedProperty::new(x_up(), tj), t0, &h, 0.8).unwrap();
        assert!(heis.max_abs_diff(&moved.projector) < 1e-14);
    }

    #[test]
    fn history_operator_examples() {
        let fam = family(binary(1.0, x_up(), "x"), binary(2.0, z_up(), "z"));
        let c = history_operator(&fam.history(vec![0, 0]).unwrap());
        let expected = z_up().as_operator() * x_up().as_operator();
        assert!(c.max_abs_diff(&expected) < 1e-15);

        let single = HistoryFamily::new(
            vec![binary(2.0, z_up(), "z")],
            HermitianOperator::zero(2),
            1.0,
            0.0,
            rho_x(),
        )
        .unwrap();
        let c = history_operator(&single.history(vec![0]).unwrap());
        assert!(c.max_abs_diff(&z_up()) < 1e-15);

        let trivial =
            Context::new(1.0, vec![Projector::identity(2)], vec!["I".into()], &tol()).unwrap();
        let fam = HistoryFamily::new(
            vec![
                trivial.clone(),
                Context {
                    time: 2.0,
                    ..trivial
                },
            ],
            HermitianOperator::zero(2),
            1.0,
            0.0,
            rho_x(),
        )
        .unwrap();
        assert_eq!(
            history_operator(&fam.history(vec![0, 0]).unwrap()),
            Operator::identity(2)
        );
    }

    #[test]
    fn history_probability_examples() {
        let fam = family(binary(1.0, x_up(), "x"), binary(2.0, z_up(), "z"));
        let p = history_probability(&fam.history_by_labels(&["x+", "z+"]).unwrap());
        assert!((p - 0.5).abs() < 1e-15);
        // x- at t1 is orthogonal to the prepared state
        assert!(history_probability(&fam.history_by_labels(&["x-", "z+"]).unwrap()) < 1e-15);
        let single = HistoryFamily::new(
            vec![binary(2.0, z_up(), "z")],
            HermitianOperator::zero(2),
            1.0,
            0.0,
            rho_x(),
        )
        .unwrap();
        assert!((history_probability(&single.history(vec![0]).unwrap()) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn history_validation() {
        let fam = family(binary(1.0, x_up(), "x"), binary(2.0, z_up(), "z"));
        assert!(matches!(
            fam.history(vec![0, 2]),
            Err(Error::InvalidChoice {
                time_index: 1,
                choice: 2
            })
        ));
        assert!(fam.history(vec![0]).is_err());
        let err = HistoryFamily::new(
            vec![binary(1.0, z_up(), "z")],
            HermitianOperator::zero(2),
            1.0,
            1.0,
            rho_x(),
        );
        assert!(matches!(
            err,
            Err(Error::TimeOrderViolation { position: 0 })
        ));
        let err = HistoryFamily::new(
            vec![binary(2.0, z_up(), "z"), binary(1.0, z_up(), "z")],
            HermitianOperator::zero(2),
            1.0,
            0.0,
            rho_x(),
        );
        assert!(matches!(
            err,
            Err(Error::TimeOrderViolation { position: 1 })
        ));
    }

    #[test]
    fn gmh_on_spin_cases() {
        let case_i = family(binary(1.0, x_up(), "x"), binary(2.0, z_up(), "z"));
        let report = gmh_check(&case_i, &tol());
        assert!(report.verdict, "{:?}", report.violations);
        assert!((report.probability_of(&[0, 0]).unwrap() - 0.5).abs() < 1e-15);
        assert!((report.probability_of(&[0, 1]).unwrap() - 0.5).abs() < 1e-15);

        let case_ii = family(binary(1.0, z_up(), "z"), binary(2.0, z_up(), "z"));
        assert!(gmh_check(&case_ii, &tol()).verdict);

        let diag = family(
            binary(1.0, spin_up([FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0]), "n"),
            binary(2.0, z_up(), "z"),
        );
        let report = gmh_check(&diag, &tol());
        assert!(!report.verdict);
        // the interference term computed directly
        let direct = two_time_interference(&diag).unwrap().norm();
        assert!(direct > 0.1);
        assert!((report.max_residual() - direct).abs() < 1e-14);
    }

    #[test]
    fn griffiths_on_spin_cases() {
        let y = family(
            binary(1.0, spin_up([0.0, 1.0, 0.0]), "y"),
            binary(2.0, z_up(), "z"),
        );
        assert!(griffiths_check(&y, &tol()).unwrap().verdict);
        let z = family(binary(1.0, z_up(), "z"), binary(2.0, z_up(), "z"));
        assert!(griffiths_check(&z, &tol()).unwrap().verdict);
        let s = FRAC_1_SQRT_2;
        let xz = family(
            binary(1.0, spin_up([s, 0.0, s]), "n"),
            binary(2.0, z_up(), "z"),
        );
        let report = griffiths_check(&xz, &tol()).unwrap();
        assert!(!report.verdict);
        // Re Tr = -(1/4)(n0×n1)·(n1×n2) = -(1/4)(1/2)
        let value = two_time_interference(&xz).unwrap().re;
        assert!((value + 0.125).abs() < 1e-14, "{value}");
    }

    #[test]
    fn griffiths_rejects_other_shapes() {
        let single = HistoryFamily::new(
            vec![binary(2.0, z_up(), "z")],
            HermitianOperator::zero(2),
            1.0,
            0.0,
            rho_x(),
        )
        .unwrap();
        assert!(matches!(
            griffiths_check(&single, &tol()),
            Err(Error::UnsupportedShape { .. })
        ));
    }

    #[test]
    fn theorem_on_z_z_context() {
        let contexts = vec![binary(1.0, z_up(), "z"), binary(2.0, z_up(), "z")];
        let gc = build_generalized_context(contexts, &Frame::free(2, 0.0), &tol()).unwrap();
        let check = check_generalized_context(&gc, &rho_x(), &tol()).unwrap();
        assert!(check.holds(1e-12));
        let expected = [0.5, 0.0, 0.0, 0.5];
        for ((_, p), e) in check.gmh.probabilities.iter().zip(expected) {
            assert!((p - e).abs() < 1e-15);
        }
    }

    #[test]
    fn theorem_with_maximally_mixed_state() {
        let contexts = vec![binary(1.0, z_up(), "z"), binary(2.0, z_up(), "z")];
        let gc = build_generalized_context(contexts, &Frame::free(2, 0.0), &tol()).unwrap();
        let fam =
            family_from_generalized_context(&gc, DensityOperator::maximally_mixed(2)).unwrap();
        for (h, atom) in fam.histories().zip(gc.composed_atoms()) {
            let expected = atom.rank() as f64 / 2.0;
            assert!((history_probability(&h) - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn theorem_single_context_is_born_rule() {
        let gc =
            build_generalized_context(vec![binary(1.0, z_up(), "z")], &Frame::free(2, 0.0), &tol())
                .unwrap();
        let rho = rho_x();
        let fam = family_from_generalized_context(&gc, rho.clone()).unwrap();
        for (h, atom) in fam.histories().zip(gc.composed_atoms()) {
            assert!((history_probability(&h) - rho.expectation(atom)).abs() < 1e-15);
        }
    }

    #[test]
    fn omnes_examples() {
        let fam = family(binary(1.0, x_up(), "x"), binary(2.0, z_up(), "z"));
        let a = fam.history_set(|c| c[0] == 0);
        let all = fam.history_set(|_| true);
        assert!(omnes_implies(&fam, &a, &all, Criterion::Gmh, &tol()).unwrap());
        let sub = fam.history_set(|c| c == [0, 0]);
        assert!(omnes_implies(&fam, &sub, &a, Criterion::Gmh, &tol()).unwrap());
        let not_a: HistorySet = all.difference(&a).copied().collect();
        assert!(!omnes_implies(&fam, &a, &not_a, Criterion::Gmh, &tol()).unwrap());
        // Pr(a) = 1, so everything that has x+ at t1 is certain
        let probs = fam.probabilities();
        assert!((a.iter().map(|&i| probs[i]).sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(omnes_implies(&fam, &all, &a, Criterion::Gmh, &tol()).unwrap());
        assert!(matches!(
            omnes_implies(&fam, &not_a, &a, Criterion::Gmh, &tol()),
            Err(Error::ConditionOnNull { .. })
        ));
        let diag = family(
            binary(1.0, spin_up([FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0]), "n"),
            binary(2.0, z_up(), "z"),
        );
        assert_eq!(
            omnes_implies(&diag, &all, &all, Criterion::Gmh, &tol()),
            Err(Error::InconsistentFamily)
        );
    }
}
