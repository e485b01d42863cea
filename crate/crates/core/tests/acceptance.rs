mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::{pair_with_known_meet, random_shared_basis_gc, rng, same, structured_classes, tol};
use rand::Rng;
use timeprops::contexts::{
    build_generalized_context, composite_join, composite_meet, composite_probability,
    CompositeProperty, Context,
};
use timeprops::histories::{check_generalized_context, history_probability, HistoryFamily};
use timeprops::lattice::{
    class_born_probability, class_join, class_meet, class_negate, class_of, Frame, PropertyClass,
    TimedProperty,
};
use timeprops::linop::{
    alternating_projection_limit, evolution_operator, subspace_intersection, HermitianOperator,
    Projector,
};
use timeprops::sample;
use timeprops::spin::{
    compatible_directions, gmh_directions, griffiths_directions, spin_projectors, spin_state,
    Direction, SphereGrid, SpinSetup,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn spin_context(time: f64, n: &Direction<f64>) -> Context<f64> {
    let (up, down) = spin_projectors(n).unwrap();
    Context::new(time, vec![up, down], vec!["+".into(), "-".into()], &tol()).unwrap()
}

fn indices<T>(hits: &[timeprops::spin::DirectionHit<T>]) -> BTreeSet<usize> {
    hits.iter().map(|h| h.index).collect()
}

fn two_time_probability() -> Outcome {
    let start = Instant::now();
    let (x, z) = (Direction::x_axis(), Direction::z_axis());
    let mut worst = 0.0f64;
    for t1 in [0.25, 1.0, 1.75] {
        let fam = HistoryFamily::new(
            vec![spin_context(t1, &x), spin_context(2.0, &z)],
            HermitianOperator::zero(2),
            1.0,
            0.0,
            spin_state(&x).unwrap(),
        )
        .unwrap();
        let p = history_probability(&fam.history(vec![0, 0]).unwrap());
        worst = worst.max((p - 0.5).abs());
    }
    let elapsed = start.elapsed();
    check(
        worst < 1e-12 && elapsed < Duration::from_secs(1),
        format!("max |Pr - 1/2| = {worst:.1e}, {elapsed:.2?}"),
    )
}

fn commute_search_elimination() -> Outcome {
    let start = Instant::now();
    let grid = SphereGrid::<f64>::default();
    let z = Direction::z_axis();
    let expected: BTreeSet<usize> = [grid.len() - 2, grid.len() - 1].into();
    let mut r = rng(2);
    let mut outputs = Vec::new();
    for _ in 0..20 {
        // the state enters only through the probability table, never the search
        let rho = sample::density::<f64, _>(2, &mut r);
        let hits = compatible_directions(&z, &grid, &SpinSetup::free(), &tol()).unwrap();
        for h in &hits {
            let ctxs = vec![spin_context(1.0, &h.direction), spin_context(2.0, &z)];
            let gc = build_generalized_context(ctxs, &Frame::free(2, 0.0), &tol()).unwrap();
            let total = composite_probability(&gc, &gc.full(), &rho).unwrap();
            if (total - 1.0).abs() > 1e-10 {
                return Err(format!("probability table sums to {total}"));
            }
        }
        outputs.push(hits);
    }
    let elapsed = start.elapsed();
    let all_same = outputs.windows(2).all(|w| w[0] == w[1]);
    let found = indices(&outputs[0]);
    let dirs: Vec<String> = outputs[0].iter().map(|h| h.direction.to_string()).collect();
    check(
        found == expected && all_same && elapsed < Duration::from_secs(5),
        format!(
            "{} grid points -> {:?}, identical for 20 states: {all_same}, {elapsed:.2?}",
            grid.len(),
            dirs
        ),
    )
}

fn gmh_direction_set() -> Outcome {
    let grid = SphereGrid::<f64>::default();
    let n = grid.len();
    let rho = spin_state(&Direction::x_axis()).unwrap();
    let hits = gmh_directions(
        &Direction::z_axis(),
        &rho,
        &grid,
        &SpinSetup::free(),
        &tol(),
    )
    .unwrap();
    let expected: BTreeSet<usize> = [n - 6, n - 5, n - 2, n - 1].into();
    let dirs: Vec<String> = hits.iter().map(|h| h.direction.to_string()).collect();
    check(indices(&hits) == expected, format!("{dirs:?}"))
}

fn griffiths_plane_condition() -> Outcome {
    let grid = SphereGrid::<f64>::default();
    let search = griffiths_directions(
        &Direction::x_axis(),
        &Direction::z_axis(),
        &grid,
        &SpinSetup::free(),
        &tol(),
    )
    .unwrap();
    check(
        grid.len() >= 2000 && search.disagreements.is_empty(),
        format!(
            "{} points, {} accepted, {} disagreements with coplanarity",
            grid.len(),
            search.hits.len(),
            search.disagreements.len()
        ),
    )
}

fn shared_basis_theorem() -> Outcome {
    let mut r = rng(5);
    let mut failures = 0;
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (gc, _) = random_shared_basis_gc(&mut r, &tol());
        let rho = sample::density::<f64, _>(gc.dim(), &mut r);
        let c = check_generalized_context(&gc, &rho, &tol()).unwrap();
        worst = worst.max(c.max_probability_gap);
        if !c.gmh.verdict || c.max_probability_gap >= 1e-10 {
            failures += 1;
        }
    }
    check(
        failures == 0,
        format!("100 contexts, {failures} failures, max probability gap {worst:.1e}"),
    )
}

fn probability_axioms() -> Outcome {
    let mut r = rng(5);
    let mut worst_total = 0.0f64;
    let mut worst_add = 0.0f64;
    let mut negative = 0;
    for _ in 0..100 {
        let (gc, _) = random_shared_basis_gc(&mut r, &tol());
        for _ in 0..10 {
            let rho = sample::density::<f64, _>(gc.dim(), &mut r);
            for atom in gc.composed_atoms() {
                if rho.expectation(atom) < -1e-12 {
                    negative += 1;
                }
            }
            let total = composite_probability(&gc, &gc.full(), &rho).unwrap();
            worst_total = worst_total.max((total - 1.0).abs());
            for _ in 0..50 {
                let (a, b) = disjoint_pair(&gc, &mut r);
                let joint = composite_probability(&gc, &composite_join(&gc, &a, &b).unwrap(), &rho)
                    .unwrap();
                let sum = composite_probability(&gc, &a, &rho).unwrap()
                    + composite_probability(&gc, &b, &rho).unwrap();
                worst_add = worst_add.max((joint - sum).abs());
            }
        }
    }
    check(
        negative == 0 && worst_total < 1e-10 && worst_add < 1e-10,
        format!("negative atoms {negative}, max |total - 1| {worst_total:.1e}, max additivity gap {worst_add:.1e}"),
    )
}

fn disjoint_pair(
    gc: &timeprops::contexts::GeneralizedContext<f64>,
    r: &mut impl Rng,
) -> (CompositeProperty, CompositeProperty) {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for t in gc.tuples() {
        match r.random_range(0..3) {
            0 => a.push(t),
            1 => b.push(t),
            _ => {}
        }
    }
    (gc.property(&a).unwrap(), gc.property(&b).unwrap())
}

fn lattice_oracles() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 0..200 {
        let (p, q, w) = pair_with_known_meet(1000 + seed);
        let exact = subspace_intersection(&p, &q, &tol()).unwrap();
        let limit = alternating_projection_limit(&p, &q, 1e-12, 128, &tol()).unwrap();
        worst = worst
            .max(limit.max_abs_diff(&exact))
            .max(exact.max_abs_diff(&w));
    }
    let mut law_failures = 0;
    let t = tol();
    for seed in 0..100 {
        let (_, [a, b, c]) = structured_classes(5000 + seed);
        let meet = |x: &PropertyClass<f64>, y: &PropertyClass<f64>| class_meet(x, y, &t).unwrap();
        let join = |x: &PropertyClass<f64>, y: &PropertyClass<f64>| class_join(x, y, &t).unwrap();
        let laws = [
            same(&meet(&a, &a), &a),
            same(&join(&a, &a), &a),
            same(&meet(&a, &b), &meet(&b, &a)),
            same(&join(&a, &b), &join(&b, &a)),
            same(&meet(&meet(&a, &b), &c), &meet(&a, &meet(&b, &c))),
            same(&join(&join(&a, &b), &c), &join(&a, &join(&b, &c))),
            same(&meet(&a, &join(&a, &b)), &a),
            same(&join(&a, &meet(&a, &b)), &a),
            same(
                &class_negate(&meet(&a, &b)),
                &join(&class_negate(&a), &class_negate(&b)),
            ),
            same(
                &class_negate(&join(&a, &b)),
                &meet(&class_negate(&a), &class_negate(&b)),
            ),
        ];
        law_failures += laws.iter().filter(|ok| !**ok).count();
    }
    check(
        worst < 1e-8 && law_failures == 0,
        format!(
            "200 pairs, max meet deviation {worst:.1e}; 100 triples, {law_failures} law failures"
        ),
    )
}

fn non_distributive_witness() -> Outcome {
    let frame = Frame::free(2, 0.0);
    let class = |n: Direction<f64>, up: bool| {
        let (p, m) = spin_projectors(&n).unwrap();
        class_of(&TimedProperty::new(if up { p } else { m }, 0.0), &frame).unwrap()
    };
    let x = Direction::x_axis();
    let (a, b, c) = (
        class(Direction::z_axis(), true),
        class(x, true),
        class(x, false),
    );
    let t = tol();
    let lhs = class_meet(&a, &class_join(&b, &c, &t).unwrap(), &t).unwrap();
    let rhs = class_join(
        &class_meet(&a, &b, &t).unwrap(),
        &class_meet(&a, &c, &t).unwrap(),
        &t,
    )
    .unwrap();
    let residual =
        (lhs.representative.as_operator() - rhs.representative.as_operator()).operator_norm();

    let ctxs = vec![
        spin_context(1.0, &Direction::z_axis()),
        spin_context(2.0, &Direction::z_axis()),
    ];
    let gc = build_generalized_context(ctxs, &frame, &t).unwrap();
    let n = gc.num_composed();
    let props: Vec<CompositeProperty> = (0u32..1 << n)
        .map(|mask| {
            let ts: Vec<Vec<usize>> = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| gc.tuple_of(i))
                .collect();
            gc.property(&ts).unwrap()
        })
        .collect();
    let mut broken = 0;
    for a in &props {
        for b in &props {
            for c in &props {
                let l = composite_meet(&gc, a, &composite_join(&gc, b, c).unwrap()).unwrap();
                let r = composite_join(
                    &gc,
                    &composite_meet(&gc, a, b).unwrap(),
                    &composite_meet(&gc, a, c).unwrap(),
                )
                .unwrap();
                if l != r {
                    broken += 1;
                }
            }
        }
    }
    check(
        residual >= 0.9 && broken == 0,
        format!(
            "class residual {residual:.3}; {} composite triples, {broken} non-distributive",
            props.len().pow(3)
        ),
    )
}

fn born_invariance() -> Outcome {
    let mut r = rng(9);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let dim = r.random_range(2..=6);
        let h = sample::hermitian::<f64, _>(dim, &mut r);
        let p: Projector<f64> = sample::projector_any_rank(dim, &mut r);
        let rho = sample::density::<f64, _>(dim, &mut r);
        let (t1, t2) = (r.random_range(-5.0..5.0), r.random_range(-5.0..5.0));
        let c1 = class_of(
            &TimedProperty::new(p, t1),
            &Frame::new(h.clone(), 1.0, t1).unwrap(),
        )
        .unwrap();
        let c2 = c1.rebased(t2).unwrap();
        let rho2 = rho.evolve(&evolution_operator(&h, t1, t2, 1.0).unwrap());
        let a = class_born_probability(&rho, t1, &c1).unwrap();
        let b = class_born_probability(&rho2, t2, &c2).unwrap();
        worst = worst.max((a - b).abs());
    }
    check(worst < 1e-12, format!("100 draws, max gap {worst:.1e}"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("two-time history probability is 1/2", two_time_probability),
        (
            "commute search leaves only +z and -z",
            commute_search_elimination,
        ),
        ("GMH directions are +-x and +-z", gmh_direction_set),
        (
            "Griffiths check agrees with coplanarity",
            griffiths_plane_condition,
        ),
        (
            "shared-basis generalized contexts are GMH consistent",
            shared_basis_theorem,
        ),
        ("probability axioms", probability_axioms),
        ("meet oracles and lattice laws", lattice_oracles),
        ("non-distributive witness", non_distributive_witness),
        ("Born rule invariant under translation", born_invariance),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}  ({detail})", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}  ({detail})", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
