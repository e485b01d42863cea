#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use timeprops::contexts::{build_generalized_context, Context, GeneralizedContext};
use timeprops::lattice::{class_of, Frame, PropertyClass, TimedProperty};
use timeprops::linop::{projector_from_span, HermitianOperator, Operator, Projector};
use timeprops::sample;
use timeprops::{Cx, Tolerances};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn tol() -> Tolerances {
    Tolerances::default()
}

/// `exp(-i H dt / ħ)` by scaling and squaring of a truncated Taylor series.
pub fn expm_oracle(h: &Operator<f64>, dt: f64, hbar: f64) -> Operator<f64> {
    let a = h.scale(Cx::new(0.0, -dt / hbar));
    let norm = a.frobenius_norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let small = a.scale_real(1.0 / f64::from(2u32.pow(squarings)));
    let dim = h.dim();
    let mut term = Operator::identity(dim);
    let mut sum = Operator::identity(dim);
    for k in 1..30 {
        term = (&term * &small).scale_real(1.0 / k as f64);
        sum = &sum + &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Random generalized context in a shared eigenbasis: every context is a
/// coarse-graining of the same orthonormal basis `B`, taken at its own
/// time and conjugated back by the dynamics so that all translations to the
/// reference time are diagonal in `B`.
pub fn random_shared_basis_gc<R: Rng>(
    rng: &mut R,
    tol: &Tolerances,
) -> (GeneralizedContext<f64>, Frame<f64>) {
    let dim = rng.random_range(2..=6);
    let h = sample::hermitian::<f64, _>(dim, rng);
    let hbar = rng.random_range(0.5..2.0);
    let t0 = rng.random_range(-1.0..1.0);
    let frame = Frame::new(h.clone(), hbar, t0).unwrap();
    let basis = sample::orthonormal_columns::<f64, _>(dim, dim, rng);
    let n_ctx = rng.random_range(1..=3);
    let mut time = t0;
    let mut contexts = Vec::new();
    for _ in 0..n_ctx {
        time += rng.random_range(0.2..1.5);
        let atoms = random_partition(dim, rng)
            .into_iter()
            .map(|block| {
                let vs: Vec<Vec<Cx<f64>>> = block.iter().map(|&i| basis[i].clone()).collect();
                span_projector(dim, &vs)
            })
            .map(|p| {
                // property at t0 moved out to `time`
                let u = expm_oracle(&h, time - t0, hbar);
                Projector::new(p.as_operator().conjugate_by(&u).hermitian_part(), tol).unwrap()
            })
            .collect::<Vec<_>>();
        let labels = (0..atoms.len()).map(|i| format!("a{i}")).collect();
        contexts.push(Context::new(time, atoms, labels, tol).unwrap());
    }
    (
        build_generalized_context(contexts, &frame, tol).unwrap(),
        frame,
    )
}

fn span_projector(dim: usize, vs: &[Vec<Cx<f64>>]) -> Projector<f64> {
    let op = vs
        .iter()
        .fold(Operator::zeros(dim), |acc, v| &acc + &Operator::outer(v, v));
    Projector::new(op, &tol()).unwrap()
}

/// Random partition of `0..dim` into non-empty blocks.
fn random_partition<R: Rng>(dim: usize, rng: &mut R) -> Vec<Vec<usize>> {
    let blocks = rng.random_range(1..=dim);
    let mut out = vec![Vec::new(); blocks];
    let mut order: Vec<usize> = (0..dim).collect();
    for i in (1..dim).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    for (k, &i) in order.iter().enumerate() {
        let slot = if k < blocks {
            k
        } else {
            rng.random_range(0..blocks)
        };
        out[slot].push(i);
    }
    out
}

pub fn random_hermitian(dim: usize, seed: u64) -> HermitianOperator<f64> {
    sample::hermitian(dim, &mut rng(seed))
}

/// Projectors `P ⊇ W`, `Q ⊇ W` that generically meet exactly in `W`.
pub fn pair_with_known_meet(seed: u64) -> (Projector<f64>, Projector<f64>, Projector<f64>) {
    let mut r = rng(seed);
    let dim = r.random_range(2..=8);
    let basis = sample::orthonormal_columns::<f64, _>(dim, dim, &mut r);
    let w = r.random_range(0..dim);
    let mix = |r: &mut rand_chacha::ChaCha8Rng, count: usize| -> Vec<Vec<Cx<f64>>> {
        (0..count)
            .map(|_| {
                let coeff = sample::complex_vector::<f64, _>(dim - w, r);
                (0..dim)
                    .map(|i| {
                        coeff
                            .iter()
                            .enumerate()
                            .fold(Cx::new(0.0, 0.0), |acc, (k, c)| acc + basis[w + k][i] * c)
                    })
                    .collect()
            })
            .collect()
    };
    let room = dim - w;
    let (a, b) = if room >= 2 {
        let a = r.random_range(0..room);
        (a, r.random_range(0..(room - a).max(1)).min(room - a - 1))
    } else {
        (0, 0)
    };
    let shared: Vec<Vec<Cx<f64>>> = basis[..w].to_vec();
    let with = |extra: Vec<Vec<Cx<f64>>>| {
        let vs: Vec<Vec<Cx<f64>>> = shared.iter().cloned().chain(extra).collect();
        if vs.is_empty() {
            Projector::zero(dim)
        } else {
            projector_from_span(&vs, &tol()).unwrap()
        }
    };
    let p = with(mix(&mut r, a));
    let q = with(mix(&mut r, b));
    (p, q, with(Vec::new()))
}

pub fn random_class(dim: usize, frame: &Frame<f64>, r: &mut impl Rng) -> PropertyClass<f64> {
    let p = sample::projector_any_rank::<f64, _>(dim, r);
    let t = r.random_range(-3.0..3.0);
    class_of(&TimedProperty::new(p, t), frame).unwrap()
}

/// Classes built from a small common pool of rays and their spans, so meets
/// and joins are often non-trivial.
pub fn structured_classes(seed: u64) -> (Frame<f64>, [PropertyClass<f64>; 3]) {
    let mut r = rng(seed);
    let dim = r.random_range(2..=4);
    let frame = Frame::new(sample::hermitian(dim, &mut r), 1.0, 0.0).unwrap();
    let basis = sample::orthonormal_columns::<f64, _>(dim, dim, &mut r);
    let mut pick = || {
        let mut vs: Vec<Vec<Cx<f64>>> = basis
            .iter()
            .filter(|_| r.random_bool(0.5))
            .cloned()
            .collect();
        if r.random_bool(0.3) && dim >= 2 {
            let a = &basis[0];
            let b = &basis[1];
            vs.push(
                a.iter()
                    .zip(b)
                    .map(|(x, y)| (x + y) / 2f64.sqrt())
                    .collect(),
            );
        }
        let p = if vs.is_empty() {
            Projector::zero(dim)
        } else {
            projector_from_span(&vs, &tol()).unwrap()
        };
        PropertyClass {
            representative: p,
            frame: frame.clone(),
        }
    };
    let cs = [pick(), pick(), pick()];
    (frame, cs)
}

pub fn same(a: &PropertyClass<f64>, b: &PropertyClass<f64>) -> bool {
    a.representative.max_abs_diff(&b.representative) < 1e-8
}
