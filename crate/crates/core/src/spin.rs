//! Spin-1/2 along a direction of the Bloch sphere and the direction searches
//! over an intermediate spin measurement `n1`.

use crate::contexts::{build_generalized_context, Context};
use crate::error::{Error, Result};
use crate::histories::{gmh_check, griffiths_check, HistoryFamily};
use crate::lattice::Frame;
use crate::linop::{pauli, DensityOperator, HermitianOperator, Operator, Projector};
use crate::scalar::{Cx, Real};
use crate::tolerance::Tolerances;

const UNIT_TOL: f64 = 1e-12;
const ANTIPODE_TOL: f64 = 1e-9;

/// Unit vector in three dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Direction<T> {
    pub fn new(x: T, y: T, z: T) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !((norm - T::one()).abs() <= T::of(UNIT_TOL)) {
            return Err(Error::NonUnitDirection {
                norm: norm.to_f64(),
            });
        }
        Ok(Direction { x, y, z })
    }

    /// Rescale to unit length. Also returns `| |v| - 1 |`.
    pub fn normalized(x: T, y: T, z: T) -> Result<(Self, T)> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(Error::NonUnitDirection {
                norm: norm.to_f64(),
            });
        }
        Ok((
            Direction {
                x: x / norm,
                y: y / norm,
                z: z / norm,
            },
            (norm - T::one()).abs(),
        ))
    }

    pub fn x_axis() -> Self {
        Direction {
            x: T::one(),
            y: T::zero(),
            z: T::zero(),
        }
    }

    pub fn y_axis() -> Self {
        Direction {
            x: T::zero(),
            y: T::one(),
            z: T::zero(),
        }
    }

    pub fn z_axis() -> Self {
        Direction {
            x: T::zero(),
            y: T::zero(),
            z: T::one(),
        }
    }

    /// `±x, ±y, ±z`
    pub fn axes() -> [Self; 6] {
        let (x, y, z) = (Self::x_axis(), Self::y_axis(), Self::z_axis());
        [x, -x, y, -y, z, -z]
    }

    pub fn components(&self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, o: &Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    /// Cross product; not normalized.
    pub fn cross(&self, o: &Self) -> [T; 3] {
        [
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        ]
    }

    pub fn distance(&self, o: &Self) -> T {
        let d = [self.x - o.x, self.y - o.y, self.z - o.z];
        (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
    }
}

impl<T: Real> std::ops::Neg for Direction<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Direction {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}

impl<T: Real> std::fmt::Display for Direction<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        // adding zero turns -0.0 into 0.0
        let z = T::zero();
        write!(
            f,
            "({:.6}, {:.6}, {:.6})",
            self.x + z,
            self.y + z,
            self.z + z
        )
    }
}

/// `((I + n·σ)/2, (I - n·σ)/2)`
pub fn spin_projectors<T: Real>(n: &Direction<T>) -> Result<(Projector<T>, Projector<T>)> {
    Direction::new(n.x, n.y, n.z)?;
    let [sx, sy, sz] = pauli::<T>();
    let n_sigma = &(&sx.scale_real(n.x) + &sy.scale_real(n.y)) + &sz.scale_real(n.z);
    let half = T::of(0.5);
    let id = Operator::identity(2);
    let up = (&id + &n_sigma).scale_real(half);
    let down = (&id - &n_sigma).scale_real(half);
    Ok((
        Projector::from_hermitian(up),
        Projector::from_hermitian(down),
    ))
}

/// Pure state `|n+⟩⟨n+|`.
pub fn spin_state<T: Real>(n: &Direction<T>) -> Result<DensityOperator<T>> {
    DensityOperator::from_projector(&spin_projectors(n)?.0)
}

/// `(n0 × n1)·(n1 × n2)`
pub fn coplanarity<T: Real>(n0: &Direction<T>, n1: &Direction<T>, n2: &Direction<T>) -> T {
    let a = n0.cross(n1);
    let b = n1.cross(n2);
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Sample directions: a Fibonacci sphere followed by the six axes.
#[derive(Debug, Clone)]
pub struct SphereGrid<T> {
    points: Vec<Direction<T>>,
}

impl<T: Real> SphereGrid<T> {
    pub const DEFAULT_COUNT: usize = 2000;

    pub fn fibonacci(count: usize) -> Self {
        let golden = T::PI() * (T::of(3.0) - T::of(5.0).sqrt());
        let n = T::of(count as f64);
        let mut points: Vec<Direction<T>> = (0..count)
            .map(|i| {
                let k = T::of(i as f64);
                let z = T::one() - (T::of(2.0) * k + T::one()) / n;
                let r = (T::one() - z * z).max(T::zero()).sqrt();
                let phi = golden * k;
                let (x, y) = (r * phi.cos(), r * phi.sin());
                Direction::normalized(x, y, z)
                    .map(|(d, _)| d)
                    .unwrap_or(Direction { x, y, z })
            })
            .collect();
        points.extend(Direction::axes());
        SphereGrid { points }
    }

    pub fn from_points(points: Vec<Direction<T>>) -> Self {
        SphereGrid { points }
    }

    pub fn points(&self) -> &[Direction<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

impl<T: Real> Default for SphereGrid<T> {
    fn default() -> Self {
        Self::fibonacci(Self::DEFAULT_COUNT)
    }
}

/// Dynamics and the three times `t0 < t1 < t2` of the spin searches.
#[derive(Debug, Clone)]
pub struct SpinSetup<T> {
    pub hamiltonian: HermitianOperator<T>,
    pub hbar: T,
    pub t0: T,
    pub t1: T,
    pub t2: T,
}

impl<T: Real> SpinSetup<T> {
    /// `H = 0`, `ħ = 1`, times 0, 1, 2.
    pub fn free() -> Self {
        SpinSetup {
            hamiltonian: HermitianOperator::zero(2),
            hbar: T::one(),
            t0: T::zero(),
            t1: T::one(),
            t2: T::of(2.0),
        }
    }

    fn frame(&self) -> Result<Frame<T>> {
        Frame::new(self.hamiltonian.clone(), self.hbar, self.t0)
    }

    fn contexts(
        &self,
        n1: &Direction<T>,
        n2: &Direction<T>,
        tol: &Tolerances,
    ) -> Result<Vec<Context<T>>> {
        let (a, b) = spin_projectors(n1)?;
        let (c, d) = spin_projectors(n2)?;
        let pm = || vec!["+".to_string(), "-".to_string()];
        Ok(vec![
            Context::new(self.t1, vec![a, b], pm(), tol)?,
            Context::new(self.t2, vec![c, d], pm(), tol)?,
        ])
    }

    fn family(
        &self,
        n1: &Direction<T>,
        n2: &Direction<T>,
        rho: &DensityOperator<T>,
        tol: &Tolerances,
    ) -> Result<HistoryFamily<T>> {
        HistoryFamily::new(
            self.contexts(n1, n2, tol)?,
            self.hamiltonian.clone(),
            self.hbar,
            self.t0,
            rho.clone(),
        )
    }
}

/// One accepted grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionHit<T> {
    /// Position in the grid.
    pub index: usize,
    pub direction: Direction<T>,
    /// Grid index of the antipode, when it was accepted too. Both describe
    /// the same context with the labels swapped.
    pub antipode: Option<usize>,
}

fn collect_hits<T: Real>(grid: &SphereGrid<T>, accepted: &[bool]) -> Vec<DirectionHit<T>> {
    let idx: Vec<usize> = (0..grid.len()).filter(|&i| accepted[i]).collect();
    let pts = grid.points();
    idx.iter()
        .map(|&i| {
            let antipode = idx
                .iter()
                .copied()
                .find(|&j| j != i && pts[i].distance(&-pts[j]) < T::of(ANTIPODE_TOL));
            DirectionHit {
                index: i,
                direction: pts[i],
                antipode,
            }
        })
        .collect()
}

/// Directions `n1` whose spin pair at `t1` forms a generalized context with
/// the `n2` pair at `t2`.
pub fn compatible_directions<T: Real>(
    n2: &Direction<T>,
    grid: &SphereGrid<T>,
    setup: &SpinSetup<T>,
    tol: &Tolerances,
) -> Result<Vec<DirectionHit<T>>> {
    let frame = setup.frame()?;
    let accepted = grid
        .points()
        .iter()
        .map(
            |n1| match build_generalized_context(setup.contexts(n1, n2, tol)?, &frame, tol) {
                Ok(_) => Ok(true),
                Err(Error::IncompatibleContexts { .. }) => Ok(false),
                Err(e) => Err(e),
            },
        )
        .collect::<Result<Vec<_>>>()?;
    Ok(collect_hits(grid, &accepted))
}

/// Directions `n1` for which the two-time family passes the GMH check.
pub fn gmh_directions<T: Real>(
    n2: &Direction<T>,
    rho: &DensityOperator<T>,
    grid: &SphereGrid<T>,
    setup: &SpinSetup<T>,
    tol: &Tolerances,
) -> Result<Vec<DirectionHit<T>>> {
    let accepted = grid
        .points()
        .iter()
        .map(|n1| Ok(gmh_check(&setup.family(n1, n2, rho, tol)?, tol).verdict))
        .collect::<Result<Vec<_>>>()?;
    Ok(collect_hits(grid, &accepted))
}

#[derive(Debug, Clone)]
pub struct GriffithsSearch<T> {
    pub hits: Vec<DirectionHit<T>>,
    /// Grid indices where the Griffiths check and `|coplanarity| < consist_tol`
    /// disagree.
    pub disagreements: Vec<usize>,
}

/// Directions `n1` passing the Griffiths check for a state pure along `n0`.
/// Each point is also tested with the coplanarity predicate.
pub fn griffiths_directions<T: Real>(
    n0: &Direction<T>,
    n2: &Direction<T>,
    grid: &SphereGrid<T>,
    setup: &SpinSetup<T>,
    tol: &Tolerances,
) -> Result<GriffithsSearch<T>> {
    let rho = spin_state(n0)?;
    let limit = T::of(tol.consist_tol);
    let mut accepted = Vec::with_capacity(grid.len());
    let mut disagreements = Vec::new();
    for (i, n1) in grid.points().iter().enumerate() {
        let pass = griffiths_check(&setup.family(n1, n2, &rho, tol)?, tol)?.verdict;
        if pass != (coplanarity(n0, n1, n2).abs() < limit) {
            disagreements.push(i);
        }
        accepted.push(pass);
    }
    Ok(GriffithsSearch {
        hits: collect_hits(grid, &accepted),
        disagreements,
    })
}

/// Ket `|n+⟩` with a real, non-negative first component.
pub fn spin_up_ket<T: Real>(n: &Direction<T>) -> Result<Vec<Cx<T>>> {
    Direction::new(n.x, n.y, n.z)?;
    let half = T::of(0.5);
    let theta = n.z.max(-T::one()).min(T::one()).acos();
    let phi = n.y.atan2(n.x);
    Ok(vec![
        Cx::new((theta * half).cos(), T::zero()),
        Cx::from_polar((theta * half).sin(), phi),
    ])
}
