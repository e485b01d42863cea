//! Time-tagged properties and the lattice of their time-translation classes.
//!
//! A property `(P, t)` is moved to another time by conjugating with the
//! evolution operator. Two timed properties are equivalent when one is the
//! translation of the other, and a [`PropertyClass`] stores the single member
//! that lives at the frame's reference time. Order, meet, join and negation
//! act on those representatives.

use crate::error::{Error, Result};
use crate::linop::{
    alternating_projection_limit, evolution_operator, subspace_inclusion, subspace_intersection,
    DensityOperator, HermitianOperator, Projector,
};
use crate::scalar::Real;
use crate::tolerance::Tolerances;

/// Iteration budget for the alternating-projection cross-check of a meet.
const LIMIT_SQUARINGS: usize = 128;

/// A projector together with the time at which the property holds.
#[derive(Debug, Clone, PartialEq)]
pub struct TimedProperty<T> {
    pub projector: Projector<T>,
    pub time: T,
}

impl<T: Real> TimedProperty<T> {
    pub fn new(projector: Projector<T>, time: T) -> Self {
        TimedProperty { projector, time }
    }
}

/// The dynamics shared by every class of one lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame<T> {
    pub hamiltonian: HermitianOperator<T>,
    pub hbar: T,
    pub ref_time: T,
}

impl<T: Real> Frame<T> {
    pub fn new(hamiltonian: HermitianOperator<T>, hbar: T, ref_time: T) -> Result<Self> {
        if !(hbar > T::zero()) {
            return Err(Error::InvalidHbar {
                value: hbar.to_f64(),
            });
        }
        Ok(Frame {
            hamiltonian,
            hbar,
            ref_time,
        })
    }

    /// Frame with vanishing Hamiltonian and `ħ = 1`.
    pub fn free(dim: usize, ref_time: T) -> Self {
        Frame {
            hamiltonian: HermitianOperator::zero(dim),
            hbar: T::one(),
            ref_time,
        }
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    /// Same dynamics, different reference time.
    pub fn at(&self, ref_time: T) -> Self {
        Frame {
            ref_time,
            ..self.clone()
        }
    }
}

/// Equivalence class of timed properties, held as its member at `frame.ref_time`.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyClass<T> {
    pub representative: Projector<T>,
    pub frame: Frame<T>,
}

impl<T: Real> PropertyClass<T> {
    /// The member of the class at time `t`.
    pub fn member_at(&self, t: T) -> Result<TimedProperty<T>> {
        let rep = TimedProperty::new(self.representative.clone(), self.frame.ref_time);
        translate(&rep, t, &self.frame.hamiltonian, self.frame.hbar)
    }

    /// The same class described from another reference time.
    pub fn rebased(&self, ref_time: T) -> Result<Self> {
        let member = self.member_at(ref_time)?;
        Ok(PropertyClass {
            representative: member.projector,
            frame: self.frame.at(ref_time),
        })
    }

    fn same_frame(&self, other: &Self) -> Result<()> {
        if self.frame != other.frame {
            return Err(Error::FrameMismatch);
        }
        self.representative.check_dim(&other.representative)
    }

    fn with_representative(&self, representative: Projector<T>) -> Self {
        PropertyClass {
            representative,
            frame: self.frame.clone(),
        }
    }
}

/// `(U(t_to, t) P U(t_to, t)⁻¹, t_to)`
pub fn translate<T: Real>(
    p: &TimedProperty<T>,
    t_to: T,
    h: &HermitianOperator<T>,
    hbar: T,
) -> Result<TimedProperty<T>> {
    p.projector.check_dim(h)?;
    let u = evolution_operator(h, p.time, t_to, hbar)?;
    Ok(TimedProperty {
        projector: p.projector.conjugate_by(&u),
        time: t_to,
    })
}

pub fn class_of<T: Real>(p: &TimedProperty<T>, frame: &Frame<T>) -> Result<PropertyClass<T>> {
    let rep = translate(p, frame.ref_time, &frame.hamiltonian, frame.hbar)?;
    Ok(PropertyClass {
        representative: rep.projector,
        frame: frame.clone(),
    })
}

/// Whether `p2` is the time translation of `p1`. Both are brought to the time
/// of `p1` and compared entrywise within `equiv_tol`.
pub fn equivalent<T: Real>(
    p1: &TimedProperty<T>,
    p2: &TimedProperty<T>,
    h: &HermitianOperator<T>,
    hbar: T,
    tol: &Tolerances,
) -> Result<bool> {
    p1.projector.check_dim(&p2.projector)?;
    let moved = translate(p2, p1.time, h, hbar)?;
    Ok(moved.projector.max_abs_diff(&p1.projector) < T::of(tol.equiv_tol))
}

/// Class order: inclusion of the representatives' ranges.
///
/// The verdict is re-derived with both classes rebased one time unit later;
/// a disagreement is reported as [`Error::ReferenceTimeDependence`].
pub fn class_implies<T: Real>(
    c1: &PropertyClass<T>,
    c2: &PropertyClass<T>,
    tol: &Tolerances,
) -> Result<bool> {
    c1.same_frame(c2)?;
    let verdict = subspace_inclusion(&c1.representative, &c2.representative, tol)?;
    let later = c1.frame.ref_time + T::one();
    let recheck = subspace_inclusion(
        &c1.rebased(later)?.representative,
        &c2.rebased(later)?.representative,
        tol,
    )?;
    if verdict != recheck {
        return Err(Error::ReferenceTimeDependence);
    }
    Ok(verdict)
}

/// Greatest lower bound. The representative comes from the exact subspace
/// intersection and is checked against the limit of `(PQ)^n`.
pub fn class_meet<T: Real>(
    c1: &PropertyClass<T>,
    c2: &PropertyClass<T>,
    tol: &Tolerances,
) -> Result<PropertyClass<T>> {
    c1.same_frame(c2)?;
    let (p, q) = (&c1.representative, &c2.representative);
    let meet = subspace_intersection(p, q, tol)?;
    let limit =
        alternating_projection_limit(p, q, T::of(tol.meet_tol * 1e-3), LIMIT_SQUARINGS, tol)?;
    let residual = limit.max_abs_diff(&meet);
    if !(residual < T::of(tol.meet_tol)) {
        return Err(Error::MeetMismatch {
            residual: residual.to_f64(),
        });
    }
    Ok(c1.with_representative(meet))
}

/// Least upper bound, `I - meet(I - P, I - Q)`.
pub fn class_join<T: Real>(
    c1: &PropertyClass<T>,
    c2: &PropertyClass<T>,
    tol: &Tolerances,
) -> Result<PropertyClass<T>> {
    c1.same_frame(c2)?;
    let met = class_meet(&class_negate(c1), &class_negate(c2), tol)?;
    Ok(class_negate(&met))
}

/// Orthocomplement, `I - P`.
pub fn class_negate<T: Real>(c: &PropertyClass<T>) -> PropertyClass<T> {
    c.with_representative(c.representative.complement())
}

/// Born rule `Tr(ρ P)` for a state given at `state_time`, which must be the
/// class's reference time.
pub fn class_born_probability<T: Real>(
    rho: &DensityOperator<T>,
    state_time: T,
    c: &PropertyClass<T>,
) -> Result<T> {
    if state_time != c.frame.ref_time {
        return Err(Error::FrameMismatch);
    }
    rho.check_dim(&c.representative)?;
    Ok(crate::linop::clamp_probability(
        rho.expectation(&c.representative),
    ))
}
