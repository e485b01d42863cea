//! Numerical thresholds.
//!
//! Exact identities (idempotence, commutation, vanishing traces) are replaced
//! by comparisons against these values. All of them are plain `f64` so one
//! configuration record can be shared by every precision.

/// Thresholds used by validation and decision routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max-entry deviation of `A - A†`.
    pub herm_tol: f64,
    /// Max-entry deviation of `U U† - I`.
    pub unit_tol: f64,
    /// Max-entry deviation of `P² - P`, exclusivity and completeness residuals.
    pub proj_tol: f64,
    /// Singular/eigen value cutoff for rank decisions and eigenvalue clustering.
    pub rank_tol: f64,
    /// Agreement between the alternating-projection limit and the exact meet.
    pub meet_tol: f64,
    pub orth_tol: f64,
    pub recon_tol: f64,
    /// Composition law of evolution operators.
    pub comp_tol: f64,
    /// Residual of `QP - P` for subspace inclusion.
    pub incl_tol: f64,
    /// Representative comparison for time-translation equivalence.
    pub equiv_tol: f64,
    pub trace_tol: f64,
    pub psd_tol: f64,
    /// Probability clamping and the null-condition threshold.
    pub prob_tol: f64,
    /// Commutator norm below which two projectors count as compatible.
    pub commute_tol: f64,
    /// Magnitude below which a consistency trace counts as zero.
    pub consist_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            herm_tol: 1e-10,
            unit_tol: 1e-10,
            proj_tol: 1e-10,
            rank_tol: 1e-8,
            meet_tol: 1e-8,
            orth_tol: 1e-10,
            recon_tol: 1e-9,
            comp_tol: 1e-9,
            incl_tol: 1e-9,
            equiv_tol: 1e-9,
            trace_tol: 1e-10,
            psd_tol: 1e-10,
            prob_tol: 1e-10,
            commute_tol: 1e-9,
            consist_tol: 1e-9,
        }
    }
}

impl Tolerances {
    /// Thresholds loosened for `f32` arithmetic.
    pub fn single_precision() -> Self {
        Tolerances {
            herm_tol: 1e-5,
            unit_tol: 1e-5,
            proj_tol: 1e-5,
            rank_tol: 1e-3,
            meet_tol: 1e-3,
            orth_tol: 1e-5,
            recon_tol: 1e-4,
            comp_tol: 1e-4,
            incl_tol: 1e-4,
            equiv_tol: 1e-4,
            trace_tol: 1e-5,
            psd_tol: 1e-5,
            prob_tol: 1e-5,
            commute_tol: 1e-4,
            consist_tol: 1e-4,
        }
    }

    /// Named view of every field, in declaration order. Used for report echoes.
    pub fn entries(&self) -> [(&'static str, f64); 15] {
        [
            ("herm_tol", self.herm_tol),
            ("unit_tol", self.unit_tol),
            ("proj_tol", self.proj_tol),
            ("rank_tol", self.rank_tol),
            ("meet_tol", self.meet_tol),
            ("orth_tol", self.orth_tol),
            ("recon_tol", self.recon_tol),
            ("comp_tol", self.comp_tol),
            ("incl_tol", self.incl_tol),
            ("equiv_tol", self.equiv_tol),
            ("trace_tol", self.trace_tol),
            ("psd_tol", self.psd_tol),
            ("prob_tol", self.prob_tol),
            ("commute_tol", self.commute_tol),
            ("consist_tol", self.consist_tol),
        ]
    }

    /// Overwrite a field by name. Returns `false` if the name is unknown.
    pub fn set(&mut self, name: &str, value: f64) -> bool {
        let slot = match name {
            "herm_tol" => &mut self.herm_tol,
            "unit_tol" => &mut self.unit_tol,
            "proj_tol" => &mut self.proj_tol,
            "rank_tol" => &mut self.rank_tol,
            "meet_tol" => &mut self.meet_tol,
            "orth_tol" => &mut self.orth_tol,
            "recon_tol" => &mut self.recon_tol,
            "comp_tol" => &mut self.comp_tol,
            "incl_tol" => &mut self.incl_tol,
            "equiv_tol" => &mut self.equiv_tol,
            "trace_tol" => &mut self.trace_tol,
            "psd_tol" => &mut self.psd_tol,
            "prob_tol" => &mut self.prob_tol,
            "commute_tol" => &mut self.commute_tol,
            "consist_tol" => &mut self.consist_tol,
            _ => return false,
        };
        *slot = value;
        true
    }
}
