//! Constructors for the example states, their witnesses and closed-form
//! witness values.

mod damping;
mod mixture;
mod three_mode;
mod tmsv;

pub use damping::{phase_damped_tmsv, psi2, PhaseDampedTmsvSpec};
pub use mixture::{
    impure_squeezed, impure_witness_analytic, impure_witness_analytic_with_nodes, witness_psi_m,
    Density, MixtureSpec, DEFAULT_QUADRATURE_NODES,
};
pub use three_mode::{
    three_mode, three_mode_audit, three_mode_candidate_threshold, ThreeModeAuditRow, ThreeModeSpec,
};
pub use tmsv::{tmsv, tmsv_schmidt_fock, tmsv_tail_weight};

/// Per-mode cutoff for the two-mode number-basis states, plus the largest
/// neglected probability weight the caller accepts.
///
/// Matrix entries inside the box are exact whatever the cutoff; the tail bound
/// only matters when the trace (or anything depending on discarded weight) is
/// used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub cutoff: usize,
    pub max_tail: f64,
}

impl Truncation {
    /// No tail requirement.
    pub fn new(cutoff: usize) -> Self {
        Self {
            cutoff,
            max_tail: f64::INFINITY,
        }
    }

    pub fn with_max_tail(self, max_tail: f64) -> Self {
        Self { max_tail, ..self }
    }

    pub(crate) fn check_tail(&self, tail: f64) -> crate::Result<()> {
        if tail > self.max_tail {
            Err(crate::Error::InsufficientCutoff(format!(
                "cutoff {} leaves tail weight {tail:e} > {:e}",
                self.cutoff, self.max_tail
            )))
        } else {
            Ok(())
        }
    }
}
