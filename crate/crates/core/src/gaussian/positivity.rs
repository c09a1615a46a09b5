use serde::{Deserialize, Serialize};

use super::{partial_transpose, Bipartition, GaussianOperator};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, hermiticity_residual};
use crate::DEFAULT_TOLERANCE;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PositivityClass {
    PositiveDefinite,
    PositiveSemidefinite,
    NotPositive,
}

/// Positivity of a Gaussian operator, decided by the smallest eigenvalue of
/// `B` relative to `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositivityVerdict {
    pub class: PositivityClass,
    pub min_b_eigenvalue: f64,
    pub tolerance: f64,
}

impl PositivityVerdict {
    pub fn from_min_eigenvalue(min_b_eigenvalue: f64, tolerance: f64) -> Self {
        let class = if min_b_eigenvalue > -1.0 + tolerance {
            PositivityClass::PositiveDefinite
        } else if min_b_eigenvalue < -1.0 - tolerance {
            PositivityClass::NotPositive
        } else {
            PositivityClass::PositiveSemidefinite
        };
        Self {
            class,
            min_b_eigenvalue,
            tolerance,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.class != PositivityClass::NotPositive
    }
}

/// Ascending eigenvalues of `B`.
pub fn b_spectrum(g: &GaussianOperator) -> Result<Vec<f64>> {
    let residual = hermiticity_residual(g.b());
    if residual > DEFAULT_TOLERANCE {
        return Err(Error::NonHermitian { residual });
    }
    Ok(hermitian_eigenvalues(g.b()))
}

/// The operator is positive iff every eigenvalue of `B` is at least `-1`,
/// independently of the pairing matrix `R`.
pub fn positivity(g: &GaussianOperator, tolerance: f64) -> Result<PositivityVerdict> {
    let spec = b_spectrum(g)?;
    Ok(PositivityVerdict::from_min_eigenvalue(spec[0], tolerance))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PptSemantics {
    /// Negative partial transpose: entangled, and for Gaussian states also
    /// distillable.
    InseparableAndDistillable,
    /// PPT with one side a single mode: PPT is sufficient for separability.
    SeparableByOneModeTheorem,
    /// PPT with both sides multimode: separability is not decided here.
    PptUndecidedSeparability,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PptReport {
    pub is_npt: bool,
    pub min_b_eigenvalue: f64,
    pub semantics: PptSemantics,
    pub partition: Bipartition,
}

/// Transposes the second side of `partition` and classifies the result.
pub fn ppt_check(
    g: &GaussianOperator,
    partition: &Bipartition,
    tolerance: f64,
) -> Result<PptReport> {
    if partition.num_modes() != g.num_modes() {
        return Err(Error::InvalidPartition(format!(
            "partition {partition} does not match {} modes",
            g.num_modes()
        )));
    }
    let pt = partial_transpose(g, &partition.second)?;
    let verdict = positivity(&pt, tolerance)?;
    let is_npt = verdict.class == PositivityClass::NotPositive;
    let semantics = if is_npt {
        PptSemantics::InseparableAndDistillable
    } else if partition.first.len() == 1 || partition.second.len() == 1 {
        PptSemantics::SeparableByOneModeTheorem
    } else {
        PptSemantics::PptUndecidedSeparability
    };
    Ok(PptReport {
        is_npt,
        min_b_eigenvalue: verdict.min_b_eigenvalue,
        semantics,
        partition: partition.clone(),
    })
}
