use serde::{Deserialize, Serialize};

use super::{tmsv_tail_weight, Truncation};
use crate::error::{Error, Result};
use crate::fock::{FockKet, FockMatrix};
use crate::linalg::c;

/// Two-mode squeezed vacuum after a phase-damping channel with accumulated
/// damping `gamma_t = γt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDamping")]
pub struct PhaseDampedTmsvSpec {
    pub r: f64,
    pub gamma_t: f64,
}

#[derive(Deserialize)]
struct RawDamping {
    r: f64,
    gamma_t: f64,
}

impl TryFrom<RawDamping> for PhaseDampedTmsvSpec {
    type Error = Error;

    fn try_from(raw: RawDamping) -> Result<Self> {
        Self::new(raw.r, raw.gamma_t)
    }
}

impl PhaseDampedTmsvSpec {
    /// `r = 0` is accepted (the vacuum) so that sweeps can include it.
    pub fn new(r: f64, gamma_t: f64) -> Result<Self> {
        if !(r.is_finite() && r >= 0.0 && gamma_t.is_finite() && gamma_t >= 0.0) {
            return Err(Error::Precondition(format!(
                "need finite r >= 0 and gamma_t >= 0, got r = {r}, gamma_t = {gamma_t}"
            )));
        }
        Ok(Self { r, gamma_t })
    }
}

/// `(1/cosh² r) Σ tanh^{n1+n2} r · exp(-γt (n1-n2)²) |n1 n1⟩⟨n2 n2|`.
pub fn phase_damped_tmsv(spec: &PhaseDampedTmsvSpec, trunc: Truncation) -> Result<FockMatrix> {
    trunc.check_tail(tmsv_tail_weight(spec.r, trunc.cutoff))?;
    let k = trunc.cutoff;
    let t = spec.r.tanh();
    let norm = 1.0 / spec.r.cosh().powi(2);
    let mut f = FockMatrix::zeros(vec![k, k]);
    for n1 in 0..=k {
        for n2 in 0..=k {
            let d = n1 as f64 - n2 as f64;
            let v = norm * t.powi((n1 + n2) as i32) * (-spec.gamma_t * d * d).exp();
            f.set(&[n1, n1], &[n2, n2], c(v))?;
        }
    }
    Ok(f)
}

/// The reduction-criterion witness `½(|00⟩ + |11⟩)`. Deliberately left with
/// norm² = ½: the sign of any expectation is scale invariant.
pub fn psi2(cutoffs: &[usize]) -> Result<FockKet> {
    if cutoffs.len() != 2 || cutoffs.iter().any(|&c| c < 1) {
        return Err(Error::InsufficientCutoff(format!(
            "psi2 needs two modes with cutoff >= 1, got {cutoffs:?}"
        )));
    }
    FockKet::new(cutoffs.to_vec())
        .with(&[0, 0], c(0.5))?
        .with(&[1, 1], c(0.5))
}
