use crate::error::{Error, Result};
use crate::fock::FockMatrix;
use crate::gaussian::GaussianOperator;
use crate::linalg::c;
use crate::CMatrix;

/// Normalized two-mode squeezed vacuum `S(r)|00⟩⟨00|S(r)†`:
/// `B = -1`, `R_01 = R_10 = tanh r`, scale `1/cosh² r`.
pub fn tmsv(r: f64) -> Result<GaussianOperator> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::Precondition(format!(
            "squeezing must be finite and >= 0, got {r}"
        )));
    }
    let t = r.tanh();
    let pairing = CMatrix::from_row_slice(2, 2, &[c(0.0), c(t), c(t), c(0.0)]);
    GaussianOperator::new(pairing, -CMatrix::identity(2, 2), -2.0 * r.cosh().ln())
}

/// The same state built from its Schmidt form `(1/cosh r) Σ tanhⁿ r |nn⟩`,
/// truncated at `cutoff` photons per mode.
pub fn tmsv_schmidt_fock(r: f64, cutoff: usize) -> FockMatrix {
    let t = r.tanh();
    let norm = 1.0 / r.cosh().powi(2);
    let mut f = FockMatrix::zeros(vec![cutoff, cutoff]);
    for m in 0..=cutoff {
        for n in 0..=cutoff {
            f.set(&[m, m], &[n, n], c(norm * t.powi((m + n) as i32)))
                .expect("inside box");
        }
    }
    f
}

/// Probability weight outside a per-mode cutoff: `tanh^{2(cutoff+1)} r`.
pub fn tmsv_tail_weight(r: f64, cutoff: usize) -> f64 {
    r.tanh().powi(2 * (cutoff as i32 + 1))
}
