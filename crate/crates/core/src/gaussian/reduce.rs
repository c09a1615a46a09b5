use super::{GaussianOperator, ModeSubset};
use crate::error::{Error, Result};
use crate::linalg::{condition_number, hermitian_eigenvalues, ln_det_positive, select};
use crate::{CMatrix, DEFAULT_CONDITION_LIMIT};

/// How the integrated block `M_D` is inverted in [`partial_trace_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InverseMethod {
    /// LU inversion of the full `2k × 2k` block.
    #[default]
    Direct,
    /// 2×2 block inversion through the `R_D` / `R̄_D` Schur complements.
    /// Requires `R_D` to be invertible.
    BlockFormula,
}

/// `ln det K` of the coherent-state integral over `modes`, or `NonConvergent`.
fn ln_gaussian_det(g: &GaussianOperator, modes: &[usize]) -> Result<f64> {
    let k = g.integration_form(modes);
    ln_det_positive(&k).ok_or_else(|| Error::NonConvergent {
        min_eigenvalue: hermitian_eigenvalues(&k)[0],
    })
}

/// Natural log of the trace.
pub fn ln_trace(g: &GaussianOperator) -> Result<f64> {
    let all: Vec<usize> = (0..g.num_modes()).collect();
    Ok(g.log_scale() - 0.5 * ln_gaussian_det(g, &all)?)
}

/// `Tr G = exp(log_scale) / sqrt(det K)`, with `K` the integration form over
/// all modes.
pub fn trace(g: &GaussianOperator) -> Result<f64> {
    ln_trace(g).map(f64::exp)
}

/// Rescales to unit trace.
pub fn normalize(g: &GaussianOperator) -> Result<GaussianOperator> {
    let lt = ln_trace(g)?;
    let s = g.log_scale() - lt;
    Ok(g.clone().with_log_scale(s))
}

/// Partial trace over `traced` with the direct inverse and the default
/// condition limit.
pub fn partial_trace(g: &GaussianOperator, traced: &ModeSubset) -> Result<GaussianOperator> {
    partial_trace_with(g, traced, InverseMethod::Direct, DEFAULT_CONDITION_LIMIT)
}

/// Traces out `traced`, returning the Gaussian operator on the remaining modes
/// (in increasing mode order).
///
/// Integrating the traced modes' coherent-state variables out of the block
/// form leaves the Schur complement
///
/// ```text
/// M_C' = M_CC - M_CD M_DD⁻¹ M_DC
/// ```
///
/// and multiplies the scale by `det(K_D)^{-1/2}`.
pub fn partial_trace_with(
    g: &GaussianOperator,
    traced: &ModeSubset,
    method: InverseMethod,
    condition_limit: f64,
) -> Result<GaussianOperator> {
    let l = g.num_modes();
    traced.check(l)?;
    if traced.is_empty() {
        return Ok(g.clone());
    }
    if traced.len() == l {
        return Err(Error::InvalidSubset(
            "tracing out every mode leaves a number; use trace()".into(),
        ));
    }
    let kept = traced.complement(l);
    let ln_det = ln_gaussian_det(g, traced.indices())?;

    let expand =
        |s: &ModeSubset| -> Vec<usize> { s.iter().chain(s.iter().map(|i| i + l)).collect() };
    let ci = expand(&kept);
    let di = expand(traced);
    let m = g.block_form();
    let m_cc = select(&m, &ci, &ci);
    let m_cd = select(&m, &ci, &di);
    let m_dd = select(&m, &di, &di);

    let condition = condition_number(&m_dd);
    if condition.is_nan() || condition > condition_limit {
        return Err(Error::SingularBlock {
            condition,
            threshold: condition_limit,
        });
    }
    let inv = match method {
        InverseMethod::Direct => checked_inverse(&m_dd, condition_limit)?,
        InverseMethod::BlockFormula => block_inverse(&m_dd, condition_limit)?,
    };
    let reduced = &m_cc - &m_cd * inv * m_cd.transpose();
    GaussianOperator::from_block_form(&reduced, g.log_scale() - 0.5 * ln_det)
}

fn checked_inverse(m: &CMatrix, condition_limit: f64) -> Result<CMatrix> {
    let condition = condition_number(m);
    if condition.is_nan() || condition > condition_limit {
        return Err(Error::SingularBlock {
            condition,
            threshold: condition_limit,
        });
    }
    m.clone().try_inverse().ok_or(Error::SingularBlock {
        condition: f64::INFINITY,
        threshold: condition_limit,
    })
}

/// Inverse of `[[P, Q], [S, T]]` (square blocks of equal size) by
///
/// ```text
/// [ (P - Q T⁻¹ S)⁻¹            P⁻¹ Q (S P⁻¹ Q - T)⁻¹ ]
/// [ T⁻¹ S (Q T⁻¹ S - P)⁻¹      (T - S P⁻¹ Q)⁻¹       ]
/// ```
pub fn block_inverse(m: &CMatrix, condition_limit: f64) -> Result<CMatrix> {
    let k = m.nrows() / 2;
    let p = m.view((0, 0), (k, k)).into_owned();
    let q = m.view((0, k), (k, k)).into_owned();
    let s = m.view((k, 0), (k, k)).into_owned();
    let t = m.view((k, k), (k, k)).into_owned();
    let p_inv = checked_inverse(&p, condition_limit)?;
    let t_inv = checked_inverse(&t, condition_limit)?;
    let upper_left = checked_inverse(&(&p - &q * &t_inv * &s), condition_limit)?;
    let upper_right = &p_inv * &q * checked_inverse(&(&s * &p_inv * &q - &t), condition_limit)?;
    let lower_left = &t_inv * &s * checked_inverse(&(&q * &t_inv * &s - &p), condition_limit)?;
    let lower_right = checked_inverse(&(&t - &s * &p_inv * &q), condition_limit)?;

    let mut out = CMatrix::zeros(2 * k, 2 * k);
    out.view_mut((0, 0), (k, k)).copy_from(&upper_left);
    out.view_mut((0, k), (k, k)).copy_from(&upper_right);
    out.view_mut((k, 0), (k, k)).copy_from(&lower_left);
    out.view_mut((k, k), (k, k)).copy_from(&lower_right);
    Ok(out)
}
