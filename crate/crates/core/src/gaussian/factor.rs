use super::{GaussianOperator, ModeSubset};
use crate::error::{Error, Result};
use crate::fock::{FockMatrix, NormalOrderedQuadratic};
use crate::linalg::hermitian_eigen;
use crate::{CMatrix, Complex64};

/// Square-root factor `A` with `G = A A†`:
///
/// ```text
/// A = exp(log_scale) · exp(½ ã† P a†) · Γ(X),    X = sqrt(1 + B)
/// ```
///
/// where `P = pair_creation` and `Γ(X) = :exp[ã† (X - 1) ã]:` is the
/// second-quantized linear map `X`. On the eigenspace where `1 + B` is
/// invertible `Γ(X) = exp(½ ã† ln(1 + B) ã)`; eigenvalues equal to `-1` give
/// vacuum projectors on the corresponding eigenmodes.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalOrderedFactor {
    /// `P = R̄`, the exponent `½ ã† P a†` of the pure-creation factor.
    pub pair_creation: CMatrix,
    /// `ln(1 + B)` on the non-degenerate eigenspace, zero on the degenerate one.
    pub log_number_part: CMatrix,
    /// Positions (in ascending eigenvalue order) of eigenvalues equal to -1.
    pub degenerate_modes: ModeSubset,
    /// Ascending eigenvalues of `B`.
    pub b_eigenvalues: Vec<f64>,
    /// Unitary whose columns are the eigenvectors of `B`.
    pub eigenbasis: CMatrix,
    /// Half the log-scale of the factored operator.
    pub log_scale: f64,
}

impl NormalOrderedFactor {
    /// `X = V diag(sqrt(1 + λ)) V†`, with the degenerate eigenvalues mapped to 0.
    pub fn number_part(&self) -> CMatrix {
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.b_eigenvalues.len(),
            self.b_eigenvalues.iter().enumerate().map(|(k, &lam)| {
                if self.degenerate_modes.contains(k) {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new((1.0 + lam).max(0.0).sqrt(), 0.0)
                }
            }),
        ));
        &self.eigenbasis * d * self.eigenbasis.adjoint()
    }

    /// `A` as a normally ordered quadratic exponential.
    pub fn to_quadratic(&self) -> NormalOrderedQuadratic {
        let l = self.pair_creation.nrows();
        NormalOrderedQuadratic::new(
            self.pair_creation.clone(),
            self.number_part() - CMatrix::identity(l, l),
            CMatrix::zeros(l, l),
            self.log_scale,
        )
        .expect("factor parts are symmetric")
    }

    /// Number-basis matrix of `A A†` on the `cutoffs` box.
    ///
    /// `A` never lowers the total photon number, so every intermediate state
    /// contributing to an entry inside the box has at most `Σ cutoffs`
    /// photons; `A` is expanded on that enlarged box and the product is exact.
    pub fn gram_fock(&self, cutoffs: &[usize]) -> Result<FockMatrix> {
        let total: usize = cutoffs.iter().sum();
        let wide = vec![total; cutoffs.len()];
        let a = self.to_quadratic().to_fock(&wide)?;
        let rows: Vec<usize> = FockMatrix::box_indices(&wide, cutoffs);
        let sub = crate::linalg::select(a.data(), &rows, &(0..a.dim()).collect::<Vec<_>>());
        FockMatrix::new(cutoffs.to_vec(), &sub * sub.adjoint())
    }
}

/// Factorizes a positive Gaussian operator as `A A†`.
pub fn sqrt_factor(g: &GaussianOperator, tolerance: f64) -> Result<NormalOrderedFactor> {
    let (vals, vecs) = hermitian_eigen(g.b());
    if vals[0] < -1.0 - tolerance {
        return Err(Error::NotPositiveInput {
            min_eigenvalue: vals[0],
        });
    }
    let degenerate = ModeSubset::new(
        vals.iter()
            .enumerate()
            .filter(|(_, &v)| (v + 1.0).abs() <= tolerance)
            .map(|(k, _)| k),
    )?;
    let logs = nalgebra::DVector::from_iterator(
        vals.len(),
        vals.iter().enumerate().map(|(k, &v)| {
            if degenerate.contains(k) {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new((1.0 + v).ln(), 0.0)
            }
        }),
    );
    let log_number_part = &vecs * CMatrix::from_diagonal(&logs) * vecs.adjoint();
    Ok(NormalOrderedFactor {
        pair_creation: g.r().map(|z| z.conj()),
        log_number_part,
        degenerate_modes: degenerate,
        b_eigenvalues: vals,
        eigenbasis: vecs,
        log_scale: 0.5 * g.log_scale(),
    })
}
