use super::{Basis, FockMatrix};
use crate::error::{Error, Result};
use crate::gaussian::GaussianOperator;
use crate::linalg::{all_finite, symmetrized, symmetry_residual};
use crate::{CMatrix, Complex64, DEFAULT_TOLERANCE};

/// Default ceiling on the number of complex entries of one Fock matrix (1 GiB).
pub const DEFAULT_ENTRY_BUDGET: usize = 1 << 26;

/// General normally ordered quadratic exponential
///
/// ```text
/// exp(log_scale) · :exp[ ½ ã† C a† + ã† N ã + ½ a A ã ]:
/// ```
///
/// with `C`, `A` symmetric and `N` arbitrary. Gaussian operators are the case
/// `C = R̄, N = B, A = R`; square-root factors have `A = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalOrderedQuadratic {
    pub creation: CMatrix,
    pub number: CMatrix,
    pub annihilation: CMatrix,
    pub log_scale: f64,
}

impl NormalOrderedQuadratic {
    pub fn new(
        creation: CMatrix,
        number: CMatrix,
        annihilation: CMatrix,
        log_scale: f64,
    ) -> Result<Self> {
        let l = number.nrows();
        for (m, name) in [
            (&creation, "creation"),
            (&number, "number"),
            (&annihilation, "annihilation"),
        ] {
            if m.nrows() != l || m.ncols() != l {
                return Err(Error::DimensionMismatch(format!(
                    "{name} block must be {l}x{l}"
                )));
            }
            if !all_finite(m) {
                return Err(Error::NonFinite(name));
            }
        }
        for m in [&creation, &annihilation] {
            let residual = symmetry_residual(m);
            if residual > DEFAULT_TOLERANCE {
                return Err(Error::AsymmetricR { residual });
            }
        }
        Ok(Self {
            creation: symmetrized(&creation),
            number,
            annihilation: symmetrized(&annihilation),
            log_scale,
        })
    }

    pub fn num_modes(&self) -> usize {
        self.number.nrows()
    }

    pub fn to_fock(&self, cutoffs: &[usize]) -> Result<FockMatrix> {
        self.to_fock_with_budget(cutoffs, DEFAULT_ENTRY_BUDGET)
    }

    /// Number-basis matrix elements on the `cutoffs` box.
    ///
    /// With coherent states, `Σ_{m,n} ⟨m|Ĝ|n⟩ x^m y^n / sqrt(m! n!)` equals
    /// `exp(E(x, y))` where
    ///
    /// ```text
    /// E = ½ x·C x + x·(N + 1) y + ½ y·A y.
    /// ```
    ///
    /// The scaled coefficients `f[m, n] = sqrt(m! n!) [x^m y^n] exp(E)` are
    /// exactly the matrix elements. Differentiating `exp(E)` with respect to
    /// `x_i` (or `y_i` on the `m = 0` row) gives a recurrence that builds every
    /// coefficient from ones of lower degree; the result is independent of the
    /// cutoffs.
    pub fn to_fock_with_budget(&self, cutoffs: &[usize], budget: usize) -> Result<FockMatrix> {
        let l = self.num_modes();
        if cutoffs.len() != l {
            return Err(Error::DimensionMismatch(format!(
                "{} cutoffs for {l} modes",
                cutoffs.len()
            )));
        }
        let basis = Basis::new(cutoffs);
        let d = basis.dim();
        let required = d.saturating_mul(d);
        if required > budget {
            return Err(Error::MemoryBudget { required, budget });
        }
        let digits = basis.digit_table();
        let strides = basis.strides();
        let max_n = cutoffs.iter().copied().max().unwrap_or(0);
        let sq: Vec<f64> = (0..=max_n).map(|k| (k as f64).sqrt()).collect();

        let nz = |m: &CMatrix| -> Vec<Vec<(usize, Complex64)>> {
            (0..l)
                .map(|i| {
                    (0..l)
                        .filter(|&j| m[(i, j)] != Complex64::default())
                        .map(|j| (j, m[(i, j)]))
                        .collect()
                })
                .collect()
        };
        let creation = nz(&self.creation);
        let annihilation = nz(&self.annihilation);
        let cross = nz(&(&self.number + CMatrix::identity(l, l)));

        let mut f = vec![Complex64::default(); required];
        let first_nonzero = |idx: &[usize]| idx.iter().position(|&v| v > 0);

        for row in 0..d {
            let m = &digits[row * l..(row + 1) * l];
            match first_nonzero(m) {
                None => {
                    f[0] = Complex64::new(self.log_scale.exp(), 0.0);
                    for col in 1..d {
                        let n = &digits[col * l..(col + 1) * l];
                        let i = first_nonzero(n).expect("col > 0");
                        let inv = 1.0 / sq[n[i]];
                        let mut acc = Complex64::default();
                        for &(j, a) in &annihilation[i] {
                            let nj = if i == j { n[j] - 1 } else { n[j] };
                            if nj >= 1 {
                                acc += a * (sq[nj] * inv) * f[col - strides[i] - strides[j]];
                            }
                        }
                        f[col] = acc;
                    }
                }
                Some(i) => {
                    let inv = 1.0 / sq[m[i]];
                    let lower = row - strides[i];
                    for col in 0..d {
                        let n = &digits[col * l..(col + 1) * l];
                        let mut acc = Complex64::default();
                        for &(j, cij) in &creation[i] {
                            let mj = if i == j { m[j] - 1 } else { m[j] };
                            if mj >= 1 {
                                acc += cij * (sq[mj] * inv) * f[(lower - strides[j]) * d + col];
                            }
                        }
                        for &(j, nij) in &cross[i] {
                            if n[j] >= 1 {
                                acc += nij * (sq[n[j]] * inv) * f[lower * d + col - strides[j]];
                            }
                        }
                        f[row * d + col] = acc;
                    }
                }
            }
        }
        FockMatrix::new(cutoffs.to_vec(), CMatrix::from_row_slice(d, d, &f))
    }
}

impl From<&GaussianOperator> for NormalOrderedQuadratic {
    fn from(g: &GaussianOperator) -> Self {
        Self {
            creation: g.r().map(|z| z.conj()),
            number: g.b().clone(),
            annihilation: g.r().clone(),
            log_scale: g.log_scale(),
        }
    }
}

/// Number-basis matrix of a Gaussian operator on the `cutoffs` box.
pub fn to_fock(g: &GaussianOperator, cutoffs: &[usize]) -> Result<FockMatrix> {
    NormalOrderedQuadratic::from(g).to_fock(cutoffs)
}
