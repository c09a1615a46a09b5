use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    all_finite, hermitian_eigenvalues, hermitian_part, hermiticity_residual, ln_det_positive,
    symmetrized, symmetry_residual,
};
use crate::{CMatrix, Complex64, DEFAULT_TOLERANCE};

/// A normally ordered Gaussian operator on `l` bosonic modes,
///
/// ```text
/// exp(log_scale) · :exp[ ½ Σ R_ij a_i a_j + Σ B_ij a_i† a_j + ½ Σ conj(R_ij) a_i† a_j† ]:
/// ```
///
/// with `R` symmetric and `B` Hermitian. The two number-conserving terms of the
/// symmetric `2l × 2l` block form coincide inside the normal ordering, so a
/// single `B` is stored; see [`GaussianOperator::block_form`] for the block
/// layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GaussianJson", into = "GaussianJson")]
pub struct GaussianOperator {
    r: CMatrix,
    b: CMatrix,
    log_scale: f64,
}

/// Structural diagnostics of a candidate `(R, B)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidationReport {
    /// max |R - Rᵀ|
    pub symmetry_residual: f64,
    /// max |B - B†|
    pub hermiticity_residual: f64,
    /// Every eigenvalue of B lies in [-1, 0).
    pub b_spectrum_in_range: bool,
    /// The coherent-state trace integral converges (see [`GaussianOperator::integration_form`]).
    pub convergent: bool,
    /// `b_spectrum_in_range && convergent`.
    pub trace_class: bool,
    /// Residuals within tolerance, i.e. the pair would be accepted.
    pub valid: bool,
}

/// Checks raw parts without constructing an operator. Non-finite entries and
/// shape mismatches are errors; symmetry problems are only reported.
pub fn validate_parts(r: &CMatrix, b: &CMatrix, log_scale: f64) -> Result<ValidationReport> {
    let l = r.nrows();
    if l == 0 {
        return Err(Error::DimensionMismatch(
            "operator needs at least one mode".into(),
        ));
    }
    if !r.is_square() || b.nrows() != l || b.ncols() != l {
        return Err(Error::DimensionMismatch(format!(
            "R is {}x{}, B is {}x{}",
            r.nrows(),
            r.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    if !all_finite(r) {
        return Err(Error::NonFinite("R"));
    }
    if !all_finite(b) {
        return Err(Error::NonFinite("B"));
    }
    if !log_scale.is_finite() {
        return Err(Error::NonFinite("log_scale"));
    }
    let symmetry_residual = symmetry_residual(r);
    let hermiticity_residual = hermiticity_residual(b);
    let valid = symmetry_residual <= DEFAULT_TOLERANCE && hermiticity_residual <= DEFAULT_TOLERANCE;

    let spec = hermitian_eigenvalues(b);
    let b_spectrum_in_range = spec[0] >= -1.0 - DEFAULT_TOLERANCE && spec[l - 1] < 0.0;
    let all: Vec<usize> = (0..l).collect();
    let convergent = ln_det_positive(&integration_form_of(
        &symmetrized(r),
        &hermitian_part(b),
        &all,
    ))
    .is_some();

    Ok(ValidationReport {
        symmetry_residual,
        hermiticity_residual,
        b_spectrum_in_range,
        convergent,
        trace_class: b_spectrum_in_range && convergent,
        valid,
    })
}

pub fn validate(g: &GaussianOperator) -> ValidationReport {
    validate_parts(&g.r, &g.b, g.log_scale).expect("constructed operators are well formed")
}

impl GaussianOperator {
    /// Validates and stores `(R, B, log_scale)`. Residuals below the default
    /// tolerance are symmetrized away; larger ones are rejected.
    pub fn new(r: CMatrix, b: CMatrix, log_scale: f64) -> Result<Self> {
        let report = validate_parts(&r, &b, log_scale)?;
        if report.symmetry_residual > DEFAULT_TOLERANCE {
            return Err(Error::AsymmetricR {
                residual: report.symmetry_residual,
            });
        }
        if report.hermiticity_residual > DEFAULT_TOLERANCE {
            return Err(Error::NonHermitian {
                residual: report.hermiticity_residual,
            });
        }
        Ok(Self {
            r: symmetrized(&r),
            b: hermitian_part(&b),
            log_scale,
        })
    }

    /// Reads the JSON state format. Malformed JSON is [`Error::Parse`];
    /// well-formed JSON with invalid matrices gives the validation error.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: GaussianJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        raw.try_into()
    }

    /// The vacuum projector `|0…0⟩⟨0…0| = :exp(-Σ a†a):`.
    pub fn vacuum(num_modes: usize) -> Self {
        Self {
            r: CMatrix::zeros(num_modes, num_modes),
            b: -CMatrix::identity(num_modes, num_modes),
            log_scale: 0.0,
        }
    }

    pub fn num_modes(&self) -> usize {
        self.r.nrows()
    }

    pub fn r(&self) -> &CMatrix {
        &self.r
    }

    pub fn b(&self) -> &CMatrix {
        &self.b
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    pub fn with_log_scale(mut self, log_scale: f64) -> Self {
        self.log_scale = log_scale;
        self
    }

    /// Symmetric `2l × 2l` matrix `M` with the exponent written as `½ β M βᵀ`,
    /// `β = (a_1 … a_l, a_1† … a_l†)`:
    ///
    /// ```text
    /// M = [ R   Bᵀ ]
    ///     [ B   R̄  ]
    /// ```
    ///
    /// This is the textbook `[[R, B], [Bᵀ, R†]]` layout with the textbook `B`
    /// equal to our `Bᵀ`; both have the same spectrum.
    pub fn block_form(&self) -> CMatrix {
        let l = self.num_modes();
        let mut m = CMatrix::zeros(2 * l, 2 * l);
        m.view_mut((0, 0), (l, l)).copy_from(&self.r);
        m.view_mut((0, l), (l, l)).copy_from(&self.b.transpose());
        m.view_mut((l, 0), (l, l)).copy_from(&self.b);
        m.view_mut((l, l), (l, l))
            .copy_from(&self.r.map(|z| z.conj()));
        m
    }

    /// Reads `(R, B)` back from a block form produced by [`Self::block_form`]
    /// (or a structure-preserving transformation of one).
    pub fn from_block_form(m: &CMatrix, log_scale: f64) -> Result<Self> {
        if !m.is_square() || !m.nrows().is_multiple_of(2) {
            return Err(Error::DimensionMismatch(format!(
                "block form must be 2l x 2l, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let l = m.nrows() / 2;
        let r = m.view((0, 0), (l, l)).into_owned();
        let b = m.view((l, 0), (l, l)).into_owned();
        debug_assert!(
            crate::linalg::max_abs_diff(&m.view((0, l), (l, l)).into_owned(), &b.transpose())
                < 1e-9
        );
        debug_assert!(
            crate::linalg::max_abs_diff(&m.view((l, l), (l, l)).into_owned(), &r.map(|z| z.conj()))
                < 1e-9
        );
        Self::new(r, b, log_scale)
    }

    /// Hermitian matrix `K` of the coherent-state integral over `modes`:
    /// with `w = (α, ᾱ)` restricted to those modes the integrand's quadratic
    /// part is `-½ w† K w`, so the integral converges iff `K` is positive
    /// definite.
    ///
    /// ```text
    /// K = -[ B   R̄ ]
    ///      [ R   B̄ ]
    /// ```
    pub fn integration_form(&self, modes: &[usize]) -> CMatrix {
        integration_form_of(&self.r, &self.b, modes)
    }
}

pub(crate) fn integration_form_of(r: &CMatrix, b: &CMatrix, modes: &[usize]) -> CMatrix {
    let k = modes.len();
    CMatrix::from_fn(2 * k, 2 * k, |i, j| {
        let (bi, ii) = (i / k, modes[i % k]);
        let (bj, jj) = (j / k, modes[j % k]);
        let v = match (bi, bj) {
            (0, 0) => b[(ii, jj)],
            (0, 1) => r[(ii, jj)].conj(),
            (1, 0) => r[(ii, jj)],
            _ => b[(ii, jj)].conj(),
        };
        -v
    })
}

#[derive(Serialize, Deserialize)]
struct GaussianJson {
    num_modes: usize,
    log_scale: f64,
    #[serde(rename = "R")]
    r: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "B")]
    b: Vec<Vec<[f64; 2]>>,
}

fn matrix_from_rows(rows: &[Vec<[f64; 2]>], l: usize, name: &str) -> Result<CMatrix> {
    if rows.len() != l || rows.iter().any(|row| row.len() != l) {
        return Err(Error::DimensionMismatch(format!("{name} must be {l}x{l}")));
    }
    Ok(CMatrix::from_fn(l, l, |i, j| {
        let [re, im] = rows[i][j];
        Complex64::new(re, im)
    }))
}

fn matrix_to_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

impl TryFrom<GaussianJson> for GaussianOperator {
    type Error = Error;

    fn try_from(j: GaussianJson) -> Result<Self> {
        let r = matrix_from_rows(&j.r, j.num_modes, "R")?;
        let b = matrix_from_rows(&j.b, j.num_modes, "B")?;
        Self::new(r, b, j.log_scale)
    }
}

impl From<GaussianOperator> for GaussianJson {
    fn from(g: GaussianOperator) -> Self {
        Self {
            num_modes: g.num_modes(),
            log_scale: g.log_scale,
            r: matrix_to_rows(&g.r),
            b: matrix_to_rows(&g.b),
        }
    }
}
