use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{min_eig, pt_fock, to_fock};
use crate::gaussian::{
    b_spectrum, partial_transpose, positivity, GaussianOperator, ModeSubset, PositivityClass,
};
use crate::linalg::c;
use crate::{CMatrix, Complex64};

/// Unnormalized three-mode state
/// `:exp[Σ_{i<j} (ζ_ij a_i† a_j† + ζ̄_ij a_i a_j) - λ n_1 - λ n_2 - λ₃ n_3]:`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawThreeMode", into = "RawThreeMode")]
pub struct ThreeModeSpec {
    pub zeta12: Complex64,
    pub zeta13: Complex64,
    pub zeta23: Complex64,
    pub lambda: f64,
    pub lambda3: f64,
}

#[derive(Serialize, Deserialize)]
struct RawThreeMode {
    #[serde(default)]
    zeta12: [f64; 2],
    #[serde(default)]
    zeta13: [f64; 2],
    #[serde(default)]
    zeta23: [f64; 2],
    lambda: f64,
    lambda3: f64,
}

impl TryFrom<RawThreeMode> for ThreeModeSpec {
    type Error = Error;

    fn try_from(r: RawThreeMode) -> Result<Self> {
        let z = |v: [f64; 2]| Complex64::new(v[0], v[1]);
        Self::new(z(r.zeta12), z(r.zeta13), z(r.zeta23), r.lambda, r.lambda3)
    }
}

impl From<ThreeModeSpec> for RawThreeMode {
    fn from(s: ThreeModeSpec) -> Self {
        let z = |v: Complex64| [v.re, v.im];
        Self {
            zeta12: z(s.zeta12),
            zeta13: z(s.zeta13),
            zeta23: z(s.zeta23),
            lambda: s.lambda,
            lambda3: s.lambda3,
        }
    }
}

impl ThreeModeSpec {
    pub fn new(
        zeta12: Complex64,
        zeta13: Complex64,
        zeta23: Complex64,
        lambda: f64,
        lambda3: f64,
    ) -> Result<Self> {
        let finite = [zeta12, zeta13, zeta23]
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite());
        if !finite || !(0.0..=1.0).contains(&lambda) || !(0.0..=1.0).contains(&lambda3) {
            return Err(Error::Precondition(format!(
                "need finite couplings and lambda, lambda3 in [0, 1] (got {lambda}, {lambda3})"
            )));
        }
        Ok(Self {
            zeta12,
            zeta13,
            zeta23,
            lambda,
            lambda3,
        })
    }

    /// Real couplings, `ζ12 = 0`.
    pub fn real(zeta13: f64, zeta23: f64, lambda: f64, lambda3: f64) -> Result<Self> {
        Self::new(c(0.0), c(zeta13), c(zeta23), lambda, lambda3)
    }
}

pub fn three_mode(spec: &ThreeModeSpec) -> GaussianOperator {
    let z = [
        [c(0.0), spec.zeta12, spec.zeta13],
        [spec.zeta12, c(0.0), spec.zeta23],
        [spec.zeta13, spec.zeta23, c(0.0)],
    ];
    // annihilation pairs carry the conjugated couplings
    let r = CMatrix::from_fn(3, 3, |i, j| z[i][j].conj());
    let b = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        c(-spec.lambda),
        c(-spec.lambda),
        c(-spec.lambda3),
    ]));
    GaussianOperator::new(r, b, 0.0).expect("spec validated")
}

/// Candidate closed-form non-positivity condition `|ζ13|² + |ζ23|² > (λ+1)(λ3+1)`,
/// evaluated literally.
pub fn three_mode_candidate_threshold(spec: &ThreeModeSpec) -> bool {
    spec.zeta13.norm_sqr() + spec.zeta23.norm_sqr() > (spec.lambda + 1.0) * (spec.lambda3 + 1.0)
}

/// Side-by-side comparison of the candidate inequality, the analytic smallest
/// eigenvalue of `B'` after transposing mode 2, and the Fock oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThreeModeAuditRow {
    pub spec: ThreeModeSpec,
    pub coupling_sq: f64,
    pub candidate_bound: f64,
    pub candidate_npt: bool,
    pub omega: f64,
    pub analytic_npt: bool,
    pub fock_min: f64,
    pub oracle_npt: bool,
}

impl ThreeModeAuditRow {
    pub fn candidate_agrees(&self) -> bool {
        self.candidate_npt == self.analytic_npt && self.candidate_npt == self.oracle_npt
    }

    pub fn analytic_agrees_with_oracle(&self) -> bool {
        self.analytic_npt == self.oracle_npt
    }
}

/// Runs the three-way comparison for partition `{0,1}|{2}`. `oracle_tol` is
/// the margin below zero a Fock eigenvalue needs to count as negative.
pub fn three_mode_audit(
    spec: &ThreeModeSpec,
    cutoff: usize,
    tolerance: f64,
    oracle_tol: f64,
) -> Result<ThreeModeAuditRow> {
    let g = three_mode(spec);
    let t = ModeSubset::new([2])?;
    let pt = partial_transpose(&g, &t)?;
    let omega = b_spectrum(&pt)?[0];
    let analytic_npt = positivity(&pt, tolerance)?.class == PositivityClass::NotPositive;
    let fock_min = min_eig(&pt_fock(&to_fock(&g, &[cutoff; 3])?, &t)?)?;
    Ok(ThreeModeAuditRow {
        spec: *spec,
        coupling_sq: spec.zeta13.norm_sqr() + spec.zeta23.norm_sqr(),
        candidate_bound: (spec.lambda + 1.0) * (spec.lambda3 + 1.0),
        candidate_npt: three_mode_candidate_threshold(spec),
        omega,
        analytic_npt,
        fock_min,
        oracle_npt: fock_min < -oracle_tol,
    })
}
