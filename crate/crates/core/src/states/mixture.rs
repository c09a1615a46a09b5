use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use serde::{Deserialize, Serialize};

use super::Truncation;
use crate::error::{Error, Result};
use crate::fock::{FockKet, FockMatrix};
use crate::linalg::c;

pub const DEFAULT_QUADRATURE_NODES: usize = 64;

/// Weight function of the squeezing parameter before normalization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Density {
    /// Constant density carrying total mass `weight` on the interval.
    Uniform { weight: f64 },
    /// `(r, value)` samples, linearly interpolated; must cover the interval.
    Tabulated(Vec<(f64, f64)>),
}

/// A squeezed-vacuum mixture `∫ p(r) S(r)|00⟩⟨00|S(r)† dr` plus diagonal number
/// states `Σ p'(n1, n2) |n1 n2⟩⟨n1 n2|`, normalized so that the total weight
/// is one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMixture", into = "RawMixture")]
pub struct MixtureSpec {
    r_lower: f64,
    r_upper: f64,
    density: Density,
    density_scale: f64,
    pprime: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct RawMixture {
    r_lower: f64,
    r_upper: f64,
    p_density: Density,
    #[serde(default)]
    pprime: Vec<Vec<f64>>,
}

impl TryFrom<RawMixture> for MixtureSpec {
    type Error = Error;

    fn try_from(raw: RawMixture) -> Result<Self> {
        MixtureSpec::new(raw.r_lower, raw.r_upper, raw.p_density, raw.pprime)
    }
}

impl From<MixtureSpec> for RawMixture {
    fn from(s: MixtureSpec) -> Self {
        // emit the normalized weights
        let p_density = match &s.density {
            Density::Uniform { weight } => Density::Uniform {
                weight: weight * s.density_scale,
            },
            Density::Tabulated(t) => {
                Density::Tabulated(t.iter().map(|&(r, w)| (r, w * s.density_scale)).collect())
            }
        };
        Self {
            r_lower: s.r_lower,
            r_upper: s.r_upper,
            p_density,
            pprime: s.pprime,
        }
    }
}

impl MixtureSpec {
    pub fn new(
        r_lower: f64,
        r_upper: f64,
        density: Density,
        pprime: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if !(r_lower.is_finite() && r_upper.is_finite() && 0.0 < r_lower && r_lower < r_upper) {
            return Err(Error::Precondition(format!(
                "need 0 < r_lower < r_upper, got [{r_lower}, {r_upper}]"
            )));
        }
        match &density {
            Density::Uniform { weight } => {
                if !(weight.is_finite() && *weight >= 0.0) {
                    return Err(Error::Precondition(format!(
                        "uniform weight {weight} must be >= 0"
                    )));
                }
            }
            Density::Tabulated(t) => {
                if t.len() < 2
                    || t.windows(2)
                        .any(|w| w[0].0.partial_cmp(&w[1].0) != Some(std::cmp::Ordering::Less))
                {
                    return Err(Error::Precondition(
                        "tabulated density needs >= 2 increasing samples".into(),
                    ));
                }
                if t.iter()
                    .any(|&(r, w)| !(r.is_finite() && w.is_finite() && w >= 0.0))
                {
                    return Err(Error::Precondition(
                        "tabulated density must be finite and >= 0".into(),
                    ));
                }
                if t[0].0 > r_lower || t[t.len() - 1].0 < r_upper {
                    return Err(Error::Precondition(
                        "tabulated density does not cover [r_lower, r_upper]".into(),
                    ));
                }
            }
        }
        if pprime
            .iter()
            .flatten()
            .any(|w| !(w.is_finite() && *w >= 0.0))
        {
            return Err(Error::Precondition(
                "p' entries must be finite and >= 0".into(),
            ));
        }
        let mut spec = Self {
            r_lower,
            r_upper,
            density,
            density_scale: 1.0,
            pprime,
        };
        let total = spec.continuous_mass() + spec.pprime.iter().flatten().sum::<f64>();
        if total.is_nan() || total <= 0.0 {
            return Err(Error::Precondition("mixture has zero total weight".into()));
        }
        spec.density_scale = 1.0 / total;
        for w in spec.pprime.iter_mut().flatten() {
            *w /= total;
        }
        Ok(spec)
    }

    /// Uniform density of unit mass on `[r_lower, r_upper]`, no number states.
    pub fn uniform(r_lower: f64, r_upper: f64) -> Result<Self> {
        Self::new(
            r_lower,
            r_upper,
            Density::Uniform { weight: 1.0 },
            Vec::new(),
        )
    }

    pub fn r_lower(&self) -> f64 {
        self.r_lower
    }

    pub fn r_upper(&self) -> f64 {
        self.r_upper
    }

    /// Normalized `p'(n1, n2)`; zero outside the table.
    pub fn pprime(&self, n1: usize, n2: usize) -> f64 {
        self.pprime
            .get(n1)
            .and_then(|row| row.get(n2))
            .copied()
            .unwrap_or(0.0)
    }

    /// Normalized density `p(r)`.
    pub fn p(&self, r: f64) -> f64 {
        if r < self.r_lower || r > self.r_upper {
            return 0.0;
        }
        let raw = match &self.density {
            Density::Uniform { weight } => weight / (self.r_upper - self.r_lower),
            Density::Tabulated(t) => {
                let k = t.partition_point(|&(x, _)| x <= r).clamp(1, t.len() - 1);
                let ((x0, y0), (x1, y1)) = (t[k - 1], t[k]);
                y0 + (y1 - y0) * (r - x0) / (x1 - x0)
            }
        };
        raw * self.density_scale
    }

    /// Largest `(n1, n2)` occupations carrying positive `p'` weight.
    pub fn number_support(&self) -> Option<(usize, usize)> {
        let mut out: Option<(usize, usize)> = None;
        for (n1, row) in self.pprime.iter().enumerate() {
            for (n2, &w) in row.iter().enumerate() {
                if w > 0.0 {
                    let (a, b) = out.unwrap_or((0, 0));
                    out = Some((a.max(n1), b.max(n2)));
                }
            }
        }
        out
    }

    /// Breakpoints of the density inside the interval.
    fn segments(&self) -> Vec<f64> {
        let mut knots = vec![self.r_lower];
        if let Density::Tabulated(t) = &self.density {
            knots.extend(
                t.iter()
                    .map(|&(r, _)| r)
                    .filter(|&r| r > self.r_lower && r < self.r_upper),
            );
        }
        knots.push(self.r_upper);
        knots
    }

    /// `(r, p(r)·w)` quadrature points: Gauss–Legendre with `nodes` points on
    /// each smooth piece of the density.
    pub fn quadrature_points(&self, nodes: usize) -> Result<Vec<(f64, f64)>> {
        let n = NonZeroUsize::new(nodes)
            .ok_or_else(|| Error::Precondition("quadrature needs >= 1 node".into()))?;
        let rule = GaussLegendre::new(n);
        let knots = self.segments();
        let mut pts = Vec::with_capacity(nodes * (knots.len() - 1));
        for w in knots.windows(2) {
            let (a, b) = (w[0], w[1]);
            let half = 0.5 * (b - a);
            for &(x, wt) in rule.as_node_weight_pairs() {
                let r = a + half * (x + 1.0);
                pts.push((r, wt * half * self.p(r)));
            }
        }
        Ok(pts)
    }

    fn continuous_mass(&self) -> f64 {
        // GL is exact on each linear piece
        self.quadrature_points(1)
            .expect("one node")
            .iter()
            .map(|&(_, w)| w)
            .sum()
    }

    /// Fails unless `m` exceeds every occupation carrying `p'` weight.
    pub fn check_witness_order(&self, m: usize) -> Result<()> {
        match self.number_support() {
            Some((m1, m2)) if m <= m1 || m <= m2 => Err(Error::Precondition(format!(
                "witness order M = {m} must exceed M1 = {m1} and M2 = {m2}"
            ))),
            _ => Ok(()),
        }
    }
}

/// Number-basis matrix of the mixture. Squeezed components are integrated by
/// Gauss–Legendre quadrature of their Schmidt-form matrices.
pub fn impure_squeezed(spec: &MixtureSpec, trunc: Truncation, nodes: usize) -> Result<FockMatrix> {
    let cutoff = trunc.cutoff;
    if let Some((m1, m2)) = spec.number_support() {
        if m1 > cutoff || m2 > cutoff {
            return Err(Error::InsufficientCutoff(format!(
                "p' support ({m1}, {m2}) exceeds cutoff {cutoff}"
            )));
        }
    }
    let pts = spec.quadrature_points(nodes)?;
    let mass: f64 = pts.iter().map(|&(_, w)| w).sum();
    trunc.check_tail(mass * super::tmsv_tail_weight(spec.r_upper(), cutoff))?;

    // coefficient of |mm⟩⟨nn| is ∫ p(r) tanh^{m+n} r / cosh² r dr
    let mut coef = vec![0.0; 2 * cutoff + 1];
    for &(r, w) in &pts {
        let t = r.tanh();
        let mut term = w / r.cosh().powi(2);
        for k in coef.iter_mut() {
            *k += term;
            term *= t;
        }
    }
    let mut f = FockMatrix::zeros(vec![cutoff, cutoff]);
    for m in 0..=cutoff {
        for n in 0..=cutoff {
            f.set(&[m, m], &[n, n], c(coef[m + n]))?;
        }
    }
    for n1 in 0..=cutoff {
        for n2 in 0..=cutoff {
            let w = spec.pprime(n1, n2);
            if w > 0.0 {
                let cur = f.get(&[n1, n2], &[n1, n2]).expect("inside box");
                f.set(&[n1, n2], &[n1, n2], cur + c(w))?;
            }
        }
    }
    Ok(f)
}

/// `(|M, M+2⟩ - |M+2, M⟩)/√2`.
pub fn witness_psi_m(m: usize, cutoffs: &[usize]) -> Result<FockKet> {
    if cutoffs.len() != 2 || cutoffs.iter().any(|&c| c < m + 2) {
        return Err(Error::InsufficientCutoff(format!(
            "witness of order {m} needs two modes with cutoff >= {}, got {cutoffs:?}",
            m + 2
        )));
    }
    let a = std::f64::consts::FRAC_1_SQRT_2;
    FockKet::new(cutoffs.to_vec())
        .with(&[m, m + 2], c(a))?
        .with(&[m + 2, m], c(-a))
}

/// `⟨Ψ_M|ρ^PT|Ψ_M⟩ = -∫ p(r) tanh^{2M+2} r / cosh² r dr`.
pub fn impure_witness_analytic(spec: &MixtureSpec, m: usize) -> Result<f64> {
    impure_witness_analytic_with_nodes(spec, m, DEFAULT_QUADRATURE_NODES)
}

pub fn impure_witness_analytic_with_nodes(
    spec: &MixtureSpec,
    m: usize,
    nodes: usize,
) -> Result<f64> {
    spec.check_witness_order(m)?;
    let power = 2 * m as i32 + 2;
    Ok(-spec
        .quadrature_points(nodes)?
        .iter()
        .map(|&(r, w)| w * r.tanh().powi(power) / r.cosh().powi(2))
        .sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_is_joint() {
        let s =
            MixtureSpec::new(0.5, 1.0, Density::Uniform { weight: 1.0 }, vec![vec![0.25]]).unwrap();
        assert!((s.p(0.7) - 2.0 / 1.25).abs() < 1e-14);
        assert!((s.pprime(0, 0) - 0.2).abs() < 1e-15);
        assert_eq!(s.number_support(), Some((0, 0)));
        assert!(s.check_witness_order(0).is_err());
        assert!(s.check_witness_order(1).is_ok());
    }

    #[test]
    fn zero_table_has_no_support() {
        let s = MixtureSpec::new(
            0.5,
            1.0,
            Density::Uniform { weight: 1.0 },
            vec![vec![0.0, 0.0]],
        )
        .unwrap();
        assert_eq!(s.number_support(), None);
        assert!(s.check_witness_order(0).is_ok());
    }

    #[test]
    fn tabulated_density_interpolates_and_normalizes() {
        let s = MixtureSpec::new(
            0.2,
            1.0,
            Density::Tabulated(vec![(0.0, 0.0), (1.0, 1.0)]),
            vec![],
        )
        .unwrap();
        // raw mass on [0.2, 1] is (1 - 0.04)/2 = 0.48
        assert!((s.p(0.6) - 0.6 / 0.48).abs() < 1e-12);
        assert!(MixtureSpec::new(
            0.2,
            1.5,
            Density::Tabulated(vec![(0.0, 0.0), (1.0, 1.0)]),
            vec![]
        )
        .is_err());
    }

    #[test]
    fn invalid_specs() {
        assert!(MixtureSpec::uniform(0.0, 1.0).is_err());
        assert!(MixtureSpec::uniform(1.0, 0.5).is_err());
        assert!(
            MixtureSpec::new(0.5, 1.0, Density::Uniform { weight: 1.0 }, vec![vec![-0.1]]).is_err()
        );
        assert!(MixtureSpec::new(0.5, 1.0, Density::Uniform { weight: 0.0 }, vec![]).is_err());
    }

    #[test]
    fn witness_ket() {
        let k = witness_psi_m(0, &[2, 2]).unwrap();
        assert_eq!(k.amplitude(&[0, 2]), c(std::f64::consts::FRAC_1_SQRT_2));
        assert_eq!(k.amplitude(&[2, 0]), c(-std::f64::consts::FRAC_1_SQRT_2));
        assert!((k.norm_sqr() - 1.0).abs() < 1e-15);
        assert!(witness_psi_m(1, &[2, 2]).is_err());
    }

    #[test]
    fn json_schema() {
        let s: MixtureSpec = serde_json::from_str(
            r#"{"r_lower":0.5,"r_upper":1.0,"p_density":{"uniform":{"weight":1.0}},"pprime":[[0.0]]}"#,
        )
        .unwrap();
        assert_eq!(
            s,
            MixtureSpec::new(0.5, 1.0, Density::Uniform { weight: 1.0 }, vec![vec![0.0]]).unwrap()
        );
        let t: MixtureSpec = serde_json::from_str(
            r#"{"r_lower":0.5,"r_upper":1.0,"p_density":{"tabulated":[[0.5,1.0],[1.0,3.0]]}}"#,
        )
        .unwrap();
        assert!((t.p(1.0) - 3.0).abs() < 1e-12);
    }
}
