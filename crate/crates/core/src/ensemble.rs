//! Seeded random ensembles of Gaussian operators for property tests,
//! acceptance runs and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gaussian::{normalize, validate, GaussianOperator};
use crate::linalg::hermitian_eigenvalues;
use crate::{CMatrix, Complex64};

/// Parameters of a random normalized trace-class ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec {
    /// Range of the diagonal `-B_ii`.
    pub damping: (f64, f64),
    /// Largest modulus of any entry of `R` and any off-diagonal entry of `B`
    /// on the first attempt.
    pub max_coupling: f64,
    /// Smallest eigenvalue accepted for the trace integration form.
    pub min_convergence_margin: f64,
}

impl EnsembleSpec {
    /// Couplings up to 0.6.
    pub const STRONG: Self = Self {
        damping: (0.4, 1.0),
        max_coupling: 0.6,
        min_convergence_margin: 0.05,
    };
    /// Nearly vacuum states whose number distribution decays fast enough to be
    /// truncated at ~10 photons per mode with < 1e-8 loss.
    pub const DILUTE: Self = Self {
        damping: (0.9, 1.0),
        max_coupling: 0.1,
        min_convergence_margin: 0.5,
    };
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_complex<R: Rng>(rng: &mut R, max_modulus: f64) -> Complex64 {
    Complex64::from_polar(
        max_modulus * rng.random::<f64>().sqrt(),
        rng.random_range(0.0..std::f64::consts::TAU),
    )
}

/// Draws a normalized trace-class Gaussian operator on `num_modes` modes.
///
/// Rejected draws shrink the coupling scale by 5% for the next attempt, so
/// larger mode counts still terminate quickly (at zero coupling the
/// integration form is the damping diagonal).
pub fn random_trace_class<R: Rng>(
    rng: &mut R,
    num_modes: usize,
    spec: EnsembleSpec,
) -> GaussianOperator {
    let l = num_modes;
    let mut coupling = spec.max_coupling;
    loop {
        let mut b = CMatrix::zeros(l, l);
        let mut r = CMatrix::zeros(l, l);
        for i in 0..l {
            b[(i, i)] = Complex64::new(-rng.random_range(spec.damping.0..=spec.damping.1), 0.0);
            for j in i..l {
                let z = random_complex(rng, coupling);
                r[(i, j)] = z;
                r[(j, i)] = z;
                if j > i {
                    let w = random_complex(rng, coupling);
                    b[(i, j)] = w;
                    b[(j, i)] = w.conj();
                }
            }
        }
        let Ok(g) = GaussianOperator::new(r, b, 0.0) else {
            continue;
        };
        let all: Vec<usize> = (0..l).collect();
        let margin = hermitian_eigenvalues(&g.integration_form(&all))[0];
        if validate(&g).trace_class && margin >= spec.min_convergence_margin {
            return normalize(&g).expect("trace class");
        }
        coupling *= 0.95;
    }
}
