//! Entanglement criteria for continuous-variable states evaluated directly in
//! Fock space.
//!
//! The crate has three layers:
//!
//! * [`gaussian`]: exact matrix algebra on normally ordered Gaussian operators
//!   `exp(s) :exp[½ a R ã + ã† B ã + ½ ã† R† a†]:` (partial transposition,
//!   positivity classification, traces, partial traces, square-root factors).
//! * [`fock`]: a brute-force truncated number-basis oracle used to check every
//!   analytic result entry by entry.
//! * [`states`]: constructors for squeezed, mixed, phase-damped and three-mode
//!   example states together with their witnesses.

pub mod ensemble;
pub mod error;
pub mod fock;
pub mod gaussian;
mod linalg;
pub mod states;

pub use error::{Error, Result};
pub use fock::{FockKet, FockMatrix, NormalOrderedQuadratic};
pub use gaussian::{
    Bipartition, GaussianOperator, ModeSubset, NormalOrderedFactor, PositivityClass,
    PositivityVerdict, PptReport, PptSemantics, ValidationReport,
};
pub use num_complex::Complex64;

/// Complex dense matrix used throughout the crate.
pub type CMatrix = nalgebra::DMatrix<Complex64>;

/// Default tolerance for the -1 eigenvalue boundary and structural residuals.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Default condition-number ceiling before a block is reported singular.
pub const DEFAULT_CONDITION_LIMIT: f64 = 1e12;
