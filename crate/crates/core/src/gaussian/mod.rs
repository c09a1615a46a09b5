//! Matrix-level algebra on normally ordered Gaussian operators.

mod factor;
mod operator;
mod positivity;
mod reduce;
mod subset;
mod transpose;

pub use factor::{sqrt_factor, NormalOrderedFactor};
pub use operator::{validate, validate_parts, GaussianOperator, ValidationReport};
pub use positivity::{
    b_spectrum, positivity, ppt_check, PositivityClass, PositivityVerdict, PptReport, PptSemantics,
};
pub use reduce::{
    block_inverse, ln_trace, normalize, partial_trace, partial_trace_with, trace, InverseMethod,
};
pub use subset::{Bipartition, ModeSubset};
pub use transpose::partial_transpose;
