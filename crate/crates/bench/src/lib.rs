//! Shared fixtures for the criterion benchmarks.

use fockppt::ensemble::{random_trace_class, seeded, EnsembleSpec};
use fockppt::GaussianOperator;

/// Deterministic strong-coupling operator on `num_modes` modes.
pub fn fixture(num_modes: usize) -> GaussianOperator {
    random_trace_class(
        &mut seeded(7 + num_modes as u64),
        num_modes,
        EnsembleSpec::STRONG,
    )
}
