use super::{GaussianOperator, ModeSubset};
use crate::error::Result;
use crate::linalg::{hermiticity_residual, symmetry_residual};
use crate::CMatrix;

/// Index permutation of the block form that exchanges `a_f` and `a_f†` for
/// every transposed mode `f`. It is its own inverse.
fn swap_permutation(num_modes: usize, modes: &ModeSubset) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..2 * num_modes).collect();
    for f in modes.iter() {
        perm.swap(f, num_modes + f);
    }
    perm
}

/// Partial transposition on `modes`.
///
/// Inside the normal ordering, transposing a mode exchanges its creation and
/// annihilation operators, so the block form is conjugated by the permutation
/// swapping rows/columns `f` and `l + f`. The scale is unchanged.
pub fn partial_transpose(g: &GaussianOperator, modes: &ModeSubset) -> Result<GaussianOperator> {
    modes.check(g.num_modes())?;
    let l = g.num_modes();
    let perm = swap_permutation(l, modes);
    let m = g.block_form();
    let mt = CMatrix::from_fn(2 * l, 2 * l, |i, j| m[(perm[i], perm[j])]);
    let out = GaussianOperator::from_block_form(&mt, g.log_scale())?;
    debug_assert!(symmetry_residual(out.r()) == 0.0);
    debug_assert!(hermiticity_residual(out.b()) == 0.0);
    Ok(out)
}
