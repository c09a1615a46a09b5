//! Truncated number-basis oracle.
//!
//! Basis ordering: a multi-index `(n_0, …, n_{l-1})` with `n_i ≤ cutoffs[i]`
//! is flattened row-major with mode 0 slowest.

mod ops;
mod series;

use std::collections::BTreeMap;

pub use ops::{expectation, min_eig, pt_fock, ptrace_fock, reduction_operator, HERMITICITY_LIMIT};
pub use series::{to_fock, NormalOrderedQuadratic, DEFAULT_ENTRY_BUDGET};

use crate::error::{Error, Result};
use crate::linalg::hermiticity_residual;
use crate::{CMatrix, Complex64};

/// Flat/multi-index conversion for a cutoff box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Basis {
    cutoffs: Vec<usize>,
    strides: Vec<usize>,
    dim: usize,
}

impl Basis {
    pub(crate) fn new(cutoffs: &[usize]) -> Self {
        let mut strides = vec![1; cutoffs.len()];
        for i in (0..cutoffs.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * (cutoffs[i + 1] + 1);
        }
        let dim = cutoffs.iter().map(|c| c + 1).product();
        Self {
            cutoffs: cutoffs.to_vec(),
            strides,
            dim,
        }
    }

    pub(crate) fn dim(&self) -> usize {
        self.dim
    }

    pub(crate) fn strides(&self) -> &[usize] {
        &self.strides
    }

    pub(crate) fn flat(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.strides).map(|(n, s)| n * s).sum()
    }

    pub(crate) fn digits_into(&self, mut flat: usize, out: &mut [usize]) {
        for (o, s) in out.iter_mut().zip(&self.strides) {
            *o = flat / s;
            flat %= s;
        }
    }

    pub(crate) fn digits(&self, flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.cutoffs.len()];
        self.digits_into(flat, &mut out);
        out
    }

    /// All multi-indices as a flat `dim × l` table.
    pub(crate) fn digit_table(&self) -> Vec<usize> {
        let l = self.cutoffs.len();
        let mut t = vec![0; self.dim * l];
        for k in 0..self.dim {
            self.digits_into(k, &mut t[k * l..(k + 1) * l]);
        }
        t
    }

    pub(crate) fn contains(&self, idx: &[usize]) -> bool {
        idx.len() == self.cutoffs.len() && idx.iter().zip(&self.cutoffs).all(|(n, c)| n <= c)
    }
}

/// Dense operator on a truncated multimode number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockMatrix {
    cutoffs: Vec<usize>,
    data: CMatrix,
}

impl FockMatrix {
    pub fn new(cutoffs: Vec<usize>, data: CMatrix) -> Result<Self> {
        if cutoffs.is_empty() {
            return Err(Error::DimensionMismatch(
                "at least one mode required".into(),
            ));
        }
        let dim: usize = cutoffs.iter().map(|c| c + 1).product();
        if data.nrows() != dim || data.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "cutoffs {cutoffs:?} need a {dim}x{dim} matrix, got {}x{}",
                data.nrows(),
                data.ncols()
            )));
        }
        Ok(Self { cutoffs, data })
    }

    pub fn zeros(cutoffs: Vec<usize>) -> Self {
        let dim = Basis::new(&cutoffs).dim();
        Self {
            cutoffs,
            data: CMatrix::zeros(dim, dim),
        }
    }

    /// `Σ_k |k⟩⟨k|` weights from a diagonal table indexed by multi-index.
    pub fn from_diagonal<F: FnMut(&[usize]) -> f64>(cutoffs: Vec<usize>, mut weight: F) -> Self {
        let basis = Basis::new(&cutoffs);
        let mut out = Self::zeros(cutoffs);
        for k in 0..basis.dim() {
            out.data[(k, k)] = Complex64::new(weight(&basis.digits(k)), 0.0);
        }
        out
    }

    pub fn num_modes(&self) -> usize {
        self.cutoffs.len()
    }

    pub fn cutoffs(&self) -> &[usize] {
        &self.cutoffs
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn data(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_data(self) -> CMatrix {
        self.data
    }

    pub fn index_of(&self, idx: &[usize]) -> Option<usize> {
        let basis = Basis::new(&self.cutoffs);
        basis.contains(idx).then(|| basis.flat(idx))
    }

    pub fn multi_index(&self, flat: usize) -> Vec<usize> {
        Basis::new(&self.cutoffs).digits(flat)
    }

    /// `⟨m|F|n⟩`; `None` outside the box.
    pub fn get(&self, m: &[usize], n: &[usize]) -> Option<Complex64> {
        Some(self.data[(self.index_of(m)?, self.index_of(n)?)])
    }

    pub fn set(&mut self, m: &[usize], n: &[usize], value: Complex64) -> Result<()> {
        match (self.index_of(m), self.index_of(n)) {
            (Some(i), Some(j)) => {
                self.data[(i, j)] = value;
                Ok(())
            }
            _ => Err(Error::InsufficientCutoff(format!(
                "{m:?},{n:?} outside cutoffs {:?}",
                self.cutoffs
            ))),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.data.trace()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        hermiticity_residual(&self.data)
    }

    /// Largest entrywise distance to `other` (which must share the cutoffs).
    pub fn max_abs_diff(&self, other: &FockMatrix) -> Result<f64> {
        if self.cutoffs != other.cutoffs {
            return Err(Error::DimensionMismatch(format!(
                "cutoffs {:?} vs {:?}",
                self.cutoffs, other.cutoffs
            )));
        }
        Ok(crate::linalg::max_abs_diff(&self.data, &other.data))
    }

    /// Restriction to a smaller box, `cutoffs[i] ≤ self.cutoffs[i]`.
    pub fn restrict(&self, cutoffs: &[usize]) -> Result<FockMatrix> {
        if cutoffs.len() != self.cutoffs.len()
            || cutoffs.iter().zip(&self.cutoffs).any(|(a, b)| a > b)
        {
            return Err(Error::DimensionMismatch(format!(
                "cannot restrict {:?} to {cutoffs:?}",
                self.cutoffs
            )));
        }
        let idx = Self::box_indices(&self.cutoffs, cutoffs);
        FockMatrix::new(
            cutoffs.to_vec(),
            crate::linalg::select(&self.data, &idx, &idx),
        )
    }

    /// Flat indices (in the `outer` basis) of the states inside the `inner`
    /// box, in the `inner` basis order.
    pub(crate) fn box_indices(outer: &[usize], inner: &[usize]) -> Vec<usize> {
        let ob = Basis::new(outer);
        let ib = Basis::new(inner);
        (0..ib.dim()).map(|k| ob.flat(&ib.digits(k))).collect()
    }

    /// Scales the operator by a complex factor.
    pub fn scaled(mut self, factor: f64) -> Self {
        self.data *= Complex64::new(factor, 0.0);
        self
    }

    pub fn add_assign_scaled(&mut self, other: &FockMatrix, factor: f64) -> Result<()> {
        if self.cutoffs != other.cutoffs {
            return Err(Error::DimensionMismatch("cutoffs differ".into()));
        }
        self.data += &other.data * Complex64::new(factor, 0.0);
        Ok(())
    }
}

/// Sparse ket (or witness vector) on a truncated number basis. Witnesses need
/// not be normalized.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FockKet {
    cutoffs: Vec<usize>,
    amplitudes: BTreeMap<Vec<usize>, Complex64>,
}

impl FockKet {
    pub fn new(cutoffs: Vec<usize>) -> Self {
        Self {
            cutoffs,
            amplitudes: BTreeMap::new(),
        }
    }

    /// Adds `amplitude` to the coefficient of `|index⟩`.
    pub fn with(mut self, index: &[usize], amplitude: Complex64) -> Result<Self> {
        if !Basis::new(&self.cutoffs).contains(index) {
            return Err(Error::InsufficientCutoff(format!(
                "|{index:?}⟩ outside cutoffs {:?}",
                self.cutoffs
            )));
        }
        *self.amplitudes.entry(index.to_vec()).or_default() += amplitude;
        Ok(self)
    }

    pub fn cutoffs(&self) -> &[usize] {
        &self.cutoffs
    }

    pub fn amplitude(&self, index: &[usize]) -> Complex64 {
        self.amplitudes.get(index).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[usize], Complex64)> {
        self.amplitudes.iter().map(|(k, v)| (k.as_slice(), *v))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|z| z.norm_sqr()).sum()
    }

    pub fn scaled(mut self, factor: Complex64) -> Self {
        for v in self.amplitudes.values_mut() {
            *v *= factor;
        }
        self
    }
}
