use rayon::prelude::*;

use super::{Basis, FockKet, FockMatrix};
use crate::error::{Error, Result};
use crate::gaussian::{Bipartition, ModeSubset};
use crate::linalg::{hermitian_eigenvalues, select};
use crate::{CMatrix, Complex64};

/// Hermiticity residual above which [`min_eig`] refuses a matrix.
pub const HERMITICITY_LIMIT: f64 = 1e-8;

/// Basis-level partial transposition: the entry at `(m, n)` moves to
/// `(m', n')` with `m'_i = n_i`, `n'_i = m_i` for every `i` in `modes`.
pub fn pt_fock(f: &FockMatrix, modes: &ModeSubset) -> Result<FockMatrix> {
    modes.check(f.num_modes())?;
    let basis = Basis::new(f.cutoffs());
    let l = f.num_modes();
    let d = basis.dim();
    let digits = basis.digit_table();
    let mut out = CMatrix::zeros(d, d);
    let mut mp = vec![0; l];
    let mut np = vec![0; l];
    for row in 0..d {
        for col in 0..d {
            mp.copy_from_slice(&digits[row * l..(row + 1) * l]);
            np.copy_from_slice(&digits[col * l..(col + 1) * l]);
            for i in modes.iter() {
                std::mem::swap(&mut mp[i], &mut np[i]);
            }
            out[(basis.flat(&mp), basis.flat(&np))] = f.data()[(row, col)];
        }
    }
    FockMatrix::new(f.cutoffs().to_vec(), out)
}

/// Partial trace over `traced` (sum over matching occupations of those modes).
pub fn ptrace_fock(f: &FockMatrix, traced: &ModeSubset) -> Result<FockMatrix> {
    let l = f.num_modes();
    traced.check(l)?;
    if traced.is_empty() {
        return Ok(f.clone());
    }
    if traced.len() == l {
        return Err(Error::InvalidSubset(
            "partial trace needs at least one kept mode".into(),
        ));
    }
    let kept = traced.complement(l);
    let full = Basis::new(f.cutoffs());
    let kc: Vec<usize> = kept.iter().map(|i| f.cutoffs()[i]).collect();
    let tc: Vec<usize> = traced.iter().map(|i| f.cutoffs()[i]).collect();
    let kb = Basis::new(&kc);
    let tb = Basis::new(&tc);

    // offset of each kept / traced multi-index inside the full basis
    let offsets = |b: &Basis, modes: &ModeSubset| -> Vec<usize> {
        (0..b.dim())
            .map(|k| {
                b.digits(k)
                    .iter()
                    .zip(modes.iter())
                    .map(|(n, m)| n * full.strides()[m])
                    .sum()
            })
            .collect()
    };
    let ko = offsets(&kb, &kept);
    let to = offsets(&tb, traced);

    let out = CMatrix::from_fn(kb.dim(), kb.dim(), |i, j| {
        to.iter()
            .map(|t| f.data()[(ko[i] + t, ko[j] + t)])
            .sum::<Complex64>()
    });
    FockMatrix::new(kc, out)
}

/// Groups basis states into the connected components of the non-zero pattern.
fn components(m: &CMatrix) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for j in 0..n {
        for i in 0..n {
            if i != j && m[(i, j)] != Complex64::default() {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }
    groups.into_values().collect()
}

/// Smallest eigenvalue of a Hermitian Fock matrix. The matrix is split into
/// the connected components of its sparsity pattern (e.g. photon-number
/// parity sectors) and each block is solved separately.
pub fn min_eig(f: &FockMatrix) -> Result<f64> {
    let residual = f.hermiticity_residual();
    if residual > HERMITICITY_LIMIT {
        return Err(Error::NonHermitian { residual });
    }
    let blocks = components(f.data());
    let min = blocks
        .par_iter()
        .map(|idx| {
            if idx.len() == 1 {
                f.data()[(idx[0], idx[0])].re
            } else {
                hermitian_eigenvalues(&select(f.data(), idx, idx))[0]
            }
        })
        .reduce(|| f64::INFINITY, f64::min);
    Ok(min)
}

/// `⟨ψ|F|ψ⟩`.
pub fn expectation(f: &FockMatrix, psi: &FockKet) -> Result<Complex64> {
    let mut idx = Vec::new();
    for (k, amp) in psi.iter() {
        let flat = f.index_of(k).ok_or_else(|| {
            Error::InsufficientCutoff(format!("|{k:?}⟩ outside cutoffs {:?}", f.cutoffs()))
        })?;
        idx.push((flat, amp));
    }
    let mut acc = Complex64::default();
    for &(i, ai) in &idx {
        for &(j, aj) in &idx {
            acc += ai.conj() * f.data()[(i, j)] * aj;
        }
    }
    Ok(acc)
}

/// Reduction-criterion operator `Ω = tr_second(ρ) ⊗ 1_second - ρ` on the full
/// truncated space.
pub fn reduction_operator(f: &FockMatrix, partition: &Bipartition) -> Result<FockMatrix> {
    if partition.num_modes() != f.num_modes() {
        return Err(Error::InvalidPartition(format!(
            "partition {partition} does not match {} modes",
            f.num_modes()
        )));
    }
    let reduced = ptrace_fock(f, &partition.second)?;
    let full = Basis::new(f.cutoffs());
    let kb = Basis::new(reduced.cutoffs());
    let l = f.num_modes();
    let digits = full.digit_table();
    let d = full.dim();
    let first = partition.first.indices();
    let second = partition.second.indices();
    let kept_flat: Vec<usize> = (0..d)
        .map(|k| {
            let dg = &digits[k * l..(k + 1) * l];
            kb.flat(&first.iter().map(|&m| dg[m]).collect::<Vec<_>>())
        })
        .collect();
    let out = CMatrix::from_fn(d, d, |i, j| {
        let (di, dj) = (&digits[i * l..(i + 1) * l], &digits[j * l..(j + 1) * l]);
        let same_second = second.iter().all(|&m| di[m] == dj[m]);
        let lifted = if same_second {
            reduced.data()[(kept_flat[i], kept_flat[j])]
        } else {
            Complex64::default()
        };
        lifted - f.data()[(i, j)]
    });
    FockMatrix::new(f.cutoffs().to_vec(), out)
}
