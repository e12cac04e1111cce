use crate::error::{Error, Result};
use crate::f2::F2Matrix;
use crate::symplectic::SympMatrix;

/// The generating symplectic matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElementaryFactor {
    /// `Ω`, transversal Hadamard.
    Omega { m: usize },
    /// `A_Q = [[Q, 0], [0, Q^{-T}]]`, a CNOT/SWAP network.
    Permute(F2Matrix),
    /// `T_R = [[I, R], [0, I]]` with `R` symmetric: P on the diagonal, CZ off it.
    Diagonal(F2Matrix),
    /// `G_t`, Hadamard on qubits `1..=t`.
    PartialHadamard { t: usize, m: usize },
}

impl ElementaryFactor {
    pub fn m(&self) -> usize {
        match self {
            ElementaryFactor::Omega { m } | ElementaryFactor::PartialHadamard { m, .. } => *m,
            ElementaryFactor::Permute(q) | ElementaryFactor::Diagonal(q) => q.nrows(),
        }
    }

    pub fn matrix(&self) -> Result<SympMatrix> {
        match self {
            ElementaryFactor::Omega { m } => Ok(SympMatrix::omega(*m)),
            ElementaryFactor::Permute(q) => permute_matrix(q),
            ElementaryFactor::Diagonal(r) => diagonal_matrix(r),
            ElementaryFactor::PartialHadamard { t, m } => partial_hadamard_matrix(*t, *m),
        }
    }
}

pub fn permute_matrix(q: &F2Matrix) -> Result<SympMatrix> {
    if !q.is_square() {
        return Err(Error::NonInvertibleQ);
    }
    let inv_t = q.inverse().map_err(|_| Error::NonInvertibleQ)?.transpose();
    let zero = F2Matrix::zeros(q.nrows(), q.nrows());
    Ok(SympMatrix::new_unchecked(F2Matrix::from_blocks(q, &zero, &zero, &inv_t)))
}

pub fn diagonal_matrix(r: &F2Matrix) -> Result<SympMatrix> {
    if !r.is_square() || !r.is_symmetric() {
        return Err(Error::NonSymmetricR);
    }
    let m = r.nrows();
    let (id, zero) = (F2Matrix::identity(m), F2Matrix::zeros(m, m));
    Ok(SympMatrix::new_unchecked(F2Matrix::from_blocks(&id, r, &zero, &id)))
}

pub fn partial_hadamard_matrix(t: usize, m: usize) -> Result<SympMatrix> {
    if t > m {
        return Err(Error::PartialHadamardOutOfRange { t, m });
    }
    let u = F2Matrix::from_fn(m, m, |i, j| i == j && i < t);
    let l = F2Matrix::from_fn(m, m, |i, j| i == j && i >= t);
    Ok(SympMatrix::new_unchecked(F2Matrix::from_blocks(&l, &u, &u, &l)))
}
