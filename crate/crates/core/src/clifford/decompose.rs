//! Factorization `F = A_{Q1} Ω T_{R1} G_k T_{R2} A_{Q2}` and its lowering to
//! gates.

use serde::Serialize;

use super::elementary::{diagonal_matrix, partial_hadamard_matrix, permute_matrix, ElementaryFactor};
use super::gate::Gate;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::f2::F2Matrix;
use crate::symplectic::{is_symplectic, SympMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub q1: F2Matrix,
    pub r1: F2Matrix,
    pub k: usize,
    pub r2: F2Matrix,
    pub q2: F2Matrix,
}

impl Decomposition {
    pub fn m(&self) -> usize {
        self.q1.nrows()
    }

    /// The five factors after `Ω`, in product order.
    pub fn factors(&self) -> Vec<ElementaryFactor> {
        let m = self.m();
        vec![
            ElementaryFactor::Permute(self.q1.clone()),
            ElementaryFactor::Omega { m },
            ElementaryFactor::Diagonal(self.r1.clone()),
            ElementaryFactor::PartialHadamard { t: self.k, m },
            ElementaryFactor::Diagonal(self.r2.clone()),
            ElementaryFactor::Permute(self.q2.clone()),
        ]
    }

    pub fn to_record(&self) -> DecompositionRecord {
        let rows = |a: &F2Matrix| a.rows().iter().map(|r| r.to_bit_string()).collect();
        DecompositionRecord { q1: rows(&self.q1), r1: rows(&self.r1), k: self.k, r2: rows(&self.r2), q2: rows(&self.q2) }
    }
}

/// Serializable form with each matrix as a list of 0/1 row strings.
#[derive(Debug, Clone, Serialize)]
pub struct DecompositionRecord {
    pub q1: Vec<String>,
    pub r1: Vec<String>,
    pub k: usize,
    pub r2: Vec<String>,
    pub q2: Vec<String>,
}

/// `A_P F` for row operations, with `A_P = [[P, 0], [0, P^{-T}]]`.
fn left_permute(p: &F2Matrix, f: &F2Matrix) -> F2Matrix {
    permute_matrix(p).expect("invertible").matrix() * f
}

pub fn decompose(f: &SympMatrix) -> Result<Decomposition> {
    let fm = f.matrix();
    if !is_symplectic(fm) {
        return Err(Error::NotSymplectic);
    }
    let m = f.m();
    let a = fm.block(0, 0, m, m);

    // P1 A = rref with k non-zero rows; M has the pivot rows of the rref and
    // unit vectors on the non-pivot columns, so (P1 A) M⁻¹ = diag(I_k, 0).
    let red = a.row_reduce();
    let k = red.rank();
    let p1 = red.transform.clone();
    let mut m_rows: Vec<_> = red.rref.rows()[..k].to_vec();
    for j in (0..m).filter(|j| !red.pivots.contains(j)) {
        m_rows.push(crate::f2::F2Vector::unit(m, j));
    }
    let q2 = F2Matrix::from_rows(m_rows, m)?;
    let s = q2.inverse()?;

    let g = &left_permute(&p1, fm) * permute_matrix(&s)?.matrix();
    let b = g.block(0, m, m, m);
    debug_assert!(g.block(0, 0, m, m) == F2Matrix::from_fn(m, m, |i, j| i == j && i < k));
    if !b.block(k, 0, m - k, k).is_zero() {
        return Err(Error::NotSymplectic);
    }
    let b_low = b.block(k, k, m - k, m - k);
    let b_low_inv = b_low.inverse().map_err(|_| Error::NotSymplectic)?;
    let q12_inv = F2Matrix::from_fn(m, m, |i, j| if i < k || j < k { i == j } else { b_low_inv.get(i - k, j - k) });
    let e_prime = b.block(0, k, k, m - k);
    let q13_inv = F2Matrix::from_fn(m, m, |i, j| i == j || (i < k && j >= k && e_prime.get(i, j - k)));
    let p = &(&q13_inv * &q12_inv) * &p1;
    let q1 = p.inverse()?;

    let r_k = b.block(0, 0, k, k);
    let r2 = F2Matrix::from_fn(m, m, |i, j| i < k && j < k && r_k.get(i, j));

    // A_P F A_S T_{R2} G_k Ω = [[I, 0], [R1, I]].
    let g_omega = partial_hadamard_matrix(k, m)?.compose(&SympMatrix::omega(m));
    let reduced = &(&(&left_permute(&p, fm) * permute_matrix(&s)?.matrix()) * diagonal_matrix(&r2)?.matrix())
        * g_omega.matrix();
    let r1 = reduced.block(m, 0, m, m);
    debug_assert!(reduced.block(0, 0, m, m).is_identity() && reduced.block(0, m, m, m).is_zero());

    let d = Decomposition { q1, r1, k, r2, q2 };
    if recompose(&d)? != *f {
        return Err(Error::NotSymplectic);
    }
    Ok(d)
}

pub fn recompose(d: &Decomposition) -> Result<SympMatrix> {
    let mut acc = SympMatrix::identity(d.m());
    for factor in d.factors() {
        acc = acc.compose(&factor.matrix()?);
    }
    Ok(acc)
}

/// Gates realizing `v ↦ v Q` on computational basis states.
///
/// Reducing `Q` to `I` by row operations `E_n ⋯ E_1 Q = I` gives
/// `Q = E_1 ⋯ E_n`, so the gates come out in elimination order: a row swap is
/// a SWAP and adding row `c` into row `i` is CNOT with control `i`, target `c`.
pub fn permutation_gates(q: &F2Matrix) -> Result<Vec<Gate>> {
    let m = q.nrows();
    if !q.is_square() {
        return Err(Error::NonInvertibleQ);
    }
    let mut work = q.clone();
    let mut gates = Vec::new();
    for c in 0..m {
        let r = (c..m).find(|&r| work.get(r, c)).ok_or(Error::NonInvertibleQ)?;
        if r != c {
            work.swap_rows(r, c);
            gates.push(Gate::Swap(c + 1, r + 1));
        }
        for i in 0..m {
            if i == c || !work.get(i, c) {
                continue;
            }
            work.add_row(c, i);
            gates.push(Gate::Cnot(i + 1, c + 1));
        }
    }
    Ok(gates)
}

fn diagonal_gates(r: &F2Matrix, gates: &mut Vec<Gate>) {
    let m = r.nrows();
    for i in 0..m {
        if r.get(i, i) {
            gates.push(Gate::P(i + 1));
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            if r.get(i, j) {
                gates.push(Gate::Cz(i + 1, j + 1));
            }
        }
    }
}

/// Lowers a decomposition to gates in product order. When `R1 = 0` the
/// adjacent `Ω G_k` collapses to Hadamards on qubits `k+1..=m`.
pub fn lower_to_gates(d: &Decomposition) -> Result<Circuit> {
    let m = d.m();
    let mut gates = permutation_gates(&d.q1)?;
    if d.r1.is_zero() {
        gates.extend((d.k + 1..=m).map(Gate::H));
    } else {
        gates.extend((1..=m).map(Gate::H));
        diagonal_gates(&d.r1, &mut gates);
        gates.extend((1..=d.k).map(Gate::H));
    }
    diagonal_gates(&d.r2, &mut gates);
    gates.extend(permutation_gates(&d.q2)?);
    Circuit::from_gates(m, gates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::transvection;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_symplectic(rng: &mut StdRng, m: usize) -> SympMatrix {
        let mut f = SympMatrix::identity(m);
        for _ in 0..rng.gen_range(0..4 * m + 2) {
            let h = crate::f2::F2Vector::from_fn(2 * m, |_| rng.gen());
            f = f.compose(&transvection(&h));
        }
        f
    }

    fn t_b() -> SympMatrix {
        let mut b = F2Matrix::zeros(6, 6);
        for (i, j) in [(1, 2), (1, 5), (2, 5)] {
            b.set(i, j, true);
            b.set(j, i, true);
        }
        diagonal_matrix(&b).unwrap()
    }

    #[test]
    fn identity_lowers_to_nothing() {
        let d = decompose(&SympMatrix::identity(4)).unwrap();
        assert_eq!(d.k, 4);
        assert!(lower_to_gates(&d).unwrap().gates().is_empty());
    }

    #[test]
    fn six_qubit_cz_network() {
        let d = decompose(&t_b()).unwrap();
        assert_eq!(recompose(&d).unwrap(), t_b());
        let c = lower_to_gates(&d).unwrap();
        assert_eq!(c.gates(), &[Gate::Cz(2, 3), Gate::Cz(2, 6), Gate::Cz(3, 6)]);
    }

    #[test]
    fn omega_lowers_to_hadamards() {
        let d = decompose(&SympMatrix::omega(3)).unwrap();
        assert_eq!(d.k, 0);
        let c = lower_to_gates(&d).unwrap();
        assert_eq!(c.gates(), &[Gate::H(1), Gate::H(2), Gate::H(3)]);
    }

    #[test]
    fn permutation_gates_realize_q() {
        let mut rng = StdRng::seed_from_u64(5);
        let mut done = 0;
        while done < 50 {
            let q = F2Matrix::from_fn(4, 4, |_, _| rng.gen());
            if q.rank() < 4 {
                continue;
            }
            let c = Circuit::from_gates(4, permutation_gates(&q).unwrap()).unwrap();
            assert_eq!(c.symplectic(), permute_matrix(&q).unwrap());
            done += 1;
        }
        assert!(permutation_gates(&F2Matrix::identity(3)).unwrap().is_empty());
    }

    #[test]
    fn random_round_trips() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..300 {
            let m = rng.gen_range(1..=6);
            let f = random_symplectic(&mut rng, m);
            let d = decompose(&f).unwrap();
            assert_eq!(recompose(&d).unwrap(), f);
            assert!(d.r1.is_symmetric() && d.r2.is_symmetric());
            assert_eq!(lower_to_gates(&d).unwrap().symplectic(), f);
        }
    }
}
