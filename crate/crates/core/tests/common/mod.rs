//! Independent oracles and random generators shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::Rng;

use symplectic_lcs::clifford::Gate;
use symplectic_lcs::f2::{F2Matrix, F2Vector};
use symplectic_lcs::pauli::PauliElement;
use symplectic_lcs::symplectic::{transvection, SympMatrix};

/// Dense square complex matrix, row-major. Qubit 1 is the leftmost
/// Kronecker factor, so it is the most significant bit of a basis index.
#[derive(Clone, Debug)]
pub struct Dense {
    pub n: usize,
    pub a: Vec<Complex64>,
}

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl Dense {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let a = (0..n * n).map(|idx| f(idx / n, idx % n)).collect();
        Dense { n, a }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.a[i * self.n + j]
    }

    pub fn mul(&self, o: &Dense) -> Dense {
        Dense::from_fn(self.n, |i, j| (0..self.n).map(|l| self.get(i, l) * o.get(l, j)).sum())
    }

    pub fn dagger(&self) -> Dense {
        Dense::from_fn(self.n, |i, j| self.get(j, i).conj())
    }

    pub fn kron(&self, o: &Dense) -> Dense {
        let n = self.n * o.n;
        Dense::from_fn(n, |i, j| self.get(i / o.n, j / o.n) * o.get(i % o.n, j % o.n))
    }

    pub fn scale(&self, c: Complex64) -> Dense {
        Dense { n: self.n, a: self.a.iter().map(|x| x * c).collect() }
    }

    pub fn close_to(&self, o: &Dense) -> bool {
        self.n == o.n && self.a.iter().zip(&o.a).all(|(x, y)| (x - y).norm() < 1e-9)
    }
}

fn one_qubit(rows: [[Complex64; 2]; 2]) -> Dense {
    Dense::from_fn(2, |i, j| rows[i][j])
}

pub fn sigma(x: bool, z: bool) -> Dense {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    match (x, z) {
        (false, false) => Dense::identity(2),
        (true, false) => one_qubit([[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]]),
        (false, true) => one_qubit([[c(1., 0.), c(0., 0.)], [c(0., 0.), c(-1., 0.)]]),
        (true, true) => one_qubit([[c(0., 0.), c(0., -1.)], [c(0., 1.), c(0., 0.)]]),
    }
}

fn embed(m: usize, q: usize, u: &Dense) -> Dense {
    (1..=m).fold(Dense::identity(1), |acc, j| acc.kron(if j == q { u } else { &IDENTITY_2 }))
}

static IDENTITY_2: std::sync::LazyLock<Dense> = std::sync::LazyLock::new(|| Dense::identity(2));

fn bit(s: usize, m: usize, q: usize) -> bool {
    (s >> (m - q)) & 1 == 1
}

/// Permutation-with-phase matrix `|s⟩ ↦ phase(s) |f(s)⟩`.
fn basis_map(m: usize, f: impl Fn(usize) -> (usize, Complex64)) -> Dense {
    let n = 1 << m;
    let mut d = Dense::from_fn(n, |_, _| ZERO);
    for s in 0..n {
        let (t, ph) = f(s);
        d.a[t * n + s] = ph;
    }
    d
}

pub fn gate_matrix(g: &Gate, m: usize) -> Dense {
    let h = 1.0 / 2f64.sqrt();
    let flip = |s: usize, q: usize| s ^ (1 << (m - q));
    match *g {
        Gate::H(q) => embed(m, q, &one_qubit([[ONE * h, ONE * h], [ONE * h, -ONE * h]])),
        Gate::P(q) => embed(m, q, &one_qubit([[ONE, ZERO], [ZERO, I]])),
        Gate::X(q) => embed(m, q, &sigma(true, false)),
        Gate::Z(q) => embed(m, q, &sigma(false, true)),
        Gate::Y(q) => embed(m, q, &sigma(true, true)),
        Gate::Cnot(c, t) => basis_map(m, |s| (if bit(s, m, c) { flip(s, t) } else { s }, ONE)),
        Gate::Cz(a, b) => basis_map(m, |s| (s, if bit(s, m, a) && bit(s, m, b) { -ONE } else { ONE })),
        Gate::Swap(a, b) => basis_map(m, |s| {
            if bit(s, m, a) != bit(s, m, b) {
                (flip(flip(s, a), b), ONE)
            } else {
                (s, ONE)
            }
        }),
    }
}

pub fn circuit_matrix(gates: &[Gate], m: usize) -> Dense {
    // Gate 1 acts first, so it sits rightmost.
    gates.iter().fold(Dense::identity(1 << m), |acc, g| gate_matrix(g, m).mul(&acc))
}

pub fn pauli_matrix(p: &PauliElement) -> Dense {
    let m = p.m();
    let body = (0..m).fold(Dense::identity(1), |acc, q| acc.kron(&sigma(p.x(q), p.z(q))));
    body.scale(I.powu(p.phase() as u32))
}

/// Finds the `(phase, a, b)` with `i^phase E(a,b) = d` by exhaustive search.
pub fn identify_pauli(d: &Dense, m: usize) -> Option<PauliElement> {
    for code in 0..1u64 << (2 * m) {
        let bits = F2Vector::from_fn(2 * m, |i| (code >> i) & 1 == 1);
        for phase in 0..4 {
            let p = PauliElement::new(phase, bits.clone());
            if pauli_matrix(&p).close_to(d) {
                return Some(p);
            }
        }
    }
    None
}

/// `U p U†` computed densely.
pub fn dense_conjugate(gates: &[Gate], p: &PauliElement) -> PauliElement {
    let m = p.m();
    let u = circuit_matrix(gates, m);
    let out = u.mul(&pauli_matrix(p)).mul(&u.dagger());
    identify_pauli(&out, m).expect("Clifford conjugation must give a Pauli")
}

pub fn all_paulis(m: usize) -> Vec<PauliElement> {
    let mut out = Vec::new();
    for code in 0..1u64 << (2 * m) {
        let bits = F2Vector::from_fn(2 * m, |i| (code >> i) & 1 == 1);
        for phase in 0..4 {
            out.push(PauliElement::new(phase, bits.clone()));
        }
    }
    out
}

pub fn all_gates(m: usize) -> Vec<Gate> {
    let mut out = Vec::new();
    for q in 1..=m {
        out.extend([Gate::H(q), Gate::P(q), Gate::X(q), Gate::Y(q), Gate::Z(q)]);
    }
    for a in 1..=m {
        for b in 1..=m {
            if a != b {
                out.push(Gate::Cnot(a, b));
                if a < b {
                    out.extend([Gate::Cz(a, b), Gate::Swap(a, b)]);
                }
            }
        }
    }
    out
}

pub fn random_gate(rng: &mut StdRng, m: usize) -> Gate {
    let q = rng.gen_range(1..=m);
    let kinds = if m == 1 { 5 } else { 8 };
    let mut other = q;
    while m > 1 && other == q {
        other = rng.gen_range(1..=m);
    }
    match rng.gen_range(0..kinds) {
        0 => Gate::H(q),
        1 => Gate::P(q),
        2 => Gate::X(q),
        3 => Gate::Y(q),
        4 => Gate::Z(q),
        5 => Gate::Cnot(q, other),
        6 => Gate::Cz(q, other),
        _ => Gate::Swap(q, other),
    }
}

pub fn random_gates(rng: &mut StdRng, m: usize, len: usize) -> Vec<Gate> {
    (0..len).map(|_| random_gate(rng, m)).collect()
}

pub fn random_vec(rng: &mut StdRng, n: usize) -> F2Vector {
    F2Vector::from_fn(n, |_| rng.gen())
}

pub fn random_symplectic(rng: &mut StdRng, m: usize) -> SympMatrix {
    let mut f = SympMatrix::identity(m);
    for _ in 0..rng.gen_range(0..4 * m + 3) {
        f = f.compose(&transvection(&random_vec(rng, 2 * m)));
    }
    f
}

/// `t` linearly independent random vectors of length `n`.
pub fn random_independent(rng: &mut StdRng, n: usize, t: usize) -> Vec<F2Vector> {
    loop {
        let xs: Vec<_> = (0..t).map(|_| random_vec(rng, n)).collect();
        if F2Matrix::from_rows(xs.clone(), n).unwrap().rank() == t {
            return xs;
        }
    }
}

/// A consistent system `x_i F = y_i` with `F` random.
pub fn random_system(rng: &mut StdRng, m: usize) -> (Vec<F2Vector>, Vec<F2Vector>, SympMatrix) {
    let f = random_symplectic(rng, m);
    let t = rng.gen_range(1..=2 * m);
    let xs = random_independent(rng, 2 * m, t);
    let ys = xs.iter().map(|x| f.apply(x)).collect();
    (xs, ys, f)
}
