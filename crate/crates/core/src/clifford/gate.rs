use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2::{F2Matrix, F2Vector};
use crate::pauli::PauliElement;
use crate::symplectic::SympMatrix;

/// An elementary Clifford gate. Qubits are 1-based; `Cnot(c, t)` has control
/// `c` and target `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "GateRecord", try_from = "GateRecord")]
pub enum Gate {
    H(usize),
    P(usize),
    Cnot(usize, usize),
    Cz(usize, usize),
    Swap(usize, usize),
    X(usize),
    Y(usize),
    Z(usize),
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::P(_) => "P",
            Gate::Cnot(..) => "CNOT",
            Gate::Cz(..) => "CZ",
            Gate::Swap(..) => "SWAP",
            Gate::X(_) => "X",
            Gate::Y(_) => "Y",
            Gate::Z(_) => "Z",
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::P(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) => vec![q],
            Gate::Cnot(a, b) | Gate::Cz(a, b) | Gate::Swap(a, b) => vec![a, b],
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cnot(..) | Gate::Cz(..) | Gate::Swap(..))
    }

    pub fn is_pauli(&self) -> bool {
        matches!(self, Gate::X(_) | Gate::Y(_) | Gate::Z(_))
    }

    /// Builds a gate from its name (`H`, `P`/`S`, `CNOT`/`CX`, `CZ`, `SWAP`,
    /// `X`, `Y`, `Z`, any case) and 1-based qubits.
    pub fn from_parts(name: &str, qubits: &[usize]) -> Result<Gate> {
        let upper = name.to_ascii_uppercase();
        let bad = || Error::parse(0, format!("gate {name} takes a different number of qubits"));
        let one = || match qubits {
            [q] => Ok(*q),
            _ => Err(bad()),
        };
        let two = || match qubits {
            [a, b] => Ok((*a, *b)),
            _ => Err(bad()),
        };
        let g = match upper.as_str() {
            "H" => Gate::H(one()?),
            "P" | "S" => Gate::P(one()?),
            "X" => Gate::X(one()?),
            "Y" => Gate::Y(one()?),
            "Z" => Gate::Z(one()?),
            "CNOT" | "CX" => {
                let (a, b) = two()?;
                Gate::Cnot(a, b)
            }
            "CZ" => {
                let (a, b) = two()?;
                Gate::Cz(a, b)
            }
            "SWAP" => {
                let (a, b) = two()?;
                Gate::Swap(a, b)
            }
            _ => return Err(Error::parse(0, format!("unknown gate {name:?}"))),
        };
        Ok(g)
    }

    pub fn check(&self, m: usize) -> Result<()> {
        let qs = self.qubits();
        for &q in &qs {
            if q == 0 || q > m {
                return Err(Error::QubitOutOfRange { qubit: q, m });
            }
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::RepeatedQubit(qs[0]));
        }
        Ok(())
    }

    /// Replaces `p` by `g p g†`. Qubits must already be in range.
    pub(crate) fn conjugate_in_place(&self, p: &mut PauliElement) {
        let m = p.m();
        let (phase, bits) = p.parts_mut();
        let x = |b: &F2Vector, q: usize| b.get(q - 1);
        let z = |b: &F2Vector, q: usize| b.get(m + q - 1);
        let flip = match *self {
            Gate::H(q) => {
                let (xq, zq) = (x(bits, q), z(bits, q));
                bits.set(q - 1, zq);
                bits.set(m + q - 1, xq);
                xq && zq
            }
            Gate::P(q) => {
                let (xq, zq) = (x(bits, q), z(bits, q));
                bits.set(m + q - 1, zq ^ xq);
                xq && zq
            }
            Gate::X(q) => z(bits, q),
            Gate::Z(q) => x(bits, q),
            Gate::Y(q) => x(bits, q) ^ z(bits, q),
            Gate::Cnot(c, t) => {
                let (xc, zc, xt, zt) = (x(bits, c), z(bits, c), x(bits, t), z(bits, t));
                bits.set(t - 1, xt ^ xc);
                bits.set(m + c - 1, zc ^ zt);
                xc && zt && !(xt ^ zc)
            }
            Gate::Cz(a, b) => {
                let (xa, za, xb, zb) = (x(bits, a), z(bits, a), x(bits, b), z(bits, b));
                bits.set(m + a - 1, za ^ xb);
                bits.set(m + b - 1, zb ^ xa);
                xa && xb && (za ^ zb)
            }
            Gate::Swap(a, b) => {
                let (xa, za, xb, zb) = (x(bits, a), z(bits, a), x(bits, b), z(bits, b));
                bits.set(a - 1, xb);
                bits.set(b - 1, xa);
                bits.set(m + a - 1, zb);
                bits.set(m + b - 1, za);
                false
            }
        };
        if flip {
            *phase = (*phase + 2) % 4;
        }
    }

    /// `x F_g`, the action on a bare symplectic vector.
    pub(crate) fn act_on_bits(&self, bits: &mut F2Vector) {
        let mut p = PauliElement::new(0, std::mem::take(bits));
        self.conjugate_in_place(&mut p);
        *bits = p.bits().clone();
    }

    /// The symplectic matrix of the gate on `m` qubits.
    pub fn symplectic(&self, m: usize) -> Result<SympMatrix> {
        self.check(m)?;
        let rows = (0..2 * m)
            .map(|i| {
                let mut e = F2Vector::unit(2 * m, i);
                self.act_on_bits(&mut e);
                e
            })
            .collect();
        Ok(SympMatrix::new_unchecked(F2Matrix::from_rows(rows, 2 * m)?))
    }
}

/// `g p g†`, sign included.
pub fn conjugate(g: &Gate, p: &PauliElement) -> Result<PauliElement> {
    g.check(p.m())?;
    let mut out = p.clone();
    g.conjugate_in_place(&mut out);
    Ok(out)
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        for q in self.qubits() {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct GateRecord {
    kind: String,
    qubits: Vec<usize>,
}

impl From<Gate> for GateRecord {
    fn from(g: Gate) -> Self {
        GateRecord { kind: g.name().to_string(), qubits: g.qubits() }
    }
}

impl TryFrom<GateRecord> for Gate {
    type Error = Error;

    fn try_from(r: GateRecord) -> Result<Gate> {
        Gate::from_parts(&r.kind, &r.qubits)
    }
}
