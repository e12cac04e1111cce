//! Phase-tracked Pauli operators.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2::F2Vector;
use crate::symplectic::inner;

/// `i^phase · E(a, b)` with `E(a, b) = ⊗_j σ(a_j, b_j)`, where
/// `σ(1,0) = X`, `σ(0,1) = Z` and `σ(1,1) = Y`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliElement {
    phase: u8,
    bits: F2Vector,
}

/// Exponent of `i` picked up when multiplying single-qubit Paulis
/// `σ(x1,z1) σ(x2,z2)`.
fn g(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    let (x2, z2) = (x2 as i32, z2 as i32);
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2 - x2,
        (true, false) => z2 * (2 * x2 - 1),
        (false, true) => x2 * (1 - 2 * z2),
    }
}

impl PauliElement {
    /// `bits` is `[a, b]` of even length.
    pub fn new(phase: u8, bits: F2Vector) -> Self {
        assert!(bits.len().is_multiple_of(2), "Pauli bit vector must have even length");
        PauliElement { phase: phase % 4, bits }
    }

    pub fn from_xz(phase: u8, x: &F2Vector, z: &F2Vector) -> Self {
        assert_eq!(x.len(), z.len());
        Self::new(phase, x.concat(z))
    }

    pub fn identity(m: usize) -> Self {
        Self::new(0, F2Vector::zeros(2 * m))
    }

    /// Single-qubit operator on qubit `q` (1-based) of an `m`-qubit register.
    pub fn single(m: usize, q: usize, x: bool, z: bool) -> Self {
        let mut p = Self::identity(m);
        p.bits.set(q - 1, x);
        p.bits.set(m + q - 1, z);
        p
    }

    pub fn m(&self) -> usize {
        self.bits.len() / 2
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn bits(&self) -> &F2Vector {
        &self.bits
    }

    pub fn x(&self, q: usize) -> bool {
        self.bits.get(q)
    }

    pub fn z(&self, q: usize) -> bool {
        self.bits.get(self.m() + q)
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut u8, &mut F2Vector) {
        (&mut self.phase, &mut self.bits)
    }

    pub fn with_phase(&self, phase: u8) -> Self {
        Self::new(phase, self.bits.clone())
    }

    pub fn negate(&self) -> Self {
        self.with_phase(self.phase + 2)
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_multiple_of(2)
    }

    pub fn weight(&self) -> usize {
        (0..self.m()).filter(|&q| self.x(q) || self.z(q)).count()
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        !inner(&self.bits, &other.bits)
    }

    pub fn multiply(&self, other: &Self) -> Self {
        assert_eq!(self.m(), other.m(), "Pauli operators on different registers");
        let m = self.m();
        let s: i32 = (0..m).map(|q| g(self.x(q), self.z(q), other.x(q), other.z(q))).sum();
        let phase = (self.phase as i32 + other.phase as i32 + s).rem_euclid(4) as u8;
        Self::new(phase, &self.bits ^ &other.bits)
    }

    /// `+`, `-`, `+i` or `-i`.
    pub fn sign_str(&self) -> &'static str {
        ["+", "+i", "-", "-i"][self.phase as usize]
    }

    pub fn letters(&self) -> String {
        (0..self.m())
            .map(|q| match (self.x(q), self.z(q)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            })
            .collect()
    }
}

impl fmt::Display for PauliElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.sign_str(), self.letters())
    }
}

impl fmt::Debug for PauliElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PauliElement {
    type Err = Error;

    /// `sign? [IXYZ]+`, sign one of `+`, `-`, `+i`, `-i`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let split = s.find(|c: char| c.is_ascii_alphabetic() && c != 'i').unwrap_or(s.len());
        let (sign, body) = s.split_at(split);
        let phase = match sign {
            "" | "+" => 0,
            "+i" => 1,
            "-" => 2,
            "-i" => 3,
            other => return Err(Error::BadSign(other.to_string())),
        };
        if body.is_empty() {
            return Err(Error::BadCharacter { ch: ' ', pos: s.len() });
        }
        let m = body.chars().count();
        let mut bits = F2Vector::zeros(2 * m);
        for (q, ch) in body.chars().enumerate() {
            let (x, z) = match ch {
                'I' => (false, false),
                'X' => (true, false),
                'Y' => (true, true),
                'Z' => (false, true),
                _ => return Err(Error::BadCharacter { ch, pos: split + q }),
            };
            bits.set(q, x);
            bits.set(m + q, z);
        }
        Ok(PauliElement { phase, bits })
    }
}

impl Serialize for PauliElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
