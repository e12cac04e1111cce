//! Stabilizer codes: definition, validation, builtins and text format.
//!
//! Text format, one directive per line, `#` starts a comment:
//!
//! ```text
//! 4 2
//! stab XXXX
//! stab ZZZZ
//! logx XXII
//! logx XIXI
//! logz IZIZ
//! logz IIZZ
//! ```
//!
//! The header gives `m k`. `logx` and `logz` lines are paired by order.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::f2::F2Matrix;
use crate::pauli::PauliElement;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    WrongLength { what: String, expected: usize, found: usize },
    NotHermitian(String),
    AnticommutingStabilizers { i: usize, j: usize },
    DependentStabilizers,
    WrongStabilizerCount { expected: usize, found: usize },
    WrongLogicalCount { expected: usize, found_x: usize, found_z: usize },
    LogicalAnticommutesWithStabilizer { logical: String, stabilizer: usize },
    LogicalRelation { a: String, b: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongLength { what, expected, found } => {
                write!(f, "{what} acts on {found} qubits, expected {expected}")
            }
            Violation::NotHermitian(what) => write!(f, "{what} is not Hermitian"),
            Violation::AnticommutingStabilizers { i, j } => write!(f, "stabilizers {i} and {j} anticommute"),
            Violation::DependentStabilizers => write!(f, "stabilizer generators are dependent"),
            Violation::WrongStabilizerCount { expected, found } => {
                write!(f, "{found} stabilizer generators, expected m - k = {expected}")
            }
            Violation::WrongLogicalCount { expected, found_x, found_z } => {
                write!(f, "{found_x} logical X and {found_z} logical Z operators, expected {expected} each")
            }
            Violation::LogicalAnticommutesWithStabilizer { logical, stabilizer } => {
                write!(f, "{logical} anticommutes with stabilizer {stabilizer}")
            }
            Violation::LogicalRelation { a, b } => write!(f, "{a} and {b} have the wrong commutation relation"),
        }
    }
}

/// An `[[m, k]]` stabilizer code with a chosen logical basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerCode {
    name: Option<String>,
    m: usize,
    k: usize,
    stabilizers: Vec<PauliElement>,
    logical_x: Vec<PauliElement>,
    logical_z: Vec<PauliElement>,
}

pub const BUILTIN_NAMES: &[&str] = &["211", "422", "513", "642"];

impl StabilizerCode {
    pub fn new(
        m: usize,
        k: usize,
        stabilizers: Vec<PauliElement>,
        logical_x: Vec<PauliElement>,
        logical_z: Vec<PauliElement>,
    ) -> Result<Self> {
        let code = StabilizerCode { name: None, m, k, stabilizers, logical_x, logical_z };
        let violations = code.validate();
        if violations.is_empty() {
            Ok(code)
        } else {
            Err(Error::InvalidCode(violations))
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn builtin(name: &str) -> Result<Self> {
        let (m, k, stabs, lx, lz): (usize, usize, &[&str], &[&str], &[&str]) = match name {
            "211" => (2, 1, &["ZZ"], &["XX"], &["ZI"]),
            "422" => (4, 2, &["XXXX", "ZZZZ"], &["XXII", "XIXI"], &["IZIZ", "IIZZ"]),
            "513" => (5, 1, &["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"], &["XXXXX"], &["ZZZZZ"]),
            "642" => (
                6,
                4,
                &["XXXXXX", "ZZZZZZ"],
                &["XXIIII", "XIXIII", "XIIXII", "XIIIXI"],
                &["IZIIIZ", "IIZIIZ", "IIIZIZ", "IIIIZZ"],
            ),
            _ => return Err(Error::UnknownCode(name.to_string())),
        };
        let parse = |v: &[&str]| v.iter().map(|s| s.parse().unwrap()).collect();
        Ok(Self::new(m, k, parse(stabs), parse(lx), parse(lz))?.with_name(name))
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of stabilizer generators, `m - k`.
    pub fn r(&self) -> usize {
        self.m - self.k
    }

    pub fn stabilizers(&self) -> &[PauliElement] {
        &self.stabilizers
    }

    pub fn logical_x(&self) -> &[PauliElement] {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &[PauliElement] {
        &self.logical_z
    }

    /// Every defect of the code data; empty when the code is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let labelled: Vec<(String, &PauliElement)> = self
            .stabilizers
            .iter()
            .enumerate()
            .map(|(i, s)| (format!("stabilizer {}", i + 1), s))
            .chain(self.logical_x.iter().enumerate().map(|(i, s)| (format!("logical X{}", i + 1), s)))
            .chain(self.logical_z.iter().enumerate().map(|(i, s)| (format!("logical Z{}", i + 1), s)))
            .collect();
        for (what, p) in &labelled {
            if p.m() != self.m {
                out.push(Violation::WrongLength { what: what.clone(), expected: self.m, found: p.m() });
            }
            if !p.is_hermitian() {
                out.push(Violation::NotHermitian(what.clone()));
            }
        }
        if self.k > self.m {
            out.push(Violation::WrongStabilizerCount { expected: 0, found: self.stabilizers.len() });
            return out;
        }
        if self.stabilizers.len() != self.r() {
            out.push(Violation::WrongStabilizerCount { expected: self.r(), found: self.stabilizers.len() });
        }
        if self.logical_x.len() != self.k || self.logical_z.len() != self.k {
            out.push(Violation::WrongLogicalCount {
                expected: self.k,
                found_x: self.logical_x.len(),
                found_z: self.logical_z.len(),
            });
        }
        if !out.is_empty() {
            return out;
        }

        let s = &self.stabilizers;
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                if !s[i].commutes_with(&s[j]) {
                    out.push(Violation::AnticommutingStabilizers { i: i + 1, j: j + 1 });
                }
            }
        }
        if !s.is_empty() {
            let rows = s.iter().map(|p| p.bits().clone()).collect();
            if F2Matrix::from_rows(rows, 2 * self.m).unwrap().rank() < s.len() {
                out.push(Violation::DependentStabilizers);
            }
        }
        let logicals: Vec<(String, &PauliElement)> = labelled[s.len()..].to_vec();
        for (what, l) in &logicals {
            for (j, st) in s.iter().enumerate() {
                if !l.commutes_with(st) {
                    out.push(Violation::LogicalAnticommutesWithStabilizer { logical: what.clone(), stabilizer: j + 1 });
                }
            }
        }
        let k = self.k;
        for a in 0..2 * k {
            for b in a + 1..2 * k {
                let expect_anti = a + k == b;
                if logicals[a].1.commutes_with(logicals[b].1) == expect_anti {
                    out.push(Violation::LogicalRelation { a: logicals[a].0.clone(), b: logicals[b].0.clone() });
                }
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let (mut stabs, mut lx, mut lz) = (Vec::new(), Vec::new(), Vec::new());
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            if header.is_none() {
                let [m, k] = words[..] else {
                    return Err(Error::parse(line_no, "expected header `m k`"));
                };
                let m = m.parse().map_err(|_| Error::parse(line_no, format!("bad m {m:?}")))?;
                let k = k.parse().map_err(|_| Error::parse(line_no, format!("bad k {k:?}")))?;
                header = Some((m, k));
                continue;
            }
            let [kind, pauli] = words[..] else {
                return Err(Error::parse(line_no, "expected `stab|logx|logz <pauli>`"));
            };
            let p: PauliElement = pauli.parse().map_err(|e: Error| Error::parse(line_no, e.to_string()))?;
            match kind {
                "stab" => stabs.push(p),
                "logx" => lx.push(p),
                "logz" => lz.push(p),
                other => return Err(Error::parse(line_no, format!("unknown directive {other:?}"))),
            }
        }
        let (m, k) = header.ok_or_else(|| Error::parse(0, "empty code file"))?;
        Self::new(m, k, stabs, lx, lz)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.m, self.k);
        for p in &self.stabilizers {
            s.push_str(&format!("stab {p}\n"));
        }
        for p in &self.logical_x {
            s.push_str(&format!("logx {p}\n"));
        }
        for p in &self.logical_z {
            s.push_str(&format!("logz {p}\n"));
        }
        s
    }
}
