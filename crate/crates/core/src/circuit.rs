//! Gate lists, cost metrics, ranking keys and serialization.
//!
//! Text grammar: gates separated by newlines or `;`, each a name followed by
//! 1-based qubit indices (`CZ 2 3`). `#` starts a comment.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::clifford::Gate;
use crate::error::{Error, Result};
use crate::pauli::PauliElement;
use crate::symplectic::SympMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Circuit {
    m: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(m: usize) -> Self {
        Circuit { m, gates: Vec::new() }
    }

    pub fn from_gates(m: usize, gates: Vec<Gate>) -> Result<Self> {
        for g in &gates {
            g.check(m)?;
        }
        Ok(Circuit { m, gates })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, g: Gate) -> Result<()> {
        g.check(self.m)?;
        self.gates.push(g);
        Ok(())
    }

    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        if other.m != self.m {
            return Err(Error::DimensionMismatch { expected: self.m, found: other.m });
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    /// `F_{g1} F_{g2} ⋯ F_{gn}` for gates applied in list order.
    pub fn symplectic(&self) -> SympMatrix {
        let n = 2 * self.m;
        let rows = (0..n)
            .map(|i| {
                let mut e = crate::f2::F2Vector::unit(n, i);
                for g in &self.gates {
                    g.act_on_bits(&mut e);
                }
                e
            })
            .collect();
        SympMatrix::new_unchecked(crate::f2::F2Matrix::from_rows(rows, n).unwrap())
    }

    /// `U p U†` for `U = g_n ⋯ g_1`.
    pub fn conjugate(&self, p: &PauliElement) -> Result<PauliElement> {
        if p.m() != self.m {
            return Err(Error::DimensionMismatch { expected: self.m, found: p.m() });
        }
        let mut out = p.clone();
        for g in &self.gates {
            g.conjugate_in_place(&mut out);
        }
        Ok(out)
    }

    pub fn metrics(&self) -> Metrics {
        let mut level = vec![0usize; self.m + 1];
        let mut level2 = vec![0usize; self.m + 1];
        let mut two_qubit_count = 0;
        let mut touched = BTreeSet::new();
        for g in &self.gates {
            let qs = g.qubits();
            touched.extend(qs.iter().copied());
            let layer = qs.iter().map(|&q| level[q]).max().unwrap() + 1;
            for &q in &qs {
                level[q] = layer;
            }
            if g.is_two_qubit() {
                two_qubit_count += 1;
                let layer = qs.iter().map(|&q| level2[q]).max().unwrap() + 1;
                for &q in &qs {
                    level2[q] = layer;
                }
            }
        }
        Metrics {
            depth: level.into_iter().max().unwrap_or(0),
            two_qubit_depth: level2.into_iter().max().unwrap_or(0),
            two_qubit_count,
            total_gates: self.gates.len(),
            qubits_touched: touched,
        }
    }

    /// Parses the text grammar for an `m`-qubit register.
    pub fn parse(m: usize, text: &str) -> Result<Self> {
        let gates = parse_gates(text)?;
        for (i, g) in gates.iter().enumerate() {
            g.check(m).map_err(|e| Error::parse(i + 1, format!("gate {}: {e}", i + 1)))?;
        }
        Ok(Circuit { m, gates })
    }

    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Text => self.gates.iter().map(|g| format!("{g}\n")).collect(),
            Format::Json => {
                let value = CircuitRecord { m: self.m, gates: &self.gates, metrics: self.metrics() };
                serde_json::to_string_pretty(&value).unwrap() + "\n"
            }
            Format::Qasm => {
                let mut s = format!("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[{}];\n", self.m);
                for g in &self.gates {
                    let name = match g {
                        Gate::H(_) => "h",
                        Gate::P(_) => "s",
                        Gate::Cnot(..) => "cx",
                        Gate::Cz(..) => "cz",
                        Gate::Swap(..) => "swap",
                        Gate::X(_) => "x",
                        Gate::Y(_) => "y",
                        Gate::Z(_) => "z",
                    };
                    let args: Vec<String> = g.qubits().iter().map(|q| format!("q[{}]", q - 1)).collect();
                    s.push_str(&format!("{name} {};\n", args.join(",")));
                }
                s
            }
        }
    }
}

/// Gate list in the text grammar, without a register size.
pub fn parse_gates(text: &str) -> Result<Vec<Gate>> {
    let mut gates = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap();
        let mut name: Option<&str> = None;
        let mut qubits = Vec::new();
        let mut finish = |name: &mut Option<&str>, qubits: &mut Vec<usize>| -> Result<()> {
            if let Some(nm) = name.take() {
                let g = Gate::from_parts(nm, qubits).map_err(|e| match e {
                    Error::Parse { msg, .. } => Error::parse(line_no, msg),
                    other => other,
                })?;
                gates.push(g);
            }
            qubits.clear();
            Ok(())
        };
        for tok in line.split(|c: char| c.is_whitespace() || c == ';' || c == ',') {
            if tok.is_empty() {
                continue;
            }
            if tok.chars().all(|c| c.is_ascii_digit()) {
                if name.is_none() {
                    return Err(Error::parse(line_no, format!("qubit index {tok} without a gate name")));
                }
                let q = tok.parse().map_err(|_| Error::parse(line_no, format!("bad qubit index {tok}")))?;
                qubits.push(q);
            } else {
                finish(&mut name, &mut qubits)?;
                name = Some(tok);
            }
        }
        finish(&mut name, &mut qubits)?;
    }
    Ok(gates)
}

#[derive(Serialize)]
struct CircuitRecord<'a> {
    m: usize,
    gates: &'a [Gate],
    metrics: Metrics,
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.gates.iter().map(Gate::to_string).collect();
        write!(f, "{}", parts.join("; "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Qasm,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "qasm" => Ok(Format::Qasm),
            _ => Err(Error::parse(0, format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Metrics {
    /// Greedy ASAP layering; every gate occupies one slot on each of its qubits.
    pub depth: usize,
    /// The same layering restricted to two-qubit gates.
    pub two_qubit_depth: usize,
    pub two_qubit_count: usize,
    pub total_gates: usize,
    pub qubits_touched: BTreeSet<usize>,
}

/// Ranking criteria. Each metric maps a solution to a key compared
/// lexicographically, smaller first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Metric {
    /// Depth, then two-qubit count.
    Depth,
    /// Two-qubit depth, then two-qubit count.
    TwoQubitDepth,
    TwoQubitCount,
    TotalGates,
    /// Number of listed qubits touched, then two-qubit count.
    AvoidQubits(BTreeSet<usize>),
    Lexicographic(Vec<Metric>),
}

impl Metric {
    pub fn key(&self, m: &Metrics) -> Vec<usize> {
        match self {
            Metric::Depth => vec![m.depth, m.two_qubit_count],
            Metric::TwoQubitDepth => vec![m.two_qubit_depth, m.two_qubit_count],
            Metric::TwoQubitCount => vec![m.two_qubit_count],
            Metric::TotalGates => vec![m.total_gates],
            Metric::AvoidQubits(set) => vec![m.qubits_touched.intersection(set).count(), m.two_qubit_count],
            Metric::Lexicographic(list) => list.iter().flat_map(|x| x.key(m)).collect(),
        }
    }
}

impl FromStr for Metric {
    type Err = Error;

    /// `depth`, `two-qubit-depth`, `two-qubit`, `total`, `avoid:1,2`, or
    /// several joined with `+`.
    fn from_str(s: &str) -> Result<Self> {
        if s.contains('+') {
            let parts = s.split('+').map(str::parse).collect::<Result<Vec<_>>>()?;
            return Ok(Metric::Lexicographic(parts));
        }
        match s.trim() {
            "depth" => Ok(Metric::Depth),
            "two-qubit-depth" => Ok(Metric::TwoQubitDepth),
            "two-qubit" => Ok(Metric::TwoQubitCount),
            "total" => Ok(Metric::TotalGates),
            other => {
                let list = other
                    .strip_prefix("avoid:")
                    .ok_or_else(|| Error::parse(0, format!("unknown metric {other:?}")))?;
                let set = list
                    .split(',')
                    .map(|q| q.trim().parse().map_err(|_| Error::parse(0, format!("bad qubit {q:?} in metric"))))
                    .collect::<Result<BTreeSet<usize>>>()?;
                Ok(Metric::AvoidQubits(set))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(m: usize, s: &str) -> Circuit {
        Circuit::parse(m, s).unwrap()
    }

    #[test]
    fn empty_metrics() {
        let m = Circuit::new(3).metrics();
        assert_eq!((m.depth, m.two_qubit_count, m.total_gates), (0, 0, 0));
        assert!(m.qubits_touched.is_empty());
    }

    #[test]
    fn cz_triangle_metrics() {
        let m = c(6, "CZ 2 3\nCZ 2 6\nCZ 3 6").metrics();
        assert_eq!((m.depth, m.two_qubit_depth, m.two_qubit_count), (3, 3, 3));
        assert_eq!(m.qubits_touched, BTreeSet::from([2, 3, 6]));
    }

    #[test]
    fn depth_counts_single_qubit_layers() {
        let m = c(3, "H 1; H 2; CZ 1 2; P 3").metrics();
        assert_eq!(m.depth, 2);
        assert_eq!(m.two_qubit_depth, 1);
        assert_eq!(m.total_gates, 4);
    }

    #[test]
    fn text_round_trip() {
        let circ = c(4, "# header\nH 1\ncx 1 2 ; S 3\nSWAP 3 4\nCZ 1 4  # tail\nX 1\nY 2\nZ 3\n");
        assert_eq!(circ.emit(Format::Text), "H 1\nCNOT 1 2\nP 3\nSWAP 3 4\nCZ 1 4\nX 1\nY 2\nZ 3\n");
        assert_eq!(Circuit::parse(4, &circ.emit(Format::Text)).unwrap(), circ);
        assert_eq!(c(6, "Z 6").emit(Format::Text), "Z 6\n");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Circuit::parse(2, "H 1\nCZ 1 3"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(Circuit::parse(2, "1 2"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(Circuit::parse(2, "T 1"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn qasm_output() {
        let q = c(6, "CZ 2 3\nZ 6").emit(Format::Qasm);
        assert_eq!(q, "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[6];\ncz q[1],q[2];\nz q[5];\n");
    }

    #[test]
    fn json_output() {
        let j: serde_json::Value = serde_json::from_str(&c(2, "CNOT 1 2").emit(Format::Json)).unwrap();
        assert_eq!(j["m"], 2);
        assert_eq!(j["gates"][0]["kind"], "CNOT");
        assert_eq!(j["gates"][0]["qubits"], serde_json::json!([1, 2]));
        assert_eq!(j["metrics"]["two_qubit_count"], 1);
        assert_eq!(j["metrics"]["qubits_touched"], serde_json::json!([1, 2]));
    }

    #[test]
    fn metric_parsing_and_keys() {
        assert_eq!("depth".parse::<Metric>().unwrap(), Metric::Depth);
        assert_eq!("avoid:1,3".parse::<Metric>().unwrap(), Metric::AvoidQubits(BTreeSet::from([1, 3])));
        assert_eq!(
            "two-qubit+total".parse::<Metric>().unwrap(),
            Metric::Lexicographic(vec![Metric::TwoQubitCount, Metric::TotalGates])
        );
        assert!("fast".parse::<Metric>().is_err());
        let m = c(4, "CZ 1 2\nCZ 3 4\nH 1").metrics();
        assert_eq!(Metric::AvoidQubits(BTreeSet::from([1])).key(&m), vec![1, 2]);
        assert_eq!(Metric::Depth.key(&m), vec![2, 2]);
    }

    #[test]
    fn composition_order() {
        // H then P: X -> Z -> Z, while P then H: X -> Y -> -Y.
        let x: PauliElement = "X".parse().unwrap();
        assert_eq!(c(1, "H 1; P 1").conjugate(&x).unwrap(), "Z".parse().unwrap());
        assert_eq!(c(1, "P 1; H 1").conjugate(&x).unwrap(), "-Y".parse().unwrap());
        let f = c(2, "H 1; CNOT 1 2").symplectic();
        let g = crate::clifford::Gate::H(1).symplectic(2).unwrap().compose(&crate::clifford::Gate::Cnot(1, 2).symplectic(2).unwrap());
        assert_eq!(f, g);
    }
}
