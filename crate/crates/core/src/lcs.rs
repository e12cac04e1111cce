//! Logical Clifford synthesis: from a code and a logical target to every
//! physical circuit realizing it.
//!
//! Target table format, one entry per line, `#` starts a comment:
//!
//! ```text
//! x 1 +XZ
//! x 2 +ZX
//! ```
//!
//! `x i P` gives the image of logical `X_i` as a signed `k`-qubit Pauli over
//! the logical operators, `z i P` the image of `Z_i`. Omitted entries map to
//! themselves.

use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::{parse_gates, Circuit, Metric, Metrics};
use crate::clifford::{decompose, lower_to_gates, Decomposition, DecompositionRecord, Gate};
use crate::codes::StabilizerCode;
use crate::error::{Error, Result};
use crate::f2::{F2Matrix, F2Vector};
use crate::pauli::PauliElement;
use crate::symplectic::{
    complete_basis, ConstraintSystem, SolutionCount, SolutionSpace, SympMatrix, DEFAULT_CEILING,
};

/// Images of the logical Paulis under the target Clifford, as signed Paulis
/// on `k` logical qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicalTarget {
    images_x: Vec<PauliElement>,
    images_z: Vec<PauliElement>,
}

impl LogicalTarget {
    pub fn identity(k: usize) -> Self {
        LogicalTarget {
            images_x: (1..=k).map(|i| PauliElement::single(k, i, true, false)).collect(),
            images_z: (1..=k).map(|i| PauliElement::single(k, i, false, true)).collect(),
        }
    }

    pub fn new(images_x: Vec<PauliElement>, images_z: Vec<PauliElement>) -> Result<Self> {
        let k = images_x.len();
        if images_z.len() != k {
            return Err(Error::InconsistentTarget(format!("{k} X images but {} Z images", images_z.len())));
        }
        for (label, p) in labelled(&images_x, &images_z) {
            if p.m() != k {
                return Err(Error::InconsistentTarget(format!("image of {label} acts on {} qubits, expected {k}", p.m())));
            }
            if !p.is_hermitian() {
                return Err(Error::InconsistentTarget(format!("image of {label} is not Hermitian")));
            }
        }
        let t = LogicalTarget { images_x, images_z };
        let all: Vec<_> = labelled(&t.images_x, &t.images_z);
        for a in 0..2 * k {
            for b in a + 1..2 * k {
                let anti = a + k == b;
                if all[a].1.commutes_with(all[b].1) == anti {
                    return Err(Error::InconsistentTarget(format!(
                        "images of {} and {} do not preserve their commutation",
                        all[a].0, all[b].0
                    )));
                }
            }
        }
        Ok(t)
    }

    /// The conjugation table of a `k`-qubit gate sequence.
    pub fn from_gates(k: usize, gates: &[Gate]) -> Result<Self> {
        let circuit = Circuit::from_gates(k, gates.to_vec())?;
        let id = Self::identity(k);
        let conj = |v: &[PauliElement]| v.iter().map(|p| circuit.conjugate(p)).collect::<Result<Vec<_>>>();
        Ok(LogicalTarget { images_x: conj(&id.images_x)?, images_z: conj(&id.images_z)? })
    }

    /// Parses a logical gate list in the circuit text grammar.
    pub fn parse_gates(k: usize, text: &str) -> Result<Self> {
        Self::from_gates(k, &parse_gates(text)?)
    }

    pub fn parse_table(k: usize, text: &str) -> Result<Self> {
        let id = Self::identity(k);
        let mut xs: Vec<Option<PauliElement>> = vec![None; k];
        let mut zs: Vec<Option<PauliElement>> = vec![None; k];
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let [kind, idx, pauli] = line.split_whitespace().collect::<Vec<_>>()[..] else {
                return Err(Error::parse(line_no, "expected `x|z <index> <pauli>`"));
            };
            let i: usize = idx.parse().map_err(|_| Error::parse(line_no, format!("bad index {idx:?}")))?;
            if i == 0 || i > k {
                return Err(Error::parse(line_no, format!("index {i} out of range 1..={k}")));
            }
            let p: PauliElement = pauli.parse().map_err(|e: Error| Error::parse(line_no, e.to_string()))?;
            if p.m() != k {
                return Err(Error::parse(line_no, format!("{pauli} acts on {} qubits, expected {k}", p.m())));
            }
            let slot = match kind {
                "x" | "X" => &mut xs[i - 1],
                "z" | "Z" => &mut zs[i - 1],
                _ => return Err(Error::parse(line_no, format!("unknown entry kind {kind:?}"))),
            };
            if slot.replace(p).is_some() {
                return Err(Error::parse(line_no, format!("duplicate entry for {kind} {i}")));
            }
        }
        let fill = |v: Vec<Option<PauliElement>>, d: &[PauliElement]| {
            v.into_iter().zip(d).map(|(p, d)| p.unwrap_or_else(|| d.clone())).collect()
        };
        Self::new(fill(xs, &id.images_x), fill(zs, &id.images_z))
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        for (i, p) in self.images_x.iter().enumerate() {
            s.push_str(&format!("x {} {p}\n", i + 1));
        }
        for (i, p) in self.images_z.iter().enumerate() {
            s.push_str(&format!("z {} {p}\n", i + 1));
        }
        s
    }

    pub fn k(&self) -> usize {
        self.images_x.len()
    }

    pub fn images_x(&self) -> &[PauliElement] {
        &self.images_x
    }

    pub fn images_z(&self) -> &[PauliElement] {
        &self.images_z
    }
}

fn labelled<'a>(xs: &'a [PauliElement], zs: &'a [PauliElement]) -> Vec<(String, &'a PauliElement)> {
    let xl = xs.iter().enumerate().map(|(i, p)| (format!("X{}", i + 1), p));
    let zl = zs.iter().enumerate().map(|(i, p)| (format!("Z{}", i + 1), p));
    xl.chain(zl).collect()
}

/// Physical operator for a signed logical Pauli: `i^p E(a,b)` becomes
/// `i^{p + a·b} ∏_j X̄_j^{a_j} Z̄_j^{b_j}`.
pub fn lift(code: &StabilizerCode, p: &PauliElement) -> Result<PauliElement> {
    let k = code.k();
    if p.m() != k {
        return Err(Error::DimensionMismatch { expected: k, found: p.m() });
    }
    let ys = (0..k).filter(|&j| p.x(j) && p.z(j)).count() as u8;
    let mut out = PauliElement::identity(code.m()).with_phase(p.phase() + ys);
    for j in 0..k {
        if p.x(j) {
            out = out.multiply(&code.logical_x()[j]);
        }
        if p.z(j) {
            out = out.multiply(&code.logical_z()[j]);
        }
    }
    Ok(out)
}

/// A physical Pauli together with the signed image a circuit must produce.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Expectation {
    pub label: String,
    pub input: PauliElement,
    pub expected: PauliElement,
}

/// Conjugation requirements on the stabilizer generators (`stab j`) and the
/// logical operators (`logx i`, `logz i`).
pub fn expectations(
    code: &StabilizerCode,
    target: &LogicalTarget,
    stab_images: Option<&[PauliElement]>,
) -> Result<Vec<Expectation>> {
    if target.k() != code.k() {
        return Err(Error::InconsistentTarget(format!(
            "target acts on {} logical qubits, code encodes {}",
            target.k(),
            code.k()
        )));
    }
    let stabs = code.stabilizers();
    if let Some(imgs) = stab_images {
        if imgs.len() != stabs.len() {
            return Err(Error::InconsistentTarget(format!(
                "{} stabilizer images for {} generators",
                imgs.len(),
                stabs.len()
            )));
        }
        for (j, p) in imgs.iter().enumerate() {
            if p.m() != code.m() || !p.is_hermitian() {
                return Err(Error::InconsistentTarget(format!("stabilizer image {} is not a Hermitian {}-qubit Pauli", j + 1, code.m())));
            }
        }
    }
    let mut out = Vec::new();
    for (j, s) in stabs.iter().enumerate() {
        let expected = stab_images.map_or_else(|| s.clone(), |imgs| imgs[j].clone());
        out.push(Expectation { label: format!("stab {}", j + 1), input: s.clone(), expected });
    }
    for (i, (l, img)) in code.logical_x().iter().zip(target.images_x()).enumerate() {
        out.push(Expectation { label: format!("logx {}", i + 1), input: l.clone(), expected: lift(code, img)? });
    }
    for (i, (l, img)) in code.logical_z().iter().zip(target.images_z()).enumerate() {
        out.push(Expectation { label: format!("logz {}", i + 1), input: l.clone(), expected: lift(code, img)? });
    }
    Ok(out)
}

/// The linear system on symplectic matrices: `u_i = γ(X̄_i)`, `v_i = γ(Z̄_i)`
/// for `i ≤ k`, `u_{k+j} = γ(S_j)`, completed to a symplectic basis, with
/// every `u` and the first `k` v's constrained.
pub fn assemble(
    code: &StabilizerCode,
    target: &LogicalTarget,
    stab_images: Option<&[PauliElement]>,
) -> Result<ConstraintSystem> {
    let exps = expectations(code, target, stab_images)?;
    let (m, k, r) = (code.m(), code.k(), code.r());
    let pairs: Vec<_> = (0..k)
        .map(|i| (code.logical_x()[i].bits().clone(), code.logical_z()[i].bits().clone()))
        .collect();
    let singles: Vec<_> = code.stabilizers().iter().map(|s| s.bits().clone()).collect();
    let basis = complete_basis(m, &pairs, &singles)?;

    let image = |label: &str| exps.iter().find(|e| e.label == label).unwrap().expected.bits().clone();
    let mut u_images = vec![None; m];
    let mut v_images = vec![None; m];
    for i in 0..k {
        u_images[i] = Some(image(&format!("logx {}", i + 1)));
        v_images[i] = Some(image(&format!("logz {}", i + 1)));
    }
    for j in 0..r {
        u_images[k + j] = Some(image(&format!("stab {}", j + 1)));
    }
    let sys = ConstraintSystem::new(basis, u_images, v_images).map_err(|e| match e {
        Error::IncompatibleInnerProducts { i, j } => Error::InconsistentTarget(format!(
            "images of {} and {} break their commutation",
            constraint_label(i, k, r),
            constraint_label(j, k, r)
        )),
        other => other,
    })?;
    let (_, ys) = sys.pairs();
    let rank = F2Matrix::from_rows(ys.clone(), 2 * m)?.rank();
    if rank < ys.len() {
        return Err(Error::InconsistentTarget("constraint images are linearly dependent".into()));
    }
    Ok(sys)
}

// Order of `ConstraintSystem::pairs`: u_1..u_m (logx 1..k, stab 1..r), then v_1..v_k.
fn constraint_label(n: usize, k: usize, r: usize) -> String {
    if n < k {
        format!("logical X{}", n + 1)
    } else if n < k + r {
        format!("stabilizer {}", n - k + 1)
    } else {
        format!("logical Z{}", n - k - r + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyEntry {
    pub label: String,
    pub input: PauliElement,
    pub expected: PauliElement,
    pub actual: PauliElement,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub entries: Vec<VerifyEntry>,
}

/// Conjugates every expectation's input through the circuit and compares
/// with the signed expected image.
pub fn verify(circuit: &Circuit, exps: &[Expectation]) -> Result<VerifyReport> {
    let entries = exps
        .iter()
        .map(|e| {
            let actual = circuit.conjugate(&e.input)?;
            let ok = actual == e.expected;
            Ok(VerifyEntry { label: e.label.clone(), input: e.input.clone(), expected: e.expected.clone(), actual, ok })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport { ok: entries.iter().all(|e| e.ok), entries })
}

pub fn verify_target(
    circuit: &Circuit,
    code: &StabilizerCode,
    target: &LogicalTarget,
    stab_images: Option<&[PauliElement]>,
) -> Result<VerifyReport> {
    verify(circuit, &expectations(code, target, stab_images)?)
}

/// Largest correction kernel searched exhaustively for a minimum-weight Pauli.
const MAX_CORRECTION_SEARCH: usize = 16;

/// Pauli gates to append so every image gets the expected sign.
///
/// A trailing Pauli `C` negates exactly the images it anticommutes with, so
/// `γ(C)` solves `⟨γ(C), γ(expected_i)⟩ = [sign_i wrong]`. Among the
/// solutions the one of least weight is taken, ties broken lexicographically.
pub fn fix_signs(circuit: &Circuit, exps: &[Expectation]) -> Result<Circuit> {
    let m = circuit.m();
    let mut rows = Vec::with_capacity(exps.len());
    let mut wrong = Vec::with_capacity(exps.len());
    for e in exps {
        let actual = circuit.conjugate(&e.input)?;
        if actual.bits() != e.expected.bits() || (actual.phase() + 4 - e.expected.phase()) % 2 != 0 {
            return Err(Error::NoCorrection);
        }
        rows.push(e.expected.bits().swap_halves());
        wrong.push(actual.phase() != e.expected.phase());
    }
    if !wrong.iter().any(|&w| w) {
        return Ok(Circuit::new(m));
    }
    let sol = F2Matrix::from_rows(rows, 2 * m)?
        .solve_affine(&F2Vector::from_bits(&wrong))
        .map_err(|_| Error::NoCorrection)?;
    let weight = |c: &F2Vector| (0..m).filter(|&q| c.get(q) || c.get(m + q)).count();
    let c = if sol.kernel.len() <= MAX_CORRECTION_SEARCH {
        sol.elements().min_by(|a, b| weight(a).cmp(&weight(b)).then_with(|| a.cmp(b))).unwrap()
    } else {
        sol.particular
    };
    let gates = (0..m)
        .filter_map(|q| match (c.get(q), c.get(m + q)) {
            (true, true) => Some(Gate::Y(q + 1)),
            (true, false) => Some(Gate::X(q + 1)),
            (false, true) => Some(Gate::Z(q + 1)),
            (false, false) => None,
        })
        .collect();
    Circuit::from_gates(m, gates)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    /// Position in enumeration order.
    pub index: usize,
    pub matrix: SympMatrix,
    pub decomposition: Decomposition,
    /// Lowered gates followed by the sign correction.
    pub circuit: Circuit,
    pub correction: Circuit,
    pub metrics: Metrics,
}

impl Solution {
    pub fn to_record(&self) -> SolutionRecord {
        SolutionRecord {
            index: self.index,
            matrix: self.matrix.hex_rows(),
            decomposition: self.decomposition.to_record(),
            gates: self.circuit.gates().to_vec(),
            correction: self.correction.gates().to_vec(),
            metrics: self.metrics.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolutionRecord {
    pub index: usize,
    pub matrix: Vec<String>,
    pub decomposition: DecompositionRecord,
    pub gates: Vec<Gate>,
    pub correction: Vec<Gate>,
    pub metrics: Metrics,
}

/// Builds the verified solution for one symplectic matrix.
pub fn realize(index: usize, f: SympMatrix, exps: &[Expectation]) -> Result<Solution> {
    let decomposition = decompose(&f)?;
    let mut circuit = lower_to_gates(&decomposition)?;
    let correction = fix_signs(&circuit, exps)?;
    circuit.extend(&correction)?;
    if !verify(&circuit, exps)?.ok {
        return Err(Error::NoCorrection);
    }
    let metrics = circuit.metrics();
    Ok(Solution { index, matrix: f, decomposition, circuit, correction, metrics })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthMode {
    All,
    First,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthOptions {
    pub mode: SynthMode,
    pub metric: Option<Metric>,
    pub ceiling: u64,
    /// Required images of the stabilizer generators; each generator is fixed
    /// when absent.
    pub stab_images: Option<Vec<PauliElement>>,
}

impl Default for SynthOptions {
    fn default() -> Self {
        SynthOptions { mode: SynthMode::All, metric: None, ceiling: DEFAULT_CEILING, stab_images: None }
    }
}

/// Every physical realization of `target` on `code`, in enumeration order
/// unless a metric is given.
pub fn synthesize(code: &StabilizerCode, target: &LogicalTarget, options: &SynthOptions) -> Result<Vec<Solution>> {
    let stab_images = options.stab_images.as_deref();
    let sys = assemble(code, target, stab_images)?;
    let exps = expectations(code, target, stab_images)?;
    let space = SolutionSpace::new(&sys)?;
    let matrices: Vec<SympMatrix> = match options.mode {
        SynthMode::First => vec![space.first()],
        SynthMode::All => {
            let count = sys.count();
            if count.exceeds(options.ceiling) {
                return Err(Error::CeilingExceeded { count: count.to_string(), ceiling: options.ceiling });
            }
            space.iter().collect()
        }
    };
    let mut solutions = matrices
        .into_par_iter()
        .enumerate()
        .map(|(i, f)| realize(i, f, &exps))
        .collect::<Result<Vec<_>>>()?;
    if let Some(metric) = &options.metric {
        rank(&mut solutions, metric);
    }
    Ok(solutions)
}

/// Number of realizations without enumerating them.
pub fn count_solutions(
    code: &StabilizerCode,
    target: &LogicalTarget,
    stab_images: Option<&[PauliElement]>,
) -> Result<SolutionCount> {
    Ok(assemble(code, target, stab_images)?.count())
}

/// Stable sort by the metric key; ties keep enumeration order.
pub fn rank(solutions: &mut [Solution], metric: &Metric) {
    solutions.sort_by_cached_key(|s| metric.key(&s.metrics));
}

/// Whether `F` maps every expectation's input to its expected image,
/// ignoring signs.
pub fn satisfies(f: &SympMatrix, exps: &[Expectation]) -> bool {
    exps.iter().all(|e| f.apply(e.input.bits()) == *e.expected.bits())
}
