//! Symplectic geometry on `F2^{2m}`.
//!
//! Vectors `[a, b]` hold the X part `a` in the first `m` bits and the Z part
//! `b` in the last `m`. Matrices act on row vectors from the right, so a
//! symplectic `F` sends `x` to `x F` and satisfies `F Ω Fᵀ = Ω` with
//! `Ω = [[0, I], [I, 0]]`.

use std::fmt;

use crate::error::{Error, Result};
use crate::f2::{AffineSolution, F2Matrix, F2Vector, RowReduction};

/// Default refusal threshold for full enumeration.
pub const DEFAULT_CEILING: u64 = 1 << 20;

/// The symplectic inner product `x Ω yᵀ = a'bᵀ + b'aᵀ`.
pub fn symp_inner(x: &F2Vector, y: &F2Vector) -> Result<bool> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), found: y.len() });
    }
    if !x.len().is_multiple_of(2) {
        return Err(Error::DimensionMismatch { expected: x.len() + 1, found: x.len() });
    }
    Ok(inner(x, y))
}

#[inline]
pub(crate) fn inner(x: &F2Vector, y: &F2Vector) -> bool {
    let m = x.len() / 2;
    x.iter_ones().fold(false, |acc, i| acc ^ y.get(if i < m { i + m } else { i - m }))
}

pub fn omega(m: usize) -> F2Matrix {
    F2Matrix::from_fn(2 * m, 2 * m, |i, j| i + m == j || j + m == i)
}

/// Tests `F Ω Fᵀ = Ω` directly on the rows of `f`.
pub fn is_symplectic(f: &F2Matrix) -> bool {
    if !f.is_square() || !f.nrows().is_multiple_of(2) {
        return false;
    }
    let m = f.nrows() / 2;
    let rows = f.rows();
    (0..2 * m).all(|i| (i..2 * m).all(|j| inner(&rows[i], &rows[j]) == (i + m == j)))
}

/// A `2m × 2m` binary symplectic matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SympMatrix {
    m: usize,
    f: F2Matrix,
}

impl SympMatrix {
    pub fn new(f: F2Matrix) -> Result<Self> {
        if !is_symplectic(&f) {
            return Err(Error::NotSymplectic);
        }
        Ok(SympMatrix { m: f.nrows() / 2, f })
    }

    pub(crate) fn new_unchecked(f: F2Matrix) -> Self {
        debug_assert!(is_symplectic(&f), "expected a symplectic matrix:\n{f}");
        SympMatrix { m: f.nrows() / 2, f }
    }

    pub fn identity(m: usize) -> Self {
        SympMatrix { m, f: F2Matrix::identity(2 * m) }
    }

    pub fn omega(m: usize) -> Self {
        SympMatrix { m, f: omega(m) }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn matrix(&self) -> &F2Matrix {
        &self.f
    }

    pub fn into_matrix(self) -> F2Matrix {
        self.f
    }

    pub fn is_identity(&self) -> bool {
        self.f.is_identity()
    }

    /// `x F`.
    pub fn apply(&self, x: &F2Vector) -> F2Vector {
        self.f.left_mul(x)
    }

    pub fn compose(&self, other: &SympMatrix) -> SympMatrix {
        assert_eq!(self.m, other.m);
        SympMatrix { m: self.m, f: &self.f * &other.f }
    }

    /// `F⁻¹ = Ω Fᵀ Ω`.
    pub fn inverse(&self) -> SympMatrix {
        let o = omega(self.m);
        SympMatrix { m: self.m, f: &(&o * &self.f.transpose()) * &o }
    }

    /// The `m × m` blocks `(A, B, C, D)` of `[[A, B], [C, D]]`.
    pub fn blocks(&self) -> (F2Matrix, F2Matrix, F2Matrix, F2Matrix) {
        let m = self.m;
        (
            self.f.block(0, 0, m, m),
            self.f.block(0, m, m, m),
            self.f.block(m, 0, m, m),
            self.f.block(m, m, m, m),
        )
    }

    /// Right-multiplies by the transvection `F_h` in place.
    pub(crate) fn apply_transvection(&mut self, h: &F2Vector) {
        let rows: Vec<F2Vector> = self
            .f
            .rows()
            .iter()
            .map(|r| if inner(r, h) { r ^ h } else { r.clone() })
            .collect();
        self.f = F2Matrix::from_rows(rows, 2 * self.m).unwrap();
    }

    pub fn hex_rows(&self) -> Vec<String> {
        self.f.rows().iter().map(F2Vector::to_hex).collect()
    }
}

impl fmt::Debug for SympMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SympMatrix(m = {}) {:?}", self.m, self.f)
    }
}

impl fmt::Display for SympMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.f, f)
    }
}

/// The transvection matrix `F_h = I + Ω hᵀ h`, i.e. `x ↦ x + ⟨x,h⟩ h`.
pub fn transvection(h: &F2Vector) -> SympMatrix {
    assert!(h.len().is_multiple_of(2));
    let n = h.len();
    let hs = h.swap_halves();
    let f = F2Matrix::from_fn(n, n, |i, j| (i == j) ^ (hs.get(i) & h.get(j)));
    SympMatrix::new_unchecked(f)
}

fn check_len(v: &F2Vector, n: usize) -> Result<()> {
    if v.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: v.len() });
    }
    Ok(())
}

/// Smallest `w` (bit 0 most significant) with `⟨c_i, w⟩ = target_i`.
fn lex_min_with_inner_products(constraints: &[&F2Vector], target: &[bool], n: usize) -> Result<F2Vector> {
    let rows = constraints.iter().map(|c| c.swap_halves()).collect();
    let a = F2Matrix::from_rows(rows, n)?;
    a.solve_lex_min(&F2Vector::from_bits(target))
}

/// Transvection vectors `h` whose matrices, applied in order, send `x` to `y`.
pub fn map_vector(x: &F2Vector, y: &F2Vector) -> Result<Vec<F2Vector>> {
    check_len(y, x.len())?;
    symp_inner(x, y)?;
    if x.is_zero() || y.is_zero() {
        return Err(Error::ZeroVector);
    }
    if x == y {
        return Ok(Vec::new());
    }
    if inner(x, y) {
        return Ok(vec![x ^ y]);
    }
    let w = lex_min_with_inner_products(&[x, y], &[true, true], x.len())?;
    Ok(vec![&w ^ y, x ^ &w])
}

fn check_compatible(xs: &[F2Vector], ys: &[F2Vector]) -> Result<()> {
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            if inner(&xs[i], &xs[j]) != inner(&ys[i], &ys[j]) {
                return Err(Error::IncompatibleInnerProducts { i, j });
            }
        }
    }
    Ok(())
}

fn independent(vs: &[F2Vector], n: usize) -> bool {
    vs.is_empty() || F2Matrix::from_rows(vs.to_vec(), n).map(|a| a.rank() == vs.len()).unwrap_or(false)
}

/// The transvections built by the inductive solver for `x_i F = y_i`, in the
/// order they multiply onto the identity. At most `2t` vectors.
pub fn transvection_sequence(xs: &[F2Vector], ys: &[F2Vector]) -> Result<Vec<F2Vector>> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch { expected: xs.len(), found: ys.len() });
    }
    let Some(first) = xs.first() else {
        return Ok(Vec::new());
    };
    let n = first.len();
    if n % 2 != 0 {
        return Err(Error::DimensionMismatch { expected: n + 1, found: n });
    }
    for v in xs.iter().chain(ys) {
        check_len(v, n)?;
    }
    if xs.len() > n {
        return Err(Error::DependentInputs);
    }
    check_compatible(xs, ys)?;
    if !independent(xs, n) || !independent(ys, n) {
        return Err(Error::DependentInputs);
    }

    let mut f = SympMatrix::identity(n / 2);
    let mut hs = Vec::with_capacity(2 * xs.len());
    for (i, (x, y)) in xs.iter().zip(ys).enumerate() {
        let xt = f.apply(x);
        if xt == *y {
            continue;
        }
        if inner(&xt, y) {
            let h = &xt ^ y;
            f.apply_transvection(&h);
            hs.push(h);
            continue;
        }
        // w with ⟨x̃,w⟩ = ⟨y,w⟩ = 1 and ⟨y_j,w⟩ = ⟨y_j,y⟩ for every earlier j,
        // so the two transvections leave y_1..y_{i-1} in place.
        let mut constraints = vec![&xt, y];
        let mut target = vec![true, true];
        for yj in &ys[..i] {
            constraints.push(yj);
            target.push(inner(yj, y));
        }
        let w = lex_min_with_inner_products(&constraints, &target, n).map_err(|_| Error::DependentInputs)?;
        let h1 = &w ^ y;
        let h2 = &xt ^ &w;
        f.apply_transvection(&h1);
        f.apply_transvection(&h2);
        hs.push(h1);
        hs.push(h2);
    }
    Ok(hs)
}

/// A symplectic `F` with `x_i F = y_i`, built from at most `2t` transvections.
pub fn solve_particular(xs: &[F2Vector], ys: &[F2Vector]) -> Result<SympMatrix> {
    let hs = transvection_sequence(xs, ys)?;
    let m = xs.first().map_or(0, |x| x.len() / 2);
    let mut f = SympMatrix::identity(m);
    for h in &hs {
        f.apply_transvection(h);
    }
    Ok(f)
}

/// Pairs `(u_a, v_a)` with `⟨u_a,v_b⟩ = δ_ab` and `⟨u_a,u_b⟩ = ⟨v_a,v_b⟩ = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymplecticBasis {
    pub us: Vec<F2Vector>,
    pub vs: Vec<F2Vector>,
}

impl SymplecticBasis {
    pub fn standard(m: usize) -> Self {
        SymplecticBasis {
            us: (0..m).map(|i| F2Vector::unit(2 * m, i)).collect(),
            vs: (0..m).map(|i| F2Vector::unit(2 * m, m + i)).collect(),
        }
    }

    pub fn m(&self) -> usize {
        self.us.len()
    }

    /// First index pair violating the basis relations, if any.
    pub fn first_violation(&self) -> Option<String> {
        let m = self.m();
        if self.vs.len() != m {
            return Some(format!("{} u vectors but {} v vectors", m, self.vs.len()));
        }
        for a in 0..m {
            for b in 0..m {
                if inner(&self.us[a], &self.vs[b]) != (a == b) {
                    return Some(format!("<u{},v{}> != delta", a + 1, b + 1));
                }
                if b > a && inner(&self.us[a], &self.us[b]) {
                    return Some(format!("<u{},u{}> != 0", a + 1, b + 1));
                }
                if b > a && inner(&self.vs[a], &self.vs[b]) {
                    return Some(format!("<v{},v{}> != 0", a + 1, b + 1));
                }
            }
        }
        None
    }

    pub fn is_valid(&self) -> bool {
        self.first_violation().is_none()
    }

    /// Rows `u_1..u_m, v_1..v_m`; symplectic whenever the basis is valid.
    pub fn to_matrix(&self) -> F2Matrix {
        let n = 2 * self.m();
        F2Matrix::from_rows(self.us.iter().chain(&self.vs).cloned().collect(), n).unwrap()
    }
}

/// Projection onto the symplectic complement of the span of `pairs`.
fn project_out(x: &F2Vector, pairs: &[(F2Vector, F2Vector)]) -> F2Vector {
    let mut y = x.clone();
    for (u, v) in pairs {
        if inner(x, v) {
            y ^= u;
        }
        if inner(x, u) {
            y ^= v;
        }
    }
    y
}

/// Extends `pairs` and the isotropic `singles` to a full symplectic basis of
/// `F2^{2m}`.
///
/// The output keeps the input order: the first pairs are `pairs`, the next
/// pairs are `(single, partner)` and the rest are new.
pub fn complete_basis(m: usize, pairs: &[(F2Vector, F2Vector)], singles: &[F2Vector]) -> Result<SymplecticBasis> {
    let n = 2 * m;
    for v in pairs.iter().flat_map(|(u, v)| [u, v]).chain(singles) {
        check_len(v, n)?;
    }
    if pairs.len() + singles.len() > m {
        return Err(Error::InconsistentInput(format!(
            "{} pairs and {} singles exceed m = {m}",
            pairs.len(),
            singles.len()
        )));
    }
    let given = SymplecticBasis {
        us: pairs.iter().map(|p| p.0.clone()).collect(),
        vs: pairs.iter().map(|p| p.1.clone()).collect(),
    };
    if let Some(msg) = given.first_violation() {
        return Err(Error::InconsistentInput(msg));
    }
    for (i, s) in singles.iter().enumerate() {
        for (a, (u, v)) in pairs.iter().enumerate() {
            if inner(s, u) || inner(s, v) {
                return Err(Error::InconsistentInput(format!("single {} not orthogonal to pair {}", i + 1, a + 1)));
            }
        }
        for (j, t) in singles.iter().enumerate().skip(i + 1) {
            if inner(s, t) {
                return Err(Error::InconsistentInput(format!("singles {} and {} anticommute", i + 1, j + 1)));
            }
        }
    }
    let supplied: Vec<F2Vector> = given.us.iter().chain(&given.vs).chain(singles).cloned().collect();
    if !independent(&supplied, n) {
        return Err(Error::InconsistentInput("supplied vectors are linearly dependent".into()));
    }

    let mut basis: Vec<(F2Vector, F2Vector)> = pairs.to_vec();

    // Partners for the singles: ⟨s_i, v⟩ = δ_ij, orthogonal to every
    // supplied pair and to partners already chosen.
    let mut partners: Vec<F2Vector> = Vec::with_capacity(singles.len());
    for j in 0..singles.len() {
        let mut constraints: Vec<&F2Vector> = Vec::new();
        let mut target = Vec::new();
        for (u, v) in pairs {
            constraints.extend([u, v]);
            target.extend([false, false]);
        }
        for (i, s) in singles.iter().enumerate() {
            constraints.push(s);
            target.push(i == j);
        }
        for p in &partners {
            constraints.push(p);
            target.push(false);
        }
        let v = lex_min_with_inner_products(&constraints, &target, n)
            .map_err(|_| Error::InconsistentInput("no partner for isotropic vector".into()))?;
        partners.push(v);
    }
    basis.extend(singles.iter().cloned().zip(partners));

    // Symplectic Gram-Schmidt over the standard basis for whatever is left.
    while basis.len() < m {
        let (e, u) = (0..n)
            .map(|i| (i, project_out(&F2Vector::unit(n, i), &basis)))
            .find(|(_, p)| !p.is_zero())
            .expect("complement of a proper symplectic subspace is non-zero");
        let v = (0..n)
            .filter(|&j| j != e)
            .map(|j| project_out(&F2Vector::unit(n, j), &basis))
            .find(|p| inner(&u, p))
            .expect("complement is non-degenerate");
        basis.push((u, v));
    }

    let (us, vs) = basis.into_iter().unzip();
    Ok(SymplecticBasis { us, vs })
}

/// Linear constraints `u_i F = u'_i` (i ∈ I) and `v_j F = v'_j` (j ∈ J) on a
/// symplectic `F`, stated against a symplectic basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSystem {
    basis: SymplecticBasis,
    u_images: Vec<Option<F2Vector>>,
    v_images: Vec<Option<F2Vector>>,
}

impl ConstraintSystem {
    /// `u_images[i]` constrains `u_i` (0-based), `None` leaves it free.
    pub fn new(basis: SymplecticBasis, u_images: Vec<Option<F2Vector>>, v_images: Vec<Option<F2Vector>>) -> Result<Self> {
        let m = basis.m();
        if let Some(msg) = basis.first_violation() {
            return Err(Error::InconsistentInput(msg));
        }
        if u_images.len() != m || v_images.len() != m {
            return Err(Error::DimensionMismatch { expected: m, found: u_images.len().min(v_images.len()) });
        }
        for img in u_images.iter().chain(&v_images).flatten() {
            check_len(img, 2 * m)?;
        }
        let sys = ConstraintSystem { basis, u_images, v_images };
        let (xs, ys) = sys.pairs();
        check_compatible(&xs, &ys)?;
        Ok(sys)
    }

    /// General `x_i F = y_i` constraints, rewritten against a symplectic basis
    /// adapted to `span(x_i)`.
    pub fn from_pairs(xs: &[F2Vector], ys: &[F2Vector]) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::DimensionMismatch { expected: xs.len(), found: ys.len() });
        }
        let Some(first) = xs.first() else {
            return Err(Error::InconsistentInput("no constraints".into()));
        };
        let n = first.len();
        if n % 2 != 0 {
            return Err(Error::DimensionMismatch { expected: n + 1, found: n });
        }
        for v in xs.iter().chain(ys) {
            check_len(v, n)?;
        }
        check_compatible(xs, ys)?;
        if !independent(xs, n) || !independent(ys, n) {
            return Err(Error::DependentInputs);
        }
        let m = n / 2;

        // Gram-Schmidt inside span(x): split into hyperbolic pairs and an
        // isotropic radical, carrying the images along.
        let mut rest: Vec<(F2Vector, F2Vector)> = xs.iter().cloned().zip(ys.iter().cloned()).collect();
        let mut pairs: Vec<((F2Vector, F2Vector), (F2Vector, F2Vector))> = Vec::new();
        let mut singles: Vec<(F2Vector, F2Vector)> = Vec::new();
        while !rest.is_empty() {
            let (r, ry) = rest.remove(0);
            match rest.iter().position(|(s, _)| inner(&r, s)) {
                Some(p) => {
                    let (s, sy) = rest.remove(p);
                    for (t, ty) in &mut rest {
                        let (ts, tr) = (inner(t, &s), inner(t, &r));
                        if ts {
                            *t ^= &r;
                            *ty ^= &ry;
                        }
                        if tr {
                            *t ^= &s;
                            *ty ^= &sy;
                        }
                    }
                    pairs.push(((r, ry), (s, sy)));
                }
                None => singles.push((r, ry)),
            }
        }

        let basis = complete_basis(
            m,
            &pairs.iter().map(|(a, b)| (a.0.clone(), b.0.clone())).collect::<Vec<_>>(),
            &singles.iter().map(|s| s.0.clone()).collect::<Vec<_>>(),
        )?;
        let mut u_images = vec![None; m];
        let mut v_images = vec![None; m];
        for (a, (u, v)) in pairs.iter().enumerate() {
            u_images[a] = Some(u.1.clone());
            v_images[a] = Some(v.1.clone());
        }
        for (i, s) in singles.iter().enumerate() {
            u_images[pairs.len() + i] = Some(s.1.clone());
        }
        Self::new(basis, u_images, v_images)
    }

    pub fn m(&self) -> usize {
        self.basis.m()
    }

    pub fn basis(&self) -> &SymplecticBasis {
        &self.basis
    }

    pub fn u_images(&self) -> &[Option<F2Vector>] {
        &self.u_images
    }

    pub fn v_images(&self) -> &[Option<F2Vector>] {
        &self.v_images
    }

    /// `|Ī| + |J̄|`, the number of unconstrained basis vectors.
    pub fn alpha(&self) -> usize {
        self.u_images.iter().chain(&self.v_images).filter(|i| i.is_none()).count()
    }

    /// Number of symplectic solutions.
    ///
    /// With `s` basis vectors constrained while their partners are free and
    /// `c` pairs left entirely free, the solutions fix an isotropic `s`-space
    /// pointwise inside the complement of the fully constrained pairs, giving
    /// `|Sp(2c)| · 2^{s(s+1)/2 + 2sc}`. For `c = 0` this is `2^{α(α+1)/2}`.
    pub fn count(&self) -> SolutionCount {
        let (mut s, mut c) = (0u64, 0u64);
        for (u, v) in self.u_images.iter().zip(&self.v_images) {
            match (u.is_some(), v.is_some()) {
                (true, true) => {}
                (false, false) => c += 1,
                _ => s += 1,
            }
        }
        SolutionCount { pow2: s * (s + 1) / 2 + 2 * s * c + c * c, free_pairs: c as u32 }
    }

    /// Whether some pair `(u_d, v_d)` carries no constraint at all.
    pub fn has_free_pair(&self) -> bool {
        self.u_images.iter().zip(&self.v_images).any(|(u, v)| u.is_none() && v.is_none())
    }

    /// Constrained basis vectors and their images: u's first, then v's.
    pub fn pairs(&self) -> (Vec<F2Vector>, Vec<F2Vector>) {
        let us = self.basis.us.iter().zip(&self.u_images);
        let vs = self.basis.vs.iter().zip(&self.v_images);
        us.chain(vs).filter_map(|(x, y)| y.as_ref().map(|y| (x.clone(), y.clone()))).unzip()
    }

    /// Whether `f` satisfies every constraint.
    pub fn is_satisfied_by(&self, f: &SympMatrix) -> bool {
        let (xs, ys) = self.pairs();
        xs.iter().zip(&ys).all(|(x, y)| f.apply(x) == *y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMode {
    Enumerate,
    First,
    Count,
}

/// `2^pow2 · ∏_{j=1}^{free_pairs} (4^j − 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolutionCount {
    pub pow2: u64,
    pub free_pairs: u32,
}

impl SolutionCount {
    pub fn from_alpha(alpha: u64) -> Self {
        SolutionCount { pow2: alpha * (alpha + 1) / 2, free_pairs: 0 }
    }

    pub fn exact(&self) -> Option<u128> {
        let mut n = if self.pow2 < 128 { 1u128 << self.pow2 } else { return None };
        for j in 1..=self.free_pairs {
            let f = 4u128.checked_pow(j)? - 1;
            n = n.checked_mul(f)?;
        }
        Some(n)
    }

    pub fn log2(&self) -> f64 {
        let odd: f64 = (1..=self.free_pairs).map(|j| (4f64.powi(j as i32) - 1.0).log2()).sum();
        self.pow2 as f64 + odd
    }

    pub fn exceeds(&self, ceiling: u64) -> bool {
        self.exact().is_none_or(|n| n > ceiling as u128)
    }
}

impl fmt::Display for SolutionCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.exact(), self.free_pairs) {
            (Some(n), _) => write!(f, "{n}"),
            (None, 0) => write!(f, "2^{}", self.pow2),
            (None, c) => write!(f, "2^{} * prod_{{j=1..{c}}}(4^j - 1)", self.pow2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutput {
    Solutions(Vec<SympMatrix>),
    Count(SolutionCount),
}

/// Every symplectic solution of a [`ConstraintSystem`].
///
/// A particular solution `F0` fixes the image rows `A = basis · F0`. The free
/// rows of `A` are then replaced, one at a time, by any vector with the
/// prescribed inner products against the fixed rows and the free rows
/// already chosen; each such `B` gives the solution `F0 A⁻¹ B`.
#[derive(Debug, Clone)]
pub struct SolutionSpace {
    m: usize,
    f0: SympMatrix,
    a: F2Matrix,
    /// `F0 A⁻¹`.
    lift: F2Matrix,
    free_rows: Vec<usize>,
    count: SolutionCount,
    /// Free vectors must also stay independent of the rows fixed so far.
    check_rank: bool,
}

impl SolutionSpace {
    pub fn new(sys: &ConstraintSystem) -> Result<Self> {
        let m = sys.m();
        let (xs, ys) = sys.pairs();
        let f0 = if xs.is_empty() { SympMatrix::identity(m) } else { solve_particular(&xs, &ys)? };
        let a = &sys.basis.to_matrix() * f0.matrix();
        let lift = f0.matrix() * &a.inverse()?;
        let free_rows = (0..m)
            .filter(|&i| sys.u_images[i].is_none())
            .chain((0..m).filter(|&j| sys.v_images[j].is_none()).map(|j| m + j))
            .collect();
        Ok(SolutionSpace { m, f0, a, lift, free_rows, count: sys.count(), check_rank: sys.has_free_pair() })
    }

    pub fn particular(&self) -> &SympMatrix {
        &self.f0
    }

    pub fn alpha(&self) -> usize {
        self.free_rows.len()
    }

    pub fn count(&self) -> SolutionCount {
        self.count
    }

    /// Choices for free row `level` given the rows chosen before it. The
    /// offset is `A`'s own row whenever that row is admissible, so the first
    /// enumerated solution is `F0` itself.
    fn level(&self, chosen: &[F2Vector]) -> Level {
        let n = 2 * self.m;
        let level = chosen.len();
        let p = self.free_rows[level];
        let partner = |q: usize| q + self.m == p || p + self.m == q;
        let mut known = Vec::new();
        let mut target = Vec::new();
        for q in (0..n).filter(|q| !self.free_rows.contains(q)) {
            known.push(self.a.row(q).clone());
            target.push(partner(q));
        }
        for (t, c) in chosen.iter().enumerate() {
            known.push(c.clone());
            target.push(partner(self.free_rows[t]));
        }
        let target = F2Vector::from_bits(&target);
        let cons = F2Matrix::from_rows(known.iter().map(F2Vector::swap_halves).collect(), n).unwrap();
        let mut choices = cons.solve_affine(&target).expect("free-vector constraints are consistent");
        if cons.right_mul(self.a.row(p)) == target {
            choices.particular = self.a.row(p).clone();
        }
        debug_assert_eq!(choices.kernel.len(), self.alpha() - level);
        let span = self.check_rank.then(|| F2Matrix::from_rows(known, n).unwrap().row_reduce());
        Level { choices, span, index: 0, value: F2Vector::zeros(n) }
    }

    fn assemble(&self, chosen: &[F2Vector]) -> SympMatrix {
        let mut b = self.a.clone();
        for (&p, v) in self.free_rows.iter().zip(chosen) {
            b.set_row(p, v.clone());
        }
        SympMatrix::new_unchecked(&self.lift * &b)
    }

    pub fn first(&self) -> SympMatrix {
        self.iter().next().expect("solution space is never empty")
    }

    /// Streams all solutions. The first free vector varies slowest; each
    /// level counts through its affine choices in coordinate order.
    pub fn iter(&self) -> SolutionIter<'_> {
        SolutionIter { space: self, levels: Vec::new(), started: false, done: false }
    }
}

struct Level {
    choices: AffineSolution,
    /// Row-reduced span of the rows already fixed, when independence must be
    /// checked explicitly.
    span: Option<RowReduction>,
    index: u64,
    value: F2Vector,
}

impl Level {
    fn admissible(&self, v: &F2Vector) -> bool {
        let Some(span) = &self.span else { return true };
        let mut r = v.clone();
        for (i, &c) in span.pivots.iter().enumerate() {
            if r.get(c) {
                r ^= span.rref.row(i);
            }
        }
        !r.is_zero()
    }

    /// Moves to the first admissible choice with index `>= from`.
    fn seek(&mut self, from: u64) -> bool {
        let size = 1u64 << self.choices.kernel.len();
        for index in from..size {
            let v = self.choices.element(index);
            if self.admissible(&v) {
                self.index = index;
                self.value = v;
                return true;
            }
        }
        false
    }
}

pub struct SolutionIter<'a> {
    space: &'a SolutionSpace,
    levels: Vec<Level>,
    started: bool,
    done: bool,
}

impl SolutionIter<'_> {
    /// Advances to the next complete choice of free vectors.
    fn step(&mut self, mut bump: bool) -> bool {
        loop {
            if bump {
                let Some(top) = self.levels.last_mut() else { return false };
                let from = top.index + 1;
                if !top.seek(from) {
                    self.levels.pop();
                    continue;
                }
                bump = false;
            }
            if self.levels.len() == self.space.alpha() {
                return true;
            }
            let chosen: Vec<F2Vector> = self.levels.iter().map(|l| l.value.clone()).collect();
            let mut level = self.space.level(&chosen);
            if level.seek(0) {
                self.levels.push(level);
            } else {
                bump = true;
            }
        }
    }
}

impl Iterator for SolutionIter<'_> {
    type Item = SympMatrix;

    fn next(&mut self) -> Option<SympMatrix> {
        if self.done {
            return None;
        }
        let bump = std::mem::replace(&mut self.started, true);
        if !self.step(bump) {
            self.done = true;
            return None;
        }
        let chosen: Vec<F2Vector> = self.levels.iter().map(|l| l.value.clone()).collect();
        Some(self.space.assemble(&chosen))
    }
}

/// Solves a constraint system in the requested mode. Enumeration refuses to
/// run when the solution count exceeds `ceiling`.
pub fn solve_all(sys: &ConstraintSystem, mode: SolveMode, ceiling: u64) -> Result<SolveOutput> {
    match mode {
        SolveMode::Count => Ok(SolveOutput::Count(sys.count())),
        SolveMode::First => Ok(SolveOutput::Solutions(vec![SolutionSpace::new(sys)?.first()])),
        SolveMode::Enumerate => {
            let count = sys.count();
            if count.exceeds(ceiling) {
                return Err(Error::CeilingExceeded { count: count.to_string(), ceiling });
            }
            let space = SolutionSpace::new(sys)?;
            Ok(SolveOutput::Solutions(space.iter().collect()))
        }
    }
}

/// `|Sp(2m, F2)| = 2^{m²} ∏_{j=1}^{m} (4^j − 1)`.
pub fn group_order(m: u32) -> u128 {
    (1..=m).fold(1u128 << (m * m), |acc, j| acc * (4u128.pow(j) - 1))
}

/// Every element of `Sp(2m, F2)` by filtering all `2^{4m²}` binary matrices.
/// Test oracle; limited to `m ≤ 2`.
pub fn enumerate_group(m: usize) -> Result<Vec<SympMatrix>> {
    if m > 2 {
        return Err(Error::TooLarge { m });
    }
    let n = 2 * m;
    let bits = n * n;
    let out = (0..1u64 << bits)
        .map(|code| F2Matrix::from_fn(n, n, |i, j| (code >> (i * n + j)) & 1 == 1))
        .filter(is_symplectic)
        .map(SympMatrix::new_unchecked)
        .collect();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn v(s: &str) -> F2Vector {
        F2Vector::parse(s).unwrap()
    }

    fn random_vec(rng: &mut StdRng, n: usize) -> F2Vector {
        F2Vector::from_fn(n, |_| rng.gen())
    }

    fn random_nonzero(rng: &mut StdRng, n: usize) -> F2Vector {
        loop {
            let x = random_vec(rng, n);
            if !x.is_zero() {
                return x;
            }
        }
    }

    fn random_symplectic(rng: &mut StdRng, m: usize) -> SympMatrix {
        let mut f = SympMatrix::identity(m);
        for _ in 0..3 * m + 2 {
            f.apply_transvection(&random_vec(rng, 2 * m));
        }
        f
    }

    // x Ω yᵀ evaluated with an explicit Ω matrix.
    fn inner_by_omega(x: &F2Vector, y: &F2Vector) -> bool {
        let m = x.len() / 2;
        omega(m).left_mul(x).dot(y)
    }

    #[test]
    fn symp_inner_examples() {
        assert!(symp_inner(&v("10"), &v("01")).unwrap());
        assert!(!symp_inner(&v("1100"), &v("0011")).unwrap());
        assert!(!symp_inner(&v("1011"), &v("1011")).unwrap());
        assert!(symp_inner(&v("10"), &v("011")).is_err());
    }

    #[test]
    fn transvection_examples() {
        assert!(transvection(&F2Vector::zeros(6)).is_identity());
        assert_eq!(transvection(&v("11")), SympMatrix::omega(1));
    }

    #[test]
    fn map_vector_examples() {
        assert!(map_vector(&v("10"), &v("10")).unwrap().is_empty());
        assert_eq!(map_vector(&v("10"), &v("01")).unwrap(), vec![v("11")]);

        let (x, y) = (v("1000"), v("0100"));
        let hs = map_vector(&x, &y).unwrap();
        assert_eq!(hs.len(), 2);
        let f = transvection(&hs[0]).compose(&transvection(&hs[1]));
        assert_eq!(f.apply(&x), y);

        assert_eq!(map_vector(&v("00"), &v("01")), Err(Error::ZeroVector));
    }

    #[test]
    fn solve_particular_identity_constraints() {
        let xs: Vec<_> = (0..3).map(|i| F2Vector::unit(6, i)).collect();
        let f = solve_particular(&xs, &xs).unwrap();
        assert!(f.is_identity());
    }

    #[test]
    fn solve_particular_rejects_bad_input() {
        let xs = vec![v("1000"), v("0010")];
        let ys = vec![v("1000"), v("0100")];
        assert_eq!(solve_particular(&xs, &ys), Err(Error::IncompatibleInnerProducts { i: 0, j: 1 }));
        let xs = vec![v("1000"), v("1000")];
        assert_eq!(solve_particular(&xs, &xs), Err(Error::DependentInputs));
    }

    #[test]
    fn solve_particular_random_m3() {
        let mut rng = StdRng::seed_from_u64(42);
        for t in 1..=6 {
            for _ in 0..20 {
                let g = random_symplectic(&mut rng, 3);
                let target = random_symplectic(&mut rng, 3);
                let xs: Vec<_> = g.matrix().rows()[..t].to_vec();
                let ys: Vec<_> = xs.iter().map(|x| target.apply(x)).collect();
                let hs = transvection_sequence(&xs, &ys).unwrap();
                assert!(hs.len() <= 2 * t);
                let f = solve_particular(&xs, &ys).unwrap();
                assert!(is_symplectic(f.matrix()));
                for (x, y) in xs.iter().zip(&ys) {
                    assert_eq!(f.apply(x), *y);
                }
            }
        }
    }

    #[test]
    fn complete_basis_examples() {
        assert_eq!(complete_basis(2, &[], &[]).unwrap(), SymplecticBasis::standard(2));

        let b = complete_basis(1, &[], &[v("11")]).unwrap();
        assert_eq!(b.us, vec![v("11")]);
        assert!(b.is_valid());

        let err = complete_basis(2, &[], &[v("1000"), v("0010")]).unwrap_err();
        assert!(matches!(err, Error::InconsistentInput(_)));
    }

    #[test]
    fn complete_basis_six_qubit_example() {
        // Logical pairs and stabilizer X-part of the six-qubit code.
        let pairs = vec![
            (v("110000000000"), v("000000010001")),
            (v("101000000000"), v("000000001001")),
            (v("100100000000"), v("000000000101")),
            (v("100010000000"), v("000000000011")),
        ];
        let singles = vec![v("111111000000"), v("000000111111")];
        let b = complete_basis(6, &pairs, &singles).unwrap();
        assert!(b.is_valid());
        for (a, (u, w)) in pairs.iter().enumerate() {
            assert_eq!(&b.us[a], u);
            assert_eq!(&b.vs[a], w);
        }
        assert_eq!(b.us[4], singles[0]);
        assert_eq!(b.us[5], singles[1]);
    }

    #[test]
    fn solve_all_fully_constrained() {
        let mut rng = StdRng::seed_from_u64(9);
        let target = random_symplectic(&mut rng, 2);
        let basis = SymplecticBasis::standard(2);
        let u_images = basis.us.iter().map(|u| Some(target.apply(u))).collect();
        let v_images = basis.vs.iter().map(|w| Some(target.apply(w))).collect();
        let sys = ConstraintSystem::new(basis, u_images, v_images).unwrap();
        assert_eq!(sys.alpha(), 0);
        let SolveOutput::Solutions(sols) = solve_all(&sys, SolveMode::Enumerate, DEFAULT_CEILING).unwrap() else {
            panic!()
        };
        assert_eq!(sols, vec![target]);
    }

    #[test]
    fn solve_all_respects_ceiling_and_count() {
        let basis = SymplecticBasis::standard(3);
        let sys = ConstraintSystem::new(basis, vec![None; 3], vec![None; 3]).unwrap();
        let count = SolutionCount { pow2: 9, free_pairs: 3 };
        assert_eq!(sys.count(), count);
        assert_eq!(count.exact(), Some(group_order(3)));
        assert_eq!(solve_all(&sys, SolveMode::Count, 10).unwrap(), SolveOutput::Count(count));
        assert_eq!(
            solve_all(&sys, SolveMode::Enumerate, DEFAULT_CEILING),
            Err(Error::CeilingExceeded { count: "1451520".into(), ceiling: DEFAULT_CEILING })
        );
        let SolveOutput::Solutions(first) = solve_all(&sys, SolveMode::First, 1).unwrap() else { panic!() };
        assert!(first[0].is_identity());
    }

    #[test]
    fn first_solution_is_particular() {
        let mut rng = StdRng::seed_from_u64(1);
        for _ in 0..10 {
            let target = random_symplectic(&mut rng, 3);
            let basis = SymplecticBasis::standard(3);
            let u_images = basis.us.iter().map(|u| Some(target.apply(u))).collect();
            let mut v_images: Vec<_> = basis.vs.iter().map(|w| Some(target.apply(w))).collect();
            v_images[2] = None;
            let sys = ConstraintSystem::new(basis, u_images, v_images).unwrap();
            let space = SolutionSpace::new(&sys).unwrap();
            assert_eq!(&space.first(), space.particular());
            assert_eq!(space.iter().count(), 2);
        }
    }

    #[test]
    fn group_sizes() {
        assert_eq!(group_order(1), 6);
        assert_eq!(group_order(2), 720);
        assert_eq!(enumerate_group(1).unwrap().len(), 6);
        assert_eq!(enumerate_group(3), Err(Error::TooLarge { m: 3 }));
    }

    #[test]
    fn from_pairs_matches_brute_force_m2() {
        let group = enumerate_group(2).unwrap();
        let mut rng = StdRng::seed_from_u64(77);
        for _ in 0..40 {
            let g = &group[rng.gen_range(0..group.len())];
            let t = rng.gen_range(1..=4);
            // Random independent inputs: rows of a random group element mixed.
            let basis = &group[rng.gen_range(0..group.len())];
            let xs: Vec<_> = basis.matrix().rows()[..t].to_vec();
            let ys: Vec<_> = xs.iter().map(|x| g.apply(x)).collect();
            let sys = ConstraintSystem::from_pairs(&xs, &ys).unwrap();
            let sols: Vec<_> = SolutionSpace::new(&sys).unwrap().iter().collect();
            let oracle: Vec<_> = group
                .iter()
                .filter(|f| xs.iter().zip(&ys).all(|(x, y)| f.apply(x) == *y))
                .collect();
            assert_eq!(sols.len(), oracle.len());
            assert_eq!(sols.len() as u128, sys.count().exact().unwrap());
            for f in oracle {
                assert!(sols.contains(f));
            }
        }
    }

    proptest! {
        #[test]
        fn inner_matches_omega_form(m in 1usize..6, seed in any::<u64>()) {
            let mut rng = StdRng::seed_from_u64(seed);
            let x = random_vec(&mut rng, 2 * m);
            let y = random_vec(&mut rng, 2 * m);
            prop_assert_eq!(symp_inner(&x, &y).unwrap(), inner_by_omega(&x, &y));
            prop_assert!(!symp_inner(&x, &x).unwrap());
        }

        #[test]
        fn transvections_are_symplectic_involutions(m in 1usize..6, seed in any::<u64>()) {
            let mut rng = StdRng::seed_from_u64(seed);
            let h = random_vec(&mut rng, 2 * m);
            let f = transvection(&h);
            prop_assert!(is_symplectic(f.matrix()));
            prop_assert!(f.compose(&f).is_identity());
            let x = random_vec(&mut rng, 2 * m);
            let expect = if inner(&x, &h) { &x ^ &h } else { x.clone() };
            prop_assert_eq!(f.apply(&x), expect);
        }

        #[test]
        fn map_vector_maps(m in 1usize..=6, seed in any::<u64>()) {
            let mut rng = StdRng::seed_from_u64(seed);
            let x = random_nonzero(&mut rng, 2 * m);
            let y = random_nonzero(&mut rng, 2 * m);
            let hs = map_vector(&x, &y).unwrap();
            prop_assert!(hs.len() <= 2);
            let img = hs.iter().fold(x.clone(), |acc, h| transvection(h).apply(&acc));
            prop_assert_eq!(img, y);
        }

        #[test]
        fn inverse_is_inverse(m in 1usize..6, seed in any::<u64>()) {
            let mut rng = StdRng::seed_from_u64(seed);
            let f = random_symplectic(&mut rng, m);
            prop_assert!(f.compose(&f.inverse()).is_identity());
        }

        #[test]
        fn completed_basis_is_symplectic(m in 1usize..6, seed in any::<u64>()) {
            let mut rng = StdRng::seed_from_u64(seed);
            let g = random_symplectic(&mut rng, m);
            let np = rng.gen_range(0..=m);
            let ns = rng.gen_range(0..=m - np);
            let rows = g.matrix().rows();
            let pairs: Vec<_> = (0..np).map(|a| (rows[a].clone(), rows[m + a].clone())).collect();
            let singles: Vec<_> = (np..np + ns).map(|a| rows[a].clone()).collect();
            let b = complete_basis(m, &pairs, &singles).unwrap();
            prop_assert!(b.is_valid());
            prop_assert!(is_symplectic(&b.to_matrix()));
            for a in 0..np {
                prop_assert_eq!(&b.us[a], &pairs[a].0);
                prop_assert_eq!(&b.vs[a], &pairs[a].1);
            }
            for (i, s) in singles.iter().enumerate() {
                prop_assert_eq!(&b.us[np + i], s);
            }
        }

        #[test]
        fn enumeration_is_distinct_and_sized(m in 1usize..=4, seed in any::<u64>()) {
            let mut rng = StdRng::seed_from_u64(seed);
            let g = random_symplectic(&mut rng, m);
            let basis_src = random_symplectic(&mut rng, m);
            let basis = SymplecticBasis {
                us: basis_src.matrix().rows()[..m].to_vec(),
                vs: basis_src.matrix().rows()[m..].to_vec(),
            };
            let u_images: Vec<_> = basis.us.iter().map(|u| rng.gen_bool(0.6).then(|| g.apply(u))).collect();
            let v_images: Vec<_> = basis.vs.iter().map(|w| rng.gen_bool(0.6).then(|| g.apply(w))).collect();
            let sys = ConstraintSystem::new(basis, u_images, v_images).unwrap();
            prop_assume!(sys.count().log2() <= 11.0);
            let sols: Vec<_> = SolutionSpace::new(&sys).unwrap().iter().collect();
            prop_assert_eq!(sols.len() as u128, sys.count().exact().unwrap());
            let distinct: std::collections::HashSet<_> = sols.iter().collect();
            prop_assert_eq!(distinct.len(), sols.len());
            for f in &sols {
                prop_assert!(is_symplectic(f.matrix()));
                prop_assert!(sys.is_satisfied_by(f));
            }
        }
    }
}
