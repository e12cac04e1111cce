//! Dense vectors and matrices over GF(2).
//!
//! Vectors are packed 64 bits per word, bit `i` living in word `i / 64` at
//! position `i % 64`. Matrices are stored row-major as a list of packed rows,
//! which makes row operations (the only thing Gaussian elimination needs)
//! a word-wise XOR.
//!
//! Elimination always pivots on the lowest row index holding a one in the
//! current column, so transforms are reproducible across runs.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitXor, BitXorAssign, Mul};

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A row vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct F2Vector {
    words: Vec<u64>,
    len: usize,
}

impl F2Vector {
    pub fn zeros(len: usize) -> Self {
        F2Vector { words: vec![0; words_for(len)], len }
    }

    /// The standard basis vector `e_i`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            if f(i) {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector from the low `len` bits of `value`, bit `i` of the
    /// vector taken from bit `i` of the integer.
    pub fn from_u64(len: usize, value: u64) -> Self {
        assert!(len <= WORD);
        let mut v = Self::zeros(len);
        if len > 0 {
            let mask = if len == WORD { u64::MAX } else { (1u64 << len) - 1 };
            v.words[0] = value & mask;
        }
        v
    }

    /// Parses a string of `0`/`1` characters; `_` and spaces are ignored.
    pub fn parse(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for (pos, ch) in s.chars().enumerate() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                '_' | ' ' => {}
                _ => return Err(Error::BadCharacter { ch, pos }),
            }
        }
        Ok(Self::from_bits(&bits))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Standard dot product `x · yᵀ` mod 2.
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors with different lengths");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD + t)
                }
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// `[self, other]`.
    pub fn concat(&self, other: &Self) -> Self {
        let mut v = Self::zeros(self.len + other.len);
        for i in self.iter_ones() {
            v.set(i, true);
        }
        for i in other.iter_ones() {
            v.set(self.len + i, true);
        }
        v
    }

    /// Bits `start..start + len`.
    pub fn slice(&self, start: usize, len: usize) -> Self {
        assert!(start + len <= self.len);
        Self::from_fn(len, |i| self.get(start + i))
    }

    /// Swaps the two halves of an even-length vector, i.e. `[a, b] -> [b, a]`.
    /// This is `x Ω` for the symplectic form `Ω`.
    pub fn swap_halves(&self) -> Self {
        assert!(self.len.is_multiple_of(2), "swap_halves needs an even length");
        let m = self.len / 2;
        let mut v = Self::zeros(self.len);
        for i in self.iter_ones() {
            v.set(if i < m { i + m } else { i - m }, true);
        }
        v
    }

    /// Bit order reversed: bit `i` moves to `len - 1 - i`.
    pub fn reversed(&self) -> Self {
        let n = self.len;
        let mut v = Self::zeros(n);
        for i in self.iter_ones() {
            v.set(n - 1 - i, true);
        }
        v
    }

    pub fn to_bit_string(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }

    /// Hex digits, four bits per digit, bit 0 as the most significant bit of
    /// the first digit; the tail is zero-padded to a multiple of four bits.
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4);
        (0..digits)
            .map(|d| {
                let mut nib = 0u32;
                for b in 0..4 {
                    let i = d * 4 + b;
                    nib <<= 1;
                    if i < self.len && self.get(i) {
                        nib |= 1;
                    }
                }
                char::from_digit(nib, 16).unwrap()
            })
            .collect()
    }

    pub fn from_hex(s: &str, len: usize) -> Result<Self> {
        let s = s.trim();
        if s.len() != len.div_ceil(4) {
            return Err(Error::DimensionMismatch { expected: len.div_ceil(4), found: s.len() });
        }
        let mut v = Self::zeros(len);
        for (d, ch) in s.chars().enumerate() {
            let nib = ch.to_digit(16).ok_or(Error::BadCharacter { ch, pos: d })?;
            for b in 0..4 {
                let i = d * 4 + b;
                if nib & (8 >> b) != 0 {
                    if i >= len {
                        return Err(Error::BadCharacter { ch, pos: d });
                    }
                    v.set(i, true);
                }
            }
        }
        Ok(v)
    }
}

impl fmt::Debug for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_bit_string())
    }
}

impl fmt::Display for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

/// Lexicographic order reading bit 0 first (bit 0 is most significant).
impl Ord for F2Vector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| {
            for (a, b) in self.words.iter().zip(&other.words) {
                match a.reverse_bits().cmp(&b.reverse_bits()) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for F2Vector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl BitXorAssign<&F2Vector> for F2Vector {
    fn bitxor_assign(&mut self, rhs: &F2Vector) {
        assert_eq!(self.len, rhs.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl BitXor<&F2Vector> for &F2Vector {
    type Output = F2Vector;
    fn bitxor(self, rhs: &F2Vector) -> F2Vector {
        let mut v = self.clone();
        v ^= rhs;
        v
    }
}

/// Result of [`F2Matrix::row_reduce`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowReduction {
    pub rref: F2Matrix,
    pub pivots: Vec<usize>,
    /// Invertible, with `transform × A = rref`.
    pub transform: F2Matrix,
}

impl RowReduction {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Solution set `particular + span(kernel)` of `A xᵀ = bᵀ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: F2Vector,
    pub kernel: Vec<F2Vector>,
}

impl AffineSolution {
    /// The element `particular + Σ_t bit_t(index) · kernel[t]`.
    pub fn element(&self, index: u64) -> F2Vector {
        let mut v = self.particular.clone();
        for (t, k) in self.kernel.iter().enumerate() {
            if (index >> t) & 1 == 1 {
                v ^= k;
            }
        }
        v
    }

    /// Every solution; intended for small kernels.
    pub fn elements(&self) -> impl Iterator<Item = F2Vector> + '_ {
        assert!(self.kernel.len() < 64);
        (0..1u64 << self.kernel.len()).map(move |i| self.element(i))
    }
}

/// A dense matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: Vec<F2Vector>,
    cols: usize,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Matrix { rows: vec![F2Vector::zeros(cols); rows], cols }
    }

    pub fn identity(n: usize) -> Self {
        F2Matrix { rows: (0..n).map(|i| F2Vector::unit(n, i)).collect(), cols: n }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        F2Matrix {
            rows: (0..rows).map(|i| F2Vector::from_fn(cols, |j| f(i, j))).collect(),
            cols,
        }
    }

    /// Stacks row vectors; all rows must share a length. `cols` is needed
    /// only to size an empty matrix.
    pub fn from_rows(rows: Vec<F2Vector>, cols: usize) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch { expected: cols, found: bad.len() });
        }
        Ok(F2Matrix { rows, cols })
    }

    /// One row per non-empty line of `0`/`1` characters; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let row = F2Vector::parse(line).map_err(|e| Error::parse(lineno + 1, e.to_string()))?;
            rows.push(row);
        }
        let cols = rows.first().map_or(0, F2Vector::len);
        Self::from_rows(rows, cols)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value)
    }

    pub fn row(&self, i: usize) -> &F2Vector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[F2Vector] {
        &self.rows
    }

    pub fn set_row(&mut self, i: usize, row: F2Vector) {
        assert_eq!(row.len(), self.cols);
        self.rows[i] = row;
    }

    pub fn into_rows(self) -> Vec<F2Vector> {
        self.rows
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        self.rows.swap(i, j);
    }

    /// `row[dst] += row[src]`.
    pub fn add_row(&mut self, src: usize, dst: usize) {
        assert_ne!(src, dst);
        let r = self.rows[src].clone();
        self.rows[dst] ^= &r;
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(F2Vector::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && self
                .rows
                .iter()
                .enumerate()
                .all(|(i, r)| r.weight() == 1 && r.get(i))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.iter_ones() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.nrows() {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.nrows() });
        }
        Ok(F2Matrix {
            rows: self.rows.iter().map(|r| other.left_mul(r)).collect(),
            cols: other.cols,
        })
    }

    /// Row vector times matrix, `x · self`.
    pub fn left_mul(&self, x: &F2Vector) -> F2Vector {
        assert_eq!(x.len(), self.nrows(), "vector length must match row count");
        let mut acc = F2Vector::zeros(self.cols);
        for i in x.iter_ones() {
            acc ^= &self.rows[i];
        }
        acc
    }

    /// Matrix times column vector, `self · xᵀ`, returned as a row vector.
    pub fn right_mul(&self, x: &F2Vector) -> F2Vector {
        assert_eq!(x.len(), self.cols, "vector length must match column count");
        F2Vector::from_fn(self.nrows(), |i| self.rows[i].dot(x))
    }

    /// `rows × cols` sub-block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        F2Matrix { rows: (r0..r0 + rows).map(|i| self.rows[i].slice(c0, cols)).collect(), cols }
    }

    /// `[[a, b], [c, d]]`.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        assert_eq!(a.nrows(), b.nrows());
        assert_eq!(c.nrows(), d.nrows());
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let top = a.rows.iter().zip(&b.rows).map(|(x, y)| x.concat(y));
        let bottom = c.rows.iter().zip(&d.rows).map(|(x, y)| x.concat(y));
        F2Matrix { rows: top.chain(bottom).collect(), cols: a.cols + b.cols }
    }

    pub fn reverse_columns(&self) -> Self {
        F2Matrix { rows: self.rows.iter().map(F2Vector::reversed).collect(), cols: self.cols }
    }

    /// Gauss-Jordan elimination to reduced row echelon form.
    pub fn row_reduce(&self) -> RowReduction {
        let n = self.nrows();
        let mut rref = self.clone();
        let mut transform = Self::identity(n);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == n {
                break;
            }
            let Some(p) = (r..n).find(|&i| rref.rows[i].get(c)) else {
                continue;
            };
            rref.swap_rows(r, p);
            transform.swap_rows(r, p);
            for i in 0..n {
                if i != r && rref.rows[i].get(c) {
                    rref.add_row(r, i);
                    transform.add_row(r, i);
                }
            }
            pivots.push(c);
            r += 1;
        }
        RowReduction { rref, pivots, transform }
    }

    pub fn rank(&self) -> usize {
        self.row_reduce().rank()
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.nrows(), found: self.cols });
        }
        let red = self.row_reduce();
        if red.rank() < self.nrows() {
            return Err(Error::SingularMatrix);
        }
        Ok(red.transform)
    }

    /// All `x` with `self · xᵀ = bᵀ`. The particular solution has every free
    /// variable set to zero.
    pub fn solve_affine(&self, b: &F2Vector) -> Result<AffineSolution> {
        if b.len() != self.nrows() {
            return Err(Error::DimensionMismatch { expected: self.nrows(), found: b.len() });
        }
        let red = self.row_reduce();
        let c = red.transform.right_mul(b);
        let rank = red.rank();
        if (rank..self.nrows()).any(|i| c.get(i)) {
            return Err(Error::NoSolution);
        }
        let mut particular = F2Vector::zeros(self.cols);
        for (i, &p) in red.pivots.iter().enumerate() {
            particular.set(p, c.get(i));
        }
        let mut is_pivot = vec![false; self.cols];
        for &p in &red.pivots {
            is_pivot[p] = true;
        }
        let kernel = (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut k = F2Vector::unit(self.cols, f);
                for (i, &p) in red.pivots.iter().enumerate() {
                    if red.rref.rows[i].get(f) {
                        k.set(p, true);
                    }
                }
                k
            })
            .collect();
        Ok(AffineSolution { particular, kernel })
    }

    /// The lexicographically smallest solution (bit 0 most significant) of
    /// `self · xᵀ = bᵀ`.
    pub fn solve_lex_min(&self, b: &F2Vector) -> Result<F2Vector> {
        // Eliminating on reversed columns makes every pivot variable depend
        // only on free variables of lower original index.
        Ok(self.reverse_columns().solve_affine(b)?.particular.reversed())
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{} [", self.nrows(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

impl Mul for &F2Matrix {
    type Output = F2Matrix;

    /// Panics on a dimension mismatch; use [`F2Matrix::checked_mul`] otherwise.
    fn mul(self, rhs: &F2Matrix) -> F2Matrix {
        self.checked_mul(rhs).expect("F2Matrix dimension mismatch")
    }
}
