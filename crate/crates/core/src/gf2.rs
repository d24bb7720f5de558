//! Dense linear algebra over GF(2).
//!
//! Vectors are packed 64 coordinates per machine word and row operations are
//! word-wise XOR. Elimination always picks the leftmost column that still has
//! a nonzero entry and, within it, the topmost available row, so reduced
//! forms, kernel bases and particular solutions are reproducible.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

const WORD_BITS: usize = 64;

#[inline]
fn word_count(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// Errors raised by shape-sensitive GF(2) operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gf2Error {
    DimensionMismatch { expected: usize, found: usize },
    InvalidBit { position: usize, found: char },
}

impl fmt::Display for Gf2Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gf2Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Gf2Error::InvalidBit { position, found } => {
                write!(f, "invalid bit {found:?} at position {position}")
            }
        }
    }
}

impl core::error::Error for Gf2Error {}

/// A vector in `Z₂ⁿ` (or its dual; the two are identified through the dot
/// product).
///
/// Bits past `len` in the last word are always zero, so derived equality and
/// ordering are well defined. Vectors of length zero are legal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Vector {
    len: usize,
    words: Vec<u64>,
}

impl Gf2Vector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; word_count(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
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

    /// Builds a vector from the low `len` bits of `mask`; bit `i` of the mask
    /// is coordinate `i`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= WORD_BITS, "from_mask supports at most 64 coordinates");
        let mut v = Self::zeros(len);
        if len > 0 {
            let keep = if len == WORD_BITS {
                u64::MAX
            } else {
                (1u64 << len) - 1
            };
            v.words[0] = mask & keep;
        }
        v
    }

    /// Parses a string of `0`/`1` characters, coordinate 0 first.
    pub fn parse(s: &str) -> Result<Self, Gf2Error> {
        let mut bits = Vec::with_capacity(s.len());
        for (position, c) in s.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                found => return Err(Gf2Error::InvalidBit { position, found }),
            }
        }
        Ok(Self::from_bits(&bits))
    }

    /// Inverse of [`Gf2Vector::from_mask`].
    pub fn to_mask(&self) -> u64 {
        assert!(self.len <= WORD_BITS, "to_mask supports at most 64 coordinates");
        self.words.first().copied().unwrap_or(0)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "coordinate {i} out of range (len {})", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "coordinate {i} out of range (len {})", self.len);
        let bit = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= bit;
        } else {
            self.words[i / WORD_BITS] &= !bit;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "coordinate {i} out of range (len {})", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    /// Number of nonzero coordinates.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "vector length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    #[must_use]
    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    /// Coordinatewise product; for index sets this is intersection.
    #[must_use]
    pub fn and(&self, other: &Self) -> Self {
        assert_eq!(self.len, other.len, "vector length mismatch");
        Self {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    /// Support containment: every coordinate set in `self` is set in `other`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "vector length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    /// The pairing `Σ aᵢbᵢ mod 2`.
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "vector length mismatch");
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones % 2 == 1
    }

    /// Index of the lowest nonzero coordinate.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * WORD_BITS + w.trailing_zeros() as usize)
    }

    /// Indices of the nonzero coordinates in increasing order.
    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut rest = w;
            core::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let t = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(k * WORD_BITS + t)
                }
            })
        })
    }

    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// Restriction to the listed coordinates, in the listed order.
    #[must_use]
    pub fn select(&self, coords: &[usize]) -> Self {
        let mut out = Self::zeros(coords.len());
        for (k, &c) in coords.iter().enumerate() {
            if self.get(c) {
                out.set(k, true);
            }
        }
        out
    }

    pub fn to_bit_string(&self) -> String {
        (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Vector({})", self.to_bit_string())
    }
}

impl fmt::Display for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

/// Iterates over all `2^len` vectors of the given length in mask order.
pub fn all_vectors(len: usize) -> impl Iterator<Item = Gf2Vector> {
    assert!(len < WORD_BITS, "enumeration limited to fewer than 64 coordinates");
    (0..(1u64 << len)).map(move |m| Gf2Vector::from_mask(len, m))
}

/// Result of Gauss–Jordan elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowEchelon {
    /// Reduced matrix; nonzero rows first, in pivot order.
    pub reduced: Gf2Matrix,
    /// Pivot column of each nonzero row.
    pub pivots: Vec<usize>,
}

impl RowEchelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` against the nonzero rows. The result is the canonical
    /// representative of `v + rowspace`: it vanishes at every pivot column.
    pub fn reduce(&self, v: &Gf2Vector) -> Gf2Vector {
        let mut out = v.clone();
        for (row, &p) in self.pivots.iter().enumerate() {
            if out.get(p) {
                out.add_assign(self.reduced.row(row));
            }
        }
        out
    }

    /// Columns without a pivot, in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.reduced.cols()];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.reduced.cols()).filter(|&c| !is_pivot[c]).collect()
    }

    /// Whether `v` lies in the row space.
    pub fn contains(&self, v: &Gf2Vector) -> bool {
        self.reduce(v).is_zero()
    }
}

/// A dense matrix over GF(2), stored as packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    cols: usize,
    rows: Vec<Gf2Vector>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: (0..rows).map(|_| Gf2Vector::zeros(cols)).collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            cols: n,
            rows: (0..n).map(|i| Gf2Vector::unit(n, i)).collect(),
        }
    }

    /// Builds a matrix from rows of equal length. `cols` is needed so that a
    /// matrix with no rows still knows its width.
    pub fn from_rows(cols: usize, rows: Vec<Gf2Vector>) -> Result<Self, Gf2Error> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Gf2Error::DimensionMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(Self { cols, rows })
    }

    /// Parses rows written as `0`/`1` strings.
    pub fn parse_rows(cols: usize, rows: &[&str]) -> Result<Self, Gf2Error> {
        let parsed = rows
            .iter()
            .map(|r| Gf2Vector::parse(r))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_rows(cols, parsed)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &Gf2Vector {
        &self.rows[i]
    }

    pub fn row_vectors(&self) -> &[Gf2Vector] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value);
    }

    /// Submatrix made of the listed rows, in the listed order.
    #[must_use]
    pub fn select_rows(&self, indices: &[usize]) -> Self {
        Self {
            cols: self.cols,
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }

    /// Submatrix made of the listed columns, in the listed order.
    #[must_use]
    pub fn select_cols(&self, indices: &[usize]) -> Self {
        Self {
            cols: indices.len(),
            rows: self.rows.iter().map(|r| r.select(indices)).collect(),
        }
    }

    /// Appends a row; panics on a length mismatch.
    pub fn push_row(&mut self, row: Gf2Vector) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.rows.push(row);
    }

    #[must_use]
    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones_iter() {
                t.rows[c].set(r, true);
            }
        }
        t
    }

    /// `M·v`, with `v` a column vector of length `cols`.
    pub fn mul_vec(&self, v: &Gf2Vector) -> Result<Gf2Vector, Gf2Error> {
        if v.len() != self.cols {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let mut out = Gf2Vector::zeros(self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            if row.dot(v) {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    /// `v·M`, with `v` a row vector of length `rows`.
    pub fn vec_mul(&self, v: &Gf2Vector) -> Result<Gf2Vector, Gf2Error> {
        if v.len() != self.rows.len() {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.rows.len(),
                found: v.len(),
            });
        }
        let mut out = Gf2Vector::zeros(self.cols);
        for i in v.ones_iter() {
            out.add_assign(&self.rows[i]);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, Gf2Error> {
        if self.cols != other.rows() {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows(),
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|r| other.vec_mul(r))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            cols: other.cols,
            rows,
        })
    }

    /// Gauss–Jordan elimination with leftmost-column, topmost-row pivots.
    pub fn row_echelon(&self) -> RowEchelon {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..self.cols {
            if next == rows.len() {
                break;
            }
            let Some(found) = (next..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(next, found);
            let pivot_row = rows[next].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != next && row.get(col) {
                    row.add_assign(&pivot_row);
                }
            }
            pivots.push(col);
            next += 1;
        }
        RowEchelon {
            reduced: Self {
                cols: self.cols,
                rows,
            },
            pivots,
        }
    }

    /// Dimension of the row space.
    pub fn rank(&self) -> usize {
        // Forward elimination only; no back-substitution needed for the rank.
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == rows.len() {
                break;
            }
            let Some(found) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(rank, found);
            let (head, tail) = rows.split_at_mut(rank + 1);
            let pivot_row = &head[rank];
            for row in tail.iter_mut() {
                if row.get(col) {
                    row.add_assign(pivot_row);
                }
            }
            rank += 1;
        }
        rank
    }

    /// A basis of `{v : M·v = 0}`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Gf2Vector> {
        let ech = self.row_echelon();
        ech.free_columns()
            .into_iter()
            .map(|free| {
                let mut v = Gf2Vector::unit(self.cols, free);
                for (row, &p) in ech.pivots.iter().enumerate() {
                    if ech.reduced.get(row, free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    /// Solves `M·x = b`.
    ///
    /// Returns the solution with all free variables set to zero, together
    /// with a flag that is true iff the kernel is trivial. `None` means `b`
    /// is not in the column space.
    pub fn solve_affine(&self, b: &Gf2Vector) -> Result<Option<(Gf2Vector, bool)>, Gf2Error> {
        if b.len() != self.rows.len() {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.rows.len(),
                found: b.len(),
            });
        }
        let mut augmented = Self::zeros(self.rows.len(), self.cols + 1);
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones_iter() {
                augmented.set(r, c, true);
            }
            augmented.set(r, self.cols, b.get(r));
        }
        let ech = augmented.row_echelon();
        if ech.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = Gf2Vector::zeros(self.cols);
        for (row, &p) in ech.pivots.iter().enumerate() {
            if ech.reduced.get(row, self.cols) {
                x.set(p, true);
            }
        }
        let unique = ech.rank() == self.cols;
        Ok(Some((x, unique)))
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.rows.len();
        if n != self.cols {
            return None;
        }
        if n == 0 {
            return Some(Self::zeros(0, 0));
        }
        let mut augmented = Self::zeros(n, 2 * n);
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones_iter() {
                augmented.set(r, c, true);
            }
            augmented.set(r, n + r, true);
        }
        let ech = augmented.row_echelon();
        if ech.rank() < n || ech.pivots[n - 1] >= n {
            return None;
        }
        let right: Vec<usize> = (n..2 * n).collect();
        Some(ech.reduced.select_cols(&right))
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Matrix({}x{}) [", self.rows.len(), self.cols)?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str("]")
    }
}

/// Rank of a list of vectors of common length `len`.
pub fn span_rank(len: usize, vectors: &[Gf2Vector]) -> usize {
    Gf2Matrix {
        cols: len,
        rows: vectors.to_vec(),
    }
    .rank()
}
