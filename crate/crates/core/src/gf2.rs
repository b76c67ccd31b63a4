//! Dense linear algebra over the two-element field.

use std::fmt;

use rand::RngCore;

use crate::{Error, Result};

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

#[inline]
fn xor_slice(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

/// XORs the first `len` bits of `src` into `dst` starting at bit `offset`.
fn xor_bits_at(dst: &mut [u64], offset: usize, src: &[u64], len: usize) {
    if len == 0 {
        return;
    }
    let shift = offset % 64;
    let base = offset / 64;
    let nw = words_for(len);
    for (i, &w) in src[..nw].iter().enumerate() {
        let w = if i == nw - 1 && !len.is_multiple_of(64) { w & ((1u64 << (len % 64)) - 1) } else { w };
        if w == 0 {
            continue;
        }
        dst[base + i] ^= w << shift;
        if shift != 0 && base + i + 1 < dst.len() {
            dst[base + i + 1] ^= w >> (64 - shift);
        }
    }
}

/// A fixed-length bit vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector { len, words: vec![0; words_for(len)] }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Parses a string of `0`/`1` characters, first character = index 0.
    pub fn parse(s: &str) -> Result<Self> {
        let bits: Result<Vec<bool>> = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("unexpected character {other:?} in bit string"))),
            })
            .collect();
        Ok(Self::from_bools(&bits?))
    }

    pub fn random<R: RngCore + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut v = Self::zeros(len);
        for w in v.words.iter_mut() {
            *w = rng.next_u64();
        }
        v.clear_tail();
        v
    }

    fn clear_tail(&mut self) {
        if !self.len.is_multiple_of(64) {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << (self.len % 64)) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        let b = self.get(i);
        self.set(i, !b);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch");
        xor_slice(&mut self.words, &other.words);
    }

    /// Appends `other` after the current bits.
    pub fn extend(&mut self, other: &BitVector) {
        let offset = self.len;
        self.len += other.len;
        self.words.resize(words_for(self.len), 0);
        xor_bits_at(&mut self.words, offset, &other.words, other.len);
    }

    /// Bits `start..start+len` as a new vector.
    pub fn slice(&self, start: usize, len: usize) -> BitVector {
        assert!(start + len <= self.len);
        let mut out = BitVector::zeros(len);
        for i in 0..len {
            if self.get(start + i) {
                out.set(i, true);
            }
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.get(i))
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

/// Row-major dense bit matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows.min(32) {
            writeln!(f, "  {}", self.row(r))?;
        }
        Ok(())
    }
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix { rows, cols, stride, data: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[BitVector]) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, v) in rows.iter().enumerate() {
            if v.len() != cols {
                return Err(Error::DimensionMismatch(format!("row {r} has {} bits, expected {cols}", v.len())));
            }
            m.row_words_mut(r).copy_from_slice(&v.words);
        }
        Ok(m)
    }

    /// Builds a matrix from `0`/`1` strings, one per row.
    pub fn parse_rows(cols: usize, rows: &[&str]) -> Result<Self> {
        let v: Result<Vec<BitVector>> = rows.iter().map(|r| BitVector::parse(r)).collect();
        Self::from_rows(cols, &v?)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols);
        self.data[r * self.stride + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.stride + c / 64];
        let mask = 1u64 << (c % 64);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn row(&self, r: usize) -> BitVector {
        BitVector { len: self.cols, words: self.row_words(r).to_vec() }
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of {} bits against {} columns",
                v.len(),
                self.cols
            )));
        }
        let mut out = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            let parity = self
                .row_words(r)
                .iter()
                .zip(&v.words)
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
                & 1;
            if parity == 1 {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let start = r * out.stride;
            for c in 0..self.cols {
                if self.get(r, c) {
                    let (dst, src) = (&mut out.data[start..start + out.stride], other.row_words(c));
                    xor_slice(dst, src);
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    /// Stacks matrices with equal column counts.
    pub fn vstack(parts: &[&BitMatrix]) -> Result<BitMatrix> {
        let cols = parts.first().map_or(0, |m| m.cols);
        if let Some(bad) = parts.iter().find(|m| m.cols != cols) {
            return Err(Error::DimensionMismatch(format!("cannot stack {} columns onto {cols}", bad.cols)));
        }
        let mut out = BitMatrix::zeros(0, cols);
        for p in parts {
            out.data.extend_from_slice(&p.data);
            out.rows += p.rows;
        }
        Ok(out)
    }

    /// Appends the rows of `other` (equal column counts).
    pub fn append_rows(&mut self, other: &BitMatrix) -> Result<()> {
        if other.cols != self.cols {
            return Err(Error::DimensionMismatch(format!("{} vs {} columns", other.cols, self.cols)));
        }
        self.data.extend_from_slice(&other.data);
        self.rows += other.rows;
        Ok(())
    }

    pub fn select_rows(&self, idx: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(idx.len(), self.cols);
        for (i, &r) in idx.iter().enumerate() {
            out.row_words_mut(i).copy_from_slice(self.row_words(r));
        }
        out
    }

    /// Columns `start..start+len` as a new matrix.
    pub fn column_block(&self, start: usize, len: usize) -> BitMatrix {
        assert!(start + len <= self.cols);
        let mut out = BitMatrix::zeros(self.rows, len);
        for r in 0..self.rows {
            let src = self.row_words(r);
            let dst = out.row_words_mut(r);
            for i in 0..len {
                let c = start + i;
                if src[c / 64] >> (c % 64) & 1 == 1 {
                    dst[i / 64] |= 1 << (i % 64);
                }
            }
        }
        out
    }

    /// XORs `src` into the block whose top-left corner is `(row, col)`.
    pub fn xor_block(&mut self, row: usize, col: usize, src: &BitMatrix) {
        assert!(row + src.rows <= self.rows && col + src.cols <= self.cols, "block out of range");
        for r in 0..src.rows {
            let stride = self.stride;
            let dst = &mut self.data[(row + r) * stride..(row + r + 1) * stride];
            xor_bits_at(dst, col, src.row_words(r), src.cols);
        }
    }

    /// Copies this matrix into a wider zero matrix at column `offset`.
    pub fn widen(&self, cols: usize, offset: usize) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows, cols);
        out.xor_block(0, offset, self);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn rank(&self) -> usize {
        let mut basis = EchelonBasis::new(self.cols, self.cols);
        (0..self.rows).filter(|&r| basis.insert(self.row_words(r)).is_some()).count()
    }

    /// Row-major bits, most significant bit first within each byte.
    pub fn to_bytes(&self) -> Vec<u8> {
        let total = self.rows * self.cols;
        let mut out = vec![0u8; total.div_ceil(8)];
        let mut k = 0;
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    out[k / 8] |= 0x80 >> (k % 8);
                }
                k += 1;
            }
        }
        out
    }

    pub fn from_bytes(rows: usize, cols: usize, bytes: &[u8]) -> Result<Self> {
        let total = rows * cols;
        if bytes.len() != total.div_ceil(8) {
            return Err(Error::Parse(format!(
                "{rows}x{cols} matrix needs {} bytes, got {}",
                total.div_ceil(8),
                bytes.len()
            )));
        }
        let mut m = Self::zeros(rows, cols);
        for k in 0..total {
            if bytes[k / 8] & (0x80 >> (k % 8)) != 0 {
                m.set(k / cols, k % cols, true);
            }
        }
        if !total.is_multiple_of(8) && bytes[total / 8] & (0xffu8 >> (total % 8)) != 0 {
            return Err(Error::Parse("nonzero padding bits in matrix payload".into()));
        }
        Ok(m)
    }
}

/// Incremental row-echelon basis whose pivots lie in the first `key` columns.
///
/// Each stored row has its lowest set bit at its pivot. Columns past `key`
/// ride along as tags, which lets a caller carry right-hand sides through the
/// elimination.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    width: usize,
    key: usize,
    stride: usize,
    rows: Vec<u64>,
    pivots: Vec<usize>,
    pivot_row: Vec<u32>,
}

impl EchelonBasis {
    pub fn new(width: usize, key: usize) -> Self {
        assert!(key <= width);
        EchelonBasis {
            width,
            key,
            stride: words_for(width),
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_row: vec![u32::MAX; key],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` in place. Returns the first key column not covered by a pivot,
    /// or `None` when the key part of `v` reduces to zero (that is, it lies in the span).
    pub fn reduce(&self, v: &mut [u64]) -> Option<usize> {
        debug_assert_eq!(v.len(), self.stride);
        let key_words = words_for(self.key);
        let mut w = 0;
        while w < key_words {
            let mut word = v[w];
            if w == key_words - 1 && !self.key.is_multiple_of(64) {
                word &= (1u64 << (self.key % 64)) - 1;
            }
            if word == 0 {
                w += 1;
                continue;
            }
            let b = w * 64 + word.trailing_zeros() as usize;
            let r = self.pivot_row[b];
            if r == u32::MAX {
                return Some(b);
            }
            let start = r as usize * self.stride;
            xor_slice(&mut v[w..], &self.rows[start + w..start + self.stride]);
        }
        None
    }

    /// Adds `v` if it is independent of the basis; returns its pivot.
    pub fn insert(&mut self, v: &[u64]) -> Option<usize> {
        let mut tmp = v.to_vec();
        let p = self.reduce(&mut tmp)?;
        self.pivot_row[p] = self.pivots.len() as u32;
        self.pivots.push(p);
        self.rows.extend_from_slice(&tmp);
        Some(p)
    }

    /// Inserts every row of `m`; returns how many were independent.
    pub fn insert_matrix(&mut self, m: &BitMatrix) -> usize {
        assert_eq!(m.cols(), self.width);
        (0..m.rows()).filter(|&r| self.insert(m.row_words(r)).is_some()).count()
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut tmp = v.to_vec();
        self.reduce(&mut tmp).is_none()
    }
}

/// Gauss-Jordan form of a full-row-rank matrix `K`, giving a right inverse,
/// a kernel basis, and a parametrization of the solutions of `K w = s`.
#[derive(Clone, Debug)]
pub struct SolutionSpace {
    cols: usize,
    /// Reduced rows `E K`, one per pivot.
    reduced: BitMatrix,
    /// Transformation `E`, so that `E K` is reduced.
    transform: BitMatrix,
    pivots: Vec<usize>,
    free: Vec<usize>,
}

impl SolutionSpace {
    /// Fails with `DimensionMismatch` when `k` lacks full row rank.
    pub fn new(k: &BitMatrix) -> Result<Self> {
        let (rows, cols) = (k.rows(), k.cols());
        let mut aug = BitMatrix::zeros(rows, cols + rows);
        aug.xor_block(0, 0, k);
        aug.xor_block(0, cols, &BitMatrix::identity(rows));
        let mut pivots = Vec::with_capacity(rows);
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| aug.get(i, c)) else { continue };
            if p != r {
                let stride = aug.stride;
                for w in 0..stride {
                    aug.data.swap(p * stride + w, r * stride + w);
                }
            }
            let pivot = aug.row_words(r).to_vec();
            for i in 0..rows {
                if i != r && aug.get(i, c) {
                    xor_slice(aug.row_words_mut(i), &pivot);
                }
            }
            pivots.push(c);
            r += 1;
        }
        if r < rows {
            return Err(Error::DimensionMismatch(format!("matrix has rank {r} < {rows} rows")));
        }
        let free: Vec<usize> = {
            let mut is_pivot = vec![false; cols];
            for &p in &pivots {
                is_pivot[p] = true;
            }
            (0..cols).filter(|&c| !is_pivot[c]).collect()
        };
        Ok(SolutionSpace {
            cols,
            reduced: aug.column_block(0, cols),
            transform: aug.column_block(cols, rows),
            pivots,
            free,
        })
    }

    pub fn free_dim(&self) -> usize {
        self.free.len()
    }

    /// The solution of `K w = s` whose free coordinates equal `z`.
    pub fn solve(&self, s: &BitVector, z: &BitVector) -> Result<BitVector> {
        if z.len() != self.free.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} free bits supplied, {} needed",
                z.len(),
                self.free.len()
            )));
        }
        let rhs = self.transform.mul_vec(s)?;
        let mut w = BitVector::zeros(self.cols);
        for (i, &f) in self.free.iter().enumerate() {
            if z.get(i) {
                w.set(f, true);
            }
        }
        for (r, &p) in self.pivots.iter().enumerate() {
            let mut bit = rhs.get(r);
            for (i, &f) in self.free.iter().enumerate() {
                if z.get(i) && self.reduced.get(r, f) {
                    bit = !bit;
                }
            }
            w.set(p, bit);
        }
        Ok(w)
    }

    /// `d × k` matrix `R` with `K R = I`.
    pub fn right_inverse(&self) -> BitMatrix {
        let k = self.pivots.len();
        let mut r = BitMatrix::zeros(self.cols, k);
        for (row, &p) in self.pivots.iter().enumerate() {
            for j in 0..k {
                if self.transform.get(row, j) {
                    r.set(p, j, true);
                }
            }
        }
        r
    }

    /// `d × (d - k)` matrix whose columns span the kernel of `K`.
    pub fn kernel(&self) -> BitMatrix {
        let mut n = BitMatrix::zeros(self.cols, self.free.len());
        for (j, &f) in self.free.iter().enumerate() {
            n.set(f, j, true);
            for (row, &p) in self.pivots.iter().enumerate() {
                if self.reduced.get(row, f) {
                    n.set(p, j, true);
                }
            }
        }
        n
    }
}
