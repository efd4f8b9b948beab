//! Bit-packed square matrices over GF(2).
//!
//! Every row is a single `u64`, so dimensions are capped at 64. Overlap
//! matrices at desk scale stay well below 40.

use std::fmt;

use crate::error::{invalid, Result};

pub const MAX_DIM: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    dim: usize,
    rows: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zero(dim: usize) -> Result<Self> {
        if dim > MAX_DIM {
            return invalid(format!("dimension {dim} exceeds the supported maximum {MAX_DIM}"));
        }
        Ok(Self { dim, rows: vec![0; dim] })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zero(dim)?;
        for (i, row) in m.rows.iter_mut().enumerate() {
            *row = 1 << i;
        }
        Ok(m)
    }

    /// Build from a dense 0/1 table. Any nonzero entry counts as 1.
    pub fn from_table<R: AsRef<[u8]>>(table: &[R]) -> Result<Self> {
        let dim = table.len();
        let mut m = Self::zero(dim)?;
        for (i, row) in table.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dim {
                return invalid(format!("row {i} has length {} in a {dim}x{dim} matrix", row.len()));
            }
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    m.rows[i] |= 1 << j;
                }
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row `i` as a bit mask, bit `j` holding entry `(i, j)`.
    pub fn row_bits(&self, i: usize) -> u64 {
        self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        if value {
            self.rows[i] |= 1 << j;
        } else {
            self.rows[i] &= !(1 << j);
        }
    }

    /// Set `(i, j)` and `(j, i)` together.
    pub fn set_symmetric(&mut self, i: usize, j: usize, value: bool) {
        self.set(i, j, value);
        self.set(j, i, value);
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self { dim: self.dim, rows: vec![0; self.dim] };
        for i in 0..self.dim {
            for j in 0..self.dim {
                if self.get(i, j) {
                    t.rows[j] |= 1 << i;
                }
            }
        }
        t
    }

    /// Simultaneous row and column permutation: entry `(i, j)` moves to
    /// `(perm[i], perm[j])`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.dim];
        if perm.len() != self.dim || perm.iter().any(|&p| p >= self.dim || std::mem::replace(&mut seen[p], true)) {
            return invalid("permutation does not match the matrix dimension");
        }
        let mut out = Self { dim: self.dim, rows: vec![0; self.dim] };
        for i in 0..self.dim {
            for j in 0..self.dim {
                if self.get(i, j) {
                    out.rows[perm[i]] |= 1 << perm[j];
                }
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> u32 {
        let mut scratch = [0u64; MAX_DIM];
        scratch[..self.dim].copy_from_slice(&self.rows);
        rank_of_rows(&mut scratch[..self.dim])
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.dim, self.dim)?;
        for i in 0..self.dim {
            for j in 0..self.dim {
                f.write_str(if self.get(i, j) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Rank over GF(2), destroying `rows` in the process.
///
/// Each surviving row pivots on its lowest set bit, which is then cleared from
/// all later rows; the rank is the number of rows still nonzero when reached.
#[inline]
pub fn rank_of_rows(rows: &mut [u64]) -> u32 {
    let mut rank = 0;
    for i in 0..rows.len() {
        let pivot_row = rows[i];
        if pivot_row == 0 {
            continue;
        }
        rank += 1;
        let pivot = pivot_row & pivot_row.wrapping_neg();
        for row in &mut rows[i + 1..] {
            if *row & pivot != 0 {
                *row ^= pivot_row;
            }
        }
    }
    rank
}

/// The matrix entry pair toggled by one free bit of an overlap family.
///
/// `i == j` is a diagonal entry; otherwise both `(i, j)` and `(j, i)` flip.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymmetricEntry {
    pub i: u8,
    pub j: u8,
}

impl SymmetricEntry {
    pub fn new(i: usize, j: usize) -> Self {
        Self { i: i as u8, j: j as u8 }
    }
}

/// Rank tracking across single-bit changes of an assignment.
///
/// The matrix is kept up to date in place, so each step costs one or two XORs
/// plus one elimination on a scratch copy instead of a full rebuild. Walking
/// the low bits in Gray-code order visits every assignment with one flip per
/// step.
#[derive(Clone, Debug)]
pub struct IncrementalRank {
    dim: usize,
    entries: Vec<SymmetricEntry>,
    rows: [u64; MAX_DIM],
    assignment: u64,
}

impl IncrementalRank {
    /// Context positioned at the all-zero assignment.
    pub fn new(dim: usize, entries: Vec<SymmetricEntry>) -> Result<Self> {
        if dim > MAX_DIM {
            return invalid(format!("dimension {dim} exceeds the supported maximum {MAX_DIM}"));
        }
        if entries.len() > 63 {
            return invalid(format!("{} free bits do not fit a 64-bit assignment index", entries.len()));
        }
        if let Some(e) = entries.iter().find(|e| e.i as usize >= dim || e.j as usize >= dim) {
            return invalid(format!("entry ({}, {}) outside a {dim}x{dim} matrix", e.i, e.j));
        }
        Ok(Self { dim, entries, rows: [0; MAX_DIM], assignment: 0 })
    }

    pub fn bit_count(&self) -> u32 {
        self.entries.len() as u32
    }

    pub fn assignment(&self) -> u64 {
        self.assignment
    }

    /// Jump to an arbitrary assignment by flipping the differing bits.
    pub fn seek(&mut self, assignment: u64) {
        let mut diff = (assignment ^ self.assignment) & self.mask();
        while diff != 0 {
            let bit = diff.trailing_zeros();
            self.toggle(bit);
            diff &= diff - 1;
        }
    }

    fn mask(&self) -> u64 {
        (1u64 << self.entries.len()) - 1
    }

    #[inline]
    fn toggle(&mut self, bit: u32) {
        let SymmetricEntry { i, j } = self.entries[bit as usize];
        let (i, j) = (i as usize, j as usize);
        self.rows[i] ^= 1 << j;
        if i != j {
            self.rows[j] ^= 1 << i;
        }
        self.assignment ^= 1 << bit;
    }

    /// Flip one free bit and return the rank of the resulting matrix.
    #[inline]
    pub fn flip(&mut self, bit: u32) -> u32 {
        self.toggle(bit);
        self.rank()
    }

    #[inline]
    pub fn rank(&self) -> u32 {
        let mut scratch = self.rows;
        rank_of_rows(&mut scratch[..self.dim])
    }

    pub fn matrix(&self) -> Gf2Matrix {
        Gf2Matrix { dim: self.dim, rows: self.rows[..self.dim].to_vec() }
    }

    /// Visit all `2^low_bits` settings of the lowest bits (the others stay
    /// fixed) and add each rank to `histogram`. The low bits end where they
    /// started in Gray order, i.e. with only the top low bit changed.
    pub fn sweep_low_bits(&mut self, low_bits: u32, histogram: &mut [u64]) {
        debug_assert!(low_bits <= self.bit_count());
        histogram[self.rank() as usize] += 1;
        let steps: u64 = 1 << low_bits;
        for step in 1..steps {
            let r = self.flip(step.trailing_zeros());
            histogram[r as usize] += 1;
        }
    }
}
