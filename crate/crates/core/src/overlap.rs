//! Overlap matrices of `H_{m_1,...,m_k}` and brute-force rank distributions.
//!
//! Rows and columns of the full family are ordered
//! `e_1..e_k, e_{1,1}..e_{1,m_1}, ..., e_{k,1}..e_{k,m_k}`. Every free bit of a
//! family toggles one diagonal entry or one symmetric off-diagonal pair:
//!
//! | bit            | entry                               |
//! |----------------|-------------------------------------|
//! | `x_i`          | `(e_i, e_i)`                        |
//! | `y_i`          | `(e_i, e_{i+1})`                    |
//! | `x_{i,l}`      | `(e_{i,l}, e_{i,l})`                |
//! | `y_{i,l}`      | `(e_{i,l}, e_{i,l+1})`              |
//! | `z_{i,l}`      | `(e_i, e_{i,l})`, `1 <= l <= m_i`   |
//! | `z_{i,0}`      | `(e_i, e_{i-1,m_{i-1}})`, `i >= 2`  |
//! | `z_{i,m_i+1}`  | `(e_i, e_{i+1,1})`, `i < k`         |
//!
//! The flat bit order used for enumeration indices is `x_0, y_0, x_1..x_k,
//! y_1..y_k, z_1..z_k`, each vector little-endian in its second index.

use std::fmt;

use crate::error::{invalid, Error, Result};
use crate::exec::{partitioned_histogram, Execution};
use crate::gf2::{Gf2Matrix, IncrementalRank, SymmetricEntry};
use crate::params::ParamTuple;
use crate::polynomial::GenusPolynomial;

pub const DEFAULT_BUDGET_BITS: u32 = 26;

/// Name of one free bit, with 1-based block indices as in `x_{i,l}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BitLabel {
    /// `x_i`, twist of the spine co-tree edge `e_i`.
    SpineTwist(usize),
    /// `y_i`, overlap of `e_i` and `e_{i+1}`.
    SpineLink(usize),
    /// `x_{i,l}`.
    BlockTwist(usize, usize),
    /// `y_{i,l}`.
    BlockLink(usize, usize),
    /// `z_{i,l}`, `l` ranging over `0..=m_i+1` where defined.
    Coupling(usize, usize),
}

impl fmt::Display for BitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            BitLabel::SpineTwist(i) => write!(f, "x_{i}"),
            BitLabel::SpineLink(i) => write!(f, "y_{i}"),
            BitLabel::BlockTwist(i, l) => write!(f, "x_{{{i},{l}}}"),
            BitLabel::BlockLink(i, l) => write!(f, "y_{{{i},{l}}}"),
            BitLabel::Coupling(i, l) => write!(f, "z_{{{i},{l}}}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OverlapBit {
    pub label: BitLabel,
    pub entry: SymmetricEntry,
}

/// The free bits of one matrix family and the entries they control.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlapLayout {
    dim: usize,
    bits: Vec<OverlapBit>,
}

impl OverlapLayout {
    /// Layout of the full overlap family `Delta` for a strict tuple with `k >= 2`.
    pub fn delta(params: &ParamTuple) -> Result<Self> {
        params.require_strict()?;
        let k = params.k();
        if k < 2 {
            return invalid("the block overlap family needs k >= 2; use the ladder family for k = 1");
        }
        let m: Vec<usize> = params.as_slice().iter().map(|&x| x as usize).collect();
        let dim = k + m.iter().sum::<usize>();
        if dim > crate::gf2::MAX_DIM {
            return invalid(format!("overlap matrix dimension {dim} exceeds {}", crate::gf2::MAX_DIM));
        }
        // block_start[i] = row of e_{i+1,1}
        let mut block_start = Vec::with_capacity(k);
        let mut next = k;
        for &mi in &m {
            block_start.push(next);
            next += mi;
        }
        let spine = |i: usize| i - 1;
        let block = |i: usize, l: usize| block_start[i - 1] + l - 1;

        let mut bits = Vec::with_capacity(params.delta_bits() as usize);
        let mut push = |label, a, b| bits.push(OverlapBit { label, entry: SymmetricEntry::new(a, b) });
        for i in 1..=k {
            push(BitLabel::SpineTwist(i), spine(i), spine(i));
        }
        for i in 1..k {
            push(BitLabel::SpineLink(i), spine(i), spine(i + 1));
        }
        for i in 1..=k {
            for l in 1..=m[i - 1] {
                push(BitLabel::BlockTwist(i, l), block(i, l), block(i, l));
            }
        }
        for i in 1..=k {
            for l in 1..m[i - 1] {
                push(BitLabel::BlockLink(i, l), block(i, l), block(i, l + 1));
            }
        }
        for i in 1..=k {
            let first = if i == 1 { 1 } else { 0 };
            let last = if i == k { m[i - 1] } else { m[i - 1] + 1 };
            for l in first..=last {
                let target = if l == 0 {
                    block(i - 1, m[i - 2])
                } else if l == m[i - 1] + 1 {
                    block(i + 1, 1)
                } else {
                    block(i, l)
                };
                push(BitLabel::Coupling(i, l), spine(i), target);
            }
        }
        debug_assert_eq!(bits.len() as u64, params.delta_bits());
        Ok(Self { dim, bits })
    }

    /// Layout of `Lambda`: the full family with row and column `e_k` held at zero.
    pub fn lambda(params: &ParamTuple) -> Result<Self> {
        let full = Self::delta(params)?;
        let ek = (params.k() - 1) as u8;
        let bits = full
            .bits
            .into_iter()
            .filter(|b| b.entry.i != ek && b.entry.j != ek)
            .collect();
        Ok(Self { dim: full.dim, bits })
    }

    /// Layout of the `n x n` ladder family `Phi_n`: first row `(x_0, z_1..z_{n-1})`
    /// bordering a tridiagonal block with diagonal `x_1..x_{n-1}` and
    /// off-diagonal `y_1..y_{n-2}`.
    pub fn phi(n: usize) -> Result<Self> {
        if n < 2 {
            return invalid(format!("ladder family needs dimension >= 2, got {n}"));
        }
        if n > crate::gf2::MAX_DIM {
            return invalid(format!("dimension {n} exceeds {}", crate::gf2::MAX_DIM));
        }
        let mut bits = Vec::with_capacity(3 * (n - 1));
        for i in 0..n {
            bits.push(OverlapBit { label: BitLabel::BlockTwist(1, i), entry: SymmetricEntry::new(i, i) });
        }
        for l in 1..n - 1 {
            bits.push(OverlapBit { label: BitLabel::BlockLink(1, l), entry: SymmetricEntry::new(l, l + 1) });
        }
        for l in 1..n {
            bits.push(OverlapBit { label: BitLabel::Coupling(1, l), entry: SymmetricEntry::new(0, l) });
        }
        Ok(Self { dim: n, bits })
    }

    /// Layout of the `m x m` symmetric tridiagonal family `L_m`.
    pub fn tridiag(m: usize) -> Result<Self> {
        if m < 1 {
            return invalid("tridiagonal family needs m >= 1");
        }
        if m > crate::gf2::MAX_DIM {
            return invalid(format!("dimension {m} exceeds {}", crate::gf2::MAX_DIM));
        }
        let mut bits = Vec::with_capacity(2 * m - 1);
        for l in 1..=m {
            bits.push(OverlapBit { label: BitLabel::BlockTwist(1, l), entry: SymmetricEntry::new(l - 1, l - 1) });
        }
        for l in 1..m {
            bits.push(OverlapBit { label: BitLabel::BlockLink(1, l), entry: SymmetricEntry::new(l - 1, l) });
        }
        Ok(Self { dim: m, bits })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bits(&self) -> &[OverlapBit] {
        &self.bits
    }

    pub fn bit_count(&self) -> u32 {
        self.bits.len() as u32
    }

    pub fn position(&self, label: BitLabel) -> Option<usize> {
        self.bits.iter().position(|b| b.label == label)
    }

    /// Matrix for the assignment whose bit `b` is bit `b` of `index`.
    pub fn build_from_index(&self, index: u64) -> Gf2Matrix {
        let mut m = Gf2Matrix::zero(self.dim).expect("layout dimension already validated");
        for (b, bit) in self.bits.iter().enumerate() {
            if index >> b & 1 == 1 {
                let (i, j) = (bit.entry.i as usize, bit.entry.j as usize);
                m.set_symmetric(i, j, !m.get(i, j));
            }
        }
        m
    }

    pub fn incremental(&self) -> Result<IncrementalRank> {
        IncrementalRank::new(self.dim, self.bits.iter().map(|b| b.entry).collect())
    }
}

/// Values of the `X`, `Y`, `Z` bit vectors for one tuple, in the flat order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlapAssignment {
    labels: Vec<BitLabel>,
    values: Vec<bool>,
}

impl OverlapAssignment {
    pub fn zeros(params: &ParamTuple) -> Result<Self> {
        let layout = OverlapLayout::delta(params)?;
        Ok(Self {
            labels: layout.bits.iter().map(|b| b.label).collect(),
            values: vec![false; layout.bits.len()],
        })
    }

    pub fn ones(params: &ParamTuple) -> Result<Self> {
        let mut a = Self::zeros(params)?;
        a.values.fill(true);
        Ok(a)
    }

    pub fn from_index(params: &ParamTuple, index: u64) -> Result<Self> {
        let mut a = Self::zeros(params)?;
        if a.values.len() < 64 && index >> a.values.len() != 0 {
            return invalid(format!("index {index} has bits beyond the {} free bits", a.values.len()));
        }
        for (b, v) in a.values.iter_mut().enumerate() {
            *v = index >> b & 1 == 1;
        }
        Ok(a)
    }

    pub fn to_index(&self) -> u64 {
        self.values.iter().enumerate().fold(0, |acc, (b, &v)| acc | (u64::from(v) << b))
    }

    pub fn bit_count(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, label: BitLabel) -> Option<bool> {
        self.labels.iter().position(|&l| l == label).map(|p| self.values[p])
    }

    pub fn set(&mut self, label: BitLabel, value: bool) -> Result<()> {
        match self.labels.iter().position(|&l| l == label) {
            Some(p) => {
                self.values[p] = value;
                Ok(())
            }
            None => invalid(format!("{label} is not a bit of this tuple")),
        }
    }

    fn matches(&self, layout: &OverlapLayout) -> bool {
        self.labels.len() == layout.bits.len() && self.labels.iter().zip(&layout.bits).all(|(l, b)| *l == b.label)
    }
}

/// `L_m^{a,b}`: diagonal `a`, off-diagonal `b`.
pub fn build_tridiag(a: &[bool], b: &[bool]) -> Result<Gf2Matrix> {
    if a.is_empty() || b.len() + 1 != a.len() {
        return invalid(format!("tridiagonal needs |a| >= 1 and |b| = |a| - 1, got {} and {}", a.len(), b.len()));
    }
    let mut m = Gf2Matrix::zero(a.len())?;
    for (i, &v) in a.iter().enumerate() {
        m.set(i, i, v);
    }
    for (i, &v) in b.iter().enumerate() {
        m.set_symmetric(i, i + 1, v);
    }
    Ok(m)
}

/// `Phi_n` with `n = x.len()`: `x = (x_0..x_{n-1})`, `y = (y_1..y_{n-2})`,
/// `z = (z_1..z_{n-1})`.
pub fn build_phi(x: &[bool], y: &[bool], z: &[bool]) -> Result<Gf2Matrix> {
    let n = x.len();
    if n < 2 || y.len() + 2 != n || z.len() + 1 != n {
        return invalid(format!(
            "ladder matrix needs |x| = n >= 2, |y| = n - 2, |z| = n - 1; got {}, {}, {}",
            n,
            y.len(),
            z.len()
        ));
    }
    let mut m = build_tridiag(&x[1..], y)?;
    let mut full = Gf2Matrix::zero(n)?;
    full.set(0, 0, x[0]);
    for i in 1..n {
        full.set_symmetric(0, i, z[i - 1]);
        for j in 1..n {
            full.set(i, j, m.get(i - 1, j - 1));
        }
    }
    std::mem::swap(&mut m, &mut full);
    Ok(m)
}

fn build_with(layout: &OverlapLayout, asg: &OverlapAssignment, keep: impl Fn(&OverlapBit) -> bool) -> Result<Gf2Matrix> {
    let mut m = Gf2Matrix::zero(layout.dim)?;
    for (bit, &v) in layout.bits.iter().zip(&asg.values) {
        if v && keep(bit) {
            let (i, j) = (bit.entry.i as usize, bit.entry.j as usize);
            m.set_symmetric(i, j, true);
        }
    }
    Ok(m)
}

/// The full overlap matrix `Delta^{X,Y,Z}` of a strict tuple with `k >= 2`.
pub fn build_delta(params: &ParamTuple, asg: &OverlapAssignment) -> Result<Gf2Matrix> {
    let layout = OverlapLayout::delta(params)?;
    if !asg.matches(&layout) {
        return invalid(format!("assignment does not belong to tuple {params}"));
    }
    build_with(&layout, asg, |_| true)
}

/// `Lambda^{X,Y,Z}`: `Delta` with row and column `e_k` forced to zero.
pub fn build_lambda_matrix(params: &ParamTuple, asg: &OverlapAssignment) -> Result<Gf2Matrix> {
    let layout = OverlapLayout::delta(params)?;
    if !asg.matches(&layout) {
        return invalid(format!("assignment does not belong to tuple {params}"));
    }
    let ek = (params.k() - 1) as u8;
    build_with(&layout, asg, |b| b.entry.i != ek && b.entry.j != ek)
}

/// A family of overlap matrices whose rank distribution can be enumerated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// `Delta_{m_1..m_k}`; its distribution is `delta`.
    Delta(ParamTuple),
    /// `Lambda_{m_1..m_k}`; its distribution is `lambda`.
    Lambda(ParamTuple),
    /// `Phi_n` by dimension; its distribution is `phi_n`.
    Phi(usize),
    /// `L_m`; its distribution is `L_m`.
    Tridiag(usize),
}

impl Family {
    pub fn layout(&self) -> Result<OverlapLayout> {
        match self {
            Family::Delta(p) => OverlapLayout::delta(p),
            Family::Lambda(p) => OverlapLayout::lambda(p),
            Family::Phi(n) => OverlapLayout::phi(*n),
            Family::Tridiag(m) => OverlapLayout::tridiag(*m),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationConfig {
    pub budget_bits: u32,
    pub execution: Execution,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        Self { budget_bits: DEFAULT_BUDGET_BITS, execution: Execution::default() }
    }
}

/// Histogram of GF(2) ranks over every assignment of the family's free bits.
pub fn enumerate_distribution(family: &Family, config: &EnumerationConfig) -> Result<GenusPolynomial> {
    let layout = family.layout()?;
    let bits = layout.bit_count();
    if bits > config.budget_bits {
        return Err(Error::ResourceLimit { bits, budget: config.budget_bits });
    }
    let template = layout.incremental()?;
    let hist = partitioned_histogram(config.execution, bits, layout.dim() + 1, |high, low_bits, h| {
        let mut ctx = template.clone();
        ctx.seek(high << low_bits);
        ctx.sweep_low_bits(low_bits, h);
    });
    Ok(GenusPolynomial::from_histogram(&hist))
}

/// Reference path: rebuild and re-eliminate every matrix from scratch.
pub fn enumerate_distribution_rebuild(family: &Family, config: &EnumerationConfig) -> Result<GenusPolynomial> {
    let layout = family.layout()?;
    let bits = layout.bit_count();
    if bits > config.budget_bits {
        return Err(Error::ResourceLimit { bits, budget: config.budget_bits });
    }
    let hist = partitioned_histogram(config.execution, bits, layout.dim() + 1, |high, low_bits, h| {
        for low in 0..(1u64 << low_bits) {
            let m = layout.build_from_index(high << low_bits | low);
            h[m.rank() as usize] += 1;
        }
    });
    Ok(GenusPolynomial::from_histogram(&hist))
}

/// `E = 2 delta` by matrix enumeration. Trailing `0`/`1` entries are rewritten
/// first where needed, and a ladder `(m)` uses `Phi_{m+2}`.
pub fn euler_genus_by_matrices(params: &ParamTuple, config: &EnumerationConfig) -> Result<GenusPolynomial> {
    let p = if params.is_strict() { params.clone() } else { params.normalize_tail() };
    let family = if p.k() == 1 { Family::Phi(p.as_slice()[0] as usize + 2) } else { Family::Delta(p) };
    let delta = enumerate_distribution(&family, config)?;
    Ok(delta.scale(&2u32.into()))
}
