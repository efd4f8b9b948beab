//! Parameter tuples `(m_1, ..., m_k)` naming the graphs `H_{m_1,...,m_k}`.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

/// The parameter vector of a cubic caterpillar-Halin graph.
///
/// Extended form allows a trailing `0`; every other entry is at least 1.
/// Strict form additionally requires `m_k >= 1`. A one-entry tuple `(m)` is the
/// Ringel ladder `R_m`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamTuple(Vec<u32>);

impl ParamTuple {
    pub fn new(m: Vec<u32>) -> Result<Self> {
        if m.is_empty() {
            return invalid("parameter tuple must have at least one entry");
        }
        if m.len() == 1 && m[0] == 0 {
            return invalid("the single entry of a one-entry tuple must be at least 1");
        }
        if let Some(i) = m[..m.len() - 1].iter().position(|&x| x == 0) {
            return invalid(format!("m_{} = 0: only the last entry may be zero", i + 1));
        }
        Ok(Self(m))
    }

    /// Like [`ParamTuple::new`] but rejects a trailing zero.
    pub fn strict(m: Vec<u32>) -> Result<Self> {
        let t = Self::new(m)?;
        t.require_strict()?;
        Ok(t)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn last(&self) -> u32 {
        self.0[self.0.len() - 1]
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().map(|&x| u64::from(x)).sum()
    }

    pub fn is_strict(&self) -> bool {
        self.0.iter().all(|&x| x >= 1)
    }

    pub fn require_strict(&self) -> Result<()> {
        if self.is_strict() {
            Ok(())
        } else {
            invalid(format!("tuple {self} is not in strict form (all entries >= 1)"))
        }
    }

    pub fn reversed(&self) -> Self {
        let mut m = self.0.clone();
        m.reverse();
        Self(m)
    }

    /// Replace the last entry.
    pub fn with_last(&self, last: u32) -> Self {
        let mut m = self.0.clone();
        *m.last_mut().unwrap() = last;
        Self(m)
    }

    /// Drop the last entry; `None` when `k == 1`.
    pub fn prefix(&self) -> Option<Self> {
        (self.k() > 1).then(|| Self(self.0[..self.k() - 1].to_vec()))
    }

    /// Lengths of the maximal runs of same-side pendant edges along the spine:
    /// `(m_1, m_2 + 1, ..., m_{k-1} + 1, m_k)`, or `(m_1)` for a ladder.
    pub fn run_lengths(&self) -> Vec<u32> {
        let k = self.k();
        self.0
            .iter()
            .enumerate()
            .map(|(i, &m)| if i == 0 || i == k - 1 { m } else { m + 1 })
            .collect()
    }

    /// Number of spine vertices carrying a pendant leaf.
    pub fn spine_len(&self) -> u64 {
        self.run_lengths().iter().map(|&r| u64::from(r)).sum()
    }

    /// Betti number of the graph: `k + sum(m)` for `k >= 2`, `m + 2` for a ladder.
    pub fn betti(&self) -> u64 {
        self.spine_len() + 2
    }

    /// Free bits of the full overlap family; `3 * (beta - 1)`.
    pub fn delta_bits(&self) -> u64 {
        3 * (self.betti() - 1)
    }

    /// Free bits of the family with the last spine co-tree edge deleted,
    /// `3 * sum(m) - m_k + 3k - 6`.
    pub fn lambda_bits(&self) -> Result<u64> {
        if self.k() < 2 {
            return invalid("the deleted-edge family needs k >= 2");
        }
        Ok(3 * self.sum() + 3 * self.k() as u64 - 6 - u64::from(self.last()))
    }

    /// Rewrite a trailing `0` or `1` using the graph isomorphisms
    /// `H_{..,a,0} = H_{..,a+1}`, `H_{..,a,1} = H_{..,a+2}` (for `k >= 3`) and
    /// `H_{a,0} = R_a`, `H_{a,1} = R_{a+1}` (for `k = 2`), until the last entry
    /// is at least 2 or a single entry remains.
    pub fn normalize_tail(&self) -> Self {
        let mut m = self.0.clone();
        while m.len() > 1 && *m.last().unwrap() < 2 {
            let tail = m.pop().unwrap();
            let bump = if m.len() == 1 { tail } else { tail + 1 };
            *m.last_mut().unwrap() += bump;
        }
        Self(m)
    }

    /// Canonical representative of the isomorphism class reachable through
    /// tail rewrites and reversal.
    pub fn canonicalize(&self) -> Self {
        let mut t = self.normalize_tail();
        loop {
            let r = t.reversed().normalize_tail();
            if r.k() == t.k() {
                return if r < t { r } else { t };
            }
            t = r;
        }
    }
}

impl fmt::Display for ParamTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for ParamTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H({self})")
    }
}

impl FromStr for ParamTuple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let m = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::InvalidArgument(format!("bad tuple entry {p:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(m)
    }
}

impl TryFrom<&[u32]> for ParamTuple {
    type Error = Error;

    fn try_from(m: &[u32]) -> Result<Self> {
        Self::new(m.to_vec())
    }
}
