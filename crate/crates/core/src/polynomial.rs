//! Dense polynomials in the genus marker `z` with arbitrary-precision
//! nonnegative coefficients.
//!
//! Coefficient `i` counts the embeddings (or overlap matrices) of Euler genus
//! `i`. Trailing zeros are always stripped, so the zero polynomial is the empty
//! coefficient vector and equality is structural.

use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct GenusPolynomial {
    coeffs: Vec<BigUint>,
}

impl GenusPolynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_coeffs(vec![BigUint::one()])
    }

    pub fn from_coeffs(coeffs: Vec<BigUint>) -> Self {
        let mut p = Self { coeffs };
        p.normalize();
        p
    }

    pub fn from_u64s(coeffs: &[u64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigUint::from(c)).collect())
    }

    /// `c * z^degree`.
    pub fn monomial(c: impl Into<BigUint>, degree: usize) -> Self {
        let mut coeffs = vec![BigUint::zero(); degree];
        coeffs.push(c.into());
        Self::from_coeffs(coeffs)
    }

    /// Histogram counts indexed by genus.
    pub fn from_histogram(counts: &[u64]) -> Self {
        Self::from_u64s(counts)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigUint> {
        self.coeffs
    }

    /// Coefficient of `z^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> BigUint {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Evaluation at `z = 1`: the total count over all genera.
    pub fn coefficient_sum(&self) -> BigUint {
        self.coeffs.iter().sum()
    }

    pub fn scale(&self, c: &BigUint) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiply by `z^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigUint::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// Divide every coefficient by two, failing if any coefficient is odd.
    pub fn halve_exact(&self) -> Result<Self> {
        let two = BigUint::from(2u32);
        let mut out = Vec::with_capacity(self.coeffs.len());
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.bit(0) {
                return Err(Error::InvariantViolation(format!(
                    "coefficient of z^{i} is odd ({c}); cannot halve exactly"
                )));
            }
            out.push(c / &two);
        }
        Ok(Self::from_coeffs(out))
    }

    /// Coefficients as decimal strings, lowest degree first.
    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn from_decimal_strings<S: AsRef<str>>(items: &[S]) -> Result<Self> {
        let coeffs = items
            .iter()
            .map(|s| {
                s.as_ref()
                    .parse::<BigUint>()
                    .map_err(|e| Error::InvalidArgument(format!("bad coefficient {:?}: {e}", s.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_coeffs(coeffs))
    }

    /// First genus index where the two polynomials differ.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).find(|&i| self.coeff(i) != other.coeff(i))
    }
}

impl Add for &GenusPolynomial {
    type Output = GenusPolynomial;

    fn add(self, rhs: &GenusPolynomial) -> GenusPolynomial {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        GenusPolynomial::from_coeffs(coeffs)
    }
}

impl Add for GenusPolynomial {
    type Output = GenusPolynomial;

    fn add(self, rhs: GenusPolynomial) -> GenusPolynomial {
        &self + &rhs
    }
}

impl AddAssign<&GenusPolynomial> for GenusPolynomial {
    fn add_assign(&mut self, rhs: &GenusPolynomial) {
        if rhs.coeffs.len() > self.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), BigUint::zero());
        }
        for (c, r) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *c += r;
        }
        self.normalize();
    }
}

impl Mul for &GenusPolynomial {
    type Output = GenusPolynomial;

    fn mul(self, rhs: &GenusPolynomial) -> GenusPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return GenusPolynomial::zero();
        }
        let mut coeffs = vec![BigUint::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        GenusPolynomial::from_coeffs(coeffs)
    }
}

impl Mul for GenusPolynomial {
    type Output = GenusPolynomial;

    fn mul(self, rhs: GenusPolynomial) -> GenusPolynomial {
        &self * &rhs
    }
}

impl fmt::Debug for GenusPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GenusPolynomial({self})")
    }
}

impl fmt::Display for GenusPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c} z")?,
                _ => write!(f, "{c} z^{i}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for GenusPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for GenusPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let items = Vec::<String>::deserialize(deserializer)?;
        GenusPolynomial::from_decimal_strings(&items).map_err(de::Error::custom)
    }
}
