//! Truncated multivariate Laurent series in `t_1..t_k` with polynomial
//! coefficients in `z`, and the transfer-matrix construction of
//! `E^1(t_1..t_k, z) = sum E_{m_1..m_k}(z) t_1^{m_1} ... t_k^{m_k}`.
//!
//! Every series carries a per-variable precision `hi`: coefficients whose
//! exponents are all `<= hi` are exact, the rest are unknown and not stored.
//! It also carries a lower bound `lo` on exponents that may occur. Products are
//! exact up to `min(hi_a + lo_b, hi_b + lo_a)` in each variable, which is what
//! lets negative powers of `t` cancel without losing track of accuracy.
//! The `z` degree is truncated at a fixed `z_max` shared by all operands.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::params::ParamTuple;
use crate::polynomial::GenusPolynomial;

/// Precision of an exact (non-truncated) series.
pub const EXACT: i64 = i64::MAX / 4;

fn sat_add(a: i64, b: i64) -> i64 {
    if a >= EXACT || b >= EXACT {
        EXACT
    } else {
        a + b
    }
}

type ZPoly = Vec<BigInt>;

fn ztrim(mut p: ZPoly) -> ZPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn zmul(a: &[BigInt], b: &[BigInt], z_max: u32) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let len = (a.len() + b.len() - 1).min(z_max as usize + 1);
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    ztrim(out)
}

fn zaxpy(acc: &mut ZPoly, x: &[BigInt], sign: Sign) {
    if acc.len() < x.len() {
        acc.resize(x.len(), BigInt::zero());
    }
    for (a, b) in acc.iter_mut().zip(x) {
        if sign == Sign::Minus {
            *a -= b;
        } else {
            *a += b;
        }
    }
}

/// Inverse of a `z`-polynomial with constant term `+-1`, modulo `z^{z_max+1}`.
fn zinvert(p: &[BigInt], z_max: u32) -> Result<ZPoly> {
    let c0 = p.first().cloned().unwrap_or_default();
    if !(c0.is_one() || (-&c0).is_one()) {
        return invalid(format!("constant term {c0} is not a unit"));
    }
    let n = z_max as usize + 1;
    let mut out = vec![BigInt::zero(); n];
    for i in 0..n {
        let mut acc = if i == 0 { BigInt::one() } else { BigInt::zero() };
        for j in 1..=i.min(p.len().saturating_sub(1)) {
            acc -= &p[j] * &out[i - j];
        }
        out[i] = acc * &c0;
    }
    Ok(ztrim(out))
}

fn z_from(coeffs: &[i64]) -> ZPoly {
    ztrim(coeffs.iter().map(|&c| BigInt::from(c)).collect())
}

/// One entry of a coefficient table dump.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableEntry {
    pub t: Vec<i64>,
    pub z: usize,
    pub c: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    z_max: u32,
    lo: Vec<i64>,
    hi: Vec<i64>,
    terms: BTreeMap<Vec<i64>, ZPoly>,
}

impl LaurentSeries {
    pub fn zero(nvars: usize, z_max: u32) -> Self {
        Self { z_max, lo: vec![EXACT; nvars], hi: vec![EXACT; nvars], terms: BTreeMap::new() }
    }

    /// Exact monomial `c(z) * t^exps`; `z_coeffs` lowest degree first.
    pub fn monomial(exps: &[i64], z_coeffs: &[i64], z_max: u32) -> Self {
        let mut s = Self::zero(exps.len(), z_max);
        let mut c = z_from(z_coeffs);
        c.truncate(z_max as usize + 1);
        let c = ztrim(c);
        if !c.is_empty() {
            s.lo = exps.to_vec();
            s.terms.insert(exps.to_vec(), c);
        }
        s
    }

    pub fn constant(nvars: usize, z_coeffs: &[i64], z_max: u32) -> Self {
        Self::monomial(&vec![0; nvars], z_coeffs, z_max)
    }

    pub fn one(nvars: usize, z_max: u32) -> Self {
        Self::constant(nvars, &[1], z_max)
    }

    /// Exact polynomial in one variable: `sum_j c_j(z) t_var^j`.
    pub fn univariate(nvars: usize, var: usize, coeffs: &[&[i64]], z_max: u32) -> Self {
        let mut s = Self::zero(nvars, z_max);
        for (j, c) in coeffs.iter().enumerate() {
            let mut exps = vec![0; nvars];
            exps[var] = j as i64;
            s = &s + &Self::monomial(&exps, c, z_max);
        }
        s
    }

    pub fn nvars(&self) -> usize {
        self.hi.len()
    }

    pub fn z_max(&self) -> u32 {
        self.z_max
    }

    /// Per-variable precision; [`EXACT`] where nothing was truncated.
    pub fn precision(&self) -> &[i64] {
        &self.hi
    }

    pub fn lower_bounds(&self) -> &[i64] {
        &self.lo
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms as `(t exponents, z coefficients)`.
    pub fn terms(&self) -> impl Iterator<Item = (&[i64], &[BigInt])> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v.as_slice()))
    }

    fn same_shape(&self, other: &Self) {
        assert_eq!(self.nvars(), other.nvars(), "series in different variable counts");
    }

    fn recompute_drop(mut self) -> Self {
        let hi = self.hi.clone();
        self.terms.retain(|k, v| !v.is_empty() && k.iter().zip(&hi).all(|(e, h)| e <= h));
        self
    }

    /// Lower the precision in `var` to `hi`.
    pub fn truncated(&self, var: usize, hi: i64) -> Self {
        let mut s = self.clone();
        s.hi[var] = s.hi[var].min(hi);
        s.recompute_drop()
    }

    /// Lower the precision in every variable.
    pub fn truncated_all(&self, hi: &[i64]) -> Self {
        let mut s = self.clone();
        for (h, &new) in s.hi.iter_mut().zip(hi) {
            *h = (*h).min(new);
        }
        s.recompute_drop()
    }

    /// View as a series in `nvars` variables; the new trailing variables do
    /// not occur.
    pub fn lift(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars());
        let extra = nvars - self.nvars();
        let pad = |v: &Vec<i64>, x: i64| v.iter().copied().chain(std::iter::repeat_n(x, extra)).collect();
        Self {
            z_max: self.z_max,
            lo: pad(&self.lo, if self.is_zero() { EXACT } else { 0 }),
            hi: pad(&self.hi, EXACT),
            terms: self.terms.iter().map(|(k, v)| (pad(k, 0), v.clone())).collect(),
        }
    }

    pub fn scale(&self, c: i64) -> Self {
        let c = BigInt::from(c);
        let mut s = self.clone();
        for v in s.terms.values_mut() {
            for x in v.iter_mut() {
                *x *= &c;
            }
        }
        if c.is_zero() {
            s.terms.clear();
        }
        s
    }

    fn combine(&self, other: &Self, sign: Sign) -> Self {
        self.same_shape(other);
        let hi: Vec<i64> = self.hi.iter().zip(&other.hi).map(|(a, b)| *a.min(b)).collect();
        let lo: Vec<i64> = self.lo.iter().zip(&other.lo).map(|(a, b)| *a.min(b)).collect();
        let mut terms = self.terms.clone();
        for (k, v) in &other.terms {
            let entry = terms.entry(k.clone()).or_default();
            zaxpy(entry, v, sign);
            *entry = ztrim(std::mem::take(entry));
        }
        Self { z_max: self.z_max.min(other.z_max), lo, hi, terms }.recompute_drop()
    }

    /// Inverse of a series with unit constant term and no negative exponents.
    pub fn invert(&self) -> Result<Self> {
        series_invert(self)
    }

    /// Coefficient of `t^exps` as a `z`-polynomial.
    pub fn coeff(&self, exps: &[i64]) -> Result<Vec<BigInt>> {
        if exps.len() != self.nvars() {
            return invalid(format!("expected {} exponents, got {}", self.nvars(), exps.len()));
        }
        if let Some(i) = (0..exps.len()).find(|&i| exps[i] > self.hi[i]) {
            return invalid(format!(
                "truncation too small: t_{} is known only through degree {}, asked for {}",
                i + 1,
                self.hi[i],
                exps[i]
            ));
        }
        Ok(self.terms.get(exps).cloned().unwrap_or_default())
    }

    /// Coefficient of `t^exps` as a distribution; fails on negative entries.
    pub fn genus_coeff(&self, exps: &[i64]) -> Result<GenusPolynomial> {
        let c = self.coeff(exps)?;
        let mut out = Vec::with_capacity(c.len());
        for (d, x) in c.iter().enumerate() {
            match x.to_biguint() {
                Some(u) => out.push(u),
                None => {
                    return Err(Error::InvariantViolation(format!(
                        "coefficient of z^{d} t^{exps:?} is negative ({x})"
                    )))
                }
            }
        }
        Ok(GenusPolynomial::from_coeffs(out))
    }

    /// Check that no known term has an exponent below `min` and record `min`
    /// as the lower bound.
    pub fn assert_support(mut self, min: &[i64], name: &str) -> Result<Self> {
        for (k, _) in self.terms() {
            if let Some(i) = (0..k.len()).find(|&i| k[i] < min[i]) {
                return Err(Error::InvariantViolation(format!(
                    "{name} has a nonzero term at t^{k:?}, below exponent {} in t_{}",
                    min[i],
                    i + 1
                )));
            }
        }
        for (l, &m) in self.lo.iter_mut().zip(min) {
            *l = (*l).max(m);
        }
        Ok(self)
    }

    /// Every nonzero coefficient, ordered by `t` exponents then `z` degree.
    pub fn coefficient_table(&self) -> Vec<TableEntry> {
        let mut out = Vec::new();
        for (k, v) in self.terms() {
            for (d, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    out.push(TableEntry { t: k.to_vec(), z: d, c: c.to_string() });
                }
            }
        }
        out
    }
}

impl Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.combine(rhs, Sign::Plus)
    }
}

impl Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.combine(rhs, Sign::Minus)
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        self.scale(-1)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.same_shape(rhs);
        let n = self.nvars();
        let z_max = self.z_max.min(rhs.z_max);
        let hi: Vec<i64> = (0..n)
            .map(|i| sat_add(self.hi[i], rhs.lo[i]).min(sat_add(rhs.hi[i], self.lo[i])))
            .collect();
        let lo: Vec<i64> = (0..n).map(|i| sat_add(self.lo[i], rhs.lo[i])).collect();
        let mut terms: BTreeMap<Vec<i64>, ZPoly> = BTreeMap::new();
        for (ka, va) in &self.terms {
            for (kb, vb) in &rhs.terms {
                let k: Vec<i64> = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                if k.iter().zip(&hi).any(|(e, h)| e > h) {
                    continue;
                }
                let p = zmul(va, vb, z_max);
                if !p.is_empty() {
                    zaxpy(terms.entry(k).or_default(), &p, Sign::Plus);
                }
            }
        }
        terms.retain(|_, v| {
            *v = ztrim(std::mem::take(v));
            !v.is_empty()
        });
        LaurentSeries { z_max, lo, hi, terms }
    }
}

/// `1 / d` for `d` with constant term `+-1` (in `t` and `z`) and no negative
/// exponents. Every variable that occurs in `d` must have finite precision;
/// the result has the same precision.
pub fn series_invert(d: &LaurentSeries) -> Result<LaurentSeries> {
    let n = d.nvars();
    if d.terms().any(|(k, _)| k.iter().any(|&e| e < 0)) {
        return invalid("cannot invert a series with negative exponents");
    }
    let zero_exp = vec![0i64; n];
    let c0 = d.terms.get(&zero_exp).cloned().unwrap_or_default();
    let inv0 = zinvert(&c0, d.z_max)?;
    let active: Vec<bool> = (0..n).map(|i| d.terms().any(|(k, _)| k[i] != 0)).collect();
    if let Some(i) = (0..n).find(|&i| active[i] && d.hi[i] >= EXACT) {
        return invalid(format!("inverting needs a finite truncation in t_{}", i + 1));
    }
    let bound: Vec<i64> = (0..n).map(|i| if active[i] { d.hi[i] } else { 0 }).collect();
    let rest: Vec<(&[i64], &[BigInt])> = d.terms().filter(|(k, _)| k.iter().any(|&e| e != 0)).collect();

    let mut out: BTreeMap<Vec<i64>, ZPoly> = BTreeMap::new();
    let mut gamma = vec![0i64; n];
    loop {
        let mut acc: ZPoly = if gamma.iter().all(|&e| e == 0) { vec![BigInt::one()] } else { Vec::new() };
        for (alpha, c) in &rest {
            if alpha.iter().zip(&gamma).any(|(a, g)| a > g) {
                continue;
            }
            let prev: Vec<i64> = gamma.iter().zip(alpha.iter()).map(|(g, a)| g - a).collect();
            if let Some(sp) = out.get(&prev) {
                zaxpy(&mut acc, &zmul(c, sp, d.z_max), Sign::Minus);
            }
        }
        let v = zmul(&ztrim(acc), &inv0, d.z_max);
        if !v.is_empty() {
            out.insert(gamma.clone(), v);
        }
        // next exponent vector in lexicographic order within the box
        let mut i = n;
        loop {
            if i == 0 {
                let hi = (0..n).map(|i| if active[i] { d.hi[i] } else { d.hi[i].max(0) }).collect();
                return Ok(LaurentSeries { z_max: d.z_max, lo: vec![0; n], hi, terms: out });
            }
            i -= 1;
            if gamma[i] < bound[i] {
                gamma[i] += 1;
                for g in gamma.iter_mut().skip(i + 1) {
                    *g = 0;
                }
                break;
            }
        }
    }
}

fn t_pow(nvars: usize, exps: &[(usize, i64)], z: &[i64], z_max: u32) -> LaurentSeries {
    let mut e = vec![0; nvars];
    for &(v, x) in exps {
        e[v] = x;
    }
    LaurentSeries::monomial(&e, z, z_max)
}

/// `1 - a t - 4 z t - 16 z^2 t^2` in variable `var`, truncated at `hi`.
fn denominator(nvars: usize, var: usize, a: i64, hi: i64, z_max: u32) -> LaurentSeries {
    LaurentSeries::univariate(nvars, var, &[&[1], &[-a, -4], &[0, 0, -16]], z_max).truncated(var, hi)
}

/// `L*(t, z) = sum_{m >= 1} 2^m L_m(z) t^m` in variable `var`, exact through `t^hi`.
pub fn lstar_in(nvars: usize, var: usize, hi: i64, z_max: u32) -> Result<LaurentSeries> {
    let num = LaurentSeries::univariate(nvars, var, &[&[], &[2, 2], &[0, 0, 8]], z_max);
    let den = LaurentSeries::univariate(nvars, var, &[&[1], &[-2, -4], &[0, 0, -16]], z_max).truncated(var, hi);
    Ok(&num * &series_invert(&den)?)
}

/// `phi(t, z) = sum_{m >= 2} phi_m(z) t^m` in variable `var`, exact through `t^hi`.
///
/// The numerator follows from the `phi_m` recurrence; its `t^5` term is
/// `-128 z^4 (1 + z) t^5`.
pub fn phi_in(nvars: usize, var: usize, hi: i64, z_max: u32) -> Result<LaurentSeries> {
    let num = LaurentSeries::univariate(
        nvars,
        var,
        &[&[], &[], &[1, 3, 4], &[-2, -10, -8, -4], &[0, 0, -32, -96, -80], &[0, 0, 0, 0, -128, -128]],
        z_max,
    );
    let den = &denominator(nvars, var, 2, hi, z_max) * &denominator(nvars, var, 1, hi, z_max);
    Ok(&num * &series_invert(&den)?)
}

pub fn lstar_series(hi: i64, z_max: u32) -> Result<LaurentSeries> {
    lstar_in(1, 0, hi, z_max)
}

pub fn phi_series(hi: i64, z_max: u32) -> Result<LaurentSeries> {
    phi_in(1, 0, hi, z_max)
}

/// The 4-vector `(lambda^1, lambda^2, E^1, E^2)` in `k` variables.
///
/// `lambda^i = sum 2^{m_k} lambda_{m_1..m_k} t^m` and
/// `E^i = sum E_{m_1..m_k} t^m`, both over `m_1..m_{k-1} >= 1`, `m_k >= i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesBundle {
    pub lambda1: LaurentSeries,
    pub lambda2: LaurentSeries,
    pub e1: LaurentSeries,
    pub e2: LaurentSeries,
}

impl SeriesBundle {
    pub fn k(&self) -> usize {
        self.e1.nvars()
    }

    fn parts(&self) -> [&LaurentSeries; 4] {
        [&self.lambda1, &self.lambda2, &self.e1, &self.e2]
    }

    fn checked(self) -> Result<Self> {
        let k = self.k();
        let mut min = vec![1; k];
        let lambda1 = self.lambda1.assert_support(&min, "lambda^1")?;
        let e1 = self.e1.assert_support(&min, "E^1")?;
        min[k - 1] = 2;
        let lambda2 = self.lambda2.assert_support(&min, "lambda^2")?;
        let e2 = self.e2.assert_support(&min, "E^2")?;
        Ok(Self { lambda1, lambda2, e1, e2 })
    }
}

/// The bundle for `k = 2`, exact through `t_1^{hi.0} t_2^{hi.1}` and `z^{z_max}`.
pub fn k2_bundle(hi: (i64, i64), z_max: u32) -> Result<SeriesBundle> {
    let (h1, h2) = hi;
    if h1 < 1 || h2 < 1 {
        return invalid("k = 2 series need truncation >= 1 in both variables");
    }
    let n = 2;
    let phi = phi_in(n, 0, h1 + 3, z_max)?;
    let lstar = lstar_in(n, 0, h1 + 1, z_max)?;
    let inv2 = series_invert(&denominator(n, 1, 2, h2, z_max))?;
    let inv1 = series_invert(&denominator(n, 1, 1, h2, z_max))?;
    let m = |t1: i64, t2: i64, z: &[i64]| t_pow(n, &[(0, t1), (1, t2)], z, z_max);

    let phi_over_t1 = &m(-1, 0, &[1]) * &phi;
    let l_slice = &(&m(-1, 1, &[2, 4]) * &phi) + &(&m(0, 1, &[0, 0, 4]) * &lstar);
    let lambda1 = &(&(&(&m(0, 1, &[2, 4]) + &m(0, 2, &[0, 0, 16])) * &phi_over_t1) + &(&m(0, 1, &[0, 0, 4]) * &lstar))
        * &inv2;
    let lambda2 = &lambda1 - &l_slice;

    let e_num = &(&(&m(-2, 2, &[0, 0, 32]) + &m(-3, 1, &[2])) * &phi) + &(&m(0, 1, &[0, 0, 16]) * &lambda1);
    let e_corr = &(&m(-1, 1, &[2, 6, 8]) + &m(0, 1, &[2, 14, 56, 56])) + &m(0, 2, &[0, 0, 32, 96, 128]);
    let e1 = &(&e_num - &e_corr) * &inv1;
    // subtract the m_2 = 1 slice: E_{m_1,1} = 2 phi_{m_1+3}
    let e1_slice = &(&m(-3, 1, &[2]) * &phi) - &(&m(-1, 1, &[2, 6, 8]) + &m(0, 1, &[2, 14, 56, 56]));
    let e2 = &e1 - &e1_slice;

    SeriesBundle {
        lambda1: lambda1.truncated_all(&[h1, h2]),
        lambda2: lambda2.truncated_all(&[h1, h2]),
        e1: e1.truncated_all(&[h1, h2]),
        e2: e2.truncated_all(&[h1, h2]),
    }
    .checked()
}

/// The transfer matrix `A(t_{k-1}, t_k, z)` acting on `k - 1` variable
/// bundles, as series in `k` variables exact through `t_k^{hi}`.
pub fn transfer_matrix(k: usize, hi: i64, z_max: u32) -> Result<[[LaurentSeries; 4]; 4]> {
    if k < 3 {
        return invalid("the transfer matrix starts at k = 3");
    }
    let (p, q) = (k - 2, k - 1);
    let m = |tp: i64, tq: i64, z: &[i64]| t_pow(k, &[(p, tp), (q, tq)], z, z_max);
    let inv2 = series_invert(&denominator(k, q, 2, hi, z_max))?;
    let inv1 = series_invert(&denominator(k, q, 1, hi, z_max))?;
    let zero = LaurentSeries::zero(k, z_max);

    let a11 = &m(0, 1, &[0, 0, 16]) * &inv2;
    let a13 = &(&m(0, 1, &[1, 2]) + &m(0, 2, &[0, 0, 8])) * &inv2;
    let a21 = &a11 - &m(0, 1, &[0, 0, 16]);
    let a23 = &a13 - &m(0, 1, &[1, 2]);
    let a31 = &(&m(0, 1, &[0, 0, 16]) * &a11) * &inv1;
    let a32 = &m(-1, 1, &[0, 0, 16]) * &inv1;
    let a33 = &(&m(0, 1, &[0, 0, 16]) + &(&m(0, 1, &[0, 0, 16]) * &a13)) * &inv1;
    let a34 = &(&m(-1, 1, &[1, 4]) + &m(-1, 2, &[0, 0, 16])) * &inv1;
    let a41 = a31.clone();
    let a42 = &a32 - &m(-1, 1, &[0, 0, 16]);
    let a43 = &a33 - &m(0, 1, &[0, 0, 16]);
    let a44 = &a34 - &m(-1, 1, &[1, 4]);
    Ok([
        [a11, zero.clone(), a13, zero.clone()],
        [a21, zero.clone(), a23, zero],
        [a31, a32, a33, a34],
        [a41, a42, a43, a44],
    ])
}

/// One transfer step: the bundle for `k - 1` variables to the bundle for `k`,
/// exact through `t_k^{hi}`. The input must be exact one degree past what is
/// wanted in `t_{k-1}`.
pub fn transfer_apply(prev: &SeriesBundle, hi: i64) -> Result<SeriesBundle> {
    let k = prev.k() + 1;
    let guard = prev.e1.precision()[k - 2];
    if guard < 2 {
        return invalid(format!(
            "t_{} needs a guard degree: input is exact only through degree {guard}",
            k - 1
        ));
    }
    let a = transfer_matrix(k, hi, prev.e1.z_max())?;
    let lifted: Vec<LaurentSeries> = prev.parts().iter().map(|s| s.lift(k)).collect();
    let row = |i: usize| {
        let mut acc = LaurentSeries::zero(k, prev.e1.z_max());
        for j in 0..4 {
            if !a[i][j].is_zero() {
                acc = &acc + &(&a[i][j] * &lifted[j]);
            }
        }
        acc
    };
    SeriesBundle { lambda1: row(0), lambda2: row(1), e1: row(2), e2: row(3) }.checked()
}

/// Truncation box for a bundle: `t` precision per variable and `z` degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub t: Vec<i64>,
    pub z: u32,
}

impl Truncation {
    /// Default box for `E_{m_1..m_k}`: one degree of slack in every `t_j`.
    pub fn for_target(params: &ParamTuple) -> Self {
        Self { t: params.as_slice().iter().map(|&m| i64::from(m) + 1).collect(), z: params.betti() as u32 }
    }

    /// Box `t_j <= hi_j`, with `z` large enough for every tuple inside it.
    pub fn for_table(hi: &[i64]) -> Self {
        let z = hi.iter().sum::<i64>() as u32 + hi.len() as u32;
        Self { t: hi.to_vec(), z }
    }
}

/// The bundle in `trunc.t.len()` variables, exact through the box `trunc`.
pub fn bundle(trunc: &Truncation) -> Result<SeriesBundle> {
    let k = trunc.t.len();
    if k < 2 {
        return invalid("generating functions need k >= 2");
    }
    if let Some(i) = (0..k).find(|&i| trunc.t[i] < 1) {
        return invalid(format!("truncation for t_{} must be >= 1", i + 1));
    }
    // every variable that later picks up a t^{-1} factor gets one guard degree
    let guarded = |i: usize| trunc.t[i] + i64::from(i >= 1 && i + 1 < k);
    let mut b = k2_bundle((guarded(0), guarded(1)), trunc.z)?;
    for i in 2..k {
        b = transfer_apply(&b, guarded(i))?;
    }
    let hi = trunc.t.clone();
    Ok(SeriesBundle {
        lambda1: b.lambda1.truncated_all(&hi),
        lambda2: b.lambda2.truncated_all(&hi),
        e1: b.e1.truncated_all(&hi),
        e2: b.e2.truncated_all(&hi),
    })
}

/// `E_{m_1..m_k}` as the coefficient of `t_1^{m_1} ... t_k^{m_k}` in `E^1`.
pub fn extract_e(params: &ParamTuple) -> Result<GenusPolynomial> {
    extract_e_with(params, &Truncation::for_target(params))
}

/// As [`extract_e`] with an explicit truncation box.
pub fn extract_e_with(params: &ParamTuple, trunc: &Truncation) -> Result<GenusPolynomial> {
    params.require_strict()?;
    if params.k() < 2 {
        return Err(Error::Unsupported("generating-function extraction needs k >= 2".into()));
    }
    if trunc.t.len() != params.k() {
        return invalid(format!("truncation has {} variables, tuple has {}", trunc.t.len(), params.k()));
    }
    let exps: Vec<i64> = params.as_slice().iter().map(|&m| i64::from(m)).collect();
    if let Some(i) = (0..exps.len()).find(|&i| exps[i] > trunc.t[i]) {
        return invalid(format!("truncation too small: t_{} bound {} < m_{} = {}", i + 1, trunc.t[i], i + 1, exps[i]));
    }
    if (trunc.z as u64) < params.betti() {
        return invalid(format!("truncation too small: z bound {} < {}", trunc.z, params.betti()));
    }
    let e = bundle(trunc)?.e1.genus_coeff(&exps)?;
    Ok(e)
}
