//! Recurrence engine for `L_m`, `phi_m`, `lambda_{m_1..m_k}` and `E_{m_1..m_k}`,
//! plus closed forms for the three lowest Euler-genus coefficients.
//!
//! Results are memoized per exact tuple. Trailing `0`/`1` entries are resolved
//! through the initial conditions, not by canonicalizing up front.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};
use crate::params::ParamTuple;
use crate::polynomial::GenusPolynomial;

fn lin(a: u64, b: u64) -> GenusPolynomial {
    GenusPolynomial::from_u64s(&[a, b])
}

fn z2(c: BigUint) -> GenusPolynomial {
    GenusPolynomial::monomial(c, 2)
}

fn pow2(e: u32) -> BigUint {
    BigUint::one() << e
}

#[derive(Default)]
struct Memo {
    l: HashMap<u32, GenusPolynomial>,
    phi: HashMap<u32, GenusPolynomial>,
    lambda: HashMap<Vec<u32>, GenusPolynomial>,
    e: HashMap<Vec<u32>, GenusPolynomial>,
}

/// Memoized recurrence evaluator. Safe to share between threads; the table is
/// locked only around lookups and inserts.
#[derive(Default)]
pub struct Recurrence {
    memo: Mutex<Memo>,
}

impl Recurrence {
    pub fn new() -> Self {
        Self::default()
    }

    /// Process-wide instance used by the free functions in this module.
    pub fn shared() -> &'static Recurrence {
        static SHARED: OnceLock<Recurrence> = OnceLock::new();
        SHARED.get_or_init(Recurrence::new)
    }

    fn cached<K: Clone + Eq + std::hash::Hash>(
        &self,
        table: fn(&mut Memo) -> &mut HashMap<K, GenusPolynomial>,
        key: &K,
        compute: impl FnOnce() -> Result<GenusPolynomial>,
    ) -> Result<GenusPolynomial> {
        if let Some(p) = table(&mut self.memo.lock().unwrap()).get(key) {
            return Ok(p.clone());
        }
        let p = compute()?;
        table(&mut self.memo.lock().unwrap()).insert(key.clone(), p.clone());
        Ok(p)
    }

    /// Rank distribution of the `m x m` symmetric tridiagonal family.
    pub fn l_poly(&self, m: u32) -> Result<GenusPolynomial> {
        if m < 1 {
            return invalid("L_m needs m >= 1");
        }
        self.cached(|t| &mut t.l, &m, || {
            Ok(match m {
                1 => lin(1, 1),
                2 => GenusPolynomial::from_u64s(&[1, 3, 4]),
                _ => &lin(1, 2) * &self.l_poly(m - 1)? + &z2(4u32.into()) * &self.l_poly(m - 2)?,
            })
        })
    }

    /// Rank distribution of the `m x m` ladder family `Phi_m`.
    pub fn phi_poly(&self, m: u32) -> Result<GenusPolynomial> {
        if m < 2 {
            return invalid("phi_m needs m >= 2");
        }
        self.cached(|t| &mut t.phi, &m, || {
            Ok(match m {
                2 => GenusPolynomial::from_u64s(&[1, 3, 4]),
                3 => GenusPolynomial::from_u64s(&[1, 7, 28, 28]),
                _ => {
                    let n = m - 1;
                    &lin(1, 4) * &self.phi_poly(n)?
                        + &z2(16u32.into()) * &self.phi_poly(n - 1)?
                        + &z2(pow2(n)) * &self.l_poly(n - 1)?
                }
            })
        })
    }

    /// `lambda_{m_1..m_k}` for `k >= 2`; only the last entry may be `0`.
    pub fn lambda_poly(&self, params: &ParamTuple) -> Result<GenusPolynomial> {
        if params.k() < 2 {
            return invalid("lambda needs k >= 2");
        }
        let m = params.as_slice();
        self.cached(|t| &mut t.lambda, &m.to_vec(), || {
            let k = m.len();
            let mk = params.last();
            let prefix = params.prefix().expect("k >= 2");
            match (mk, k) {
                (0, 2) => self.phi_poly(m[0] + 1),
                (1, 2) => Ok(&lin(1, 2) * &self.phi_poly(m[0] + 1)?
                    + &z2(pow2(m[0] + 1)) * &self.l_poly(m[0])?),
                (0, _) => self.euler_genus_poly(&prefix)?.halve_exact(),
                (1, _) => {
                    let half = (&lin(1, 2) * &self.euler_genus_poly(&prefix)?).halve_exact()?;
                    Ok(half + &z2(pow2(m[k - 2] + 3)) * &self.lambda_poly(&prefix)?)
                }
                _ => Ok(&lin(1, 2) * &self.lambda_poly(&params.with_last(mk - 1))?
                    + &z2(4u32.into()) * &self.lambda_poly(&params.with_last(mk - 2))?),
            }
        })
    }

    /// The Euler-genus polynomial `E_{m_1..m_k}`.
    pub fn euler_genus_poly(&self, params: &ParamTuple) -> Result<GenusPolynomial> {
        let m = params.as_slice();
        self.cached(|t| &mut t.e, &m.to_vec(), || {
            let k = m.len();
            if k == 1 {
                return Ok(self.phi_poly(m[0] + 2)?.scale(&2u32.into()));
            }
            let mk = params.last();
            let prefix = params.prefix().expect("k >= 2");
            if mk < 2 {
                let shorter = if k == 2 {
                    ParamTuple::new(vec![m[0] + mk])?
                } else {
                    prefix.with_last(prefix.last() + mk + 1)
                };
                return self.euler_genus_poly(&shorter);
            }
            Ok(&lin(1, 4) * &self.euler_genus_poly(&params.with_last(mk - 1))?
                + &z2(16u32.into()) * &self.euler_genus_poly(&params.with_last(mk - 2))?
                + &z2(pow2(mk + 3)) * &self.lambda_poly(&params.with_last(mk - 1))?)
        })
    }
}

pub fn l_poly(m: u32) -> Result<GenusPolynomial> {
    Recurrence::shared().l_poly(m)
}

pub fn phi_poly(m: u32) -> Result<GenusPolynomial> {
    Recurrence::shared().phi_poly(m)
}

pub fn lambda_poly(params: &ParamTuple) -> Result<GenusPolynomial> {
    Recurrence::shared().lambda_poly(params)
}

pub fn euler_genus_poly(params: &ParamTuple) -> Result<GenusPolynomial> {
    Recurrence::shared().euler_genus_poly(params)
}

pub fn canonicalize(params: &ParamTuple) -> ParamTuple {
    params.canonicalize()
}

/// Closed form for the number of embeddings of Euler genus `j`, `j <= 2`.
///
/// `j = 2` is only available for `k >= 2`; a ladder `(m)` supports `j <= 1`.
pub fn closed_form_eps(params: &ParamTuple, j: u32) -> Result<BigUint> {
    if !params.is_strict() {
        return Err(Error::Unsupported(format!(
            "closed forms need every entry >= 1, got {params}; canonicalize first"
        )));
    }
    let k = params.k() as i64;
    let m: Vec<i64> = params.as_slice().iter().map(|&x| i64::from(x)).collect();
    let sum: i64 = m.iter().sum();
    match (j, k) {
        (0, _) => Ok(2u32.into()),
        (1, 1) => Ok(BigUint::from((2 * (4 * (m[0] + 2) - 5)) as u64)),
        (1, _) => Ok(BigUint::from((8 * (sum + k) - 10) as u64)),
        (2, 1) => Err(Error::Unsupported("no closed form for genus 2 of a ladder (k = 1)".into())),
        (2, _) => {
            let mut total = BigInt::zero();
            for (idx, &mi) in m.iter().enumerate() {
                let i = idx as i64 + 1;
                total += BigInt::from(8 * (-9 + 4 * i + (-3 + 4 * i) * mi + 2 * mi * mi));
            }
            let big_pow = |e: i64| BigInt::one() << (e as usize);
            for idx in 1..m.len() {
                total += 2 * (big_pow(m[idx] + 3) + 3 * big_pow(m[idx - 1] + 3));
                let inner: i64 = m[..idx].iter().map(|&mj| mj * m[idx] + mj).sum();
                total += BigInt::from(32 * inner);
            }
            total -= big_pow(m[0] + 5);
            match total.to_biguint() {
                Some(v) if total.sign() != Sign::Minus => Ok(v),
                _ => Err(Error::InvariantViolation(format!("closed form for genus 2 is negative: {total}"))),
            }
        }
        _ => Err(Error::Unsupported(format!("no closed form for genus {j}"))),
    }
}
