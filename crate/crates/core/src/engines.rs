//! Uniform entry point over the four engines.

use std::fmt;
use std::str::FromStr;

use crate::embedding::{self, EmbeddingConfig, TreeStrategy};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::genfun::{self, Truncation};
use crate::overlap::{self, EnumerationConfig};
use crate::params::ParamTuple;
use crate::polynomial::GenusPolynomial;
use crate::recurrence;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Engine {
    Recurrence,
    Matrix,
    Embedding,
    Genfun,
}

impl Engine {
    pub const ALL: [Engine; 4] = [Engine::Recurrence, Engine::Matrix, Engine::Embedding, Engine::Genfun];

    pub fn name(self) -> &'static str {
        match self {
            Engine::Recurrence => "recurrence",
            Engine::Matrix => "matrix",
            Engine::Embedding => "embedding",
            Engine::Genfun => "genfun",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Engine::ALL
            .into_iter()
            .find(|e| e.name() == s.trim())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown engine {s:?}")))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EngineConfig {
    /// Overrides the engine's default enumeration budget.
    pub budget_bits: Option<u32>,
    pub execution: Execution,
    /// Uniform `t` truncation for the generating-function engine.
    pub trunc: Option<i64>,
    pub tree: TreeStrategy,
}

/// `E_{m_1..m_k}` from the chosen engine. Enumeration and series engines
/// rewrite a trailing `0` or `1` first; the recurrence engine resolves it
/// through its initial conditions.
pub fn compute(engine: Engine, params: &ParamTuple, config: &EngineConfig) -> Result<GenusPolynomial> {
    match engine {
        Engine::Recurrence => recurrence::euler_genus_poly(params),
        Engine::Matrix => {
            let cfg = EnumerationConfig {
                budget_bits: config.budget_bits.unwrap_or(overlap::DEFAULT_BUDGET_BITS),
                execution: config.execution,
            };
            overlap::euler_genus_by_matrices(params, &cfg)
        }
        Engine::Embedding => {
            let cfg = EmbeddingConfig {
                budget_bits: config.budget_bits.unwrap_or(embedding::DEFAULT_BUDGET_BITS),
                execution: config.execution,
                tree: config.tree,
            };
            embedding::embedding_distribution(params, &cfg)
        }
        Engine::Genfun => {
            let p = params.normalize_tail();
            if p.k() == 1 {
                let m = i64::from(p.as_slice()[0]) + 2;
                let hi = config.trunc.unwrap_or(m);
                let phi = genfun::phi_series(hi, p.betti() as u32)?;
                return Ok(phi.genus_coeff(&[m])?.scale(&2u32.into()));
            }
            let mut trunc = Truncation::for_target(&p);
            if let Some(n) = config.trunc {
                trunc.t = vec![n; p.k()];
            }
            genfun::extract_e_with(&p, &trunc)
        }
    }
}
