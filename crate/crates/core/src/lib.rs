//! Euler-genus polynomials of cubic caterpillar-Halin graphs `H_{m_1,...,m_k}`.
//!
//! Four independent engines compute the same polynomial:
//!
//! * [`recurrence`]: memoized recurrences, polynomial cost in `sum(m)`;
//! * [`overlap`]: rank histogram of every GF(2) overlap matrix;
//! * [`embedding`]: face tracing over every T-rotation system;
//! * [`genfun`]: coefficient extraction from truncated generating functions.
//!
//! [`engines::compute`] dispatches over all four.

pub mod embedding;
pub mod engines;
pub mod error;
pub mod exec;
pub mod genfun;
pub mod gf2;
pub mod overlap;
pub mod params;
pub mod polynomial;
pub mod recurrence;

pub use engines::{compute, Engine, EngineConfig};
pub use error::{Error, Result};
pub use exec::Execution;
pub use gf2::Gf2Matrix;
pub use params::ParamTuple;
pub use polynomial::GenusPolynomial;
