//! Covariant positive operator valued measures built from trace-one positive
//! operators, with every property the construction promises checked
//! numerically: covariance, normalization, positivity, the trace identity,
//! the orthogonality relations, and injectivity of the map from operators to
//! measures.
//!
//! Two concrete carriers are implemented:
//!
//! * [`fock`] / [`heisenberg`] — the Heisenberg group over truncated Fock
//!   space, with phase space `(p, q)` and measure `dp dq / 2π`; the
//!   unimodular case where the POVM is `(1/2π)∫_X D T D† dp dq`.
//! * [`axb`] — the non-unimodular `ax+b` group on a geometrically
//!   discretized half-line, where the formal-degree root enters the
//!   quadratic form.
//!
//! [`povm`] holds the group-agnostic bookkeeping (density validation,
//! positivity reports, injectivity separation), [`quad`] the quadrature
//! rules, and [`runner`]/[`config`] the batch CLI front-end.

pub mod axb;
pub mod config;
pub mod error;
pub mod fock;
pub mod heisenberg;
pub mod output;
pub mod povm;
pub mod quad;
pub mod runner;

pub use error::{Error, Result};
