//! Nonlinear quantum search simulation and a causal-model toolkit.
//!
//! * [`statevector`]: sparse pure states, unitaries, partial traces.
//! * [`nonlinear`]: the Ξ gate (marker and counter modes), the local Weinberg
//!   map and signaling checks.
//! * [`algorithms`]: search and counting against truth-table oracles.
//! * [`causal`]: DAGs, d-separation, Markov factorization, fine-tuning audits
//!   and the Bell scenario.
//! * [`circuit`]: compilation of causal models to sampling circuits.
//! * [`format`]: the text file formats.

pub mod algorithms;
pub mod causal;
pub mod circuit;
pub mod distribution;
pub mod error;
pub mod format;
pub mod nonlinear;
pub mod report;
pub mod statevector;

#[doc(hidden)]
pub mod cli;

pub use error::{Error, Result};
