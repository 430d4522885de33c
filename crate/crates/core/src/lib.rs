//! Exact machinery for approximate duality over `F_2^n` and its use in
//! compiling low-rank boolean matrices into deterministic two-party
//! protocols.
//!
//! The crate is organised bottom-up:
//!
//! * [`f2core`]: vectors, sets, spans, representation counts, Walsh–Hadamard
//!   spectra and the duality measure `D(A, B)`.
//! * [`boolmatrix`]: boolean matrices with exact ranks over `Q` and `F_2`,
//!   the `M = <a_i, b_j>` factorization, discrepancy and rectangle search.
//! * [`adcomb`]: Balog–Szemerédi–Gowers extraction, the small-span (PFR)
//!   oracle and doubling diagnostics.
//! * [`approxdual`]: the sumset sequence, base case, pull-back and the
//!   end-to-end dual pair finder, plus an exact oracle.
//! * [`protocol`]: recursive rectangle splitting into a protocol tree,
//!   simulation, verification and the leaf-recurrence audit.
//! * [`generators`]: seeded instance families shared by the CLI, tests and
//!   benchmarks.
//!
//! All densities, biases and thresholds are exact rationals.

pub mod adcomb;
pub mod approxdual;
pub mod boolmatrix;
pub mod config;
pub mod error;
pub mod f2core;
pub mod generators;
pub mod protocol;
pub mod rational;

pub use config::Limits;
pub use error::{Error, ErrorClass, Result};

/// Exact rational used for every density, bias and threshold.
pub type Rational = num_rational::BigRational;

pub use adcomb::{BsgResult, DoublingReport, PfrResult, PfrStrategy};
pub use approxdual::{DualFinder, DualPair, PipelineTrace, SequenceState};
pub use boolmatrix::{BoolMatrix, Factorization, MatrixStats, MonoRect, SubmatrixView};
pub use f2core::{F2Set, F2Vector, SpectrumResult};
pub use protocol::{CostReport, MonoFinder, ProtocolNode, ProtocolTree};
