//! Exact counting, simulation and reduction tools for fine-grained
//! quantum-supremacy arguments built on degree-3 polynomials over F₂.
//!
//! The crate is organised by capability:
//!
//! * [`poly3`] polynomials, evaluation and brute-force gap counting
//! * [`lptwy`] a better-than-brute-force counting algorithm mod `2^l`
//! * [`statevector`] a dense state-vector simulator
//! * [`circuits`] IQP and QAOA encodings of the gap, and the promise-gap
//!   decision harness
//! * [`linops`] permanents, Hermitian linear algebra, unitary dilations and
//!   Fock-state amplitudes
//! * [`valiant`] the cycle-cover gadget reduction from gaps to permanents
//! * [`gap_stats`] moments and statistics of the gap distribution
//! * [`avg_case`] worst-case to average-case reductions and query algorithms
//! * [`estimator`] qubit-count estimates from conjectured lower bounds
//! * [`cli`] the `qcs` command-line front end

pub mod avg_case;
pub mod circuits;
pub mod cli;
pub mod error;
pub mod estimator;
pub mod gap_stats;
pub mod limits;
pub mod linops;
pub mod lptwy;
pub mod poly3;
pub mod statevector;
pub mod valiant;

pub use error::{Error, Result};
pub use limits::Limits;
pub use poly3::{GapValue, Poly3};
