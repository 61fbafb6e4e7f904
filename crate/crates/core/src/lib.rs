//! Large-deviation toolkit for subgraph counts in sparse Erdős–Rényi graphs.
//!
//! Rate predictions, variational solvers for the upper/lower tail problems,
//! homomorphism counting, spectral norms, exact enumeration and importance
//! sampling, plus checks of the covering inequalities at testable scale.
//! The crate is `no_std` with `alloc`; file formats and the CLI live in the
//! companion `ldgraphs` crate.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod error;
pub mod graphs;
pub mod homcount;
pub mod matrices;
pub mod mc;
pub mod netcover;
pub mod problem;
pub mod rates;
pub mod rng;
pub mod varsolve;

pub use error::{Error, Result};
pub use graphs::{Classification, DegreeProfile, Known, PatternGraph, QuotientFamily};
pub use matrices::{MatrixKind, Spectrum, SymMatrix};
pub use problem::{Direction, Functional, TailProblem};

/// Version of this crate, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
