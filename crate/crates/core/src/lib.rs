//! Numerical certification toolkit for symmetric-polynomial separation bounds.
//!
//! The crate evaluates normalized powersum polynomials on complex set inputs,
//! computes four torus inner products (Vandermonde-weighted, uniform-torus,
//! and two composites over a structured product distribution) both in closed
//! form and by seeded Monte Carlo, constructs the truncated-Blaschke hard
//! function `g` together with its exact coefficient table, and turns the
//! diagonal coefficient spectrum of `g` into rank-truncation lower bounds.
//! A pairwise-symmetric network reproduces `g` exactly and, with
//! exponential-sum activations, to any requested uniform error.
//!
//! Everything is deterministic given a root seed; the `cli` module exposes
//! the verification suites, bound tables, and approximation reports as a
//! command-line front end with JSON and CSV output.

pub mod algebra;
pub mod bounds;
pub mod cli;
pub mod hardfn;
pub mod inner;
pub mod nets;
pub mod polys;
pub mod sampling;

use thiserror::Error;

/// Errors shared across the crate.
///
/// Closed-form evaluators refuse inputs outside the regime where the formula
/// is actually claimed rather than extrapolating; that refusal is
/// [`Error::OutOfRegime`]. Shape mismatches between index vectors and set
/// inputs are [`Error::DimensionMismatch`].
#[derive(Debug, Error)]
pub enum Error {
    /// A closed-form identity was requested outside its validity regime.
    #[error("out of regime: {0}")]
    OutOfRegime(String),

    /// Vector or matrix shapes do not line up.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A configuration or argument value is invalid.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Evaluation hit a pole of a rational map.
    #[error("pole encountered: {0}")]
    Pole(String),

    /// Report serialization or file output failed.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
