//! Lower bounds on maximal determinants of {±1}-matrices.
//!
//! Let D̄(n) be the largest determinant attainable by an n×n matrix with
//! entries in {−1, +1}, and R(n) = D̄(n)/n^(n/2) its ratio to the Hadamard
//! upper bound. This crate builds large-determinant matrices by bordering an
//! h×h Hadamard core with d = n − h random ±1 columns and a deterministic
//! sign-matched row block, and evaluates the resulting lower bounds on D̄(n)
//! and R(n) with exact rational and certified interval arithmetic.
//!
//! The pieces:
//!
//! - [`hadamard`]: bit-packed sign matrices, Sylvester/Paley/Kronecker
//!   constructions, and the registry that resolves n into (h, d).
//! - [`moments`]: exact big-rational mean μ(h) and variance σ²(h) of the
//!   bordered Schur-complement diagonal.
//! - [`interval`]: fixed-point directed-rounding reals and interval
//!   transcendentals (the certification substrate).
//! - [`stirling`]: the error-bounded series for ln C(2m, m) and interval
//!   enclosures of μ(h).
//! - [`schur`]: border sampling, the Schur pair (F, G), exact determinants,
//!   and the determinant identity connecting them.
//! - [`sampler`]: exhaustive and Monte Carlo validation of the moment
//!   formulas and of the good-event determinant bound.
//! - [`bounds`]: every closed-form lower bound on D̄(n) and R(n), in
//!   log-domain arithmetic, plus the comparison tables.
//! - [`oracle`]: exhaustive ground-truth D̄(n) for tiny n.
//! - [`cli`]: the `maxdet` command-line front end.
//!
//! Everything is deterministic: sampling is driven by a counter-based
//! generator keyed on (seed, trial index), so results are identical for any
//! worker count.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod hadamard;
pub mod interval;
pub mod moments;
pub mod oracle;
pub mod sampler;
pub mod schur;
pub mod stirling;

pub use error::{Error, Result};
pub use moments::ExactScalar;
