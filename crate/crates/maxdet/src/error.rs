//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by constructions, registries, and verifications.
#[derive(Debug, Error)]
pub enum Error {
    /// A construction would exceed the configured size limit.
    #[error("order {requested} exceeds the size limit {limit}")]
    SizeLimit { requested: u64, limit: u64 },

    /// A Paley construction was given a composite modulus.
    #[error("{0} is not prime")]
    NotPrime(u64),

    /// A Paley construction was given a prime in the wrong residue class.
    #[error("{q} ≡ {} (mod 4), need {want} (mod 4)", q % 4)]
    WrongResidue { q: u64, want: u64 },

    /// An operation required a Hadamard matrix and the check failed.
    #[error("matrix of order {0} is not Hadamard")]
    NotHadamard(usize),

    /// Incompatible matrix shapes.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// The order registry has no entry at or below the requested n.
    #[error("registry has no Hadamard order ≤ {0}")]
    EmptyRegistryBelow(u64),

    /// h is not a valid order for the moment formulas (h ∈ {1, 2} ∪ 4ℤ⁺).
    #[error("invalid Hadamard order {0} for moment evaluation")]
    InvalidOrder(u64),

    /// A numeric parameter was outside its documented range.
    #[error("parameter out of range: {0}")]
    ParamRange(String),

    /// Perturbation bound precondition d·ε ≤ 1 violated.
    #[error("perturbation too large: d·ε = {0} > 1")]
    PerturbationTooLarge(String),

    /// Exhaustive enumeration refused: 2^(h·d) too large.
    #[error("instance too large to enumerate: h·d = {0} > {1}")]
    TooLargeToEnumerate(u64, u64),

    /// A text-format matrix or registry file failed to parse.
    #[error("parse error: {0}")]
    Parse(String),

    /// A verification scan found a violating instance.
    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
