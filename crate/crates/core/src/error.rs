//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors produced by the model, geometry and districting routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter failed validation; the name identifies the offender.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// `k * n` exceeds the configured voter-count guard.
    #[error("{requested} voters exceeds the configured maximum of {max}")]
    TooManyVoters { requested: u128, max: u64 },

    /// Exhaustive enumeration was requested for a circle too large to scan.
    #[error("enumeration over {kn} voters exceeds the guard of {max} (2^{kn} patterns)")]
    EnumerationTooLarge { kn: usize, max: usize },

    /// An operation that is only defined for two districts got `k != 2`.
    #[error("operation requires k = 2, got k = {k}")]
    RequiresTwoDistricts { k: usize },

    /// A polygon failed validation (too few vertices, repeated vertices,
    /// zero area or non-finite coordinates).
    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(String),

    /// Adaptive quadrature exhausted its subdivision budget before reaching
    /// the requested tolerance.
    #[error("quadrature did not converge: error estimate {achieved:e} exceeds tolerance {requested:e}")]
    QuadratureNonConvergence { requested: f64, achieved: f64 },

    /// No split line satisfies the population-balance constraint.
    #[error("infeasible split: {0}")]
    InfeasibleSplit(String),

    /// A density with zero total mass cannot have a centroid.
    #[error("density has zero total mass on [{a}, {b}]")]
    ZeroMass { a: f64, b: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
