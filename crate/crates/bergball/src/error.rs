//! Error type shared by all modules.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by the geometry, quadrature, and level-set pipelines.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation
    /// (point outside the open ball, non-positive volume, weight exponent
    /// at or below the dimension, and so on).
    #[error("domain error: {0}")]
    Domain(String),

    /// An argument is structurally invalid (empty list, mismatched grid
    /// sizes, non-convex test function).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An integrand evaluated to a non-finite value at a quadrature node.
    #[error("non-finite integrand at node rho={rho}, theta={theta}")]
    NonFiniteIntegrand { rho: f64, theta: f64 },

    /// The log-level function is not strictly monotone across the radial
    /// bracket, so the superlevel boundary is not a radial graph there.
    #[error("outside radial-graph regime: {0}")]
    OutsideRadialGraphRegime(String),

    /// The requested level has no root inside the configured radial window.
    #[error("level outside window: {0}")]
    LevelOutsideWindow(String),

    /// The gradient of the symbol vanishes on the extracted boundary, so the
    /// level is not a regular value.
    #[error("non-regular value: {0}")]
    NonRegularValue(String),

    /// Applying an automorphism to the set produced a boundary that is no
    /// longer a single-valued radial graph.
    #[error("recentering left graph class: {0}")]
    RecenteringLeftGraphClass(String),

    /// A stability check was asked for on a set that violates the centering
    /// or small-graph preconditions.
    #[error("outside Fuglede regime: {0}")]
    OutsideFugledeRegime(String),

    /// Two profiles that must share a mean (for hinge and convex-order
    /// comparisons) do not.
    #[error("mean mismatch: {0}")]
    MeanMismatch(String),

    /// An iterative solver (root finder, Newton minimizer, eigenvalue
    /// iteration) failed to converge; the message carries the trace.
    #[error("solver failed: {0}")]
    Solver(String),

    /// Configuration file or value errors.
    #[error("config error: {0}")]
    Config(String),

    /// Filesystem errors while writing experiment outputs.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
