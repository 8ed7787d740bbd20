//! Numerical laboratory for weighted Bergman norms, hyperbolic level-set
//! geometry, and isoperimetric stability on the unit ball of C^n.
//!
//! The crate builds up, in layers:
//!
//! - [`geometry`]: closed-form invariant geometry of the ball (measures,
//!   geodesic balls, the isoperimetric profile, point automorphisms);
//! - [`quad`]: Gauss–Jacobi quadrature and the radial rule that integrates
//!   the weighted measures exactly on radial polynomials;
//! - [`holo`] and [`symbol`]: holomorphic evaluation and the level symbols
//!   whose superlevel sets the laboratory studies;
//! - [`levels`]: radial-graph level-set extraction with volume, perimeter,
//!   and flux measurements;
//! - [`barycenter`]: hyperbolic barycenters and recentering by point
//!   automorphisms;
//! - [`sphere`]: boundary deviation fields and isoperimetric stability;
//! - [`dominance`]: distribution dominance against the model weight and
//!   the coarea differential inequality;
//! - [`hinge`]: hinge transforms and the convex order of distributions;
//! - [`contraction`] and [`hardy`]: norm contraction along exponent lines,
//!   the deficit-to-shape gap, and the Hardy endpoint of the scale;
//! - [`setup`]: the end-to-end certificate that the perturbative regime
//!   applies to a given symbol.
//!
//! All computations are f64. Determinism is a design goal: fixed seeds,
//! index-ordered parallel maps, and sequential floating-point reductions
//! make every run byte-reproducible.

pub mod barycenter;
pub mod config;
pub mod contraction;
pub mod csvout;
pub mod dominance;
pub mod error;
pub mod fourier;
pub mod geometry;
pub mod hardy;
pub mod hinge;
pub mod holo;
pub mod levels;
pub mod quad;
pub mod setup;
pub mod sphere;
pub mod symbol;
pub mod suite;

pub use error::{Error, Result};
