//! Convex roof extensions of sampled functions.
//!
//! Given a function `f` sampled on a finite subset `C` of ℝᵈ, the convex
//! roof is the largest convex function on `co(C)` that lies below the
//! sampled graph; on a finite sample it coincides with the lower convex
//! envelope and every value is the optimum of a small linear program.
//! This crate evaluates that envelope exactly, extracts the flat simplices
//! and supporting hyperplanes that govern its regularity, probes
//! continuity and differentiability numerically, and applies the same
//! construction to two-qubit entanglement measures where a closed-form
//! oracle (the Wootters concurrence) is available for cross-checking.
//!
//! All numeric kernels are generic over the scalar type through the
//! [`scalar::Float`] trait; `f64` aliases for the main types are exported
//! at the crate root.

pub mod analysis;
pub mod error;
pub mod examples;
pub mod geometry;
pub mod io;
pub mod lp;
pub mod quantum;
pub mod roof;
pub mod scalar;
pub mod verify;

mod linalg;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

pub type Point64 = geometry::Point<f64>;
pub type PointCloud64 = geometry::PointCloud<f64>;
pub type ConvexCombination64 = geometry::ConvexCombination<f64>;
pub type Hull64 = geometry::Hull<f64>;
pub type LinearProgram64 = lp::LinearProgram<f64>;
pub type SampledConvexProblem64 = roof::SampledConvexProblem<f64>;
pub type RoofValue64 = roof::RoofValue<f64>;
pub type AffineFunctional64 = roof::AffineFunctional<f64>;
pub type PureState64 = quantum::PureState<f64>;
pub type DensityMatrix64 = quantum::DensityMatrix<f64>;
pub type PureDecomposition64 = quantum::PureDecomposition<f64>;

