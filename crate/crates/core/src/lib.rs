//! Projective clustering, exact hyperplane cover and the two hardness
//! reductions from Line Clustering / Hyperplane Cover, with exact rational
//! auditing.
//!
//! The numeric core is generic over [`Scalar`]; the aliases below fix the
//! common instantiations.

pub mod clustering;
pub mod cover;
pub mod error;
pub mod exact;
pub mod fitting;
pub mod generate;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod partition;
pub mod plot;
pub mod reductions;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{AffineFlat, Hyperplane, PointRecord, WeightedPointCloud};
pub use scalar::{Rational, RealScalar, Scalar, ScalarMode, ScalarValue};

pub type CloudF64 = WeightedPointCloud<f64>;
pub type CloudF32 = WeightedPointCloud<f32>;
pub type CloudQ = WeightedPointCloud<Rational>;
pub type FlatF64 = AffineFlat<f64>;
pub type FlatF32 = AffineFlat<f32>;
pub type FlatQ = AffineFlat<Rational>;
pub type SolutionF64 = clustering::ClusteringSolution<f64>;
pub type FitResultF64 = fitting::FitResult<f64>;
