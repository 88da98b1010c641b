//! Point clouds, affine flats and hyperplanes.

mod cloud;
mod flat;
mod hyperplane;

pub use cloud::{PointRecord, WeightedPointCloud};
pub use flat::{
    canonicalize_flat, dist2_point_complement_form, dist2_point_flat, nearest_flat, total_cost, AffineFlat,
    DEFAULT_REL_TOL,
};
pub use hyperplane::Hyperplane;
