//! Exact Hausdorff distances between polytopes, homothetic matching, and
//! generators for hard Hausdorff instances.

pub mod cli;
pub mod distance;
pub mod error;
pub mod hausdorff;
pub mod hardness;
pub mod linalg;
pub mod lp;
pub mod matching;
pub mod minimize;
pub mod norm;
pub mod point;
pub mod polytope;
pub mod qp;
pub mod rational;
pub mod vertex_enum;

pub use error::{Error, Result};
pub use norm::NormSpec;
pub use point::Point;
pub use polytope::{BoundingBox, HPolytope, HRow, Polytope, VPolytope};
pub use rational::Rational;
