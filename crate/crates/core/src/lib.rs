//! Axially symmetric convex bodies and the dual L_p Minkowski problem.

pub mod cli;
pub mod dual_lp;
pub mod ellipsoid_bounds;
pub mod error;
pub mod fit;
pub mod minkowski;
pub mod nonuniqueness;
pub mod quadrature;
pub mod sample;
pub mod sphere;

pub use error::{Error, Result};
