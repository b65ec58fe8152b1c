//! Even axisymmetric functions on the sphere and the kernels acting on them.

pub mod alexandrov;
pub mod body;
pub mod field;
pub mod grid;
pub mod operators;
pub mod params;

pub use alexandrov::{alexandrov_radial, convexify, support_from_radial, support_of, AlexandrovBody, RadialField};
pub use body::{
    dual_volume, dual_volume_radial, ellipsoid_body, min_ellipsoid, surface_area, volume, AxiBody,
    RotEllipsoid,
};
pub use field::{AxiFn, Interpolant};
pub use grid::MeridianGrid;
pub use operators::{gradient_map, gradient_norm_sq, monge_ampere, principal_radii, DualLpOperator};
pub use params::ProblemParams;
