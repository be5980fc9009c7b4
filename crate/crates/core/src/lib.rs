//! Total mean curvature of convex bodies in R³.
//!
//! Four independent routes to the same number:
//!
//! * the support-function sphere integral `∫_{S²} p_m dS` (and the equivalent
//!   pedal-body volume integral `∫ dy/‖y − m‖²`, by quadrature or Monte Carlo);
//! * the surface integral `∫ H dA` over a smooth chart;
//! * the polyhedral edge sum `½ Σ (π − αᵢ) aᵢ`.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`.

pub mod bodies;
pub mod catalog;
pub mod curvature;
pub mod directions;
pub mod error;
pub mod jet;
pub mod mesh;
pub mod polytope;
pub mod quadrature;
pub mod scalar;
pub mod surface;
pub mod vec3;
pub mod verify;

pub use bodies::{ConvexBody, Shape, UnitDirection};
pub use error::{Error, Result};
pub use polytope::ConvexPolytope;
pub use quadrature::SphereQuadrature;
pub use scalar::Real;
pub use vec3::Vec3;

pub type Body = ConvexBody<f64>;
pub type Direction = UnitDirection<f64>;
pub type Polytope = ConvexPolytope<f64>;
pub type Rule = SphereQuadrature<f64>;
pub type Point = Vec3<f64>;
