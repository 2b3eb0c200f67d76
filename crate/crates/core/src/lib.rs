//! Exact computation of optimal destabilizing vectors, limit points and
//! stratifications.
//!
//! * [`cone`]: projection onto polyhedral cones and linear minimization over
//!   a cone's unit sphere, with KKT certificates.
//! * [`torus`]: linear torus actions, maximal weights, optimal destabilizing
//!   rays, limits, induced problems and strata.
//! * [`gl`]: the `Hom(V, V₀)` and flag-chain problems of `GL` type.
//! * [`gauge`]: Harder–Narasimhan filtrations and closed-form destabilizers
//!   for bundles and holomorphic pairs in slope-data form.

pub mod cone;
pub mod error;
pub mod gauge;
pub mod gl;
pub mod linalg;
pub mod rational;
pub mod torus;

pub use error::{Error, Result};
pub use rational::{Extended, Rational, SignedSquare};
