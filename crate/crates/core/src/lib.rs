//! Weakly admissible meshes on planar domains, approximate Fekete point
//! extraction by greedy pivoted QR, and the discrete least-squares and
//! interpolation machinery around them.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix `f64`, which is what the tables and the CLI use.

// `!(a < b)` is used on purpose so that NaN takes the failure branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx;
pub mod basis;
pub mod catalog;
pub mod error;
pub mod fekete;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod mesh;
pub mod quadrature;
pub mod scalar;
pub mod tables;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Point = geometry::Point2<f64>;
pub type Domain64 = geometry::Domain<f64>;
pub type Mesh64 = mesh::Mesh<f64>;
pub type BasisSpec64 = basis::BasisSpec<f64>;
pub type FeketeResult64 = fekete::FeketeResult<f64>;
pub type PolyApprox64 = approx::PolyApprox<f64>;
