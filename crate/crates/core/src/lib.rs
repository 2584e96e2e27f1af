//! Numerical verification engine for curvature inequalities on statistical
//! submanifolds of statistical warped products `R ×_f M(c)`.
//!
//! The geometry (linear algebra, ambient curvature, submanifold invariants,
//! constrained quadratic problems and the inequality checks) is generic over
//! [`Scalar`]; scenario generation, the chart lab and campaigns run in `f64`.

pub mod ambient;
pub mod campaign;
pub mod chart;
mod error;
pub mod json;
pub mod linalg;
pub mod optkit;
mod scalar;
pub mod scengen;
pub mod submanifold;
pub mod tolerance;
pub mod verifier;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Matrix64 = linalg::Matrix<f64>;
pub type SymMat64 = linalg::SymMat<f64>;
pub type SymMat32 = linalg::SymMat<f32>;
pub type WarpingProfile64 = ambient::WarpingProfile<f64>;
pub type AmbientGeometry64 = ambient::AmbientGeometry<f64>;
pub type SecondFundamentalForm64 = submanifold::SecondFundamentalForm<f64>;
pub type PointData = submanifold::SubmanifoldPointData<f64>;
pub type PointData32 = submanifold::SubmanifoldPointData<f32>;
pub type ConstrainedQp64 = optkit::ConstrainedQp<f64>;
pub type QpResult64 = optkit::QpResult<f64>;
