//! Numerical toolkit for finite-dimensional quantum compact metric spaces.
//!
//! The matrix and Lip-norm layers are generic over the scalar type
//! ([`Real`], implemented for `f32` and `f64`); the optimizers and metric
//! estimators run in `f64`. The aliases below name the `f64` instances used
//! throughout.

pub mod engine;
pub mod error;
pub mod lipnorm;
pub mod matrix;
pub mod metrics;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type HermitianMatrix = matrix::Hermitian<f64>;
pub type DensityState = matrix::Density<f64>;
pub type UnitaryMap = matrix::Unitary<f64>;
pub type HermitianBasis64 = matrix::HermitianBasis<f64>;
pub type ComplexMatrix = matrix::CMatrix<f64>;

pub type LipNormSpec = lipnorm::LipNorm<f64>;

pub type HermitianMatrix32 = matrix::Hermitian<f32>;
pub type DensityState32 = matrix::Density<f32>;
pub type UnitaryMap32 = matrix::Unitary<f32>;
