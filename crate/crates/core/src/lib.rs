//! Largest-eigenvalue statistics and link metrics for single-stream
//! beamforming over dual-hop amplify-and-forward MIMO channels.
//!
//! Formulas are generic over [`Real`]; `f64`, `f32` and the 237-bit [`Wide`]
//! type are supported. Double-precision entry points switch to [`Wide`]
//! internally when a determinant or sum cancels badly.

pub mod eigdist;
pub mod error;
pub mod linalg;
pub mod metrics;
pub mod montecarlo;
pub mod quad;
pub mod real;
pub mod specfun;
pub mod validate;

pub use eigdist::{LinkBudget, MaxEigDistribution, SystemDims};
pub use error::{Error, Result};
pub use real::{Real, Wide};

pub type MaxEigDistributionF64 = MaxEigDistribution<f64>;
pub type MaxEigDistributionF32 = MaxEigDistribution<f32>;
pub type MaxEigDistributionWide = MaxEigDistribution<Wide>;
