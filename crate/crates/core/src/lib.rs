//! Scale functions of spectrally negative Lévy processes constructed from
//! special Bernstein functions, with numerical oracles that cross-check every
//! closed form.
//!
//! All numerics are generic over [`Real`]; the aliases below fix the scalar
//! to `f64`, the type used by the CLI and most callers.

pub mod dd;
pub mod error;
pub mod quad;
pub mod real;
pub mod specfun;
pub mod bernstein;
pub mod catalog;
pub mod oracle;
pub mod fluctuation;
pub mod montecarlo;

pub use dd::DoubleDouble;
pub use error::{Error, Result};
pub use quad::QuadratureConfig;
pub use real::{Extended, Real};

/// Families over `f64`.
pub type Family = catalog::ScaleFamily<f64>;
/// Double-double families, used where `f64` cancellation is too coarse.
pub type WideFamily = catalog::ScaleFamily<DoubleDouble>;
pub type Quadrature = QuadratureConfig<f64>;
pub type Roots = fluctuation::RootConfig<f64>;
