//! Numerical tools for weighted Bergman spaces `A^p_alpha` on the unit disc.

pub mod analytic;
pub mod battery;
pub mod error;
pub mod extremal;
pub mod growth;
pub mod means;
pub mod quadrature;
pub mod special;

#[cfg(test)]
mod testing;

pub use analytic::{AnalyticFunction, ClosedTerm, TestFunction};
pub use error::{LabError, Result};
pub use quadrature::{adaptive_integrate, integrate_circle, AdaptiveValue, QuadratureRule, RadialRule};
pub use means::{bergman_norm, hardy_norm, lambda_star_seminorm, mean, HolderEstimate, MeanKind};
