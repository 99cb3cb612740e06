//! Analytic Campanato seminorms on the unit disk and numerical criteria for
//! composition operators between Campanato spaces.
//!
//! All suprema are taken over finite grids and are reported as lower bounds
//! together with the point that attains them.

pub mod analytic;
pub mod campanato;
pub mod carleson;
pub mod criteria;
pub mod error;
pub mod geometry;
pub mod hardy;
pub mod nevanlinna;
pub mod quadrature;

pub use analytic::{certify_self_map, AnalyticMap, CertificateMethod, SelfMapCertificate};
pub use error::{Error, Result};
pub use geometry::{CarlesonBox, CircleArc, DiskPoint};
pub use num_complex::Complex64;
