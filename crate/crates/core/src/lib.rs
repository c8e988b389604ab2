//! Hadamard star products of domains in C².
//!
//! The crate computes, for complete Reinhardt domains `D` and `G` in C²
//! containing the origin, the dual complement `D*`, the extremal domain
//! `h_(1,1) * G` through the "separates 0 and ∞" test on the punctured
//! plane, and their composition `D * G`. An independent power-series and
//! contour-integral engine cross-checks the geometric answers.

pub mod cli;
pub mod domains;
pub mod dual;
pub mod error;
pub mod point;
pub mod separation;
pub mod series;
pub mod star;
pub mod verification;

pub use domains::{Domain2, Extent, Shadow};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use point::Point2;
