//! Exact symbolic engine for twisted exterior derivatives on flat tori.
//!
//! Coefficients are trigonometric polynomials with Gaussian-rational
//! coefficients, written in the exponential monomial basis `e^{i<k,t>}`.
//! Everything downstream (operators, sparse elimination, cohomology
//! dimensions) is computed exactly; there is no floating point anywhere.

pub mod scalar;
pub mod trig;
pub mod form;
pub mod bidegree;
pub mod twist;
pub mod basis;
pub mod sparse;
pub mod engine;
pub mod relative;
pub mod lck;
pub mod constructions;
pub mod parse;
pub mod fixtures;
pub mod report;
pub mod verify;

mod error;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Engine name and version as stamped into reports.
pub fn engine_version() -> String {
    format!("lichten {}", env!("CARGO_PKG_VERSION"))
}
