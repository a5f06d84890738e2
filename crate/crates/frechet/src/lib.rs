//! Approximate continuous Frechet distance between polygonal curves.
//!
//! The crate computes an O(alpha)-approximation of the continuous Frechet
//! distance under the L-infinity norm in strongly subquadratic time, plus an
//! exact (quadratic) free-space oracle used for verification and figures.

pub mod approx;
pub mod curves;
pub mod error;
pub mod gen;
pub mod io;
pub mod signatures;
pub mod monotone_exit;
pub mod simplification;
pub mod sparsity;
pub mod straighten;
pub mod oracle;
pub mod render;

pub use curves::{curves_equal, linf_dist, Curve, CurveParam, Interval, Point};
pub use error::{Error, Result};
