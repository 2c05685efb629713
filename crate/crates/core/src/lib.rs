//! Numerics for ratios of quadratic Dirichlet L-functions: characters and Gauss
//! sums, L-function evaluators, Euler products, partial sums of the associated
//! triple Dirichlet series, main-term predictors and large smoothed sweeps.

pub mod afe;
pub mod arith;
pub mod empirical;
pub mod error;
pub mod eulerprod;
pub mod gauss;
pub mod harness;
pub mod lfunc;
pub mod mds;
pub mod predict;
pub mod reduce;
pub mod special;

pub use error::{Error, Result};
pub use num_complex::Complex64;
