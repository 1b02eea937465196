//! Class-one q-deformed and classical gl(n) Whittaker functions.
//!
//! * [`arith`]: exact q-series, Laurent polynomials and log-domain complex sums.
//! * [`patterns`]: streaming Gelfand-Zetlin pattern enumeration.
//! * [`whittaker`]: the q-Whittaker function as a pattern sum, its recursive
//!   form, and the character normalization.
//! * [`toda`]: q-Toda Hamiltonians as shift operators and exact eigen-checks.
//! * [`classical`]: Givental quadrature for the classical Whittaker function.
//! * [`scaling`]: the `q = e^{-eps}` scaling limit relating the two.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arith;
pub mod classical;
pub mod error;
pub mod patterns;
pub mod scaling;
pub mod toda;
pub mod whittaker;

pub use arith::{GaussianRational, LaurentPoly, LogComplex, QSeries, DEFAULT_TRUNCATION};
pub use error::{Error, Result};
pub use patterns::{dominant_weights, DominantWeight, GzPattern};
pub use whittaker::{SpectralParams, SpectralMode};

pub use num_complex::Complex64;
pub use num_rational::BigRational;
