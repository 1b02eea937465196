//! Exact and log-domain arithmetic: q-series, Laurent polynomials in the
//! spectral variables, Gaussian rationals, and q-factorial logarithms.

mod gaussian;
mod laurent;
mod logcomplex;
mod qlog;
mod series;

pub use gaussian::GaussianRational;
pub use laurent::LaurentPoly;
pub use logcomplex::{LogComplex, LogSum};
pub use qlog::{q_factorial_log, QFactorialLog};
pub use series::{gaussian_binomial, q_factorial_series, QSeries, DEFAULT_TRUNCATION};

use num_rational::BigRational;
use num_traits::Zero;

/// Minimal ring interface for coefficients of a [`LaurentPoly`].
pub trait Coefficient: Clone + PartialEq + Send + Sync {
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, other: &Self);
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl Coefficient for BigRational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}
