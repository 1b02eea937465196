//! Classical gl(n) Whittaker functions from the iterated Givental integral.
//!
//! `psi_{k+1}(x) = int_{R^k} Q(x, y; lambda_{k+1}) psi_k(y) dy` with
//! `psi_1(x) = e^{i lambda_1 x}` and
//! `Q(x, y; l) = exp{ i l (sum x - sum y) - sum_i (e^{y_i - x_i} + e^{x_{i+1} - y_i}) }`.
//!
//! Integration runs over the real box, which is adequate for real `lambda`.

mod givental;
mod grid;

pub use grid::{AxisGrid, TabulatedFunction};

use num_complex::Complex64;

use crate::error::{Error, Result};
use givental::Level;

/// Largest supported rank.
pub const MAX_CLASSICAL_RANK: usize = 4;

/// The Givental kernel between a row of length `n + 1` and one of length `n`.
///
/// With an empty lower row this is the rank-one function `e^{i lambda x}`.
pub fn givental_kernel(x_upper: &[f64], x_lower: &[f64], lambda: f64) -> Result<Complex64> {
    if x_upper.len() != x_lower.len() + 1 {
        return Err(Error::RankMismatch { expected: x_lower.len() + 1, found: x_upper.len() });
    }
    let phase = lambda * (x_upper.iter().sum::<f64>() - x_lower.iter().sum::<f64>());
    let potential: f64 = x_lower
        .iter()
        .enumerate()
        .map(|(i, &y)| (y - x_upper[i]).exp() + (x_upper[i + 1] - y).exp())
        .sum();
    Ok(Complex64::from_polar((-potential).exp(), phase))
}

/// One-dimensional rule applied on every axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Composite trapezoid; converges geometrically for these analytic, rapidly decaying integrands.
    Trapezoid,
    /// Composite Simpson.
    Simpson,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct QuadratureConfig {
    /// Half-size of the integration window per axis.
    pub half_width: f64,
    /// Nodes per axis; odd, at least 9.
    pub nodes: usize,
    pub scheme: Scheme,
    /// Relative tolerance for the two-resolution check.
    pub tolerance: f64,
    /// Absolute floor added to the tolerance, for values near zero.
    pub abs_tolerance: f64,
    /// Kernel factors below this magnitude are dropped.
    pub cutoff: f64,
}

impl QuadratureConfig {
    /// 257 nodes for rank up to 2, 129 beyond, window half-width 12.
    pub fn for_rank(rank: usize) -> Self {
        QuadratureConfig {
            half_width: 12.0,
            nodes: if rank <= 2 { 257 } else { 129 },
            scheme: Scheme::Trapezoid,
            tolerance: 1e-6,
            abs_tolerance: 1e-12,
            cutoff: 1e-40,
        }
    }

    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.nodes = nodes;
        self
    }

    pub fn with_half_width(mut self, r: f64) -> Self {
        self.half_width = r;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.half_width > 0.0) || !self.half_width.is_finite() {
            return Err(Error::InvalidQuadrature(format!("half-width must be positive, got {}", self.half_width)));
        }
        if self.nodes < 9 || self.nodes.is_multiple_of(2) {
            return Err(Error::InvalidQuadrature(format!("nodes must be odd and at least 9, got {}", self.nodes)));
        }
        if !(self.cutoff >= 0.0 && self.cutoff < 1.0) {
            return Err(Error::InvalidQuadrature(format!("cutoff must lie in [0, 1), got {}", self.cutoff)));
        }
        if !(self.tolerance >= 0.0) || !(self.abs_tolerance >= 0.0) {
            return Err(Error::InvalidQuadrature("tolerances must be nonnegative".into()));
        }
        Ok(())
    }

    fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.nodes - 1) as f64
    }

    fn half_count(&self) -> i64 {
        ((self.nodes - 1) / 2) as i64
    }

    fn coarse(&self) -> (f64, i64) {
        let m = self.half_count();
        (2.0 * self.spacing(), (m + 1) / 2)
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self::for_rank(2)
    }
}

fn check_inputs(x: &[f64], lambda: &[f64]) -> Result<()> {
    let n = lambda.len();
    if n == 0 || n > MAX_CLASSICAL_RANK {
        return Err(Error::UnsupportedRank(n, "1..=4"));
    }
    if x.len() != n {
        return Err(Error::RankMismatch { expected: n, found: x.len() });
    }
    if x.iter().chain(lambda).any(|v| !v.is_finite()) {
        return Err(Error::InvalidQuadrature("coordinates and spectral parameters must be finite reals".into()));
    }
    Ok(())
}

/// Reusable evaluator of `psi_n(.; lambda)` at one resolution.
///
/// Lower-rank functions are tabulated lazily on the integration lattice and
/// shared across evaluations, so stencils and scans around one point cost
/// little more than a single value.
pub struct ClassicalEvaluator {
    lambda: Vec<f64>,
    level: Level,
}

impl ClassicalEvaluator {
    pub fn new(lambda: &[f64], cfg: &QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        check_inputs(&vec![0.0; lambda.len()], lambda)?;
        let level = Level::new(lambda, cfg.spacing(), cfg.half_count(), cfg.scheme, cfg.cutoff);
        Ok(ClassicalEvaluator { lambda: lambda.to_vec(), level })
    }

    fn coarse(lambda: &[f64], cfg: &QuadratureConfig) -> Result<Self> {
        let (h, m) = cfg.coarse();
        let level = Level::new(lambda, h, m, cfg.scheme, cfg.cutoff);
        Ok(ClassicalEvaluator { lambda: lambda.to_vec(), level })
    }

    pub fn rank(&self) -> usize {
        self.lambda.len()
    }

    pub fn value(&self, x: &[f64]) -> Result<Complex64> {
        check_inputs(x, &self.lambda)?;
        Ok(self.level.evaluate(x, true))
    }
}

/// A quadrature value with its two-resolution error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassicalValue {
    pub value: Complex64,
    pub error_estimate: f64,
}

/// `psi_n(x; lambda)` with `n = lambda.len() <= 4`.
///
/// The estimate is the difference to the same computation at twice the node
/// spacing; exceeding `tolerance * |value| + abs_tolerance` is an error.
pub fn whittaker_classical(x: &[f64], lambda: &[f64], cfg: &QuadratureConfig) -> Result<ClassicalValue> {
    cfg.validate()?;
    check_inputs(x, lambda)?;
    let fine = ClassicalEvaluator::new(lambda, cfg)?.value(x)?;
    let coarse = ClassicalEvaluator::coarse(lambda, cfg)?.value(x)?;
    let error_estimate = (fine - coarse).norm();
    let allowed = cfg.tolerance * fine.norm() + cfg.abs_tolerance;
    if error_estimate > allowed {
        return Err(Error::NonConvergence { estimate: error_estimate, tolerance: allowed });
    }
    Ok(ClassicalValue { value: fine, error_estimate })
}

/// Finite-difference check of the first two classical Toda Hamiltonians.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalEigencheck {
    pub psi: Complex64,
    /// `sum_i d psi / d x_i` by central differences.
    pub h1_psi: Complex64,
    /// `-1/2 sum_i d^2 psi / d x_i^2 + sum_i e^{x_{i+1} - x_i} psi` by central differences.
    pub h2_psi: Complex64,
    /// `i sum lambda`.
    pub eigenvalue1: Complex64,
    /// `1/2 sum lambda^2`.
    pub eigenvalue2: f64,
    pub residual1: f64,
    pub residual2: f64,
}

/// Relative residuals `|H_1 psi - i sum(lambda) psi| / |psi|` and
/// `|H_2 psi - 1/2 sum(lambda^2) psi| / |psi|` with step `h`.
pub fn classical_eigencheck(x: &[f64], lambda: &[f64], cfg: &QuadratureConfig, h: f64) -> Result<ClassicalEigencheck> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidQuadrature(format!("finite-difference step must be positive, got {h}")));
    }
    let eval = ClassicalEvaluator::new(lambda, cfg)?;
    eigencheck_with(&eval, x, h)
}

/// As [`classical_eigencheck`], reusing an evaluator across steps or points.
pub fn eigencheck_with(eval: &ClassicalEvaluator, x: &[f64], h: f64) -> Result<ClassicalEigencheck> {
    let n = eval.rank();
    let psi = eval.value(x)?;
    if psi.norm() < 1e-12 {
        return Err(Error::VanishingValue(psi.norm()));
    }
    let mut first = Complex64::new(0.0, 0.0);
    let mut second = Complex64::new(0.0, 0.0);
    let mut y = x.to_vec();
    for i in 0..n {
        y[i] = x[i] + h;
        let plus = eval.value(&y)?;
        y[i] = x[i] - h;
        let minus = eval.value(&y)?;
        y[i] = x[i];
        first += (plus - minus) / (2.0 * h);
        second += (plus - 2.0 * psi + minus) / (h * h);
    }
    let potential: f64 = x.windows(2).map(|w| (w[1] - w[0]).exp()).sum();
    let h2_psi = -0.5 * second + potential * psi;
    let eigenvalue1 = Complex64::new(0.0, eval.lambda.iter().sum());
    let eigenvalue2 = 0.5 * eval.lambda.iter().map(|l| l * l).sum::<f64>();
    let residual1 = (first - eigenvalue1 * psi).norm() / psi.norm();
    let residual2 = (h2_psi - eigenvalue2 * psi).norm() / psi.norm();
    Ok(ClassicalEigencheck { psi, h1_psi: first, h2_psi, eigenvalue1, eigenvalue2, residual1, residual2 })
}

/// Tabulates `psi_n(.; lambda)` on a rectangular grid.
pub fn tabulate(lambda: &[f64], cfg: &QuadratureConfig, axes: Vec<AxisGrid>) -> Result<TabulatedFunction> {
    let eval = ClassicalEvaluator::new(lambda, cfg)?;
    if axes.len() != lambda.len() {
        return Err(Error::RankMismatch { expected: lambda.len(), found: axes.len() });
    }
    TabulatedFunction::fill(axes, |p| eval.value(p))
}
