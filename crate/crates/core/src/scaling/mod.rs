//! The `q = e^{-eps} -> 1` limit.
//!
//! Weights are placed at `p_k = (n + 1 - 2k) m(eps) + x_k / eps` (rounded),
//! spectral variables at `z_k = e^{i eps lambda_k}`, and
//! `eps^{l(l+1)/2} e^{l(l+3)/2 A(eps)} Psi(p)` is compared against the
//! classical function at the effective `x`, where `l = n - 1`.

mod hamiltonian;

pub use hamiltonian::{hamiltonian_limit_residual, ConstantFunction, GaussianFunction, HamiltonianLimit, TestFunction};

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{q_factorial_log, LogComplex};
use crate::classical::{whittaker_classical, QuadratureConfig};
use crate::error::{Error, Result};
use crate::patterns::DominantWeight;
use crate::whittaker::{psi_direct, FloatMode};

/// Reading of the integer part `[x]` in `m(eps) = -[ln(eps) / eps]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntegerPart {
    #[default]
    Floor,
    TowardZero,
}

impl IntegerPart {
    fn apply(self, v: f64) -> f64 {
        match self {
            IntegerPart::Floor => v.floor(),
            IntegerPart::TowardZero => v.trunc(),
        }
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::NonPositiveEpsilon(eps));
    }
    Ok(())
}

/// `m(eps) = -floor(ln(eps) / eps)`.
pub fn m_epsilon(eps: f64) -> Result<i64> {
    m_epsilon_with(eps, IntegerPart::Floor)
}

pub fn m_epsilon_with(eps: f64, convention: IntegerPart) -> Result<i64> {
    check_eps(eps)?;
    let v = -convention.apply(eps.ln() / eps);
    if v.abs() > i64::MAX as f64 / 4.0 {
        return Err(Error::Overflow);
    }
    // -0.0 from floor(0) prints oddly; normalize
    Ok(v as i64)
}

/// `A(eps) = -pi^2 / (6 eps) - ln(eps / 2 pi) / 2`.
pub fn a_epsilon(eps: f64) -> Result<f64> {
    check_eps(eps)?;
    Ok(-PI * PI / (6.0 * eps) - 0.5 * (eps / (2.0 * PI)).ln())
}

/// `eps`, `q`, `m(eps)`, `A(eps)` for one rank.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingContext {
    pub eps: f64,
    pub q: f64,
    pub m: i64,
    pub a: f64,
    pub rank: usize,
    pub convention: IntegerPart,
}

/// A requested point, its lattice image and the point that image represents exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantizedPoint {
    pub requested: Vec<f64>,
    pub p: Vec<i64>,
    pub effective: Vec<f64>,
}

impl ScalingContext {
    pub fn new(eps: f64, rank: usize) -> Result<Self> {
        Self::with_convention(eps, rank, IntegerPart::Floor)
    }

    pub fn with_convention(eps: f64, rank: usize, convention: IntegerPart) -> Result<Self> {
        check_eps(eps)?;
        if rank == 0 {
            return Err(Error::UnsupportedRank(0, "at least 1"));
        }
        Ok(ScalingContext {
            eps,
            q: (-eps).exp(),
            m: m_epsilon_with(eps, convention)?,
            a: a_epsilon(eps)?,
            rank,
            convention,
        })
    }

    /// `(n + 1 - 2k) m` for `k = 1..n`.
    pub fn offsets(&self) -> Vec<i64> {
        let n = self.rank as i64;
        (1..=n).map(|k| (n + 1 - 2 * k) * self.m).collect()
    }

    pub fn quantize(&self, x: &[f64]) -> Result<QuantizedPoint> {
        if x.len() != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: x.len() });
        }
        let offsets = self.offsets();
        let mut p = Vec::with_capacity(x.len());
        for (&xk, &o) in x.iter().zip(&offsets) {
            let r = (xk / self.eps).round();
            if !r.is_finite() || r.abs() > 1e15 {
                return Err(Error::Overflow);
            }
            p.push(o + r as i64);
        }
        let effective = self.coordinates(&p);
        Ok(QuantizedPoint { requested: x.to_vec(), p, effective })
    }

    /// The `x` represented exactly by the lattice point `p`.
    pub fn coordinates(&self, p: &[i64]) -> Vec<f64> {
        p.iter().zip(self.offsets()).map(|(&pk, o)| self.eps * (pk - o) as f64).collect()
    }

    /// `l(l+1)/2 ln(eps) + l(l+3)/2 A(eps)` with `l = rank - 1`.
    pub fn log_prefactor(&self) -> f64 {
        let l = (self.rank - 1) as f64;
        0.5 * l * (l + 1.0) * self.eps.ln() + 0.5 * l * (l + 3.0) * self.a
    }
}

/// `ln f_alpha` and its deviation from the leading asymptotics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FAlpha {
    pub n: u64,
    pub ln_f: f64,
    /// `ln f_1 - A - e^{-y}` for `alpha = 1`, `ln f_2 - A` for `alpha = 2`.
    pub residual: f64,
}

/// `f_alpha(y, eps) = (n)_q!` at `n = round(y / eps + alpha m(eps))`, `q = e^{-eps}`.
pub fn f_alpha(y: f64, eps: f64, alpha: u8) -> Result<FAlpha> {
    f_alpha_with(y, eps, alpha, IntegerPart::Floor)
}

pub fn f_alpha_with(y: f64, eps: f64, alpha: u8, convention: IntegerPart) -> Result<FAlpha> {
    check_eps(eps)?;
    if alpha != 1 && alpha != 2 {
        return Err(Error::Incompatible(format!("alpha must be 1 or 2, got {alpha}")));
    }
    let m = m_epsilon_with(eps, convention)?;
    let n = (y / eps + (alpha as i64 * m) as f64).round();
    if !n.is_finite() {
        return Err(Error::Overflow);
    }
    if n < 0.0 {
        return Err(Error::NegativeFactorial(n as i64));
    }
    let n = n as u64;
    let ln_f = q_factorial_log(n, eps)?;
    let a = a_epsilon(eps)?;
    let residual = if alpha == 1 { ln_f - a - (-y).exp() } else { ln_f - a };
    Ok(FAlpha { n, ln_f, residual })
}

/// `sum_{n >= 1} ln(1 - e^{-n t})`, stopping once `e^{-n t} < 1e-17`.
fn ln_euler_product(t: f64) -> f64 {
    let mut s = 0.0;
    let mut c = 0.0;
    let mut n = 1u64;
    loop {
        let x = (-(n as f64) * t).exp();
        if x < 1e-17 {
            break;
        }
        let term = (-x).ln_1p();
        let y = term - c;
        let u = s + y;
        c = (u - s) - y;
        s = u;
        n += 1;
    }
    s
}

/// Relative mismatch of
/// `prod (1 - e^{-n eps}) = sqrt(2 pi / eps) e^{eps/24} e^{-pi^2 / (6 eps)} prod (1 - e^{-4 pi^2 n / eps})`.
pub fn eta_modular_residual(eps: f64) -> Result<f64> {
    eta_residual(eps, true)
}

/// As [`eta_modular_residual`] but without the `e^{eps/24}` factor.
pub fn eta_modular_residual_uncorrected(eps: f64) -> Result<f64> {
    eta_residual(eps, false)
}

fn eta_residual(eps: f64, corrected: bool) -> Result<f64> {
    check_eps(eps)?;
    let lhs = ln_euler_product(eps);
    let mut rhs = 0.5 * (2.0 * PI / eps).ln() - PI * PI / (6.0 * eps) + ln_euler_product(4.0 * PI * PI / eps);
    if corrected {
        rhs += eps / 24.0;
    }
    Ok((rhs - lhs).exp_m1().abs())
}

/// Least-squares slope of `ln |r|` against `ln eps`.
///
/// `NaN` with fewer than two points or a zero residual.
pub fn loglog_slope(eps: &[f64], residuals: &[f64]) -> f64 {
    if eps.len() != residuals.len() || eps.len() < 2 {
        return f64::NAN;
    }
    let pts: Vec<(f64, f64)> = eps.iter().zip(residuals).map(|(e, r)| (e.ln(), r.abs().ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// The rescaled q-Whittaker value at one `eps`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledValue {
    pub value: Complex64,
    pub log_value: LogComplex,
    pub point: QuantizedPoint,
    /// False when the quantized weight is not dominant; the value is then zero.
    pub dominant: bool,
    pub m: i64,
}

/// `eps^{l(l+1)/2} e^{l(l+3)/2 A(eps)} Psi_z(p)` with `z_k = e^{i eps lambda_k}`.
pub fn scaled_psi(x: &[f64], lambda: &[f64], ctx: &ScalingContext) -> Result<ScaledValue> {
    if lambda.len() != ctx.rank {
        return Err(Error::RankMismatch { expected: ctx.rank, found: lambda.len() });
    }
    let point = ctx.quantize(x)?;
    let weight = DominantWeight::new(point.p.clone());
    let dominant = weight.is_dominant();
    let mode = FloatMode::unit_circle(ctx.eps, lambda)?;
    let psi = psi_direct(&weight, &mode)?;
    let log_value = psi.scale_log(ctx.log_prefactor());
    if !log_value.is_zero() && !log_value.log_magnitude().is_finite() {
        return Err(Error::Overflow);
    }
    let value = log_value.to_complex();
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::Overflow);
    }
    Ok(ScaledValue { value, log_value, point, dominant, m: ctx.m })
}

/// One row of a convergence scan.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitRow {
    pub eps: f64,
    pub m: i64,
    pub effective_x: Vec<f64>,
    pub dominant: bool,
    pub q_value: Complex64,
    pub classical: Complex64,
    pub classical_error: f64,
    pub abs_err: f64,
    pub rel_err: f64,
}

/// Scaled q-values against the classical function at each row's effective `x`.
///
/// Rows are computed concurrently and returned in input order.
pub fn limit_scan(
    x: &[f64],
    lambda: &[f64],
    eps_list: &[f64],
    cfg: &QuadratureConfig,
    convention: IntegerPart,
) -> Result<Vec<LimitRow>> {
    for &e in eps_list {
        check_eps(e)?;
    }
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Incompatible("epsilon list must be strictly decreasing".into()));
    }
    eps_list
        .par_iter()
        .map(|&eps| {
            let ctx = ScalingContext::with_convention(eps, x.len(), convention)?;
            let s = scaled_psi(x, lambda, &ctx)?;
            let cl = whittaker_classical(&s.point.effective, lambda, cfg)?;
            let abs_err = (s.value - cl.value).norm();
            let denom = cl.value.norm();
            let rel_err = if denom > 0.0 { abs_err / denom } else { f64::INFINITY };
            Ok(LimitRow {
                eps,
                m: ctx.m,
                effective_x: s.point.effective,
                dominant: s.dominant,
                q_value: s.value,
                classical: cl.value,
                classical_error: cl.error_estimate,
                abs_err,
                rel_err,
            })
        })
        .collect()
}
