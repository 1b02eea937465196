//! Expansion of the q-Toda Hamiltonians in `eps` around the classical ones.
//!
//! On a smooth function `F` of `x`, placed on the lattice through the
//! quantized coordinates, `(H_1 - n) F / eps -> sum_i dF/dx_i` and
//! `-(H_1 - H_n - (n - 1) + (H_n - 1)^2 / 2) F / eps^2 -> H_2^cl F`.

use serde::{Deserialize, Serialize};

use super::ScalingContext;
use crate::error::{Error, Result};
use crate::toda::HamiltonianSpec;

/// A smooth function with closed-form classical Hamiltonians.
pub trait TestFunction: Sync {
    fn value(&self, x: &[f64]) -> f64;
    /// `sum_i dF/dx_i`.
    fn first_hamiltonian(&self, x: &[f64]) -> f64;
    /// `-1/2 sum_i d^2F/dx_i^2 + sum_i e^{x_{i+1} - x_i} F`.
    fn second_hamiltonian(&self, x: &[f64]) -> f64;
}

fn potential(x: &[f64]) -> f64 {
    x.windows(2).map(|w| (w[1] - w[0]).exp()).sum()
}

/// `F(x) = e^{-|x|^2 / 2}`.
#[derive(Clone, Copy, Debug, Default)]
pub struct GaussianFunction;

impl TestFunction for GaussianFunction {
    fn value(&self, x: &[f64]) -> f64 {
        (-0.5 * x.iter().map(|v| v * v).sum::<f64>()).exp()
    }
    fn first_hamiltonian(&self, x: &[f64]) -> f64 {
        -x.iter().sum::<f64>() * self.value(x)
    }
    fn second_hamiltonian(&self, x: &[f64]) -> f64 {
        let f = self.value(x);
        let lap: f64 = x.iter().map(|v| v * v - 1.0).sum::<f64>() * f;
        -0.5 * lap + potential(x) * f
    }
}

/// `F(x) = 1`.
#[derive(Clone, Copy, Debug, Default)]
pub struct ConstantFunction;

impl TestFunction for ConstantFunction {
    fn value(&self, _: &[f64]) -> f64 {
        1.0
    }
    fn first_hamiltonian(&self, _: &[f64]) -> f64 {
        0.0
    }
    fn second_hamiltonian(&self, x: &[f64]) -> f64 {
        potential(x)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianLimit {
    pub eps: f64,
    pub effective_x: Vec<f64>,
    pub residual1: f64,
    pub residual2: f64,
}

/// `(H_r F)(p)` with `F` read through the quantized coordinates.
fn apply(ctx: &ScalingContext, h: &HamiltonianSpec, f: &dyn Fn(&[i64]) -> f64, p: &[i64]) -> f64 {
    let mut s = 0.0;
    let mut shifted = p.to_vec();
    for (subset, xs) in h.terms() {
        shifted.copy_from_slice(p);
        for &i in &subset {
            shifted[i] += 1;
        }
        let mut t = f(&shifted);
        for &i in &xs {
            t *= -(-ctx.eps * (p[i] - p[i + 1] + 1) as f64).exp_m1();
        }
        s += t;
    }
    s
}

/// Residuals of the first- and second-order limits at the quantized image of `x`.
pub fn hamiltonian_limit_residual(ctx: &ScalingContext, test: &dyn TestFunction, x: &[f64]) -> Result<HamiltonianLimit> {
    let n = ctx.rank;
    if x.len() != n {
        return Err(Error::RankMismatch { expected: n, found: x.len() });
    }
    let point = ctx.quantize(x)?;
    let p = &point.p;
    let xe = &point.effective;
    let f = |q: &[i64]| test.value(&ctx.coordinates(q));
    let h1 = HamiltonianSpec::new(n, 1)?;
    let hn = HamiltonianSpec::new(n, n)?;
    let eps = ctx.eps;
    let f0 = f(p);
    let h1f = apply(ctx, &h1, &f, p);
    let hnf = apply(ctx, &hn, &f, p);
    // (H_n - 1)^2 F = F(p + 2) - 2 F(p + 1) + F(p)
    let p2: Vec<i64> = p.iter().map(|v| v + 2).collect();
    let sq = f(&p2) - 2.0 * hnf + f0;
    let residual1 = ((h1f - n as f64 * f0) / eps - test.first_hamiltonian(xe)).abs();
    let bracket = h1f - hnf - (n as f64 - 1.0) * f0 + 0.5 * sq;
    let residual2 = (-bracket / (eps * eps) - test.second_hamiltonian(xe)).abs();
    Ok(HamiltonianLimit { eps, effective_x: xe.clone(), residual1, residual2 })
}
