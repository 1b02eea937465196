//! Truncated power series in `q` with exact rational coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};


use crate::error::{Error, Result};

/// Library-wide default truncation order for q-expansions.
pub const DEFAULT_TRUNCATION: usize = 40;

/// A power series `c_0 + c_1 q + ... + c_T q^T + O(q^{T+1})`.
///
/// The coefficient vector always has length `T + 1`; arithmetic between two
/// series keeps the smaller truncation order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: Vec<BigRational>,
}

impl QSeries {
    pub fn zero(order: usize) -> Self {
        QSeries { coeffs: vec![BigRational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigRational::one();
        s
    }

    /// Builds a series from leading coefficients, padding or truncating to `order`.
    pub fn from_coeffs<I>(coeffs: I, order: usize) -> Self
    where
        I: IntoIterator<Item = BigRational>,
    {
        let mut v: Vec<BigRational> = coeffs.into_iter().take(order + 1).collect();
        v.resize(order + 1, BigRational::zero());
        QSeries { coeffs: v }
    }

    pub fn from_integers(coeffs: &[i64], order: usize) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigRational::from_integer(c.into())), order)
    }

    /// `c * q^k`, or zero when `k` exceeds the truncation order.
    pub fn monomial(c: BigRational, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn truncation_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs.iter().cloned(), order.min(self.truncation_order()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// True when every known coefficient is an integer `>= 0`.
    pub fn is_nonnegative_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer() && !c.is_negative())
    }

    /// Sum of the known coefficients (the value at `q = 1` for polynomials).
    pub fn coefficient_sum(&self) -> BigRational {
        self.coeffs.iter().fold(BigRational::zero(), |acc, c| acc + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.truncation_order().min(other.truncation_order());
        QSeries {
            coeffs: (0..=order).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.truncation_order().min(other.truncation_order());
        QSeries {
            coeffs: (0..=order).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.truncation_order().min(other.truncation_order());
        let mut out = vec![BigRational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        QSeries { coeffs: out }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiplicative inverse; `None` when the constant term vanishes.
    pub fn inverse(&self) -> Option<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return None;
        }
        let order = self.truncation_order();
        let inv0 = c0.recip();
        let mut out: Vec<BigRational> = Vec::with_capacity(order + 1);
        out.push(inv0.clone());
        for n in 1..=order {
            let mut s = BigRational::zero();
            for k in 1..=n {
                let a = &self.coeffs[k];
                if !a.is_zero() {
                    s += a * &out[n - k];
                }
            }
            out.push(-s * &inv0);
        }
        Some(QSeries { coeffs: out })
    }

    /// Evaluates the known part of the series at a rational `q`.
    pub fn eval(&self, q: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * q + c)
    }
}

impl super::Coefficient for QSeries {
    fn is_zero(&self) -> bool {
        QSeries::is_zero(self)
    }
    fn add_assign(&mut self, other: &Self) {
        *self = QSeries::add(self, other);
    }
    fn mul(&self, other: &Self) -> Self {
        QSeries::mul(self, other)
    }
    fn neg(&self) -> Self {
        QSeries::neg(self)
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_mag = k == 0 || !mag.is_one();
            match (k, show_mag) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "{mag}*q")?,
                (1, false) => write!(f, "q")?,
                (_, true) => write!(f, "{mag}*q^{k}")?,
                (_, false) => write!(f, "q^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.truncation_order() + 1)
    }
}

/// Integer coefficients of `(1-q)(1-q^2)...(1-q^n)` up to and including `q^order`.
fn q_factorial_integers(n: u64, order: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); order + 1];
    c[0] = BigInt::one();
    for k in 1..=n as usize {
        if k > order {
            break;
        }
        for j in (k..=order).rev() {
            let t = c[j - k].clone();
            c[j] -= t;
        }
    }
    c
}

/// `(n)_q! = (1-q)(1-q^2)...(1-q^n)` truncated after `q^order`.
pub fn q_factorial_series(n: u64, order: usize) -> QSeries {
    QSeries::from_coeffs(
        q_factorial_integers(n, order).into_iter().map(BigRational::from_integer),
        order,
    )
}

/// Exact division of integer polynomials (ascending coefficients).
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Result<Vec<BigInt>> {
    let dlead_idx = den.iter().rposition(|c| !c.is_zero()).ok_or(Error::InexactDivision)?;
    let dlead = &den[dlead_idx];
    let mut rem: Vec<BigInt> = num.to_vec();
    let nlen = rem.iter().rposition(|c| !c.is_zero()).map_or(0, |i| i + 1);
    if nlen == 0 {
        return Ok(vec![BigInt::zero()]);
    }
    if nlen - 1 < dlead_idx {
        return Err(Error::InexactDivision);
    }
    let qdeg = nlen - 1 - dlead_idx;
    let mut quot = vec![BigInt::zero(); qdeg + 1];
    for k in (0..=qdeg).rev() {
        let top = &rem[k + dlead_idx];
        if top.is_zero() {
            continue;
        }
        let (qk, r) = top.div_rem(dlead);
        if !r.is_zero() {
            return Err(Error::InexactDivision);
        }
        for (j, d) in den.iter().enumerate().take(dlead_idx + 1) {
            if !d.is_zero() {
                rem[k + j] -= &qk * d;
            }
        }
        quot[k] = qk;
    }
    if rem.iter().any(|c| !c.is_zero()) {
        return Err(Error::InexactDivision);
    }
    Ok(quot)
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Gaussian binomial `(m)_q! / ((k)_q! (m-k)_q!)` by exact polynomial division.
///
/// Returns [`Error::InexactDivision`] if the division leaves a remainder and
/// treats `k > m` as an empty coefficient (zero).
pub fn gaussian_binomial(m: u64, k: u64, order: usize) -> Result<QSeries> {
    if k > m {
        return Ok(QSeries::zero(order));
    }
    let full = |n: u64| q_factorial_integers(n, (n * (n + 1) / 2) as usize);
    let den = poly_mul(&full(k), &full(m - k));
    let quot = poly_div_exact(&full(m), &den)?;
    Ok(QSeries::from_coeffs(quot.into_iter().map(BigRational::from_integer), order))
}
