//! Arithmetic backends for evaluating the q-Whittaker function.
//!
//! Each backend fixes how `q` and the spectral variables `z_k` are
//! represented:
//!
//! | backend        | `q`                     | `z`                    | value                       |
//! |----------------|-------------------------|------------------------|-----------------------------|
//! | [`SeriesMode`] | formal, truncated       | formal                 | `LaurentPoly<QSeries>`      |
//! | [`RationalMode`] | exact rational        | formal                 | `LaurentPoly<BigRational>`  |
//! | [`PointMode`]  | exact rational          | exact Gaussian rationals | `GaussianRational`        |
//! | [`FloatMode`]  | `e^{-eps}`, `0 < q < 1` | nonzero complex floats | `LogComplex`                |

use std::sync::RwLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{
    q_factorial_log, q_factorial_series, GaussianRational, LaurentPoly, LogComplex, LogSum, QSeries,
};
use crate::error::{Error, Result};

/// Arithmetic needed by the pattern sum, the recursion and the Hamiltonians.
///
/// `Coeff` holds functions of `q` alone (q-factorial ratios, `1 - q^n`);
/// `Value` holds functions of `q` and `z`. Exponent vectors shorter than the
/// rank are padded with zeros, so lower-rank functions live in the same
/// value space.
pub trait EvalMode: Sync {
    type Coeff: Clone + Send + Sync;
    type Value: Clone + Send + Sync;
    type Acc: Send;

    fn rank(&self) -> usize;

    fn zero(&self) -> Self::Value;
    fn is_zero(&self, v: &Self::Value) -> bool;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn scale(&self, v: &Self::Value, c: &Self::Coeff) -> Self::Value;

    /// `z_1^{e_1} ... z_m^{e_m}` with `m <= rank`.
    fn monomial(&self, exponents: &[i64]) -> Result<Self::Value>;

    /// `prod (num_i)_q! / prod (den_j)_q!`.
    fn factorial_ratio(&self, num: &[u64], den: &[u64]) -> Self::Coeff;

    /// `1 - q^n` for any integer `n`.
    fn one_minus_q_pow(&self, n: i64) -> Result<Self::Coeff>;

    fn acc_new(&self) -> Self::Acc;
    /// Adds `coeff * z^exponents` to the accumulator.
    fn acc_add_term(&self, acc: &mut Self::Acc, exponents: &[i64], coeff: &Self::Coeff) -> Result<()>;
    fn acc_add_value(&self, acc: &mut Self::Acc, v: &Self::Value);
    fn acc_finish(&self, acc: Self::Acc) -> Self::Value;
}

fn padded(exponents: &[i64], rank: usize) -> Vec<i64> {
    assert!(exponents.len() <= rank, "exponent vector longer than rank");
    let mut e = exponents.to_vec();
    e.resize(rank, 0);
    e
}

// ---------------------------------------------------------------------------
// formal q, formal z

/// Formal `q` truncated after `q^T`, formal `z`.
#[derive(Debug)]
pub struct SeriesMode {
    rank: usize,
    order: usize,
    factorials: Vec<QSeries>,
    inverses: Vec<QSeries>,
}

impl SeriesMode {
    pub fn new(rank: usize, order: usize) -> Self {
        // (n)_q! = (T)_q! mod q^{T+1} for n >= T, so T + 1 entries suffice
        let factorials: Vec<QSeries> = (0..=order as u64).map(|n| q_factorial_series(n, order)).collect();
        let inverses = factorials
            .iter()
            .map(|f| f.inverse().expect("q-factorial has unit constant term"))
            .collect();
        SeriesMode { rank, order, factorials, inverses }
    }

    pub fn truncation_order(&self) -> usize {
        self.order
    }

    pub fn factorial(&self, n: u64) -> &QSeries {
        &self.factorials[(n as usize).min(self.order)]
    }

    fn inverse_factorial(&self, n: u64) -> &QSeries {
        &self.inverses[(n as usize).min(self.order)]
    }
}

impl EvalMode for SeriesMode {
    type Coeff = QSeries;
    type Value = LaurentPoly<QSeries>;
    type Acc = LaurentPoly<QSeries>;

    fn rank(&self) -> usize {
        self.rank
    }
    fn zero(&self) -> Self::Value {
        LaurentPoly::zero(self.rank)
    }
    fn is_zero(&self, v: &Self::Value) -> bool {
        v.is_zero()
    }
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        let mut out = a.clone();
        out.add_assign(b);
        out
    }
    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        a.sub(b)
    }
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        a.mul(b)
    }
    fn scale(&self, v: &Self::Value, c: &QSeries) -> Self::Value {
        v.scale(c)
    }
    fn monomial(&self, exponents: &[i64]) -> Result<Self::Value> {
        Ok(LaurentPoly::monomial(padded(exponents, self.rank), QSeries::one(self.order)))
    }
    fn factorial_ratio(&self, num: &[u64], den: &[u64]) -> QSeries {
        let mut c = QSeries::one(self.order);
        for &n in num {
            if n > 0 {
                c = c.mul(self.factorial(n));
            }
        }
        for &n in den {
            if n > 0 {
                c = c.mul(self.inverse_factorial(n));
            }
        }
        c
    }
    fn one_minus_q_pow(&self, n: i64) -> Result<QSeries> {
        if n < 0 {
            return Err(Error::NegativeSeriesPower(n));
        }
        let mut c = QSeries::one(self.order);
        let qn = QSeries::monomial(BigRational::one(), n as usize, self.order);
        c = c.sub(&qn);
        Ok(c)
    }
    fn acc_new(&self) -> Self::Acc {
        self.zero()
    }
    fn acc_add_term(&self, acc: &mut Self::Acc, exponents: &[i64], coeff: &QSeries) -> Result<()> {
        acc.add_term(padded(exponents, self.rank), coeff.clone());
        Ok(())
    }
    fn acc_add_value(&self, acc: &mut Self::Acc, v: &Self::Value) {
        acc.add_assign(v);
    }
    fn acc_finish(&self, acc: Self::Acc) -> Self::Value {
        acc
    }
}

// ---------------------------------------------------------------------------
// exact rational q

/// Cached `(n)_q!` for a fixed rational `q`.
#[derive(Debug)]
struct RationalFactorials {
    q: BigRational,
    table: RwLock<Vec<BigRational>>,
}

impl RationalFactorials {
    fn new(q: BigRational) -> Result<Self> {
        // 1 - q^k vanishes for some k >= 1 iff q is 1 or -1
        let one = BigRational::one();
        if q == one || q == -one.clone() {
            return Err(Error::QOutOfRange(if q == one { 1.0 } else { -1.0 }));
        }
        Ok(RationalFactorials { q, table: RwLock::new(vec![BigRational::one()]) })
    }

    fn get(&self, n: u64) -> BigRational {
        let n = n as usize;
        {
            let t = self.table.read().expect("factorial table lock");
            if let Some(v) = t.get(n) {
                return v.clone();
            }
        }
        let mut t = self.table.write().expect("factorial table lock");
        while t.len() <= n {
            let k = t.len() as i32;
            let next = t.last().expect("nonempty") * (BigRational::one() - pow_rational(&self.q, k));
            t.push(next);
        }
        t[n].clone()
    }

    fn ratio(&self, num: &[u64], den: &[u64]) -> BigRational {
        let mut n = BigRational::one();
        for &a in num {
            n *= self.get(a);
        }
        let mut d = BigRational::one();
        for &b in den {
            d *= self.get(b);
        }
        n / d
    }

    fn one_minus_q_pow(&self, n: i64) -> BigRational {
        if n < 0 && self.q.is_zero() {
            // only reached for coefficients multiplying zero values
            return BigRational::zero();
        }
        BigRational::one() - pow_rational(&self.q, n as i32)
    }
}

fn pow_rational(q: &BigRational, k: i32) -> BigRational {
    if k == 0 {
        return BigRational::one();
    }
    if q.is_zero() {
        return BigRational::zero();
    }
    num_traits::pow::Pow::pow(q, k)
}

/// Exact rational `q`, formal `z`.
#[derive(Debug)]
pub struct RationalMode {
    rank: usize,
    factorials: RationalFactorials,
}

impl RationalMode {
    pub fn new(rank: usize, q: BigRational) -> Result<Self> {
        Ok(RationalMode { rank, factorials: RationalFactorials::new(q)? })
    }

    pub fn q(&self) -> &BigRational {
        &self.factorials.q
    }
}

impl EvalMode for RationalMode {
    type Coeff = BigRational;
    type Value = LaurentPoly<BigRational>;
    type Acc = LaurentPoly<BigRational>;

    fn rank(&self) -> usize {
        self.rank
    }
    fn zero(&self) -> Self::Value {
        LaurentPoly::zero(self.rank)
    }
    fn is_zero(&self, v: &Self::Value) -> bool {
        v.is_zero()
    }
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        let mut out = a.clone();
        out.add_assign(b);
        out
    }
    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        a.sub(b)
    }
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        a.mul(b)
    }
    fn scale(&self, v: &Self::Value, c: &BigRational) -> Self::Value {
        v.scale(c)
    }
    fn monomial(&self, exponents: &[i64]) -> Result<Self::Value> {
        Ok(LaurentPoly::monomial(padded(exponents, self.rank), BigRational::one()))
    }
    fn factorial_ratio(&self, num: &[u64], den: &[u64]) -> BigRational {
        self.factorials.ratio(num, den)
    }
    fn one_minus_q_pow(&self, n: i64) -> Result<BigRational> {
        Ok(self.factorials.one_minus_q_pow(n))
    }
    fn acc_new(&self) -> Self::Acc {
        self.zero()
    }
    fn acc_add_term(&self, acc: &mut Self::Acc, exponents: &[i64], coeff: &BigRational) -> Result<()> {
        acc.add_term(padded(exponents, self.rank), coeff.clone());
        Ok(())
    }
    fn acc_add_value(&self, acc: &mut Self::Acc, v: &Self::Value) {
        acc.add_assign(v);
    }
    fn acc_finish(&self, acc: Self::Acc) -> Self::Value {
        acc
    }
}

/// Exact rational `q` and exact complex-rational `z`.
#[derive(Debug)]
pub struct PointMode {
    z: Vec<GaussianRational>,
    factorials: RationalFactorials,
}

impl PointMode {
    pub fn new(q: BigRational, z: Vec<GaussianRational>) -> Result<Self> {
        Ok(PointMode { z, factorials: RationalFactorials::new(q)? })
    }

    /// Real rational spectral values.
    pub fn real(q: BigRational, z: &[BigRational]) -> Result<Self> {
        Self::new(q, z.iter().cloned().map(GaussianRational::real).collect())
    }
}

impl EvalMode for PointMode {
    type Coeff = BigRational;
    type Value = GaussianRational;
    type Acc = GaussianRational;

    fn rank(&self) -> usize {
        self.z.len()
    }
    fn zero(&self) -> GaussianRational {
        GaussianRational::zero()
    }
    fn is_zero(&self, v: &GaussianRational) -> bool {
        v.is_zero()
    }
    fn add(&self, a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
        a.add(b)
    }
    fn sub(&self, a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
        a.sub(b)
    }
    fn mul(&self, a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
        a.mul(b)
    }
    fn scale(&self, v: &GaussianRational, c: &BigRational) -> GaussianRational {
        v.scale(c)
    }
    fn monomial(&self, exponents: &[i64]) -> Result<GaussianRational> {
        let mut out = GaussianRational::one();
        for (index, (&e, z)) in exponents.iter().zip(&self.z).enumerate() {
            let zp = z.pow(e).ok_or(Error::ZeroToNegativePower { index: index + 1, power: e })?;
            out = out.mul(&zp);
        }
        Ok(out)
    }
    fn factorial_ratio(&self, num: &[u64], den: &[u64]) -> BigRational {
        self.factorials.ratio(num, den)
    }
    fn one_minus_q_pow(&self, n: i64) -> Result<BigRational> {
        Ok(self.factorials.one_minus_q_pow(n))
    }
    fn acc_new(&self) -> GaussianRational {
        GaussianRational::zero()
    }
    fn acc_add_term(&self, acc: &mut GaussianRational, exponents: &[i64], coeff: &BigRational) -> Result<()> {
        *acc = acc.add(&self.monomial(exponents)?.scale(coeff));
        Ok(())
    }
    fn acc_add_value(&self, acc: &mut GaussianRational, v: &GaussianRational) {
        *acc = acc.add(v);
    }
    fn acc_finish(&self, acc: GaussianRational) -> GaussianRational {
        acc
    }
}

// ---------------------------------------------------------------------------
// floating point

/// `q = e^{-eps}` with `0 < q < 1` and nonzero complex `z`, summed in the log domain.
#[derive(Debug, Clone)]
pub struct FloatMode {
    eps: f64,
    log_z: Vec<LogComplex>,
}

impl FloatMode {
    pub fn from_eps(eps: f64, z: &[Complex64]) -> Result<Self> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::NonPositiveEpsilon(eps));
        }
        Ok(FloatMode { eps, log_z: z.iter().map(|&v| LogComplex::from_complex(v)).collect() })
    }

    pub fn from_q(q: f64, z: &[Complex64]) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::QOutOfRange(q));
        }
        Self::from_eps(-q.ln(), z)
    }

    /// `z_k = e^{i eps lambda_k}`.
    pub fn unit_circle(eps: f64, lambdas: &[f64]) -> Result<Self> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::NonPositiveEpsilon(eps));
        }
        Ok(FloatMode { eps, log_z: lambdas.iter().map(|&l| LogComplex::from_log(0.0, eps * l)).collect() })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    fn ln_factorial(&self, n: u64) -> f64 {
        q_factorial_log(n, self.eps).expect("eps validated at construction")
    }

    fn log_monomial(&self, exponents: &[i64]) -> Result<LogComplex> {
        let mut lm = 0.0;
        let mut ph = 0.0;
        for (index, (&e, z)) in exponents.iter().zip(&self.log_z).enumerate() {
            if e == 0 {
                continue;
            }
            if z.is_zero() {
                if e < 0 {
                    return Err(Error::ZeroToNegativePower { index: index + 1, power: e });
                }
                return Ok(LogComplex::ZERO);
            }
            lm += z.log_magnitude() * e as f64;
            ph += z.phase() * e as f64;
        }
        Ok(LogComplex::from_log(lm, ph))
    }
}

impl EvalMode for FloatMode {
    type Coeff = LogComplex;
    type Value = LogComplex;
    type Acc = LogSum;

    fn rank(&self) -> usize {
        self.log_z.len()
    }
    fn zero(&self) -> LogComplex {
        LogComplex::ZERO
    }
    fn is_zero(&self, v: &LogComplex) -> bool {
        v.is_zero()
    }
    fn add(&self, a: &LogComplex, b: &LogComplex) -> LogComplex {
        a.add(b)
    }
    fn sub(&self, a: &LogComplex, b: &LogComplex) -> LogComplex {
        a.sub(b)
    }
    fn mul(&self, a: &LogComplex, b: &LogComplex) -> LogComplex {
        a.mul(b)
    }
    fn scale(&self, v: &LogComplex, c: &LogComplex) -> LogComplex {
        v.mul(c)
    }
    fn monomial(&self, exponents: &[i64]) -> Result<LogComplex> {
        self.log_monomial(exponents)
    }
    fn factorial_ratio(&self, num: &[u64], den: &[u64]) -> LogComplex {
        let mut s = 0.0;
        for &n in num {
            s += self.ln_factorial(n);
        }
        for &n in den {
            s -= self.ln_factorial(n);
        }
        LogComplex::from_log(s, 0.0)
    }
    fn one_minus_q_pow(&self, n: i64) -> Result<LogComplex> {
        Ok(LogComplex::from_real(-(-(n as f64) * self.eps).exp_m1()))
    }
    fn acc_new(&self) -> LogSum {
        LogSum::new()
    }
    fn acc_add_term(&self, acc: &mut LogSum, exponents: &[i64], coeff: &LogComplex) -> Result<()> {
        acc.push(self.log_monomial(exponents)?.mul(coeff));
        Ok(())
    }
    fn acc_add_value(&self, acc: &mut LogSum, v: &LogComplex) {
        acc.push(*v);
    }
    fn acc_finish(&self, acc: LogSum) -> LogComplex {
        acc.finish()
    }
}

/// Parses `"a/b"`, an integer, or a terminating decimal such as `"0.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let n: BigInt = a.trim().parse().ok()?;
        let d: BigInt = b.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let neg = int.starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" { BigInt::zero() } else { int.parse().ok()? };
        let frac_part: BigInt = frac.parse().ok()?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mag = int_part.magnitude().clone();
        let total = BigInt::from(mag) * &scale + frac_part;
        let total = if neg { -total } else { total };
        return Some(BigRational::new(total, scale));
    }
    s.parse::<BigInt>().ok().map(BigRational::from_integer)
}
