//! The class-one q-deformed gl(n) Whittaker function.
//!
//! The generic entry points [`psi_direct`] and [`psi_recursive`] work with
//! any [`EvalMode`]. [`evaluate`] dispatches on runtime parameters and is
//! what the command line uses.

mod mode;
mod psi;

pub use mode::{parse_rational, EvalMode, FloatMode, PointMode, RationalMode, SeriesMode};
pub use psi::{delta_series, psi_character, psi_direct, psi_recursive};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arith::{GaussianRational, LaurentPoly, LogComplex, QSeries};
use crate::error::{Error, Result};
use crate::patterns::DominantWeight;

/// How the spectral variables `z_1..z_n` are given.
#[derive(Clone, Debug, PartialEq)]
pub enum SpectralMode {
    /// Indeterminates; the result is a Laurent polynomial.
    Formal,
    /// Exact complex-rational values.
    Exact(Vec<GaussianRational>),
    /// Floating-point complex values.
    Complex(Vec<Complex64>),
    /// `z_k = e^{i eps lambda_k}` with `q = e^{-eps}`.
    UnitCircle(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralParams {
    rank: usize,
    mode: SpectralMode,
}

impl SpectralParams {
    pub fn formal(rank: usize) -> Self {
        SpectralParams { rank, mode: SpectralMode::Formal }
    }

    pub fn exact(z: Vec<GaussianRational>) -> Self {
        SpectralParams { rank: z.len(), mode: SpectralMode::Exact(z) }
    }

    pub fn complex(z: Vec<Complex64>) -> Self {
        SpectralParams { rank: z.len(), mode: SpectralMode::Complex(z) }
    }

    pub fn unit_circle(lambdas: Vec<f64>) -> Self {
        SpectralParams { rank: lambdas.len(), mode: SpectralMode::UnitCircle(lambdas) }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn mode(&self) -> &SpectralMode {
        &self.mode
    }

    /// Floating-point `z` values at `q = e^{-eps}`; `None` in formal mode.
    pub fn complex_values(&self, eps: f64) -> Option<Vec<Complex64>> {
        match &self.mode {
            SpectralMode::Formal => None,
            SpectralMode::Exact(z) => Some(
                z.iter()
                    .map(|g| {
                        let (re, im) = g.to_f64();
                        Complex64::new(re, im)
                    })
                    .collect(),
            ),
            SpectralMode::Complex(z) => Some(z.clone()),
            SpectralMode::UnitCircle(l) => Some(l.iter().map(|&x| Complex64::from_polar(1.0, eps * x)).collect()),
        }
    }
}

/// How `q` is given.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum QSpec {
    /// Formal `q`, truncated after `q^truncation`.
    Formal { truncation: usize },
    /// Exact rational `q`.
    Rational(#[serde(with = "rational_str")] BigRational),
    /// Floating-point `q` in `(0, 1)`.
    Float(f64),
    /// `q = e^{-eps}`.
    Epsilon(f64),
}

mod rational_str {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational(&s).ok_or_else(|| serde::de::Error::custom(format!("not a rational: {s}")))
    }
}

/// Ψ in whichever representation the parameters call for.
#[derive(Clone, Debug, PartialEq)]
pub enum QWhittakerValue {
    Series(LaurentPoly<QSeries>),
    RationalPoly(LaurentPoly<BigRational>),
    Exact(GaussianRational),
    Float(LogComplex),
}

impl QWhittakerValue {
    pub fn is_zero(&self) -> bool {
        match self {
            QWhittakerValue::Series(v) => v.is_zero(),
            QWhittakerValue::RationalPoly(v) => v.is_zero(),
            QWhittakerValue::Exact(v) => v.is_zero(),
            QWhittakerValue::Float(v) => v.is_zero(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Direct,
    Recursive,
}

fn run<M: EvalMode>(p: &DominantWeight, mode: &M, method: Method) -> Result<M::Value> {
    match method {
        Method::Direct => psi_direct(p, mode),
        Method::Recursive => psi_recursive(p, mode),
    }
}

fn float_eps(q: &QSpec) -> Result<Option<f64>> {
    match q {
        QSpec::Float(v) => {
            if !(*v > 0.0 && *v < 1.0) {
                return Err(Error::QOutOfRange(*v));
            }
            Ok(Some(-v.ln()))
        }
        QSpec::Epsilon(e) => {
            if !(*e > 0.0) || !e.is_finite() {
                return Err(Error::NonPositiveEpsilon(*e));
            }
            Ok(Some(*e))
        }
        _ => Ok(None),
    }
}

/// Evaluates Ψ(p) for runtime-selected `z` and `q` representations.
///
/// Supported combinations: formal `z` with formal or rational `q`; exact `z`
/// with rational `q`; any non-formal `z` with floating `q`. Unit-circle `z`
/// needs a floating `q` (or a rational one, which is converted).
pub fn evaluate(p: &DominantWeight, spec: &SpectralParams, q: &QSpec, method: Method) -> Result<QWhittakerValue> {
    if p.rank() != spec.rank() {
        return Err(Error::RankMismatch { expected: spec.rank(), found: p.rank() });
    }
    let n = p.rank();
    if let Some(eps) = float_eps(q)? {
        let z = spec
            .complex_values(eps)
            .ok_or_else(|| Error::Incompatible("floating-point q needs numeric z".into()))?;
        let mode = FloatMode::from_eps(eps, &z)?;
        return run(p, &mode, method).map(QWhittakerValue::Float);
    }
    match (&spec.mode, q) {
        (SpectralMode::Formal, QSpec::Formal { truncation }) => {
            run(p, &SeriesMode::new(n, *truncation), method).map(QWhittakerValue::Series)
        }
        (SpectralMode::Formal, QSpec::Rational(qr)) => {
            run(p, &RationalMode::new(n, qr.clone())?, method).map(QWhittakerValue::RationalPoly)
        }
        (SpectralMode::Exact(z), QSpec::Rational(qr)) => {
            run(p, &PointMode::new(qr.clone(), z.clone())?, method).map(QWhittakerValue::Exact)
        }
        (SpectralMode::Complex(_) | SpectralMode::UnitCircle(_), QSpec::Rational(qr)) => {
            let qf = qr.to_f64().ok_or(Error::Overflow)?;
            evaluate(p, spec, &QSpec::Float(qf), method)
        }
        (_, QSpec::Formal { .. }) => Err(Error::Incompatible("formal q needs formal z".into())),
        _ => unreachable!("floating q handled above"),
    }
}

/// Ψ(p) at `q = 0`, where every q-factorial is 1: the sum of pattern monomials.
pub fn schur_specialization(p: &DominantWeight, z: &[GaussianRational]) -> Result<GaussianRational> {
    if p.rank() != z.len() {
        return Err(Error::RankMismatch { expected: z.len(), found: p.rank() });
    }
    let mode = PointMode::new(BigRational::from_integer(0.into()), z.to_vec())?;
    psi_direct(p, &mode)
}

/// `e_r(z_1, ..., z_n)` for the mode's `z`.
pub fn elementary_symmetric<M: EvalMode>(r: usize, mode: &M) -> Result<M::Value> {
    let n = mode.rank();
    if r > n {
        return Ok(mode.zero());
    }
    let mut acc = mode.acc_new();
    let one = mode.factorial_ratio(&[], &[]);
    for mask in 0u32..(1u32 << n) {
        if mask.count_ones() as usize != r {
            continue;
        }
        let exps: Vec<i64> = (0..n).map(|i| ((mask >> i) & 1) as i64).collect();
        mode.acc_add_term(&mut acc, &exps, &one)?;
    }
    Ok(mode.acc_finish(acc))
}
