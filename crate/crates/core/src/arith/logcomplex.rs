//! Complex numbers stored as `exp(log_magnitude + i*phase)`.
//!
//! Pattern sums at small `eps` mix terms whose magnitudes differ by hundreds
//! of decades, well outside what a plain `f64` can hold. [`LogSum`] adds such
//! terms relative to the running maximum, the complex-phase version of
//! log-sum-exp.

use std::f64::consts::PI;

use num_complex::Complex64;

/// `m * e^{i phi}` with `m >= 0`, stored as `(ln m, phi)`; zero is flagged.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogComplex {
    log_magnitude: f64,
    phase: f64,
    zero: bool,
}

fn wrap_phase(phi: f64) -> f64 {
    if (-PI..=PI).contains(&phi) {
        phi
    } else {
        let w = (phi + PI).rem_euclid(2.0 * PI) - PI;
        if w == -PI {
            PI
        } else {
            w
        }
    }
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex { log_magnitude: f64::NEG_INFINITY, phase: 0.0, zero: true };
    pub const ONE: LogComplex = LogComplex { log_magnitude: 0.0, phase: 0.0, zero: false };

    pub fn from_log(log_magnitude: f64, phase: f64) -> Self {
        if log_magnitude == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        LogComplex { log_magnitude, phase: wrap_phase(phase), zero: false }
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z.re == 0.0 && z.im == 0.0 {
            Self::ZERO
        } else {
            Self::from_log(z.norm().ln(), z.arg())
        }
    }

    pub fn from_real(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else if x > 0.0 {
            Self::from_log(x.ln(), 0.0)
        } else {
            Self::from_log((-x).ln(), PI)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn log_magnitude(&self) -> f64 {
        self.log_magnitude
    }

    pub fn phase(&self) -> f64 {
        if self.zero {
            0.0
        } else {
            self.phase
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.zero || o.zero {
            return Self::ZERO;
        }
        Self::from_log(self.log_magnitude + o.log_magnitude, self.phase + o.phase)
    }

    pub fn recip(&self) -> Self {
        assert!(!self.zero, "reciprocal of zero");
        Self::from_log(-self.log_magnitude, -self.phase)
    }

    pub fn neg(&self) -> Self {
        if self.zero {
            *self
        } else {
            Self::from_log(self.log_magnitude, self.phase + PI)
        }
    }

    pub fn powi(&self, k: i64) -> Self {
        if k == 0 {
            return Self::ONE;
        }
        if self.zero {
            assert!(k > 0, "zero raised to a negative power");
            return Self::ZERO;
        }
        Self::from_log(self.log_magnitude * k as f64, self.phase * k as f64)
    }

    /// Multiplies by `e^{delta}` for real `delta`.
    pub fn scale_log(&self, delta: f64) -> Self {
        if self.zero {
            *self
        } else {
            Self::from_log(self.log_magnitude + delta, self.phase)
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut s = LogSum::new();
        s.push(*self);
        s.push(*o);
        s.finish()
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// Plain complex value; may overflow to infinity or underflow to zero.
    pub fn to_complex(&self) -> Complex64 {
        if self.zero {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::from_polar(self.log_magnitude.exp(), self.phase)
        }
    }

    /// `self / other` as a plain complex number, computed in the log domain.
    pub fn ratio(&self, other: &Self) -> Complex64 {
        self.mul(&other.recip()).to_complex()
    }
}

/// Max-rescaled accumulator for [`LogComplex`] terms.
///
/// Keeps `acc * e^{scale}`, rescaling `acc` whenever a term exceeds the
/// current scale so that `|acc|` never overflows. Terms are added in call
/// order, which makes the result reproducible for a fixed order.
#[derive(Clone, Copy, Debug)]
pub struct LogSum {
    scale: f64,
    acc: Complex64,
    empty: bool,
}

impl Default for LogSum {
    fn default() -> Self {
        Self::new()
    }
}

impl LogSum {
    pub fn new() -> Self {
        LogSum { scale: f64::NEG_INFINITY, acc: Complex64::new(0.0, 0.0), empty: true }
    }

    pub fn push(&mut self, t: LogComplex) {
        if t.zero {
            return;
        }
        let unit = Complex64::from_polar(1.0, t.phase);
        if self.empty {
            self.scale = t.log_magnitude;
            self.acc = unit;
            self.empty = false;
        } else if t.log_magnitude > self.scale {
            self.acc = self.acc * (self.scale - t.log_magnitude).exp() + unit;
            self.scale = t.log_magnitude;
        } else {
            self.acc += unit * (t.log_magnitude - self.scale).exp();
        }
    }

    pub fn merge(&mut self, other: &LogSum) {
        if !other.empty {
            self.push(LogComplex::from_complex(other.acc).scale_log(other.scale));
        }
    }

    pub fn finish(&self) -> LogComplex {
        if self.empty {
            LogComplex::ZERO
        } else {
            LogComplex::from_complex(self.acc).scale_log(self.scale)
        }
    }
}
