//! Lattice recursion behind the Givental quadrature.
//!
//! Integration nodes lie on `h Z` on every level, so inner functions are
//! only ever needed at lattice points. Translation covariance,
//! `psi_k(y + a (1..1)) = e^{i a sum(lambda)} psi_k(y)`, reduces each inner
//! function to a table over the `k - 1` differences `y_i - y_k`.

use dashmap::DashMap;
use num_complex::Complex64;
use rayon::prelude::*;

use super::Scheme;

// extra half-width beyond half the row gap, in units of x
const GAP_MARGIN: f64 = 6.0;

pub(crate) struct Level {
    /// `lambda_1..lambda_k` for this level's `psi_k`.
    lambdas: Vec<f64>,
    h: f64,
    half_count: i64,
    scheme: Scheme,
    log_cutoff: f64,
    inner: Option<Box<Level>>,
    table: DashMap<Vec<i64>, Complex64>,
}

struct AxisNodes {
    index: Vec<i64>,
    factor: Vec<Complex64>,
}

impl Level {
    pub(crate) fn new(lambdas: &[f64], h: f64, half_count: i64, scheme: Scheme, cutoff: f64) -> Self {
        let k = lambdas.len();
        let inner = (k >= 3).then(|| Box::new(Level::new(&lambdas[..k - 1], h, half_count, scheme, cutoff)));
        Level {
            lambdas: lambdas.to_vec(),
            h,
            half_count,
            scheme,
            log_cutoff: if cutoff > 0.0 { cutoff.ln() } else { f64::NEG_INFINITY },
            inner,
            table: DashMap::new(),
        }
    }

    fn rank(&self) -> usize {
        self.lambdas.len()
    }

    fn weight(&self, m: i64, half: i64) -> f64 {
        let end = m == -half || m == half;
        match self.scheme {
            Scheme::Trapezoid => {
                if end {
                    0.5 * self.h
                } else {
                    self.h
                }
            }
            Scheme::Simpson => {
                let w = if end {
                    1.0
                } else if (m + half) % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                w * self.h / 3.0
            }
        }
    }

    /// `psi_k` at the lattice point with integer coordinates `j`.
    fn psi_lattice(&self, j: &[i64]) -> Complex64 {
        let k = self.rank();
        let base = j[k - 1];
        let u: Vec<i64> = j[..k - 1].iter().map(|&a| a - base).collect();
        let lambda_sum: f64 = self.lambdas.iter().sum();
        Complex64::from_polar(1.0, lambda_sum * base as f64 * self.h) * self.reduced(&u)
    }

    /// `psi_k(u h, 0)`, memoized.
    fn reduced(&self, u: &[i64]) -> Complex64 {
        if let Some(v) = self.table.get(u) {
            return *v;
        }
        let mut x: Vec<f64> = u.iter().map(|&a| a as f64 * self.h).collect();
        x.push(0.0);
        let v = self.evaluate(&x, false);
        self.table.insert(u.to_vec(), v);
        v
    }

    fn axis(&self, x_hi: f64, x_lo: f64, lambda: f64) -> AxisNodes {
        let center = ((x_hi + x_lo) / (2.0 * self.h)).round() as i64;
        let gap = (x_hi - x_lo).abs();
        let need = ((0.5 * gap + GAP_MARGIN) / self.h).ceil() as i64;
        let half = self.half_count.max(need);
        let mut index = Vec::new();
        let mut factor = Vec::new();
        for m in -half..=half {
            let t = (center + m) as f64 * self.h;
            let log_mag = -((t - x_hi).exp() + (x_lo - t).exp());
            if log_mag < self.log_cutoff {
                continue;
            }
            index.push(center + m);
            factor.push(Complex64::from_polar(self.weight(m, half) * log_mag.exp(), -lambda * t));
        }
        AxisNodes { index, factor }
    }

    fn inner_psi(&self, j: &[i64]) -> Complex64 {
        match &self.inner {
            Some(inner) => inner.psi_lattice(j),
            None => Complex64::from_polar(1.0, self.lambdas[0] * j[0] as f64 * self.h),
        }
    }

    /// `psi_k(x)` for real `x`.
    pub(crate) fn evaluate(&self, x: &[f64], parallel: bool) -> Complex64 {
        let k = self.rank();
        let lambda = self.lambdas[k - 1];
        if k == 1 {
            return Complex64::from_polar(1.0, lambda * x[0]);
        }
        let axes: Vec<AxisNodes> = (0..k - 1).map(|i| self.axis(x[i], x[i + 1], lambda)).collect();
        let prefactor = Complex64::from_polar(1.0, lambda * x.iter().sum::<f64>());
        let first = &axes[0];
        let slice = |a: usize| -> Complex64 {
            let mut j = vec![0i64; k - 1];
            j[0] = first.index[a];
            self.sum_rest(&axes, 1, &mut j, first.factor[a])
        };
        let parts: Vec<Complex64> = if parallel {
            (0..first.index.len()).into_par_iter().map(slice).collect()
        } else {
            (0..first.index.len()).map(slice).collect()
        };
        let mut total = Complex64::new(0.0, 0.0);
        for p in parts {
            total += p;
        }
        prefactor * total
    }

    fn sum_rest(&self, axes: &[AxisNodes], d: usize, j: &mut [i64], weight: Complex64) -> Complex64 {
        if d == axes.len() {
            return weight * self.inner_psi(j);
        }
        let mut s = Complex64::new(0.0, 0.0);
        for (a, &idx) in axes[d].index.iter().enumerate() {
            j[d] = idx;
            s += self.sum_rest(axes, d + 1, j, weight * axes[d].factor[a]);
        }
        s
    }
}
