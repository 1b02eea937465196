//! Complex values on a uniform rectangular grid with cubic interpolation.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisGrid {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        if count < 2 || !(max > min) || !min.is_finite() || !max.is_finite() {
            return Err(Error::InvalidQuadrature(format!("bad axis [{min}, {max}] with {count} nodes")));
        }
        Ok(AxisGrid { min, max, count })
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.count - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.min + i as f64 * self.step()
    }
}

/// Values on the tensor grid, last axis fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct TabulatedFunction {
    axes: Vec<AxisGrid>,
    values: Vec<Complex64>,
}

impl TabulatedFunction {
    /// Evaluates `f` at every node in parallel; storage order is independent of scheduling.
    pub fn fill<F>(axes: Vec<AxisGrid>, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Result<Complex64> + Sync,
    {
        let total: usize = axes.iter().map(|a| a.count).product();
        let values = (0..total)
            .into_par_iter()
            .map(|flat| {
                let idx = unflatten(&axes, flat);
                let point: Vec<f64> = idx.iter().zip(&axes).map(|(&i, a)| a.node(i)).collect();
                f(&point)
            })
            .collect::<Result<Vec<_>>>()?;
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidQuadrature("non-finite tabulated value".into()));
        }
        Ok(TabulatedFunction { axes, values })
    }

    pub fn axes(&self) -> &[AxisGrid] {
        &self.axes
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn at(&self, idx: &[usize]) -> Complex64 {
        let mut flat = 0;
        for (a, &i) in self.axes.iter().zip(idx) {
            flat = flat * a.count + i;
        }
        self.values[flat]
    }

    /// Tensor-product cubic Lagrange interpolation; four nodes per axis,
    /// shifted inward at the edges. Axes with fewer than four nodes fall back
    /// to the available nodes.
    pub fn interpolate(&self, point: &[f64]) -> Result<Complex64> {
        if point.len() != self.axes.len() {
            return Err(Error::RankMismatch { expected: self.axes.len(), found: point.len() });
        }
        let mut stencils = Vec::with_capacity(point.len());
        for (a, &x) in self.axes.iter().zip(point) {
            if x < a.min || x > a.max {
                return Err(Error::InvalidQuadrature(format!("{x} outside [{}, {}]", a.min, a.max)));
            }
            let width = a.count.min(4);
            let s = (x - a.min) / a.step();
            let base = (s.floor() as isize - (width as isize - 1) / 2).clamp(0, (a.count - width) as isize) as usize;
            let nodes: Vec<usize> = (base..base + width).collect();
            let weights: Vec<f64> = nodes
                .iter()
                .map(|&i| {
                    nodes
                        .iter()
                        .filter(|&&j| j != i)
                        .map(|&j| (s - j as f64) / (i as f64 - j as f64))
                        .product()
                })
                .collect();
            stencils.push((nodes, weights));
        }
        let mut idx = vec![0usize; point.len()];
        Ok(self.accumulate(&stencils, 0, &mut idx, 1.0))
    }

    fn accumulate(&self, st: &[(Vec<usize>, Vec<f64>)], d: usize, idx: &mut [usize], w: f64) -> Complex64 {
        if d == st.len() {
            return w * self.at(idx);
        }
        let mut s = Complex64::new(0.0, 0.0);
        for (k, &i) in st[d].0.iter().enumerate() {
            idx[d] = i;
            s += self.accumulate(st, d + 1, idx, w * st[d].1[k]);
        }
        s
    }
}

fn unflatten(axes: &[AxisGrid], mut flat: usize) -> Vec<usize> {
    let mut idx = vec![0; axes.len()];
    for (d, a) in axes.iter().enumerate().rev() {
        idx[d] = flat % a.count;
        flat /= a.count;
    }
    idx
}
