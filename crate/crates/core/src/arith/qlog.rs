//! `ln (n)_q!` at `q = e^{-eps}` with cached prefix sums.

use std::cell::RefCell;

use crate::error::{Error, Result};

/// Prefix table of `sum_{k<=n} ln(1 - e^{-k eps})`.
///
/// The table only grows; lookups below the filled length are plain reads, so
/// a filled table can be shared between threads behind `&`.
#[derive(Clone, Debug)]
pub struct QFactorialLog {
    eps: f64,
    prefix: Vec<f64>,
    // Neumaier running state for the last prefix entry
    sum: f64,
    comp: f64,
}

impl QFactorialLog {
    pub fn new(eps: f64) -> Result<Self> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::NonPositiveEpsilon(eps));
        }
        Ok(QFactorialLog { eps, prefix: vec![0.0], sum: 0.0, comp: 0.0 })
    }

    pub fn with_len(eps: f64, n: usize) -> Result<Self> {
        let mut t = Self::new(eps)?;
        t.extend_to(n);
        Ok(t)
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Largest `n` currently tabulated.
    pub fn max_n(&self) -> usize {
        self.prefix.len() - 1
    }

    pub fn extend_to(&mut self, n: usize) {
        let start = self.prefix.len();
        if n < start {
            return;
        }
        self.prefix.reserve(n + 1 - start);
        for k in start..=n {
            // 1 - e^{-k eps} = -expm1(-k eps), accurate for small k eps
            let term = (-(-(k as f64) * self.eps).exp_m1()).ln();
            let t = self.sum + term;
            if self.sum.abs() >= term.abs() {
                self.comp += (self.sum - t) + term;
            } else {
                self.comp += (term - t) + self.sum;
            }
            self.sum = t;
            self.prefix.push(self.sum + self.comp);
        }
    }

    /// Lookup without extending; `None` past the filled range.
    pub fn get(&self, n: usize) -> Option<f64> {
        self.prefix.get(n).copied()
    }

    pub fn ln_factorial(&mut self, n: usize) -> f64 {
        self.extend_to(n);
        self.prefix[n]
    }
}

const CACHE_SLOTS: usize = 8;

thread_local! {
    static CACHE: RefCell<Vec<QFactorialLog>> = const { RefCell::new(Vec::new()) };
}

/// `sum_{k=1}^{n} ln(1 - e^{-k eps})`.
///
/// Uses a per-thread prefix cache holding the most recent few `eps` values,
/// so scanning `n` at a fixed `eps` costs amortized O(1) per call. Every table
/// is filled in the same order, so the result does not depend on the thread.
pub fn q_factorial_log(n: u64, eps: f64) -> Result<f64> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::NonPositiveEpsilon(eps));
    }
    CACHE.with(|c| {
        let mut tables = c.borrow_mut();
        let pos = tables.iter().position(|t| t.eps().to_bits() == eps.to_bits());
        let idx = match pos {
            Some(i) => i,
            None => {
                if tables.len() == CACHE_SLOTS {
                    tables.remove(0);
                }
                tables.push(QFactorialLog::new(eps)?);
                tables.len() - 1
            }
        };
        Ok(tables[idx].ln_factorial(n as usize))
    })
}
