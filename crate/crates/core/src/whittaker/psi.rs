//! The q-Whittaker function as a pattern sum and through the rank recursion.

use dashmap::DashMap;
use rayon::prelude::*;

use crate::arith::{LaurentPoly, QSeries};
use crate::error::{Error, Result};
use crate::patterns::{interlacing_set, is_weakly_decreasing, DominantWeight, GzPattern, PatternStream};
use crate::whittaker::mode::{EvalMode, SeriesMode};

fn check_rank<M: EvalMode>(p: &DominantWeight, mode: &M) -> Result<()> {
    if p.rank() != mode.rank() {
        return Err(Error::RankMismatch { expected: mode.rank(), found: p.rank() });
    }
    Ok(())
}

fn nonneg(d: i64) -> u64 {
    debug_assert!(d >= 0, "interlacing violated");
    d as u64
}

/// Reusable per-worker buffers for one pattern's exponent and factorial lists.
struct TermBuffers {
    exps: Vec<i64>,
    num: Vec<u64>,
    den: Vec<u64>,
}

impl TermBuffers {
    fn new(n: usize) -> Self {
        TermBuffers {
            exps: Vec::with_capacity(n),
            num: Vec::with_capacity(n * n / 2),
            den: Vec::with_capacity(n * n),
        }
    }

    fn fill(&mut self, pat: &GzPattern) {
        let rows = pat.rows();
        let n = rows.len();
        self.exps.clear();
        self.num.clear();
        self.den.clear();
        let mut prev = 0i64;
        for row in rows {
            let s: i64 = row.iter().sum();
            self.exps.push(s - prev);
            prev = s;
        }
        // numerator: rows 2..n-1, adjacent differences
        for row in &rows[1..n - 1] {
            for w in row.windows(2) {
                self.num.push(nonneg(w[0] - w[1]));
            }
        }
        // denominator: every pair of consecutive rows below the top
        for k in 0..n - 1 {
            let lower = &rows[k];
            let upper = &rows[k + 1];
            for i in 0..lower.len() {
                self.den.push(nonneg(upper[i] - lower[i]));
                self.den.push(nonneg(lower[i] - upper[i + 1]));
            }
        }
    }
}

/// Sums `ordered` partial results from left to right.
fn ordered_total<M: EvalMode>(mode: &M, parts: Vec<Result<M::Value>>) -> Result<M::Value> {
    let mut total = mode.acc_new();
    for part in parts {
        mode.acc_add_value(&mut total, &part?);
    }
    Ok(mode.acc_finish(total))
}

/// Ψ(p) as the sum over all Gelfand-Zetlin patterns with top row `p`.
///
/// Each pattern contributes its `z`-monomial times the ratio of q-factorials
/// of adjacent differences. Zero for non-dominant `p`. Work is split by the
/// second-from-top row and recombined in enumeration order, so the result
/// does not depend on the thread count.
pub fn psi_direct<M: EvalMode>(p: &DominantWeight, mode: &M) -> Result<M::Value> {
    check_rank(p, mode)?;
    if !p.is_dominant() {
        return Ok(mode.zero());
    }
    let n = p.rank();
    if n == 1 {
        return mode.monomial(p.entries());
    }
    let seconds: Vec<Vec<i64>> = interlacing_set(p.entries()).collect();
    let parts: Vec<Result<M::Value>> = seconds
        .par_iter()
        .map(|second| {
            let mut acc = mode.acc_new();
            let mut buf = TermBuffers::new(n);
            let mut stream = PatternStream::with_second_row(p, second);
            while let Some(pat) = stream.next_pattern() {
                buf.fill(pat);
                let c = mode.factorial_ratio(&buf.num, &buf.den);
                mode.acc_add_term(&mut acc, &buf.exps, &c)?;
            }
            Ok(mode.acc_finish(acc))
        })
        .collect();
    ordered_total(mode, parts)
}

/// Ψ(p) through the rank recursion
/// `Ψ_{n}(p) = sum_{p' interlacing p} Δ(p') z_n^{|p| - |p'|} Q(p, p') Ψ_{n-1}(p')`,
/// with `Δ(p') = prod (p'_i - p'_{i+1})_q!` and
/// `Q(p, p') = 1 / prod (p_i - p'_i)_q! (p'_i - p_{i+1})_q!`.
///
/// Lower-rank values are memoized per weight for the duration of the call.
pub fn psi_recursive<M: EvalMode>(p: &DominantWeight, mode: &M) -> Result<M::Value> {
    check_rank(p, mode)?;
    if !p.is_dominant() {
        return Ok(mode.zero());
    }
    let memo: DashMap<Vec<i64>, M::Value> = DashMap::new();
    let lowers: Vec<Vec<i64>> = interlacing_set(p.entries()).collect();
    if p.rank() == 1 {
        return mode.monomial(p.entries());
    }
    let parts: Vec<Result<M::Value>> = lowers
        .par_iter()
        .map(|lower| recursion_term(p.entries(), lower, mode, &memo))
        .collect();
    ordered_total(mode, parts)
}

fn recursion_term<M: EvalMode>(
    upper: &[i64],
    lower: &[i64],
    mode: &M,
    memo: &DashMap<Vec<i64>, M::Value>,
) -> Result<M::Value> {
    let n = upper.len();
    let num: Vec<u64> = lower.windows(2).map(|w| nonneg(w[0] - w[1])).collect();
    let mut den = Vec::with_capacity(2 * lower.len());
    for i in 0..lower.len() {
        den.push(nonneg(upper[i] - lower[i]));
        den.push(nonneg(lower[i] - upper[i + 1]));
    }
    let c = mode.factorial_ratio(&num, &den);
    let mut exps = vec![0i64; n];
    exps[n - 1] = upper.iter().sum::<i64>() - lower.iter().sum::<i64>();
    let z = mode.monomial(&exps)?;
    let inner = psi_memo(lower, mode, memo)?;
    Ok(mode.scale(&mode.mul(&inner, &z), &c))
}

fn psi_memo<M: EvalMode>(p: &[i64], mode: &M, memo: &DashMap<Vec<i64>, M::Value>) -> Result<M::Value> {
    if p.len() == 1 {
        return mode.monomial(p);
    }
    if let Some(v) = memo.get(p) {
        return Ok(v.clone());
    }
    let mut acc = mode.acc_new();
    for lower in interlacing_set(p) {
        let t = recursion_term(p, &lower, mode, memo)?;
        mode.acc_add_value(&mut acc, &t);
    }
    let v = mode.acc_finish(acc);
    memo.insert(p.to_vec(), v.clone());
    Ok(v)
}

/// `Δ(p) = prod_i (p_i - p_{i+1})_q!` as a truncated series.
pub fn delta_series(p: &DominantWeight, order: usize) -> QSeries {
    let mode = SeriesMode::new(p.rank(), order);
    let diffs: Vec<u64> = p.entries().windows(2).map(|w| (w[0] - w[1]).max(0) as u64).collect();
    mode.factorial_ratio(&diffs, &[])
}

/// The character form `Δ(p) Ψ(p)` with `q` truncated after `q^order`.
///
/// Every `z`-coefficient is checked to be a series with nonnegative integer
/// coefficients; the first offending monomial is reported as
/// [`Error::Positivity`].
pub fn psi_character(p: &DominantWeight, order: usize) -> Result<LaurentPoly<QSeries>> {
    if !is_weakly_decreasing(p.entries()) {
        return Ok(LaurentPoly::zero(p.rank()));
    }
    let mode = SeriesMode::new(p.rank(), order);
    let psi = psi_direct(p, &mode)?;
    let chi = psi.scale(&delta_series(p, order));
    for (exps, c) in chi.terms() {
        if !c.is_nonnegative_integral() {
            return Err(Error::Positivity { monomial: exps.to_vec(), detail: c.to_string() });
        }
    }
    Ok(chi)
}
