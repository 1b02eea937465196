//! Gelfand-Zetlin patterns: interlacing sets and streaming enumeration.
//!
//! A pattern of rank `n` is a triangular integer array with rows of length
//! `1, 2, ..., n` where consecutive rows interlace,
//! `upper[i] >= lower[i] >= upper[i + 1]`. Patterns are streamed in a fixed
//! order: the second-from-top row varies slowest, row 1 fastest, and each
//! row runs through its interlacing set lexicographically. Only the current
//! pattern is held in memory.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Top row of a pattern, `p_1 >= ... >= p_n` when dominant.
///
/// Non-dominant vectors are representable: the q-Whittaker function is zero
/// there, and Hamiltonian shifts produce such arguments routinely.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DominantWeight {
    entries: Vec<i64>,
}

impl DominantWeight {
    pub fn new(entries: Vec<i64>) -> Self {
        assert!(!entries.is_empty(), "weight must have at least one entry");
        DominantWeight { entries }
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn is_dominant(&self) -> bool {
        is_weakly_decreasing(&self.entries)
    }

    /// `max - min` of the entries.
    pub fn spread(&self) -> i64 {
        let max = self.entries.iter().max().copied().unwrap_or(0);
        let min = self.entries.iter().min().copied().unwrap_or(0);
        max - min
    }

    /// Adds `by` to every entry.
    pub fn shifted(&self, by: i64) -> Self {
        DominantWeight { entries: self.entries.iter().map(|e| e + by).collect() }
    }
}

impl From<Vec<i64>> for DominantWeight {
    fn from(v: Vec<i64>) -> Self {
        DominantWeight::new(v)
    }
}

pub fn is_weakly_decreasing(v: &[i64]) -> bool {
    v.windows(2).all(|w| w[0] >= w[1])
}

/// `upper[i] >= lower[i] >= upper[i + 1]` for every `i`.
pub fn interlaces(upper: &[i64], lower: &[i64]) -> bool {
    lower.len() + 1 == upper.len()
        && lower
            .iter()
            .enumerate()
            .all(|(i, &l)| upper[i] >= l && l >= upper[i + 1])
}

/// A triangular array `rows[k-1] = (p_{k,1}, ..., p_{k,k})` with interlacing rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GzPattern {
    rows: Vec<Vec<i64>>,
}

impl GzPattern {
    /// Validates shape and interlacing; `None` if either fails.
    pub fn new(rows: Vec<Vec<i64>>) -> Option<Self> {
        let shape_ok = !rows.is_empty() && rows.iter().enumerate().all(|(k, r)| r.len() == k + 1);
        if !shape_ok {
            return None;
        }
        let ok = rows.windows(2).all(|w| interlaces(&w[1], &w[0]));
        ok.then_some(GzPattern { rows })
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Row `k` (1-based), of length `k`.
    pub fn row(&self, k: usize) -> &[i64] {
        &self.rows[k - 1]
    }

    pub fn top(&self) -> &[i64] {
        self.rows.last().expect("nonempty")
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn row_sum(&self, k: usize) -> i64 {
        if k == 0 {
            0
        } else {
            self.rows[k - 1].iter().sum()
        }
    }

    /// Exponent of `z_k` in the pattern's monomial: `sum(row k) - sum(row k-1)`.
    pub fn weight(&self) -> Vec<i64> {
        (1..=self.rank()).map(|k| self.row_sum(k) - self.row_sum(k - 1)).collect()
    }

    pub fn is_valid(&self) -> bool {
        self.rows.windows(2).all(|w| interlaces(&w[1], &w[0]))
    }
}

/// Lexicographic stream of all `lower` interlacing with `upper`.
#[derive(Clone, Debug)]
pub struct InterlacingSet {
    upper: Vec<i64>,
    current: Vec<i64>,
    done: bool,
}

/// All vectors interlacing with `upper`; empty if `upper` is not weakly decreasing.
pub fn interlacing_set(upper: &[i64]) -> InterlacingSet {
    let done = upper.is_empty() || !is_weakly_decreasing(upper);
    let current = upper.iter().skip(1).copied().collect();
    InterlacingSet { upper: upper.to_vec(), current, done }
}

/// `prod_i (upper[i] - upper[i+1] + 1)`, zero when not weakly decreasing.
pub fn interlacing_count(upper: &[i64]) -> BigInt {
    if upper.is_empty() || !is_weakly_decreasing(upper) {
        return BigInt::zero();
    }
    upper
        .windows(2)
        .fold(BigInt::one(), |acc, w| acc * BigInt::from(w[0] - w[1] + 1))
}

/// Advances `row` to its lexicographic successor within the interlacing box
/// of `upper`. Returns `false` (leaving `row` reset to its minimum) when the
/// row was already the last element.
fn advance_row(upper: &[i64], row: &mut [i64]) -> bool {
    for i in (0..row.len()).rev() {
        if row[i] < upper[i] {
            row[i] += 1;
            row[i + 1..].copy_from_slice(&upper[i + 2..]);
            return true;
        }
    }
    for (j, r) in row.iter_mut().enumerate() {
        *r = upper[j + 1];
    }
    false
}

impl Iterator for InterlacingSet {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        if !advance_row(&self.upper, &mut self.current) {
            self.done = true;
        }
        Some(out)
    }
}

/// Streaming enumerator over patterns with a fixed top row.
///
/// The top `fixed` rows are held constant; everything below runs through all
/// interlacing choices. [`PatternStream::next_pattern`] lends the current
/// pattern without cloning.
#[derive(Clone, Debug)]
pub struct PatternStream {
    pattern: GzPattern,
    fixed: usize,
    started: bool,
    done: bool,
}

impl PatternStream {
    fn from_rows(rows: Vec<Vec<i64>>, fixed: usize) -> Self {
        let n = rows.len();
        let mut rows = rows;
        for k in (0..n - fixed).rev() {
            rows[k] = rows[k + 1].iter().skip(1).copied().collect();
        }
        PatternStream { pattern: GzPattern { rows }, fixed, started: false, done: false }
    }

    fn empty() -> Self {
        PatternStream {
            pattern: GzPattern { rows: vec![vec![0]] },
            fixed: 1,
            started: true,
            done: true,
        }
    }

    /// All patterns with top row `top`; empty if `top` is not dominant.
    pub fn new(top: &DominantWeight) -> Self {
        if !top.is_dominant() {
            return Self::empty();
        }
        let n = top.rank();
        let mut rows: Vec<Vec<i64>> = (1..=n).map(|k| vec![0; k]).collect();
        rows[n - 1] = top.entries().to_vec();
        Self::from_rows(rows, 1)
    }

    /// Patterns whose top two rows are `top` and `second`; empty unless they interlace.
    pub fn with_second_row(top: &DominantWeight, second: &[i64]) -> Self {
        if !top.is_dominant() || !interlaces(top.entries(), second) {
            return Self::empty();
        }
        let n = top.rank();
        let mut rows: Vec<Vec<i64>> = (1..=n).map(|k| vec![0; k]).collect();
        rows[n - 1] = top.entries().to_vec();
        rows[n - 2] = second.to_vec();
        Self::from_rows(rows, 2)
    }

    pub fn next_pattern(&mut self) -> Option<&GzPattern> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            debug_assert!(self.pattern.is_valid());
            return Some(&self.pattern);
        }
        let n = self.pattern.rank();
        let movable = n - self.fixed;
        // odometer: row 1 fastest, row `movable` slowest
        let mut k = 0;
        loop {
            if k == movable {
                self.done = true;
                return None;
            }
            let (lower, upper) = self.pattern.rows.split_at_mut(k + 1);
            if advance_row(&upper[0], &mut lower[k]) {
                break;
            }
            k += 1;
        }
        for j in (0..k).rev() {
            self.pattern.rows[j] = self.pattern.rows[j + 1].iter().skip(1).copied().collect();
        }
        debug_assert!(self.pattern.is_valid());
        Some(&self.pattern)
    }
}

impl Iterator for PatternStream {
    type Item = GzPattern;

    fn next(&mut self) -> Option<GzPattern> {
        self.next_pattern().cloned()
    }
}

/// Streams every pattern with the given top row.
pub fn enumerate_patterns(top: &DominantWeight) -> PatternStream {
    PatternStream::new(top)
}

/// Visits every pattern with the given top row, in stream order.
pub fn for_each_pattern(top: &DominantWeight, mut visit: impl FnMut(&GzPattern)) {
    let mut s = PatternStream::new(top);
    while let Some(p) = s.next_pattern() {
        visit(p);
    }
}

/// Number of patterns with top row `top` (Weyl dimension formula); zero if not dominant.
pub fn count_patterns(top: &DominantWeight) -> BigInt {
    if !top.is_dominant() {
        return BigInt::zero();
    }
    let p = top.entries();
    let n = p.len();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..n {
        for j in i + 1..n {
            num *= BigInt::from(p[i] - p[j] + (j - i) as i64);
            den *= BigInt::from((j - i) as i64);
        }
    }
    num / den
}

/// Dominant weights of the given rank with last entry 0 and spread at most `max_spread`,
/// in lexicographic order.
pub fn dominant_weights(rank: usize, max_spread: i64) -> Vec<DominantWeight> {
    fn rec(i: usize, max: i64, cur: &mut Vec<i64>, out: &mut Vec<DominantWeight>) {
        if i + 1 == cur.len() {
            out.push(DominantWeight::new(cur.clone()));
            return;
        }
        for v in 0..=max {
            cur[i] = v;
            rec(i + 1, v, cur, out);
        }
    }
    let mut out = Vec::new();
    if rank == 0 || max_spread < 0 {
        return out;
    }
    let mut cur = vec![0; rank];
    rec(0, max_spread, &mut cur, &mut out);
    out
}
