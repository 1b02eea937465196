//! q-Toda Hamiltonians as shift operators on lattice functions.
//!
//! `H_r` sums over subsets `i_1 < ... < i_r` of `{1..n}`:
//! `prod_j X_{i_j}^{1 - [i_{j+1} = i_j + 1]} f(p + e_{i_1} + ... + e_{i_r})`,
//! with `X_i = 1 - q^{p_i - p_{i+1} + 1}` for `i < n`, `X_n = 1` and
//! `i_{r+1} = n + 1`. The `X` factors use the unshifted `p`.

use dashmap::DashMap;

use crate::error::{Error, Result};
use crate::patterns::DominantWeight;
use crate::whittaker::{elementary_symmetric, psi_direct, EvalMode};

const MAX_RANK: usize = 16;

/// `H_r` for `gl(rank)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HamiltonianSpec {
    rank: usize,
    order: usize,
}

impl HamiltonianSpec {
    pub fn new(rank: usize, order: usize) -> Result<Self> {
        if rank == 0 || rank > MAX_RANK {
            return Err(Error::UnsupportedRank(rank, "1..=16"));
        }
        if order == 0 || order > rank {
            return Err(Error::UnsupportedRank(order, "Hamiltonian order must be in 1..=rank"));
        }
        Ok(HamiltonianSpec { rank, order })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Subsets (as sorted 0-based index lists) with their `X` exponents.
    pub fn terms(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let n = self.rank;
        let mut out = Vec::new();
        for mask in 0u32..(1u32 << n) {
            if mask.count_ones() as usize != self.order {
                continue;
            }
            let subset: Vec<usize> = (0..n).filter(|&i| (mask >> i) & 1 == 1).collect();
            let mut xs = Vec::new();
            for (j, &i) in subset.iter().enumerate() {
                let next = subset.get(j + 1).copied().unwrap_or(n + 1);
                if next != i + 1 && i + 1 < n {
                    xs.push(i);
                }
            }
            out.push((subset, xs));
        }
        out
    }
}

type Evaluator<'a, V> = dyn Fn(&[i64]) -> Result<V> + Send + Sync + 'a;

/// A function on `Z^rank`.
pub struct LatticeFunction<'a, V> {
    rank: usize,
    eval: Box<Evaluator<'a, V>>,
}

impl<'a, V: Clone + Send + Sync + 'a> LatticeFunction<'a, V> {
    pub fn new(rank: usize, eval: impl Fn(&[i64]) -> Result<V> + Send + Sync + 'a) -> Self {
        LatticeFunction { rank, eval: Box::new(eval) }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn eval(&self, p: &[i64]) -> Result<V> {
        if p.len() != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: p.len() });
        }
        (self.eval)(p)
    }

    /// Caches evaluations; useful when the same shifted points are hit repeatedly.
    pub fn memoized(self) -> Self {
        let cache: DashMap<Vec<i64>, V> = DashMap::new();
        let rank = self.rank;
        let inner = self.eval;
        LatticeFunction::new(rank, move |p| {
            if let Some(v) = cache.get(p) {
                return Ok(v.clone());
            }
            let v = inner(p)?;
            cache.insert(p.to_vec(), v.clone());
            Ok(v)
        })
    }
}

/// Ψ as a lattice function, zero off the dominant cone, with memoization.
pub fn whittaker_lattice_function<M: EvalMode>(mode: &M) -> LatticeFunction<'_, M::Value> {
    LatticeFunction::new(mode.rank(), move |p| psi_direct(&DominantWeight::new(p.to_vec()), mode)).memoized()
}

/// `(H_r f)(p)`.
pub fn apply_hamiltonian<M: EvalMode>(
    h: &HamiltonianSpec,
    f: &LatticeFunction<'_, M::Value>,
    p: &[i64],
    mode: &M,
) -> Result<M::Value> {
    let n = h.rank();
    if p.len() != n || f.rank() != n || mode.rank() != n {
        return Err(Error::RankMismatch { expected: n, found: p.len() });
    }
    let mut acc = mode.acc_new();
    let mut shifted = p.to_vec();
    for (subset, xs) in h.terms() {
        shifted.copy_from_slice(p);
        for &i in &subset {
            shifted[i] += 1;
        }
        let fv = f.eval(&shifted)?;
        if mode.is_zero(&fv) {
            continue;
        }
        let mut term = fv;
        for &i in &xs {
            let c = mode.one_minus_q_pow(p[i] - p[i + 1] + 1)?;
            term = mode.scale(&term, &c);
        }
        mode.acc_add_value(&mut acc, &term);
    }
    Ok(mode.acc_finish(acc))
}

/// `H_r` applied to an arbitrary lattice function, returned as a new lattice function.
pub fn hamiltonian_function<'a, M: EvalMode>(
    h: HamiltonianSpec,
    f: LatticeFunction<'a, M::Value>,
    mode: &'a M,
) -> LatticeFunction<'a, M::Value>
where
    M::Value: 'a,
{
    let rank = f.rank();
    LatticeFunction::new(rank, move |p| apply_hamiltonian(&h, &f, p, mode))
}

/// The eigenvalue `e_r(z)` of `H_r`.
pub fn eigenvalue<M: EvalMode>(r: usize, mode: &M) -> Result<M::Value> {
    elementary_symmetric(r, mode)
}

/// One line of an eigen-check: `H_r Ψ(p) - e_r(z) Ψ(p)`.
#[derive(Clone, Debug)]
pub struct EigenResidual<V> {
    pub order: usize,
    pub lhs: V,
    pub rhs: V,
    pub residual: V,
    pub is_zero: bool,
}

#[derive(Clone, Debug)]
pub struct EigenReport<V> {
    pub weight: Vec<i64>,
    pub residuals: Vec<EigenResidual<V>>,
}

impl<V> EigenReport<V> {
    pub fn all_zero(&self) -> bool {
        self.residuals.iter().all(|r| r.is_zero)
    }
}

/// Checks `H_r Ψ = e_r(z) Ψ` at `p` for every `r = 1..n`.
pub fn verify_eigen<M: EvalMode>(p: &[i64], mode: &M) -> Result<EigenReport<M::Value>> {
    let psi = whittaker_lattice_function(mode);
    verify_eigen_with(p, &psi, mode)
}

/// As [`verify_eigen`], reusing a caller-supplied (typically memoized) Ψ.
pub fn verify_eigen_with<M: EvalMode>(
    p: &[i64],
    psi: &LatticeFunction<'_, M::Value>,
    mode: &M,
) -> Result<EigenReport<M::Value>> {
    let n = mode.rank();
    let at_p = psi.eval(p)?;
    let mut residuals = Vec::with_capacity(n);
    for r in 1..=n {
        let h = HamiltonianSpec::new(n, r)?;
        let lhs = apply_hamiltonian(&h, psi, p, mode)?;
        let rhs = mode.mul(&eigenvalue(r, mode)?, &at_p);
        let residual = mode.sub(&lhs, &rhs);
        let is_zero = mode.is_zero(&residual);
        residuals.push(EigenResidual { order: r, lhs, rhs, residual, is_zero });
    }
    Ok(EigenReport { weight: p.to_vec(), residuals })
}
