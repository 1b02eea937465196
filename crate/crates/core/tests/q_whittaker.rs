use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use whittaker_core::arith::{gaussian_binomial, q_factorial_log, q_factorial_series};
use whittaker_core::patterns::{count_patterns, enumerate_patterns, interlaces};
use whittaker_core::whittaker::{
    evaluate, psi_character, psi_direct, psi_recursive, schur_specialization, FloatMode, Method, PointMode, QSpec,
    QWhittakerValue, RationalMode, SeriesMode, SpectralParams,
};
use whittaker_core::{DominantWeight, GaussianRational, LaurentPoly, QSeries};

fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn w(v: &[i64]) -> DominantWeight {
    DominantWeight::new(v.to_vec())
}

/// Dominant weights of the given rank with entries in `[0, spread]`, top entry `spread`.
fn dominant_weights(rank: usize, spread: i64) -> Vec<DominantWeight> {
    fn rec(rank: usize, max: i64, cur: &mut Vec<i64>, out: &mut Vec<DominantWeight>) {
        if cur.len() == rank {
            out.push(DominantWeight::new(cur.clone()));
            return;
        }
        for v in (0..=max).rev() {
            cur.push(v);
            rec(rank, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for s in 0..=spread {
        rec(rank, s, &mut vec![], &mut out);
    }
    out.retain(|p| p.entries().last() == Some(&0));
    out
}

// ---------------------------------------------------------------------------
// exact arithmetic

fn product_poly(n: u64) -> Vec<BigInt> {
    let mut c = vec![BigInt::one()];
    for k in 1..=n as usize {
        let mut next = vec![BigInt::zero(); c.len() + k];
        for (i, a) in c.iter().enumerate() {
            next[i] += a;
            next[i + k] -= a;
        }
        c = next;
    }
    c
}

#[test]
fn q_factorial_examples() {
    assert_eq!(q_factorial_series(0, 10), QSeries::one(10));
    assert_eq!(q_factorial_series(2, 10), QSeries::from_integers(&[1, -1, -1, 1], 10));
    assert_eq!(q_factorial_series(3, 2), QSeries::from_integers(&[1, -1, -1], 2));
}

#[test]
fn q_factorial_series_matches_full_product() {
    for n in 0..12u64 {
        let full = product_poly(n);
        let s = q_factorial_series(n, 80);
        for (k, c) in full.iter().enumerate() {
            assert_eq!(s.coeff(k), BigRational::from_integer(c.clone()), "n={n} k={k}");
        }
    }
}

proptest! {
    #[test]
    fn q_factorial_series_evaluates_like_product(n in 0u64..10, a in -5i64..6, b in 2i64..9) {
        let q = rat(a, b);
        let mut expect = BigRational::one();
        for k in 1..=n as i32 {
            expect *= BigRational::one() - num_traits::pow::Pow::pow(&q, k);
        }
        // degree of (n)_q! is n(n+1)/2, so this order is exact
        let order = (n * (n + 1) / 2) as usize;
        prop_assert_eq!(q_factorial_series(n, order).eval(&q), expect);
    }

    #[test]
    fn gaussian_binomial_symmetry_and_q_one(m in 0u64..12, k in 0u64..12) {
        prop_assume!(k <= m);
        let g = gaussian_binomial(m, k, 80).unwrap();
        prop_assert_eq!(&g, &gaussian_binomial(m, m - k, 80).unwrap());
        prop_assert!(g.is_nonnegative_integral());
        let binom = num_integer::binomial(BigInt::from(m), BigInt::from(k));
        prop_assert_eq!(g.coefficient_sum(), BigRational::from_integer(binom));
    }
}

#[test]
fn gaussian_binomial_examples() {
    assert_eq!(gaussian_binomial(1, 0, 10).unwrap(), QSeries::one(10));
    assert_eq!(gaussian_binomial(2, 1, 10).unwrap(), QSeries::from_integers(&[1, 1], 10));
    assert_eq!(gaussian_binomial(4, 2, 10).unwrap(), QSeries::from_integers(&[1, 1, 2, 1, 1], 10));
}

/// `prod (1 - e^{-k eps})` as mantissa and binary exponent, renormalized every step.
fn renormalized_product(n: u64, eps: f64) -> f64 {
    let mut mant = 1.0f64;
    let mut exp2 = 0i64;
    for k in 1..=n {
        mant *= -(-(k as f64) * eps).exp_m1();
        if mant < 1e-100 {
            let e = mant.log2().floor() as i64;
            mant /= 2f64.powi(e as i32);
            exp2 += e;
        }
    }
    mant.ln() + exp2 as f64 * std::f64::consts::LN_2
}

#[test]
fn q_factorial_log_matches_direct_product() {
    for &eps in &[1e-3, 0.01, 0.05, 0.3, 2.0] {
        for &n in &[1u64, 7, 100, 1000, 10_000] {
            let a = q_factorial_log(n, eps).unwrap();
            let b = renormalized_product(n, eps);
            assert!((a - b).abs() < 1e-12 * b.abs().max(1.0), "eps={eps} n={n}: {a} vs {b}");
        }
    }
}

// ---------------------------------------------------------------------------
// patterns

fn brute_force_patterns(top: &[i64]) -> Vec<Vec<Vec<i64>>> {
    if top.len() == 1 {
        return vec![vec![top.to_vec()]];
    }
    let n = top.len();
    let lo = *top.iter().min().unwrap();
    let hi = *top.iter().max().unwrap();
    let mut out = Vec::new();
    let mut lower = vec![lo; n - 1];
    loop {
        if interlaces(top, &lower) {
            for mut sub in brute_force_patterns(&lower) {
                sub.push(top.to_vec());
                out.push(sub);
            }
        }
        let mut i = n - 1;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if lower[i] < hi {
                lower[i] += 1;
                for l in lower.iter_mut().skip(i + 1) {
                    *l = lo;
                }
                break;
            }
        }
    }
}

#[test]
fn enumeration_matches_brute_force() {
    for top in [vec![2, 1, 0], vec![3, 0, 0, -1], vec![1, 1, 0], vec![4, 2], vec![2, 2, 2]] {
        let mut a: Vec<_> = enumerate_patterns(&w(&top)).map(|p| p.rows().to_vec()).collect();
        let mut b = brute_force_patterns(&top);
        a.sort();
        b.sort();
        assert_eq!(a, b, "top {top:?}");
        assert_eq!(BigInt::from(a.len()), count_patterns(&w(&top)));
    }
}

proptest! {
    #[test]
    fn pattern_count_is_weyl_dimension(v in proptest::collection::vec(0i64..4, 1..5)) {
        let mut v = v;
        v.sort_by(|a, b| b.cmp(a));
        let top = w(&v);
        prop_assert_eq!(BigInt::from(enumerate_patterns(&top).count()), count_patterns(&top));
        for p in enumerate_patterns(&top) {
            prop_assert!(p.is_valid());
            prop_assert_eq!(p.top(), v.as_slice());
        }
    }
}

// ---------------------------------------------------------------------------
// Ψ

#[test]
fn direct_equals_recursive_on_formal_series() {
    for rank in 1..=4 {
        let spread = if rank == 4 { 3 } else { 5 };
        for p in dominant_weights(rank, spread) {
            let mode = SeriesMode::new(rank, 12);
            assert_eq!(psi_direct(&p, &mode).unwrap(), psi_recursive(&p, &mode).unwrap(), "p = {p:?}");
        }
    }
}

#[test]
fn direct_equals_recursive_at_exact_point() {
    let mode = PointMode::real(rat(1, 2), &[rat(1, 1), rat(1, 1), rat(1, 1)]).unwrap();
    let p = w(&[1, 0, 0]);
    let d = psi_direct(&p, &mode).unwrap();
    assert_eq!(d, psi_recursive(&p, &mode).unwrap());
    // three patterns: (1,0,0)->(0,0)->0, (1,0)->0, (1,0)->1; each weighs 1/(1-q) at q = 1/2
    assert_eq!(d, GaussianRational::real(rat(6, 1)));
}

#[test]
fn example_values() {
    let two = SeriesMode::new(2, 10);
    let inv = QSeries::from_integers(&[1, -1], 10).inverse().unwrap();
    let mut expect = LaurentPoly::zero(2);
    expect.add_term(vec![1, 0], inv.clone());
    expect.add_term(vec![0, 1], inv);
    assert_eq!(psi_direct(&w(&[1, 0]), &two).unwrap(), expect);
    assert_eq!(psi_recursive(&w(&[1, 0]), &two).unwrap(), expect);
    assert!(psi_direct(&w(&[0, 1]), &two).unwrap().is_zero());
    let one = SeriesMode::new(1, 10);
    assert_eq!(psi_direct(&w(&[3]), &one).unwrap(), LaurentPoly::monomial(vec![3], QSeries::one(10)));
}

proptest! {
    #[test]
    fn translation_covariance(v in proptest::collection::vec(-2i64..3, 1..4), a in -2i64..3) {
        let mut v = v;
        v.sort_by(|x, y| y.cmp(x));
        let n = v.len();
        let mode = RationalMode::new(n, rat(1, 3)).unwrap();
        let p = w(&v);
        let lhs = psi_direct(&p.shifted(a), &mode).unwrap();
        let rhs = psi_direct(&p, &mode).unwrap().shift(&vec![a; n]);
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn character_examples() {
    let chi = psi_character(&w(&[1, 0]), 40).unwrap();
    let mut expect = LaurentPoly::zero(2);
    expect.add_term(vec![1, 0], QSeries::one(40));
    expect.add_term(vec![0, 1], QSeries::one(40));
    assert_eq!(chi, expect);
    assert_eq!(
        psi_character(&w(&[0, 0, 0]), 40).unwrap(),
        LaurentPoly::monomial(vec![0, 0, 0], QSeries::one(40))
    );
    for n in 0..=8u64 {
        let chi = psi_character(&w(&[n as i64, 0]), 40).unwrap();
        for k in 0..=n {
            let c = chi.get(&[k as i64, (n - k) as i64]).unwrap();
            assert_eq!(c, &gaussian_binomial(n, k, 40).unwrap());
        }
        assert_eq!(chi.len() as u64, n + 1);
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

#[test]
fn character_positive_and_symmetric() {
    for rank in 2..=3 {
        for p in dominant_weights(rank, 3) {
            let chi = psi_character(&p, 40).unwrap();
            for perm in permutations(rank) {
                assert_eq!(chi.permute_vars(&perm), chi, "p={p:?} perm={perm:?}");
            }
        }
    }
}

/// `det(z_i^{p_j + n - j}) / det(z_i^{n - j})` over exact rationals.
fn schur_bialternant(p: &[i64], z: &[BigRational]) -> BigRational {
    let n = p.len();
    let pow = |x: &BigRational, e: i64| -> BigRational { num_traits::pow::Pow::pow(x, e as i32) };
    let num: Vec<Vec<BigRational>> = z
        .iter()
        .map(|zi| (0..n).map(|j| pow(zi, p[j] + (n - 1 - j) as i64)).collect())
        .collect();
    let den: Vec<Vec<BigRational>> =
        z.iter().map(|zi| (0..n).map(|j| pow(zi, (n - 1 - j) as i64)).collect()).collect();
    det(num) / det(den)
}

fn det(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut d = BigRational::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if piv != c {
            m.swap(piv, c);
            d = -d;
        }
        d *= m[c][c].clone();
        for r in c + 1..n {
            let f = &m[r][c] / &m[c][c];
            let (head, tail) = m.split_at_mut(r);
            for (dst, src) in tail[0][c..].iter_mut().zip(&head[c][c..]) {
                *dst -= &f * src;
            }
        }
    }
    d
}

#[test]
fn schur_specialization_matches_bialternant() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let weights = [vec![2, 1, 0], vec![3, 1, 1], vec![2, 0], vec![4, 2, -1], vec![1, 1, 0, -2]];
    for trial in 0..10 {
        let p = &weights[trial % weights.len()];
        let n = p.len();
        let mut z: Vec<BigRational> = Vec::new();
        while z.len() < n {
            let c = rat(rng.random_range(-6..=6), rng.random_range(1..=3));
            if !c.is_zero() && !z.contains(&c) {
                z.push(c);
            }
        }
        let zg: Vec<_> = z.iter().cloned().map(GaussianRational::real).collect();
        let got = schur_specialization(&w(p), &zg).unwrap();
        assert_eq!(got, GaussianRational::real(schur_bialternant(p, &z)), "p={p:?} z={z:?}");
    }
}

#[test]
fn schur_examples() {
    let z = |v: &[i64]| v.iter().map(|&a| GaussianRational::real(rat(a, 1))).collect::<Vec<_>>();
    assert_eq!(schur_specialization(&w(&[1, 0]), &z(&[2, 3])).unwrap(), GaussianRational::real(rat(5, 1)));
    assert_eq!(schur_specialization(&w(&[2, 1, 0]), &z(&[1, 1, 1])).unwrap(), GaussianRational::real(rat(8, 1)));
    assert_eq!(schur_specialization(&w(&[2, 0]), &z(&[1, 2])).unwrap(), GaussianRational::real(rat(7, 1)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn float_mode_agrees_with_exact(
        v in proptest::collection::vec(0i64..6, 1..4),
        zs in proptest::collection::vec((1i64..5, 1i64..4), 3),
        qn in 1i64..4,
    ) {
        let mut v = v;
        v.sort_by(|a, b| b.cmp(a));
        let n = v.len();
        let q = rat(qn, 5);
        let zr: Vec<BigRational> = zs[..n].iter().map(|&(a, b)| rat(a, b)).collect();
        let exact = psi_direct(&w(&v), &PointMode::real(q, &zr).unwrap()).unwrap();
        let zf: Vec<Complex64> = zr.iter().map(|r| Complex64::new(r.to_f64().unwrap(), 0.0)).collect();
        let float = psi_direct(&w(&v), &FloatMode::from_q(qn as f64 / 5.0, &zf).unwrap()).unwrap().to_complex();
        let e = exact.re.to_f64().unwrap();
        prop_assert!(((float.re - e) / e).abs() < 1e-10, "{} vs {}", float.re, e);
        prop_assert!(float.im.abs() <= 1e-10 * e.abs());
    }
}

#[test]
fn evaluate_dispatch_cli_example() {
    let spec = SpectralParams::complex(vec![Complex64::new(2.0, 0.0)]);
    match evaluate(&w(&[3]), &spec, &QSpec::Float(0.5), Method::Direct).unwrap() {
        QWhittakerValue::Float(v) => assert!((v.to_complex().re - 8.0).abs() < 1e-12),
        other => panic!("{other:?}"),
    }
    let exact = SpectralParams::exact(vec![GaussianRational::real(rat(2, 1))]);
    assert_eq!(
        evaluate(&w(&[3]), &exact, &QSpec::Rational(rat(1, 2)), Method::Recursive).unwrap(),
        QWhittakerValue::Exact(GaussianRational::real(rat(8, 1)))
    );
}

#[test]
fn complex_exact_spectral_values() {
    // z = (i, -i): Ψ(1,0) = (z1 + z2)/(1 - q) = 0
    let z = vec![
        GaussianRational::new(rat(0, 1), rat(1, 1)),
        GaussianRational::new(rat(0, 1), rat(-1, 1)),
    ];
    let v = psi_direct(&w(&[1, 0]), &PointMode::new(rat(1, 2), z).unwrap()).unwrap();
    assert!(v.is_zero());
    assert!(!v.re.is_negative());
}
