use ncwaring_core::analysis::{phi_inverse, phi_reduce};
use ncwaring_core::tensor::{symmetric_cpd, Status};
use ncwaring_core::{
    check_compatibility_tol, collapse, cpoly_from_tensor, evaluate_naive, evaluate_waring,
    parse_ncpoly, tensor_from_cpoly, verify_decomposition, waring_decompose, CPolynomial,
    Complex64, DecompositionConfig, IndexBijection, MatrixTuple, Multidegree, NCPolynomial,
    SymmetricTensor, WaringDecomposition, Word,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn word(g: u32, len: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(1..=g, len)
}

fn small_c() -> impl Strategy<Value = Complex64> {
    (-4i32..=4, -2i32..=2).prop_map(|(a, b)| Complex64::new(a as f64, b as f64))
}

fn float_c() -> impl Strategy<Value = Complex64> {
    (-10.0f64..10.0, prop_oneof![Just(0.0), -10.0f64..10.0]).prop_map(|(a, b)| Complex64::new(a, b))
}

/// Arbitrary (not necessarily homogeneous) polynomial with integer parts.
fn poly(g: u32, max_len: usize) -> impl Strategy<Value = NCPolynomial> {
    let term = (0..=max_len).prop_flat_map(move |l| (word(g, l), small_c()));
    prop::collection::vec(term, 0..6).prop_map(move |terms| {
        NCPolynomial::from_terms(
            g as usize,
            terms.into_iter().map(|(w, c)| (Word::new(w), c)),
        )
        .unwrap()
    })
}

fn homogeneous(g: u32, d: usize) -> impl Strategy<Value = NCPolynomial> {
    prop::collection::vec((word(g, d), float_c()), 0..8).prop_map(move |terms| {
        NCPolynomial::from_terms(
            g as usize,
            terms.into_iter().map(|(w, c)| (Word::new(w), c)),
        )
        .unwrap()
    })
}

fn rel_err(a: &ncwaring_core::CMatrix, b: &ncwaring_core::CMatrix) -> f64 {
    let base = a.norm().max(b.norm());
    if base == 0.0 {
        0.0
    } else {
        (a - b).norm() / base
    }
}

fn random_vectors(rng: &mut ChaCha8Rng, t: usize, n: usize) -> Vec<Vec<Complex64>> {
    use rand::Rng;
    use rand_distr::StandardNormal;
    (0..t)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    Complex64::new(re, im)
                })
                .collect()
        })
        .collect()
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(
        (g, p) in (1u32..=4, 0usize..=5).prop_flat_map(|(g, d)| (Just(g), homogeneous(g, d)))
    ) {
        let text = p.to_string();
        let back = parse_ncpoly(&text, g as usize).unwrap();
        prop_assert_eq!(back, p, "{}", text);
    }

    #[test]
    fn product_is_associative_and_distributive(
        a in poly(3, 2), b in poly(3, 2), c in poly(3, 2)
    ) {
        let ab_c = a.nc_mul(&b).unwrap().nc_mul(&c).unwrap();
        let a_bc = a.nc_mul(&b.nc_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        let left = a.nc_mul(&b.add(&c).unwrap()).unwrap();
        let right = a.nc_mul(&b).unwrap().add(&a.nc_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn phi_round_trip(
        (g, delta, p) in (1u32..=3, 1usize..=3, 1usize..=2)
            .prop_flat_map(|(g, delta, d)| (Just(g), Just(delta), homogeneous(g, delta * d)))
    ) {
        let (q, bij) = phi_reduce(&p, delta).unwrap();
        prop_assert_eq!(q.g(), (g as usize).pow(delta as u32));
        prop_assert_eq!(phi_inverse(&q, &bij).unwrap(), p);
    }

    #[test]
    fn naive_evaluation_is_additive(p in poly(2, 3), q in poly(2, 3), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = MatrixTuple::random(2, 4, &mut rng);
        let (a, _) = evaluate_naive(&p.add(&q).unwrap(), &x).unwrap();
        let (b, _) = evaluate_naive(&p, &x).unwrap();
        let (c, _) = evaluate_naive(&q, &x).unwrap();
        prop_assert!(rel_err(&a, &(b + c)) <= 1e-12);
    }
}

#[test]
fn linear_power_closed_form() {
    for g in 1..=3usize {
        for d in 1..=4usize {
            let a: Vec<Complex64> = (0..g)
                .map(|i| Complex64::new(i as f64 + 1.0, 0.5 - i as f64))
                .collect();
            let p = NCPolynomial::linear(&a).nc_pow(d);
            ncwaring_core::word::for_each_word(g, d, |w| {
                let want = w
                    .iter()
                    .fold(Complex64::new(1.0, 0.0), |acc, &i| acc * a[i as usize - 1]);
                assert_eq!(p.coeff(&Word::from(w)), want, "{w:?}");
            });
        }
    }
}

#[test]
fn tensor_cpoly_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for g in 1..=3usize {
        for d in 1..=4usize {
            let mds = Multidegree::all(g, d);
            let coeffs = random_vectors(&mut rng, 1, mds.len()).remove(0);
            let pc = CPolynomial::from_terms(g, mds.into_iter().zip(coeffs)).unwrap();
            let t = tensor_from_cpoly(&pc, d).unwrap();
            let back = tensor_from_cpoly(&cpoly_from_tensor(&t), d).unwrap();
            assert!(t.distance(&back).unwrap() <= 1e-12 * t.frobenius_norm());
            let dense = SymmetricTensor::from_dense(g, d, &t.dense()).unwrap();
            assert_eq!(dense, t);
        }
    }
}

#[test]
fn order_two_rank_matches_matrix_rank() {
    let cfg = DecompositionConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for g in 1..=6usize {
        for r in 1..=g {
            let vs = random_vectors(&mut rng, r, g);
            let t = SymmetricTensor::from_vectors(g, 2, &vs).unwrap();
            if r > 1 {
                assert!(
                    symmetric_cpd(&t, r - 1, &cfg).found().is_none(),
                    "g={g} r={r}"
                );
            }
            let out = symmetric_cpd(&t, r, &cfg);
            let (found, res) = out.found().expect("exact rank succeeds");
            assert_eq!(found.len(), r);
            assert!(res <= cfg.success_tol);
        }
    }
}

#[test]
fn reported_residual_is_honest() {
    let cfg = DecompositionConfig {
        restarts: 4,
        ..DecompositionConfig::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for (g, d, t) in [(2, 3, 2), (3, 3, 3), (2, 4, 3), (3, 4, 2)] {
        let vs = random_vectors(&mut rng, t, g);
        let tensor = SymmetricTensor::from_vectors(g, d, &vs).unwrap();
        for rank in 1..=t {
            let out = symmetric_cpd(&tensor, rank, &cfg);
            let best = out
                .traces
                .iter()
                .map(|r| r.residual)
                .fold(f64::INFINITY, f64::min);
            assert_eq!(best, out.residual);
            if let Some((found, res)) = out.found() {
                let model = SymmetricTensor::from_vectors(g, d, found).unwrap();
                let actual = tensor.distance(&model).unwrap() / tensor.frobenius_norm();
                assert!(actual <= cfg.success_tol);
                assert_eq!(actual, res);
            }
        }
    }
}

fn planted(seed: u64, g: usize, delta: usize, d: usize, t: usize) -> WaringDecomposition {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bij = IndexBijection::new(g, delta).unwrap();
    let n = bij.len();
    WaringDecomposition::new(d, bij, random_vectors(&mut rng, t, n)).unwrap()
}

#[test]
fn waring_evaluation_matches_naive() {
    let mut k = 0;
    for g in 1..=3usize {
        for d in 1..=4usize {
            for delta in 1..=2usize {
                k += 1;
                let w = planted(k, g, delta, d, 2);
                let p = w.expand();
                let mut rng = ChaCha8Rng::seed_from_u64(100 + k);
                let n = [1, 4, 9, 16][k as usize % 4];
                let x = MatrixTuple::random(g, n, &mut rng);
                let (a, _) = evaluate_naive(&p, &x).unwrap();
                let (b, ops) = evaluate_waring(&w, &x).unwrap();
                assert!(rel_err(&a, &b) <= 1e-9, "g={g} d={d} delta={delta}");
                if delta == 1 {
                    let per = ncwaring_core::eval::power_mults(d);
                    assert_eq!(ops.mults, 2 * per);
                    assert!(ops.mults <= 2 * (d as u64 - 1));
                }
            }
        }
    }
}

#[test]
fn planted_block_decompositions_round_trip() {
    let cfg = DecompositionConfig {
        compat_tol: Some(1e-10),
        ..DecompositionConfig::default()
    };
    for seed in 0..6 {
        let t = 1 + seed as usize % 2;
        let w = planted(seed, 2, 2, 2, t);
        let p = w.expand();
        assert!(
            check_compatibility_tol(&p, 2, Some(1e-10))
                .unwrap()
                .compatible
        );
        let res = waring_decompose(&p, 2, &cfg).unwrap();
        let Status::Success {
            decomposition,
            t: found,
            ..
        } = &res.status
        else {
            panic!("{:?}", res.status);
        };
        assert!(*found <= t);
        assert!(verify_decomposition(&p, decomposition, 1e-6).unwrap().0);
    }
}

#[test]
fn planted_linear_decompositions_round_trip() {
    let cfg = DecompositionConfig {
        compat_tol: Some(1e-10),
        ..DecompositionConfig::default()
    };
    for g in 1..=3usize {
        for d in 2..=3usize {
            let cap = ncwaring_core::generic_rank(g, d) as usize;
            for t in 1..=cap {
                let w = planted((g * 100 + d * 10 + t) as u64, g, 1, d, t);
                let p = w.expand();
                let res = waring_decompose(&p, 1, &cfg).unwrap();
                let dec = res
                    .decomposition()
                    .unwrap_or_else(|| panic!("{:?}", res.status));
                assert!(dec.t() <= t);
                assert!(verify_decomposition(&p, dec, 1e-6).unwrap().0);
            }
        }
    }
}

#[test]
fn same_seed_same_result() {
    let p = planted(3, 2, 1, 3, 2).expand();
    let cfg = DecompositionConfig {
        compat_tol: Some(1e-10),
        seed: 42,
        ..DecompositionConfig::default()
    };
    let a = serde_json::to_string(&waring_decompose(&p, 1, &cfg).unwrap()).unwrap();
    let b = serde_json::to_string(&waring_decompose(&p, 1, &cfg).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn collapse_of_sum_of_powers_is_commutative_power_sum() {
    let w = planted(9, 3, 1, 3, 2);
    let pc = collapse(&w.expand());
    let mut want = CPolynomial::zero(3);
    for v in w.terms() {
        want = want.add(&CPolynomial::linear(v).pow(3)).unwrap();
    }
    for (m, c) in want.terms() {
        assert!((pc.coeff(m) - c).norm() <= 1e-12 * (1.0 + c.norm()));
    }
}
