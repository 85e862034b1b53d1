use mmpm_core::mmpm::{lookup_property_check, linear_independence_check, phi, Mmpm};
use mmpm_core::ring::Ring;
use mmpm_oracles::{enumerate_orbits, flatten, indicator, integer_rank, order_by_iteration, DenseMatrix};
use proptest::prelude::*;

fn dense(a: &Mmpm) -> DenseMatrix {
    let exps: Vec<i64> = a.exps().iter().map(|&u| u as i64).collect();
    DenseMatrix::monomial_permutation(a.perm(), &exps, a.degree())
}

fn arb_mmpm() -> impl Strategy<Value = Mmpm> {
    (1usize..=4, 0u32..=3).prop_flat_map(|(r, log_n)| {
        let n = 1usize << log_n;
        (
            Just(Vec::from_iter(0..r)).prop_shuffle(),
            proptest::collection::vec(0i64..2 * n as i64, r),
            Just(n),
        )
            .prop_map(|(perm, exps, n)| Mmpm::new(perm, exps, n).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn order_matches_power_iteration(a in arb_mmpm()) {
        prop_assert_eq!(order_by_iteration(&dense(&a), 10_000), Some(a.order()));
    }

    #[test]
    fn orbits_match_enumeration(a in arb_mmpm()) {
        let orbits = enumerate_orbits(&dense(&a));
        prop_assert_eq!(orbits.len() as u64, a.orbit_count());
        prop_assert_eq!(a.is_transitive(), orbits.len() == 1);
    }

    #[test]
    fn normal_form_is_similar(a in arb_mmpm()) {
        let nf = a.normal_form();
        let r = a.dim();
        let t = DenseMatrix::monomial_permutation(&nf.similarity, &vec![0; r], a.degree());
        let d = dense(&nf.to_block_diagonal());
        prop_assert_eq!(dense(&a).mul(&t), t.mul(&d));
    }

    #[test]
    fn product_and_action_match_dense(a in arb_mmpm(), seed in 0u64..1000) {
        let (r, n) = (a.dim(), a.degree());
        let b = Mmpm::new(
            (0..r).map(|j| (j + seed as usize) % r).collect(),
            (0..r).map(|i| (seed as i64 * 7 + i as i64) % (2 * n as i64)).collect(),
            n,
        )
        .unwrap();
        prop_assert_eq!(dense(&a.mul(&b).unwrap()), dense(&a).mul(&dense(&b)));
        let k = seed % (2 * n as u64);
        let j = seed as usize % r;
        let (k2, j2) = a.act_on_indicator(k, j);
        prop_assert_eq!(dense(&a).apply(&indicator(k as i64, j, r, n)), indicator(k2 as i64, j2, r, n));

        let ring = Ring::new(n, 97).unwrap();
        let v: Vec<_> = (0..r)
            .map(|i| ring.from_coeffs((0..n as u64).map(|c| (c * 13 + i as u64 * 5 + seed) % 97).collect()).unwrap())
            .collect();
        let got: Vec<Vec<i64>> = a.apply(&v).unwrap().iter().map(|e| e.coeffs().iter().map(|&c| c as i64).collect()).collect();
        let plain: Vec<Vec<i64>> = v.iter().map(|e| e.coeffs().iter().map(|&c| c as i64).collect()).collect();
        let want: Vec<Vec<i64>> = dense(&a).apply(&plain).into_iter()
            .map(|p| p.into_iter().map(|c| c.rem_euclid(97)).collect())
            .collect();
        prop_assert_eq!(got, want);
    }
}

#[test]
fn small_examples() {
    let a = Mmpm::new(vec![0, 1], vec![1, 2], 2).unwrap();
    assert_eq!(a.orbit_count(), 3);
    assert_eq!(a.order(), 4);
    assert!(!a.is_transitive());

    for (n, r) in [(1, 1), (2, 2), (4, 3), (8, 4)] {
        let p = phi(1, r, n);
        assert_eq!(p.order(), 2 * (n * r) as u64);
        assert!(p.is_transitive());
        assert_eq!(enumerate_orbits(&dense(&p)).len(), 1);
        let id = Mmpm::identity(r, n);
        assert_eq!((id.order(), id.orbit_count()), (1, 2 * (n * r) as u64));
    }
}

#[test]
fn phi_is_a_homomorphism_against_dense_products() {
    let (n, r) = (4, 3);
    for c1 in 0..24 {
        for c2 in [0, 1, 5, 13, 23] {
            assert_eq!(dense(&phi(c1, r, n)).mul(&dense(&phi(c2, r, n))), dense(&phi(c1 + c2, r, n)));
        }
    }
}

#[test]
fn phi_powers_independent_by_bareiss() {
    for (n, r) in [(4usize, 2usize), (8, 3)] {
        let nr = (n * r) as i64;
        for k in [0, 1, nr] {
            assert!(linear_independence_check(&phi(1, r, n), k).unwrap());
            let rows: Vec<Vec<i64>> = (0..nr)
                .map(|i| flatten(&dense(&phi(k + i, r, n)).apply(&indicator(0, 0, r, n))))
                .collect();
            assert_eq!(integer_rank(&rows), n * r);
        }
    }
    // A non-generator is rejected rather than answered.
    assert!(linear_independence_check(&phi(2, 2, 4), 0).is_err());
}

#[test]
fn lookup_property_exhaustive() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(77);
    for (n, r) in [(2usize, 2usize), (4, 3), (4, 4), (8, 4)] {
        let q = 2 * n * r;
        for _ in 0..10 {
            let t_prime = 17;
            let half: Vec<u64> = (0..q / 2).map(|_| rng.gen_range(0..t_prime)).collect();
            let f: Vec<u64> = half.iter().copied().chain(half.iter().map(|&v| (t_prime - v) % t_prime)).collect();
            lookup_property_check(&f, t_prime, r, n).unwrap();
        }
    }
}

/// `v_k = Σ_i c_i Φ(k-i) e_0`, built densely.
fn v_k(c: &[i64], k: i64, r: usize, n: usize) -> Vec<Vec<i64>> {
    let mut acc = vec![vec![0i64; n]; r];
    for (i, &ci) in c.iter().enumerate() {
        let col = dense(&phi(k - i as i64, r, n)).apply(&indicator(0, 0, r, n));
        for (a, x) in acc.iter_mut().zip(col) {
            for (y, z) in a.iter_mut().zip(x) {
                *y += ci * z;
            }
        }
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phi_is_equivariant_on_v_k(
        r in 1usize..=4,
        n in prop::sample::select(vec![1usize, 2, 4]),
        seed in proptest::collection::vec(-5i64..5, 32),
        k in 0i64..64,
        l in 0i64..64,
    ) {
        let period = (2 * n * r) as i64;
        let c = &seed[..(n * r)];
        let ring = Ring::new(n, 1009).unwrap();
        let to_ring = |v: &[Vec<i64>]| -> Vec<_> { v.iter().map(|p| ring.from_signed(p).unwrap()).collect() };
        let lhs = phi(l, r, n).apply(&to_ring(&v_k(c, k, r, n))).unwrap();
        prop_assert_eq!(lhs, to_ring(&v_k(c, (k + l) % period, r, n)));
        // Φ(Nr) negates.
        let v = to_ring(&v_k(c, k, r, n));
        let neg: Vec<_> = v.iter().map(|e| e.neg()).collect();
        prop_assert_eq!(phi((n * r) as i64, r, n).apply(&v).unwrap(), neg);
    }
}
