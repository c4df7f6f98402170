//! Oracle equivalences and property tests: every counting path is compared
//! against the plain brute-force implementations in `common/`.

mod common;

use common::*;
use num_bigint::BigInt;
use proptest::prelude::*;
use sparsity_lab::arith::{
    is_perfect_square, is_prime_u64, jacobi, jacobi_u64, mul_order, perfect_square_root,
    primes_up_to,
};
use sparsity_lab::charsum::{quad_diag_sum, twisted_diag_sum};
use sparsity_lab::forms::SparseForm;
use sparsity_lab::sieve::{build_sieve_set, congruence_count, omega_sum, SieveSet};
use sparsity_lab::Workload;

fn small_coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec((-3i64..=3).prop_filter("non-zero", |&c| c != 0), 1..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn square_tuples_match_oracle(g in 2u64..=3, coeffs in small_coeffs(), k_cap in 0u32..=5) {
        let form = SparseForm::new(g, coeffs.clone()).unwrap();
        let (expected, hits) = oracle_count_square_tuples(g, &coeffs, k_cap);
        let got = form.count_square_tuples(k_cap, &Workload::default()).unwrap();
        prop_assert_eq!(got.total, expected);
        let got_tuples: Vec<Vec<u32>> = got.hits.iter().map(|h| h.k.clone()).collect();
        prop_assert_eq!(got_tuples, hits);
    }

    #[test]
    fn mitm_matches_direct(g in 2u64..=3, coeffs in small_coeffs(), k_cap in 0u32..=5) {
        let form = SparseForm::new(g, coeffs).unwrap();
        let a = form.count_square_tuples(k_cap, &Workload::default()).unwrap();
        let b = form.count_square_tuples_mitm(k_cap, &Workload::default()).unwrap();
        prop_assert_eq!(a.total, b.total);
        prop_assert_eq!(a.zero_hits, b.zero_hits);
    }

    #[test]
    fn representable_matches_oracle(
        g in prop::sample::select(vec![2u64, 3, 10]),
        coeffs in small_coeffs(),
        n_max in 1u64..=120,
    ) {
        let form = SparseForm::new(g, coeffs.clone()).unwrap();
        let k_cap = sparsity_lab::harness::derive_box_cap(&form, n_max).min(14);
        let expected = oracle_count_representable(g, &coeffs, n_max, k_cap);
        let (count, wits) = form.count_representable(n_max, k_cap, &Workload::default()).unwrap();
        prop_assert_eq!(count as usize, expected.len());
        prop_assert_eq!(wits, expected.into_iter().collect::<Vec<_>>());
    }

    #[test]
    fn residue_cycling_matches_direct_reduction(
        g in 2u64..=3,
        coeffs in small_coeffs(),
        k_cap in 1u32..=6,
        ell in prop::sample::select(vec![5u64, 7, 11, 13, 23]),
    ) {
        prop_assume!(g % ell != 0);
        let form = SparseForm::new(g, coeffs.clone()).unwrap();
        prop_assert_eq!(
            congruence_count(&form, k_cap, ell),
            oracle_congruence_count(g, &coeffs, k_cap, ell)
        );
    }

    #[test]
    fn omega_sum_matches_direct_factoring(
        g in 2u64..=3,
        coeffs in small_coeffs(),
        k_cap in 1u32..=6,
    ) {
        let set = build_sieve_set(g, 11.0, 0.5, 3.0).unwrap();
        let form = SparseForm::new(g, coeffs.clone()).unwrap();
        let (total, _) = omega_sum(&form, k_cap, &set);
        let expected: u64 = set
            .ells()
            .map(|ell| oracle_congruence_count(g, &coeffs, k_cap, ell))
            .sum();
        prop_assert_eq!(total, expected);
    }

    #[test]
    fn jacobi_matches_euler_on_random_primes(
        idx in 0usize..100,
        a in 0u64..5000,
    ) {
        let primes: Vec<u64> = primes_up_to(1000).into_iter().filter(|&p| p > 2).collect();
        let ell = primes[idx % primes.len()];
        prop_assert_eq!(jacobi_u64(a as i64, ell), oracle_euler_symbol(a % ell, ell));
    }

    #[test]
    fn perfect_square_recognizes_squares(j in 2u64..=10_000) {
        let sq = BigInt::from(j) * BigInt::from(j);
        prop_assert_eq!(perfect_square_root(&sq), Some(BigInt::from(j)));
        prop_assert!(!is_perfect_square(&(sq + 1)));
    }

    #[test]
    fn perfect_square_on_256_bit_roots(bytes in prop::collection::vec(any::<u8>(), 32)) {
        let j = BigInt::from_bytes_be(num_bigint::Sign::Plus, &bytes);
        prop_assume!(j > BigInt::from(1));
        let sq = &j * &j;
        prop_assert_eq!(perfect_square_root(&sq), Some(j));
        prop_assert!(!is_perfect_square(&(sq + 1)));
    }

    #[test]
    fn order_lcm_across_coprime_moduli(
        i in 0usize..20,
        j in 0usize..20,
        g in prop::sample::select(vec![2u64, 3, 5, 10]),
    ) {
        let primes: Vec<u64> = primes_up_to(100).into_iter().filter(|&p| p > 2 && p != 5).collect();
        prop_assume!(i != j);
        let (ell, r) = (primes[i % primes.len()], primes[j % primes.len()]);
        prop_assume!(ell != r && g % ell != 0 && g % r != 0);
        let expected = num_integer::lcm(mul_order(g, ell).unwrap(), mul_order(g, r).unwrap());
        prop_assert_eq!(mul_order(g, ell * r).unwrap(), expected);
    }

    #[test]
    fn twisted_with_principal_twists_is_quad(
        q in prop::sample::select(vec![3u64, 5, 7, 11]),
        d in prop::sample::select(vec![2u64, 4]),
        m in 1usize..=2,
        seed in any::<u64>(),
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let a: Vec<i64> = (0..m).map(|_| rng.gen_range(1..q) as i64).collect();
        let w = Workload::default();
        let (tw, _) = twisted_diag_sum(q, d, &a, &vec![0; m], &w).unwrap();
        let (pure, _) = quad_diag_sum(q, d, &a, &w).unwrap();
        prop_assert_eq!(tw.re as i64, pure);
        prop_assert!(tw.im == 0.0);
    }

    #[test]
    fn sieve_set_csv_round_trips(z in 5.0f64..60.0) {
        if let Ok(set) = build_sieve_set(2, z, 0.5, 3.0) {
            let text = set.to_csv();
            let back = SieveSet::from_csv(&text).unwrap();
            prop_assert_eq!(set, back);
        }
    }

    #[test]
    fn primality_matches_trial_division(n in 0u64..200_000) {
        let by_trial = n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
        prop_assert_eq!(is_prime_u64(n), by_trial);
    }
}

#[test]
fn jacobi_bigint_handles_negative_and_composite() {
    // spot checks across representations
    for q in [15u64, 21, 45, 9907] {
        for a in -30i64..30 {
            assert_eq!(
                jacobi(&BigInt::from(a), &BigInt::from(q)).unwrap(),
                jacobi_u64(a, q)
            );
        }
    }
}

#[test]
fn sparse_square_routes_agree_on_larger_cases() {
    for (g, m, k) in [(2u64, 2u32, 10u32), (3, 2, 7), (10, 2, 4), (2, 3, 12)] {
        let expected = oracle_count_sparse_squares(g, m, k);
        let got = sparsity_lab::forms::count_sparse_squares(g, m, k, &Workload::default()).unwrap();
        assert_eq!(got, expected, "g={} m={} K={}", g, m, k);
    }
}

#[test]
fn gap_pattern_family_members_are_hits() {
    let form = SparseForm::new(2, vec![1, 1]).unwrap();
    let count = form.count_square_tuples(16, &Workload::default()).unwrap();
    for k1 in (0..=13u32).step_by(2) {
        assert!(
            count.hits.iter().any(|h| h.k == vec![k1, k1 + 3]),
            "missing gap-3 hit at k1 = {}",
            k1
        );
    }
}
