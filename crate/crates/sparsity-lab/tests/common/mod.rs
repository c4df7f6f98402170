//! Brute-force oracles, kept independent of the library's counting paths:
//! plain nested loops, trial division and direct modular arithmetic only.

// each integration test compiles this module separately and uses a subset
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::BTreeSet;

pub fn oracle_square_root(v: &BigInt) -> Option<BigInt> {
    if v.is_negative() {
        return None;
    }
    let r = v.sqrt();
    if &(&r * &r) == v {
        Some(r)
    } else {
        None
    }
}

fn for_each_tuple(m: usize, k_cap: u32, mut f: impl FnMut(&[u32])) {
    let mut tuple = vec![0u32; m];
    loop {
        f(&tuple);
        let mut i = m;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if tuple[i] < k_cap {
                tuple[i] += 1;
                for t in tuple.iter_mut().skip(i + 1) {
                    *t = 0;
                }
                break;
            }
        }
    }
}

pub fn eval_form(g: u64, coeffs: &[i64], k: &[u32]) -> BigInt {
    let gb = BigInt::from(g);
    coeffs
        .iter()
        .zip(k)
        .map(|(&c, &e)| BigInt::from(c) * gb.pow(e))
        .sum()
}

/// Square tuples over the box by direct evaluation.
pub fn oracle_count_square_tuples(g: u64, coeffs: &[i64], k_cap: u32) -> (u64, Vec<Vec<u32>>) {
    let mut count = 0;
    let mut hits = Vec::new();
    for_each_tuple(coeffs.len(), k_cap, |tuple| {
        if oracle_square_root(&eval_form(g, coeffs, tuple)).is_some() {
            count += 1;
            hits.push(tuple.to_vec());
        }
    });
    (count, hits)
}

/// Representable roots by materializing the box values and scanning n.
pub fn oracle_count_representable(g: u64, coeffs: &[i64], n_max: u64, k_cap: u32) -> BTreeSet<u64> {
    let mut values: BTreeSet<BigInt> = BTreeSet::new();
    for_each_tuple(coeffs.len(), k_cap, |tuple| {
        values.insert(eval_form(g, coeffs, tuple));
    });
    let mut roots = BTreeSet::new();
    for n in 1..=n_max {
        let sq = BigInt::from(n) * BigInt::from(n);
        if values.contains(&sq) {
            roots.insert(n);
        }
    }
    roots
}

/// Congruence solutions by evaluating the form and reducing.
pub fn oracle_congruence_count(g: u64, coeffs: &[i64], k_cap: u32, ell: u64) -> u64 {
    let mut count = 0;
    let ell_big = BigInt::from(ell);
    for_each_tuple(coeffs.len(), k_cap, |tuple| {
        if (eval_form(g, coeffs, tuple) % &ell_big).is_zero() {
            count += 1;
        }
    });
    count
}

/// Sparse-digit squares by scanning roots.
pub fn oracle_count_sparse_squares(g: u64, sparsity: u32, k_digits: u32) -> u64 {
    let limit = BigInt::from(g).pow(k_digits);
    let mut count = 0;
    let mut n = BigInt::from(1);
    loop {
        let sq = &n * &n;
        if sq >= limit {
            return count;
        }
        let mut v = sq;
        let mut nonzero = 0;
        while !v.is_zero() {
            if !(&v % g).is_zero() {
                nonzero += 1;
            }
            v /= g;
        }
        if nonzero <= sparsity {
            count += 1;
        }
        n += 1;
    }
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % m as u128) as u64;
        }
        base = ((base as u128 * base as u128) % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Euler-criterion value of (a / ell) for an odd prime ell.
pub fn oracle_euler_symbol(a: u64, ell: u64) -> i8 {
    let r = mod_pow(a % ell, (ell - 1) / 2, ell);
    if r == 0 {
        0
    } else if r == 1 {
        1
    } else {
        -1
    }
}

/// Multiplicative order by naive iteration.
pub fn oracle_mul_order_naive(g: u64, q: u64) -> u64 {
    let mut t = 1u64;
    let mut x = g % q;
    while x != 1 {
        x = ((x as u128 * (g % q) as u128) % q as u128) as u64;
        t += 1;
    }
    t
}

pub fn trial_division_primes(limit: u64) -> Vec<u64> {
    let mut out = Vec::new();
    'outer: for n in 2..=limit {
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                continue 'outer;
            }
            d += 1;
        }
        out.push(n);
    }
    out
}

pub fn oracle_largest_prime_factor(mut n: u64) -> u64 {
    let mut best = 1;
    let mut d = 2;
    while d * d <= n {
        while n.is_multiple_of(d) {
            best = d;
            n /= d;
        }
        d += 1;
    }
    if n > 1 {
        best = n;
    }
    best
}

/// Independent scan for the sieving-set construction: trial-division
/// primality, naive orders, largest class with smallest valuation on ties.
pub fn oracle_sieve_scan(g: u64, z: f64, alpha: f64, c1: f64) -> Option<(u32, Vec<u64>)> {
    use std::collections::BTreeMap;
    let mut classes: BTreeMap<u32, Vec<u64>> = BTreeMap::new();
    for ell in (z.ceil() as u64)..=((c1 * z).floor() as u64) {
        if trial_division_primes(ell).last() != Some(&ell) || g.is_multiple_of(ell) {
            continue;
        }
        let p = oracle_largest_prime_factor(ell - 1);
        if (p as f64) < z.powf(alpha) {
            continue;
        }
        let tau = oracle_mul_order_naive(g, ell);
        if !tau.is_multiple_of(p) {
            continue;
        }
        classes.entry(tau.trailing_zeros()).or_default().push(ell);
    }
    let mut best: Option<(u32, Vec<u64>)> = None;
    for (u, members) in classes {
        match &best {
            Some((_, b)) if members.len() <= b.len() => {}
            _ => best = Some((u, members)),
        }
    }
    best
}

/// Jacobi symbol of a big integer modulo a u64 prime, via Euler criterion.
pub fn oracle_symbol_big(value: &BigInt, ell: u64) -> i8 {
    let residue = ((value % ell).to_i64().unwrap()).rem_euclid(ell as i64) as u64;
    oracle_euler_symbol(residue, ell)
}
