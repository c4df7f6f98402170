//! Exact integer arithmetic primitives.
//!
//! Primality is deterministic below 2^64 (Miller-Rabin with a proven base
//! set) and probabilistic above, with failure probability below 2^-128.
//! Factorization combines trial division with Brent's cycle-finding variant
//! of Pollard's rho and is bounded by a configurable workload limit
//! (default 2^64) so a stray huge input fails fast instead of spinning.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Default factorization workload bound: inputs above this are rejected.
pub const DEFAULT_FACTOR_BOUND_BITS: u64 = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArithError {
    /// Input exceeds the configured factorization workload bound.
    WorkloadExceeded { n: BigInt, bound_bits: u64 },
    /// gcd(g, q) > 1 where coprimality is required.
    NotCoprime { g: BigInt, q: BigInt },
    /// Jacobi symbols are defined for odd positive moduli only.
    EvenModulus { q: BigInt },
}

impl fmt::Display for ArithError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArithError::WorkloadExceeded { n, bound_bits } => {
                write!(f, "factorization workload exceeded: {} has more than {} bits", n, bound_bits)
            }
            ArithError::NotCoprime { g, q } => write!(f, "arguments not coprime: gcd({}, {}) > 1", g, q),
            ArithError::EvenModulus { q } => write!(f, "modulus {} is not odd and positive", q),
        }
    }
}

impl std::error::Error for ArithError {}

/// A complete factorization `n = prod p_i^(e_i)` with primes sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: BigInt,
    pub factors: Vec<(BigInt, u32)>,
}

impl Factorization {
    /// Multiplies the factorization back together.
    pub fn product(&self) -> BigInt {
        let mut acc = BigInt::one();
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        acc
    }

    pub fn distinct_primes(&self) -> impl Iterator<Item = &BigInt> {
        self.factors.iter().map(|(p, _)| p)
    }
}

// ---------------------------------------------------------------------------
// u64 kernels
// ---------------------------------------------------------------------------

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Primes up to and including `limit`, by sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut is_comp = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !is_comp[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                is_comp[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Deterministic Miller-Rabin for u64.
///
/// The base set {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37} is known to be
/// correct for all n < 3.3e24, which covers the whole u64 range.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'base: for &a in BASES.iter() {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

/// Primality for arbitrary-size non-negative integers.
///
/// Deterministic for n < 2^64. Above that, 64 Miller-Rabin rounds with bases
/// derived deterministically from n; a composite passes with probability
/// below 4^-64 = 2^-128.
pub fn is_prime(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let n = n.magnitude();
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    is_prime_biguint_probabilistic(n)
}

fn is_prime_biguint_probabilistic(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if n.is_even() {
        return false;
    }
    for p in primes_up_to(1000) {
        let p = BigUint::from(p);
        if (n % &p).is_zero() {
            return n == &p;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap();
    let d = &n_minus_1 >> s;
    // Bases a = 2 + (h + j) mod (n - 4) for a deterministic seed h of n.
    let h = n % 0x7fff_ffff_ffff_ffe7u64; // large prime below 2^63
    let h = h.to_u64().unwrap();
    'round: for j in 0..64u64 {
        let a = BigUint::from(2u32)
            + (BigUint::from(h.wrapping_add(j.wrapping_mul(0x9e37_79b9_7f4a_7c15))) % (n - 4u32));
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'round;
            }
        }
        return false;
    }
    true
}

fn pollard_brent_u64(n: u64) -> u64 {
    // n must be odd composite, not a prime power of 2.
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut ys) = (2u64, 2u64);
        let (mut y, mut d) = (2u64, 1u64);
        let mut q = 1u64;
        let m = 128u64;
        let mut r = 1u64;
        while d == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0u64;
            while k < r && d == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                d = gcd_u64(q, n);
                k += m;
            }
            r <<= 1;
        }
        if d == n {
            d = 1;
            while d == 1 {
                ys = f(ys);
                d = gcd_u64(x.abs_diff(ys), n);
            }
        }
        if d != n {
            return d;
        }
        c += 1; // rare cycle degeneracy: retry with a new polynomial
    }
}

/// Complete factorization of a u64 >= 2, primes ascending.
pub fn factorize_u64(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 2, "factorize_u64 requires n >= 2");
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    let mut stack = vec![n];
    let mut rest: Vec<u64> = Vec::new();
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            rest.push(m);
            continue;
        }
        let d = pollard_brent_u64(m);
        stack.push(d);
        stack.push(m / d);
    }
    rest.sort_unstable();
    let mut i = 0;
    while i < rest.len() {
        let p = rest[i];
        let mut e = 0;
        while i < rest.len() && rest[i] == p {
            e += 1;
            i += 1;
        }
        out.push((p, e));
    }
    out.sort_unstable();
    out
}

/// Complete factorization under the default workload bound (2^64).
pub fn factorize(n: &BigInt) -> Result<Factorization, ArithError> {
    factorize_with_bound(n, DEFAULT_FACTOR_BOUND_BITS)
}

/// Complete factorization of `n >= 2`, rejecting inputs above `bound_bits` bits.
pub fn factorize_with_bound(n: &BigInt, bound_bits: u64) -> Result<Factorization, ArithError> {
    assert!(n >= &BigInt::from(2), "factorize requires n >= 2");
    if n.bits() > bound_bits {
        return Err(ArithError::WorkloadExceeded {
            n: n.clone(),
            bound_bits,
        });
    }
    if let Some(v) = n.to_u64() {
        let factors = factorize_u64(v)
            .into_iter()
            .map(|(p, e)| (BigInt::from(p), e))
            .collect();
        return Ok(Factorization {
            n: n.clone(),
            factors,
        });
    }
    // Above u64 but admitted by a raised bound: rho over BigUint.
    let mut big = n.magnitude().clone();
    let mut small: Vec<(u64, u32)> = Vec::new();
    for p in primes_up_to(10_000) {
        let pb = BigUint::from(p);
        let mut e = 0u32;
        while (&big % &pb).is_zero() {
            big /= &pb;
            e += 1;
        }
        if e > 0 {
            small.push((p, e));
        }
    }
    let mut primes: Vec<BigUint> = Vec::new();
    let mut stack = vec![big];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&BigInt::from(m.clone())) {
            primes.push(m);
            continue;
        }
        let d = pollard_brent_big(&m);
        stack.push(&m / &d);
        stack.push(d);
    }
    primes.sort();
    let mut factors: Vec<(BigInt, u32)> = small
        .into_iter()
        .map(|(p, e)| (BigInt::from(p), e))
        .collect();
    let mut i = 0;
    while i < primes.len() {
        let p = &primes[i];
        let mut e = 0u32;
        while i < primes.len() && &primes[i] == p {
            e += 1;
            i += 1;
        }
        factors.push((BigInt::from(p.clone()), e));
    }
    factors.sort();
    Ok(Factorization {
        n: n.clone(),
        factors,
    })
}

fn pollard_brent_big(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut d = one.clone();
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            d = diff.gcd(n);
        }
        if !d.is_one() && &d != n {
            return d;
        }
        c += 1u32;
    }
}

/// The largest prime dividing `n >= 2`.
pub fn largest_prime_factor(n: &BigInt) -> Result<BigInt, ArithError> {
    let f = factorize(n)?;
    Ok(f.factors.last().expect("n >= 2 has a prime factor").0.clone())
}

pub fn largest_prime_factor_u64(n: u64) -> u64 {
    factorize_u64(n).last().unwrap().0
}

/// The 2-adic valuation of `s >= 1`.
pub fn two_adic_valuation(s: u64) -> u32 {
    assert!(s >= 1, "two_adic_valuation requires s >= 1");
    s.trailing_zeros()
}

/// Least t >= 1 with g^t = 1 mod q, for odd q >= 3 coprime to g.
///
/// Computed by factoring the group exponent and descending through divisors;
/// never by naive iteration.
pub fn mul_order(g: u64, q: u64) -> Result<u64, ArithError> {
    assert!(q >= 3 && q % 2 == 1, "mul_order requires odd q >= 3");
    assert!(g >= 2, "mul_order requires g >= 2");
    if gcd_u64(g % q, q) != 1 {
        return Err(ArithError::NotCoprime {
            g: BigInt::from(g),
            q: BigInt::from(q),
        });
    }
    let mut order = 1u64;
    for (p, e) in factorize_u64(q) {
        let pe = p.pow(e);
        let lambda = pe / p * (p - 1); // group exponent mod p^e, p odd
        order = order.lcm(&order_mod_prime_power(g, pe, lambda));
    }
    Ok(order)
}

fn order_mod_prime_power(g: u64, modulus: u64, group_order: u64) -> u64 {
    let mut t = group_order;
    for (p, _) in factorize_u64(group_order) {
        while t.is_multiple_of(p) && pow_mod(g, t / p, modulus) == 1 {
            t /= p;
        }
    }
    t
}

/// Jacobi symbol (a/q) for odd positive q, via binary reciprocity.
pub fn jacobi(a: &BigInt, q: &BigInt) -> Result<i8, ArithError> {
    if !q.is_positive() || q.is_even() {
        return Err(ArithError::EvenModulus { q: q.clone() });
    }
    let mut a = a.mod_floor(q).magnitude().clone();
    let mut n = q.magnitude().clone();
    let mut sign = 1i8;
    while !a.is_zero() {
        let z = a.trailing_zeros().unwrap();
        if z % 2 == 1 {
            let n_mod_8 = (&n % 8u32).to_u8().unwrap();
            if n_mod_8 == 3 || n_mod_8 == 5 {
                sign = -sign;
            }
        }
        a >>= z;
        if (&a % 4u32).to_u8().unwrap() == 3 && (&n % 4u32).to_u8().unwrap() == 3 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        a %= &n;
    }
    Ok(if n.is_one() { sign } else { 0 })
}

/// Jacobi symbol (a/q) on machine words; q must be odd and positive.
pub fn jacobi_u64(a: i64, q: u64) -> i8 {
    debug_assert!(q % 2 == 1 && q > 0);
    let mut a = (a.rem_euclid(q as i64)) as u64;
    let mut n = q;
    let mut sign = 1i8;
    while a != 0 {
        let z = a.trailing_zeros();
        if z % 2 == 1 {
            let n8 = n % 8;
            if n8 == 3 || n8 == 5 {
                sign = -sign;
            }
        }
        a >>= z;
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Exact integer square root of `n` when `n` is a perfect square.
///
/// Negative inputs are never squares; 0 counts as 0^2.
pub fn perfect_square_root(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    // Squares mod 64 occupy only 12 residues; cheap rejection first.
    const SQ_MOD_64: [bool; 64] = {
        let mut t = [false; 64];
        let mut i = 0;
        while i < 64 {
            t[(i * i) % 64] = true;
            i += 1;
        }
        t
    };
    let low = (n.magnitude() % 64u32).to_usize().unwrap();
    if !SQ_MOD_64[low] {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    perfect_square_root(n).is_some()
}
