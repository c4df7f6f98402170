//! Sieving sets of primes and the arithmetic sums taken over them.
//!
//! A sieving set collects primes `ell` in `[z, c1*z]`, coprime to the base,
//! whose `ell - 1` has a large prime factor that divides the multiplicative
//! order of the base, all sharing one 2-adic valuation of that order. The
//! common valuation makes the reduced orders odd, which is what the square
//! sieve's character-sum bounds need.
//!
//! ```
//! use sparsity_lab::sieve::{build_sieve_set, gcd_sum, GcdSumValue};
//! use num_bigint::BigInt;
//!
//! let set = build_sieve_set(2, 11.0, 0.5, 3.0).unwrap();
//! assert_eq!(set.ells().collect::<Vec<_>>(), vec![23, 31]);
//! assert_eq!(set.u0, 0);
//! assert_eq!(set.omega(&BigInt::from(713)).unwrap(), 2); // 713 = 23 * 31
//!
//! let (value, _ratio) = gcd_sum(&set, 1.0);
//! assert_eq!(value, GcdSumValue::Exact(BigInt::from(4)));
//! ```

use crate::arith::{
    is_prime_u64, largest_prime_factor_u64, mul_order, two_adic_valuation,
};
use crate::forms::SparseForm;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum SieveError {
    /// No prime in the scanned interval satisfies all three predicates.
    EmptySet { g: u64, z: f64, alpha: f64, c1: f64 },
    /// omega is undefined at 0.
    ZeroInput,
    /// Malformed CSV while parsing a serialized set.
    Parse(String),
}

impl fmt::Display for SieveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SieveError::EmptySet { g, z, alpha, c1 } => write!(
                f,
                "no sieve prime survives for g={} in [{}, {}] with alpha={}",
                g,
                z,
                c1 * z,
                alpha
            ),
            SieveError::ZeroInput => write!(f, "omega is undefined for n = 0"),
            SieveError::Parse(msg) => write!(f, "sieve-set parse error: {}", msg),
        }
    }
}

impl std::error::Error for SieveError {}

/// One admitted prime with its certificate data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SievePrime {
    pub ell: u64,
    /// Multiplicative order of the base modulo `ell`.
    pub tau: u64,
    /// Largest prime factor of `ell - 1`.
    pub p_largest: u64,
    /// 2-adic valuation of `tau`.
    pub nu2: u32,
}

/// The sieving set together with the parameters that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct SieveSet {
    pub g: u64,
    pub z: f64,
    pub alpha: f64,
    pub c1: f64,
    pub u0: u32,
    pub primes: Vec<SievePrime>,
}

/// Default exponent for the large-prime-factor condition.
pub const DEFAULT_ALPHA: f64 = 0.677;
/// Default interval stretch, keeping the scanned prime range dyadic.
pub const DEFAULT_C1: f64 = 2.0;

/// Scans primes in `[z, c1*z]` coprime to `g`, keeps those with
/// `P(ell-1) >= z^alpha` and `P(ell-1) | tau_ell(g)`, partitions the
/// survivors by the 2-adic valuation of `tau_ell(g)`, and returns the largest
/// class (ties broken toward the smaller valuation).
///
/// The asymptotic cardinality guarantee is reported by the caller, never
/// enforced here; the scan is exact.
pub fn build_sieve_set(g: u64, z: f64, alpha: f64, c1: f64) -> Result<SieveSet, SieveError> {
    assert!(g >= 2, "base must be >= 2");
    assert!(z >= 3.0, "z must be >= 3");
    assert!(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
    assert!(c1 > 1.0, "c1 must exceed 1");

    let lo = z.ceil() as u64;
    let hi = (c1 * z).floor() as u64;
    let threshold = z.powf(alpha);

    let survivors: Vec<SievePrime> = (lo..=hi)
        .into_par_iter()
        .filter_map(|ell| {
            if !is_prime_u64(ell) || g.is_multiple_of(ell) {
                return None;
            }
            let p_largest = largest_prime_factor_u64(ell - 1);
            if (p_largest as f64) < threshold {
                return None;
            }
            let tau = mul_order(g, ell).expect("ell does not divide g here");
            if !tau.is_multiple_of(p_largest) {
                return None;
            }
            Some(SievePrime {
                ell,
                tau,
                p_largest,
                nu2: two_adic_valuation(tau),
            })
        })
        .collect();

    let mut classes: BTreeMap<u32, Vec<SievePrime>> = BTreeMap::new();
    for s in survivors {
        classes.entry(s.nu2).or_default().push(s);
    }
    // BTreeMap iterates valuations ascending, so `>` keeps the smaller u0 on ties.
    let mut best: Option<(u32, Vec<SievePrime>)> = None;
    for (u, mut members) in classes {
        members.sort_by_key(|s| s.ell);
        match &best {
            Some((_, b)) if members.len() <= b.len() => {}
            _ => best = Some((u, members)),
        }
    }
    match best {
        None => Err(SieveError::EmptySet { g, z, alpha, c1 }),
        Some((u0, primes)) => Ok(SieveSet {
            g,
            z,
            alpha,
            c1,
            u0,
            primes,
        }),
    }
}

impl SieveSet {
    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn ells(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes.iter().map(|p| p.ell)
    }

    /// Re-verifies each member against the three membership predicates and
    /// the set invariants, independently of how the set was built.
    pub fn verify_members(&self) -> Result<(), String> {
        let threshold = self.z.powf(self.alpha);
        let mut prev = 0u64;
        for p in &self.primes {
            if p.ell <= prev {
                return Err(format!("primes not strictly ascending at {}", p.ell));
            }
            prev = p.ell;
            if !is_prime_u64(p.ell) {
                return Err(format!("{} is not prime", p.ell));
            }
            if (p.ell as f64) < self.z || (p.ell as f64) > self.c1 * self.z {
                return Err(format!("{} outside [z, c1*z]", p.ell));
            }
            if self.g.is_multiple_of(p.ell) {
                return Err(format!("{} divides the base", p.ell));
            }
            let lpf = largest_prime_factor_u64(p.ell - 1);
            if lpf != p.p_largest {
                return Err(format!("stored P(ell-1) wrong for {}", p.ell));
            }
            if (lpf as f64) < threshold {
                return Err(format!("P({} - 1) = {} below z^alpha", p.ell, lpf));
            }
            let tau = mul_order(self.g, p.ell).map_err(|e| e.to_string())?;
            if tau != p.tau {
                return Err(format!("stored order wrong for {}", p.ell));
            }
            if (p.ell - 1) % tau != 0 {
                return Err(format!("order does not divide {} - 1", p.ell));
            }
            if tau % lpf != 0 {
                return Err(format!("P(ell-1) does not divide the order for {}", p.ell));
            }
            if two_adic_valuation(tau) != self.u0 || p.nu2 != self.u0 {
                return Err(format!("valuation class mismatch for {}", p.ell));
            }
        }
        Ok(())
    }

    /// Number of distinct set members dividing `n`.
    pub fn omega(&self, n: &BigInt) -> Result<u32, SieveError> {
        if n.is_zero() {
            return Err(SieveError::ZeroInput);
        }
        let mag = n.abs();
        let mut count = 0;
        for p in &self.primes {
            if (&mag % p.ell).is_zero() {
                count += 1;
            }
        }
        Ok(count)
    }

    /// Serializes as CSV: one comment line with the construction parameters,
    /// a header row, then one row per prime.
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# g={} z={} alpha={} c1={} u0={}\n",
            self.g,
            crate::fmt_f64(self.z),
            crate::fmt_f64(self.alpha),
            crate::fmt_f64(self.c1),
            self.u0
        );
        out.push_str("ell,tau,p_largest,nu2\n");
        for p in &self.primes {
            out.push_str(&format!("{},{},{},{}\n", p.ell, p.tau, p.p_largest, p.nu2));
        }
        out
    }

    /// Parses the format produced by [`Self::to_csv`].
    pub fn from_csv(text: &str) -> Result<Self, SieveError> {
        let mut lines = text.lines();
        let meta = lines
            .next()
            .ok_or_else(|| SieveError::Parse("empty input".into()))?;
        let meta = meta
            .strip_prefix("# ")
            .ok_or_else(|| SieveError::Parse("missing parameter comment line".into()))?;
        let mut g = None;
        let mut z = None;
        let mut alpha = None;
        let mut c1 = None;
        let mut u0 = None;
        for kv in meta.split_whitespace() {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| SieveError::Parse(format!("bad parameter token {}", kv)))?;
            match k {
                "g" => g = Some(v.parse().map_err(|_| SieveError::Parse(format!("bad g {}", v)))?),
                "z" => z = Some(v.parse().map_err(|_| SieveError::Parse(format!("bad z {}", v)))?),
                "alpha" => {
                    alpha = Some(v.parse().map_err(|_| SieveError::Parse(format!("bad alpha {}", v)))?)
                }
                "c1" => c1 = Some(v.parse().map_err(|_| SieveError::Parse(format!("bad c1 {}", v)))?),
                "u0" => u0 = Some(v.parse().map_err(|_| SieveError::Parse(format!("bad u0 {}", v)))?),
                other => return Err(SieveError::Parse(format!("unknown parameter {}", other))),
            }
        }
        let header = lines
            .next()
            .ok_or_else(|| SieveError::Parse("missing header".into()))?;
        if header != "ell,tau,p_largest,nu2" {
            return Err(SieveError::Parse(format!("unexpected header {}", header)));
        }
        let mut primes = Vec::new();
        for line in lines {
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 4 {
                return Err(SieveError::Parse(format!("bad row {}", line)));
            }
            primes.push(SievePrime {
                ell: cols[0].parse().map_err(|_| SieveError::Parse(format!("bad ell {}", cols[0])))?,
                tau: cols[1].parse().map_err(|_| SieveError::Parse(format!("bad tau {}", cols[1])))?,
                p_largest: cols[2]
                    .parse()
                    .map_err(|_| SieveError::Parse(format!("bad p_largest {}", cols[2])))?,
                nu2: cols[3].parse().map_err(|_| SieveError::Parse(format!("bad nu2 {}", cols[3])))?,
            });
        }
        Ok(SieveSet {
            g: g.ok_or_else(|| SieveError::Parse("missing g".into()))?,
            z: z.ok_or_else(|| SieveError::Parse("missing z".into()))?,
            alpha: alpha.ok_or_else(|| SieveError::Parse("missing alpha".into()))?,
            c1: c1.ok_or_else(|| SieveError::Parse("missing c1".into()))?,
            u0: u0.ok_or_else(|| SieveError::Parse("missing u0".into()))?,
            primes,
        })
    }
}

/// Number of tuples in `{0..K}^m` with `F(k) = 0 mod ell`, by cycling
/// residues with period `tau_ell(g)` instead of evaluating big integers.
///
/// `ell` must not divide the base. Cost is `tau^m` states.
pub fn congruence_count(form: &SparseForm, k_cap: u32, ell: u64) -> u64 {
    assert!(!form.base().is_multiple_of(ell), "ell must not divide the base");
    let tau = mul_order(form.base(), ell).expect("coprime by the assertion above") as usize;
    // residue cycle of g^x mod ell and per-class multiplicities in {0..K}
    let mut cycle = vec![0u64; tau];
    let mut acc = 1u64 % ell;
    for c in cycle.iter_mut() {
        *c = acc;
        acc = acc * (form.base() % ell) % ell;
    }
    let mult: Vec<u64> = (0..tau as u64)
        .map(|x| if x > k_cap as u64 { 0 } else { (k_cap as u64 - x) / tau as u64 + 1 })
        .collect();

    let m = form.arity();
    let coeffs: Vec<u64> = form
        .coeffs()
        .iter()
        .map(|&c| (c.rem_euclid(ell as i64)) as u64)
        .collect();
    let mut count = 0u64;
    let mut idx = vec![0usize; m];
    loop {
        let sum: u64 = idx
            .iter()
            .zip(&coeffs)
            .map(|(&x, &c)| c * cycle[x] % ell)
            .sum::<u64>()
            % ell;
        if sum == 0 {
            count += idx.iter().map(|&x| mult[x]).product::<u64>();
        }
        let mut i = m;
        loop {
            if i == 0 {
                return count;
            }
            i -= 1;
            if idx[i] + 1 < tau {
                idx[i] += 1;
                for t in idx.iter_mut().skip(i + 1) {
                    *t = 0;
                }
                break;
            }
        }
    }
}

/// Exact `sum over the box of omega(F(k))` and its ratio against the
/// reference envelope `(K^m z^(-alpha) + K^(m-1)) * #L`.
pub fn omega_sum(form: &SparseForm, k_cap: u32, set: &SieveSet) -> (u64, f64) {
    assert!(k_cap >= 1);
    assert!(!set.is_empty());
    let total: u64 = set
        .primes
        .iter()
        .map(|p| congruence_count(form, k_cap, p.ell))
        .sum();
    let m = form.arity() as i32;
    let k = k_cap as f64;
    let envelope = (k.powi(m) * set.z.powf(-set.alpha) + k.powi(m - 1)) * set.len() as f64;
    (total, total as f64 / envelope)
}

/// Value of the pair-gcd sum: exact when the exponent is an integer.
#[derive(Debug, Clone, PartialEq)]
pub enum GcdSumValue {
    Exact(BigInt),
    Real(f64),
}

impl GcdSumValue {
    pub fn as_f64(&self) -> f64 {
        match self {
            GcdSumValue::Exact(v) => v.to_f64().unwrap_or(f64::INFINITY),
            GcdSumValue::Real(v) => *v,
        }
    }
}

/// `sum of gcd(ell-1, r-1)^kappa` over ordered pairs from the set whose
/// `ell - 1` and `r - 1` have distinct largest prime factors, with the ratio
/// against the reference envelope `z^(kappa + alpha - alpha*kappa + 1)`.
///
/// A set with fewer than two primes has no qualifying pair and sums to zero.
pub fn gcd_sum(set: &SieveSet, kappa: f64) -> (GcdSumValue, f64) {
    assert!(kappa >= 1.0, "kappa must be >= 1");
    let exact_exp = if kappa.fract() == 0.0 && kappa <= u32::MAX as f64 {
        Some(kappa as u32)
    } else {
        None
    };
    let mut exact = BigInt::zero();
    let mut real = 0.0f64;
    for a in &set.primes {
        for b in &set.primes {
            if a.p_largest == b.p_largest {
                continue;
            }
            let g = crate::arith::gcd_u64(a.ell - 1, b.ell - 1);
            match exact_exp {
                Some(e) => exact += BigInt::from(g).pow(e),
                None => real += (g as f64).powf(kappa),
            }
        }
    }
    let value = match exact_exp {
        Some(_) => GcdSumValue::Exact(exact),
        None => GcdSumValue::Real(real),
    };
    let envelope = set.z.powf(kappa + set.alpha - set.alpha * kappa + 1.0);
    let ratio = value.as_f64() / envelope;
    (value, ratio)
}
