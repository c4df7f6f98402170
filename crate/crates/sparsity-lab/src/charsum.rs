//! Complete and incomplete character sums with exponential arguments, the
//! CRT product formula, Korobov-type exponential sums, and the square-sieve
//! statistics.
//!
//! Sums with all twist frequencies zero are rational integers and are
//! computed in exact integer arithmetic. Everything else uses f64 complex
//! values with deterministic pairwise accumulation and a 1e-9 equality
//! tolerance. Bounds proved with constant 1 are marked strict; bounds that
//! carry an unspecified constant are reported as ratios and only checked
//! against a configurable slack factor.
//!
//! ```
//! use sparsity_lab::charsum::{korobov_sum, product_sum, CharSumSpec, KorobovDenominator};
//! use sparsity_lab::Workload;
//!
//! // the full sum over both moduli factors exactly: S = S_ell * S_r
//! let spec = CharSumSpec::pair(5, 7, 2, vec![1], vec![0]).unwrap();
//! let p = product_sum(&spec, &Workload::default()).unwrap();
//! assert_eq!(p.full.exact, Some(0));
//! assert_eq!(p.factor_ell.exact, Some(0));
//! assert_eq!(p.factor_r.exact, Some(3));
//!
//! // the three-term exponential sum over the orbit of 2 mod 7 has magnitude sqrt(2)
//! let (value, bound) = korobov_sum(1, 2, 7, KorobovDenominator::Modulus).unwrap();
//! assert!((value.norm() - 2f64.sqrt()).abs() < 1e-12);
//! assert!(value.norm() <= bound);
//! ```

use crate::arith::{is_prime_u64, jacobi_u64, mul_order, pow_mod};
use crate::forms::{box_size, FormsError, SparseForm};
use crate::sieve::{congruence_count, SieveSet};
use crate::Workload;
use num_complex::Complex64;
use rayon::prelude::*;
use std::fmt;

/// Tolerance for complex equality checks.
pub const COMPLEX_EQ_TOLERANCE: f64 = 1e-9;

/// Slack factor applied when checking bounds whose constant the source
/// inequality leaves unspecified. A harness convention, not a proved value.
pub const DEFAULT_BOUND_SLACK: f64 = 4.0;

#[derive(Debug, Clone, PartialEq)]
pub enum CharSumError {
    /// The pure diagonal bound requires an even exponent d.
    OddExponent { d: u64 },
    WorkloadExceeded { states: u128, budget: u64 },
    /// A stated hypothesis fails; the message names the condition.
    HypothesisViolated(String),
    /// gcd(t_ell, t_r) > 1: the CRT split does not exist.
    NotCoprimeOrders { t_ell: u64, t_r: u64 },
    NotCoprime(String),
    /// An exact identity that must hold did not.
    IdentityViolated(String),
    Forms(FormsError),
}

impl fmt::Display for CharSumError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharSumError::OddExponent { d } => write!(f, "exponent d = {} must be even", d),
            CharSumError::WorkloadExceeded { states, budget } => {
                write!(f, "workload exceeded: {} states > budget {}", states, budget)
            }
            CharSumError::HypothesisViolated(msg) => write!(f, "hypothesis violated: {}", msg),
            CharSumError::NotCoprimeOrders { t_ell, t_r } => {
                write!(f, "orders t_ell = {} and t_r = {} are not coprime", t_ell, t_r)
            }
            CharSumError::NotCoprime(msg) => write!(f, "not coprime: {}", msg),
            CharSumError::IdentityViolated(msg) => write!(f, "identity violated: {}", msg),
            CharSumError::Forms(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for CharSumError {}

impl From<FormsError> for CharSumError {
    fn from(e: FormsError) -> Self {
        CharSumError::Forms(e)
    }
}

// ---------------------------------------------------------------------------
// helpers
// ---------------------------------------------------------------------------

/// Deterministic pairwise (tree) summation in index order.
pub fn pairwise_sum(terms: &[Complex64]) -> Complex64 {
    match terms.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => terms[0],
        n => {
            let mid = n / 2;
            pairwise_sum(&terms[..mid]) + pairwise_sum(&terms[mid..])
        }
    }
}

/// Table of e(j / order) for j in 0..order.
fn unit_roots(order: u64) -> Vec<Complex64> {
    (0..order)
        .map(|j| {
            let angle = 2.0 * std::f64::consts::PI * j as f64 / order as f64;
            Complex64::new(angle.cos(), angle.sin())
        })
        .collect()
}

/// Smallest primitive root modulo the odd prime q.
pub fn smallest_primitive_root(q: u64) -> u64 {
    debug_assert!(is_prime_u64(q) && q >= 3);
    (2..q)
        .find(|&r| mul_order(r, q).map(|t| t == q - 1).unwrap_or(false))
        .expect("every odd prime has a primitive root")
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<(), CharSumError> {
    if cond {
        Ok(())
    } else {
        Err(CharSumError::HypothesisViolated(msg()))
    }
}

// ---------------------------------------------------------------------------
// diagonal-form sums over a prime field
// ---------------------------------------------------------------------------

/// Exact `S = sum over F_q^m of eta(a_1 x_1^d + ... + a_m x_m^d)` for the
/// quadratic character eta (with eta(0) = 0), together with the strict bound
/// `d^(m-1) (q-1) q^((m-1)/2)`.
///
/// Requires q an odd prime, d even and coprime to q, and every a_i non-zero
/// mod q.
pub fn quad_diag_sum(
    q: u64,
    d: u64,
    a: &[i64],
    workload: &Workload,
) -> Result<(i64, f64), CharSumError> {
    require(is_prime_u64(q) && q % 2 == 1, || format!("q = {} must be an odd prime", q))?;
    if !d.is_multiple_of(2) {
        return Err(CharSumError::OddExponent { d });
    }
    require(d >= 2 && !d.is_multiple_of(q), || format!("d = {} must be >= 2 and coprime to q", d))?;
    require(!a.is_empty(), || "need at least one coefficient".into())?;
    require(a.iter().all(|&c| c.rem_euclid(q as i64) != 0), || {
        "all coefficients must be non-zero mod q".into()
    })?;
    let m = a.len();
    let states = (q as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    workload.admit(states).map_err(|s| CharSumError::WorkloadExceeded {
        states: s,
        budget: workload.max_states,
    })?;

    let powers: Vec<u64> = (0..q).map(|x| pow_mod(x, d, q)).collect();
    let coeffs: Vec<u64> = a.iter().map(|&c| c.rem_euclid(q as i64) as u64).collect();

    fn scan(q: u64, powers: &[u64], coeffs: &[u64], depth: usize, partial: u64, acc: &mut i64) {
        if depth == coeffs.len() {
            *acc += jacobi_u64(partial as i64, q) as i64;
            return;
        }
        for x in 0..q {
            scan(
                q,
                powers,
                coeffs,
                depth + 1,
                (partial + coeffs[depth] * powers[x as usize]) % q,
                acc,
            );
        }
    }
    // leading index sharded; integer accumulation is order-independent
    let total: i64 = (0..q)
        .into_par_iter()
        .map(|lead| {
            let mut acc = 0i64;
            scan(
                q,
                &powers,
                &coeffs,
                1,
                coeffs[0] * powers[lead as usize] % q,
                &mut acc,
            );
            acc
        })
        .sum();

    let bound = (d as f64).powi(m as i32 - 1) * (q as f64 - 1.0) * (q as f64).powf((m as f64 - 1.0) / 2.0);
    assert!(total.unsigned_abs() as f64 <= bound, "diagonal-sum bound violated");
    Ok((total, bound))
}

/// The diagonal sum twisted by multiplicative characters
/// `chi_i(x) = e(c_i * ind(x) / (q-1))` for the smallest primitive root.
///
/// A twist frequency `c_i = 0 mod (q-1)` denotes the principal character and
/// acts as the constant 1 (so the all-principal case reduces exactly to
/// [`quad_diag_sum`]); non-principal characters vanish at 0. Returns the sum
/// and the reference envelope `d^m q^((m+1)/2)`, whose constant is not
/// specified, so callers compare with slack.
pub fn twisted_diag_sum(
    q: u64,
    d: u64,
    a: &[i64],
    chi_exponents: &[u64],
    workload: &Workload,
) -> Result<(Complex64, f64), CharSumError> {
    require(is_prime_u64(q) && q % 2 == 1, || format!("q = {} must be an odd prime", q))?;
    require(d >= 2 && !d.is_multiple_of(q), || format!("d = {} must be >= 2 and coprime to q", d))?;
    require(a.len() == chi_exponents.len(), || {
        "one twist frequency per coefficient".into()
    })?;
    require(a.iter().all(|&c| c.rem_euclid(q as i64) != 0), || {
        "all coefficients must be non-zero mod q".into()
    })?;
    let m = a.len();
    let states = (q as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    workload.admit(states).map_err(|s| CharSumError::WorkloadExceeded {
        states: s,
        budget: workload.max_states,
    })?;

    let root = smallest_primitive_root(q);
    let mut ind = vec![0u64; q as usize];
    let mut x = 1u64;
    for i in 0..(q - 1) {
        ind[x as usize] = i;
        x = x * root % q;
    }
    let roots = unit_roots(q - 1);
    let powers: Vec<u64> = (0..q).map(|x| pow_mod(x, d, q)).collect();
    let coeffs: Vec<u64> = a.iter().map(|&c| c.rem_euclid(q as i64) as u64).collect();
    let chi: Vec<u64> = chi_exponents.iter().map(|&c| c % (q - 1)).collect();

    let mut terms: Vec<Complex64> = Vec::with_capacity(states as usize);
    let mut tuple = vec![0u64; m];
    'outer: loop {
        let mut value = 0u64;
        let mut twist_index = 0u64;
        let mut zero_killed = false;
        for i in 0..m {
            value = (value + coeffs[i] * powers[tuple[i] as usize]) % q;
            if chi[i] != 0 {
                if tuple[i] == 0 {
                    zero_killed = true;
                } else {
                    twist_index = (twist_index + chi[i] * ind[tuple[i] as usize]) % (q - 1);
                }
            }
        }
        let eta = jacobi_u64(value as i64, q);
        if !zero_killed && eta != 0 {
            terms.push(roots[twist_index as usize] * eta as f64);
        }
        let mut i = m;
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            if tuple[i] + 1 < q {
                tuple[i] += 1;
                for t in tuple.iter_mut().skip(i + 1) {
                    *t = 0;
                }
                break;
            }
        }
    }
    let sum = pairwise_sum(&terms);
    let envelope = (d as f64).powi(m as i32) * (q as f64).powf((m as f64 + 1.0) / 2.0);
    Ok((sum, envelope))
}

// ---------------------------------------------------------------------------
// complete sums over one or two prime moduli
// ---------------------------------------------------------------------------

/// Modulus data for a complete sum: base theta, coefficients, twist
/// frequencies and the multiplicative orders of theta.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharSumSpec {
    pub ell: u64,
    pub r: Option<u64>,
    pub theta: u64,
    pub a: Vec<i64>,
    pub b: Vec<u64>,
    pub t_ell: u64,
    pub t_r: Option<u64>,
    /// Order of theta modulo ell*r, when r is present.
    pub t: Option<u64>,
}

impl CharSumSpec {
    /// Spec over a single prime modulus.
    pub fn single(ell: u64, theta: u64, a: Vec<i64>, b: Vec<u64>) -> Result<Self, CharSumError> {
        Self::validate_modulus(ell, theta, &a)?;
        require(a.len() == b.len(), || "one twist per coefficient".into())?;
        let t_ell = mul_order(theta, ell).map_err(|e| CharSumError::NotCoprime(e.to_string()))?;
        Ok(CharSumSpec {
            ell,
            r: None,
            theta,
            a,
            b,
            t_ell,
            t_r: None,
            t: None,
        })
    }

    /// Spec over two distinct prime moduli ell and r.
    pub fn pair(ell: u64, r: u64, theta: u64, a: Vec<i64>, b: Vec<u64>) -> Result<Self, CharSumError> {
        require(ell != r, || "moduli must be distinct".into())?;
        Self::validate_modulus(ell, theta, &a)?;
        Self::validate_modulus(r, theta, &a)?;
        require(a.len() == b.len(), || "one twist per coefficient".into())?;
        let t_ell = mul_order(theta, ell).map_err(|e| CharSumError::NotCoprime(e.to_string()))?;
        let t_r = mul_order(theta, r).map_err(|e| CharSumError::NotCoprime(e.to_string()))?;
        let t = mul_order(theta, ell * r).map_err(|e| CharSumError::NotCoprime(e.to_string()))?;
        Ok(CharSumSpec {
            ell,
            r: Some(r),
            theta,
            a,
            b,
            t_ell,
            t_r: Some(t_r),
            t: Some(t),
        })
    }

    fn validate_modulus(q: u64, theta: u64, a: &[i64]) -> Result<(), CharSumError> {
        require(is_prime_u64(q) && q % 2 == 1, || format!("modulus {} must be an odd prime", q))?;
        require(theta >= 2, || "theta must be >= 2".into())?;
        require(!theta.is_multiple_of(q), || format!("gcd({}, {}) > 1", theta, q))?;
        require(!a.is_empty(), || "need at least one coefficient".into())?;
        require(a.iter().all(|&c| c.rem_euclid(q as i64) != 0), || {
            format!("coefficients must be coprime to the modulus {}", q)
        })?;
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.a.len()
    }

    pub fn b_is_zero(&self) -> bool {
        self.b.iter().all(|&x| x == 0)
    }
}

/// A complete single-modulus sum with its bound.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleSum {
    pub value: Complex64,
    /// Exact integer value when every twist frequency is zero.
    pub exact: Option<i64>,
    pub bound: f64,
    /// Whether `|value| <= bound` is proved with constant 1.
    pub bound_strict: bool,
}

/// `S_ell = sum over x in [1, t_ell]^m of (a_1 theta^(x_1) + ... / ell) *
/// e((b_1 x_1 + ...) / t_ell)`.
///
/// With all twists zero and t_ell odd the strict bound
/// `t_ell * ell^((m-1)/2)` applies; otherwise the envelope `ell^((m+1)/2)`
/// is reported with an unspecified constant.
pub fn s_ell(ell: u64, theta: u64, a: &[i64], b: &[u64]) -> Result<SingleSum, CharSumError> {
    CharSumSpec::validate_modulus(ell, theta, a)?;
    require(a.len() == b.len(), || "one twist per coefficient".into())?;
    let t_ell = mul_order(theta, ell).map_err(|e| CharSumError::NotCoprime(e.to_string()))?;
    complete_sum_mod(ell, theta, t_ell, a, b, t_ell)
}

/// Core evaluator: sum over x in [1, period]^m of (F(x) / modulus) * e(b.x / period).
///
/// `order` is the multiplicative order used for the residue cycle (equal to
/// `period` for single-modulus sums).
fn complete_sum_mod(
    modulus: u64,
    theta: u64,
    order: u64,
    a: &[i64],
    b: &[u64],
    period: u64,
) -> Result<SingleSum, CharSumError> {
    let m = a.len();
    // theta^x mod modulus for x = 1..=order (cycle repeats with this period)
    let mut residues = vec![0u64; order as usize];
    let mut acc = 1u64 % modulus;
    for slot in residues.iter_mut() {
        acc = acc * (theta % modulus) % modulus;
        *slot = acc; // slot x holds theta^(x+1)
    }
    let coeffs: Vec<u64> = a.iter().map(|&c| c.rem_euclid(modulus as i64) as u64).collect();
    let b_zero = b.iter().all(|&x| x == 0);
    let roots = unit_roots(period);

    let mut exact_total: i64 = 0;
    let mut terms: Vec<Complex64> = Vec::new();
    let mut x = vec![1u64; m];
    'outer: loop {
        let mut value = 0u64;
        let mut phase = 0u128;
        for i in 0..m {
            value = (value + coeffs[i] * residues[((x[i] - 1) % order) as usize]) % modulus;
            phase = (phase + (b[i] % period) as u128 * (x[i] % period) as u128) % period as u128;
        }
        let symbol = jacobi_u64(value as i64, modulus);
        if b_zero {
            exact_total += symbol as i64;
        } else if symbol != 0 {
            terms.push(roots[phase as usize] * symbol as f64);
        }
        let mut i = m;
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            if x[i] < period {
                x[i] += 1;
                for t in x.iter_mut().skip(i + 1) {
                    *t = 1;
                }
                break;
            }
        }
    }

    let (value, exact) = if b_zero {
        (Complex64::new(exact_total as f64, 0.0), Some(exact_total))
    } else {
        (pairwise_sum(&terms), None)
    };
    let mf = m as f64;
    let (bound, bound_strict) = if b_zero && period % 2 == 1 {
        (period as f64 * (modulus as f64).powf((mf - 1.0) / 2.0), true)
    } else {
        ((modulus as f64).powf((mf + 1.0) / 2.0), false)
    };
    Ok(SingleSum {
        value,
        exact,
        bound,
        bound_strict,
    })
}

/// The unique residues `0 <= b_ell[i] < t_ell`, `0 <= b_r[i] < t_r` with
/// `b_ell[i]*t_r + b_r[i]*t_ell = b[i] mod (t_ell*t_r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrtSplit {
    pub b_ell: Vec<u64>,
    pub b_r: Vec<u64>,
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Splits each twist frequency across the two moduli by inverting t_r mod
/// t_ell and t_ell mod t_r; the result is verified by back-substitution.
pub fn crt_split(spec: &CharSumSpec) -> Result<CrtSplit, CharSumError> {
    let t_r = spec.t_r.ok_or_else(|| {
        CharSumError::HypothesisViolated("crt_split needs a two-modulus spec".into())
    })?;
    let t_ell = spec.t_ell;
    if crate::arith::gcd_u64(t_ell, t_r) != 1 {
        return Err(CharSumError::NotCoprimeOrders { t_ell, t_r });
    }
    let t = t_ell * t_r;
    let inv_tr = mod_inverse(t_r % t_ell.max(1), t_ell);
    let inv_tl = mod_inverse(t_ell % t_r.max(1), t_r);
    let mut b_ell = Vec::with_capacity(spec.b.len());
    let mut b_r = Vec::with_capacity(spec.b.len());
    for &bi in &spec.b {
        let bi = bi % t;
        let xe = match (t_ell, inv_tr) {
            (1, _) => 0,
            (_, Some(inv)) => bi % t_ell * (inv % t_ell) % t_ell,
            _ => unreachable!("coprime orders always invert"),
        };
        let xr = match (t_r, inv_tl) {
            (1, _) => 0,
            (_, Some(inv)) => bi % t_r * (inv % t_r) % t_r,
            _ => unreachable!("coprime orders always invert"),
        };
        // back-substitution check
        let lhs = (xe as u128 * t_r as u128 + xr as u128 * t_ell as u128) % t as u128;
        if lhs != (bi % t) as u128 {
            return Err(CharSumError::IdentityViolated(format!(
                "crt split failed: {}*{} + {}*{} != {} mod {}",
                xe, t_r, xr, t_ell, bi, t
            )));
        }
        b_ell.push(xe);
        b_r.push(xr);
    }
    Ok(CrtSplit { b_ell, b_r })
}

/// The full sum over `[1, t]^m` modulo `ell*r`, its two factor sums, and the
/// CRT split that connects them.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductSum {
    pub full: SingleSum,
    pub factor_ell: SingleSum,
    pub factor_r: SingleSum,
    pub split: CrtSplit,
}

impl ProductSum {
    /// |S - S_ell * S_r|; zero (exactly, for integer sums) when the product
    /// formula holds.
    pub fn factorization_gap(&self) -> f64 {
        (self.full.value - self.factor_ell.value * self.factor_r.value).norm()
    }

    pub fn holds(&self) -> bool {
        match (self.full.exact, self.factor_ell.exact, self.factor_r.exact) {
            (Some(s), Some(l), Some(r)) => s == l * r,
            _ => self.factorization_gap() <= COMPLEX_EQ_TOLERANCE,
        }
    }
}

/// Computes the two-modulus complete sum directly over `[1, t]^m` and as the
/// product of single-modulus sums with CRT-split twists.
pub fn product_sum(spec: &CharSumSpec, workload: &Workload) -> Result<ProductSum, CharSumError> {
    let r = spec.r.ok_or_else(|| {
        CharSumError::HypothesisViolated("product_sum needs a two-modulus spec".into())
    })?;
    let t_r = spec.t_r.unwrap();
    if crate::arith::gcd_u64(spec.t_ell, t_r) != 1 {
        return Err(CharSumError::NotCoprimeOrders {
            t_ell: spec.t_ell,
            t_r,
        });
    }
    let t = spec.t.unwrap();
    debug_assert_eq!(t, spec.t_ell * t_r);
    let m = spec.arity() as u32;
    let states = (t as u128)
        .checked_pow(m)
        .and_then(|full| {
            (spec.t_ell as u128)
                .checked_pow(m)
                .map(|l| full + l + (t_r as u128).pow(m))
        })
        .unwrap_or(u128::MAX);
    workload.admit(states).map_err(|s| CharSumError::WorkloadExceeded {
        states: s,
        budget: workload.max_states,
    })?;

    let full = complete_sum_mod(spec.ell * r, spec.theta, t, &spec.a, &spec.b, t)?;
    let split = crt_split(spec)?;
    let factor_ell = complete_sum_mod(spec.ell, spec.theta, spec.t_ell, &spec.a, &split.b_ell, spec.t_ell)?;
    let factor_r = complete_sum_mod(r, spec.theta, t_r, &spec.a, &split.b_r, t_r)?;
    let out = ProductSum {
        full,
        factor_ell,
        factor_r,
        split,
    };
    if !out.holds() {
        return Err(CharSumError::IdentityViolated(format!(
            "product formula gap {} exceeds tolerance for ell={} r={} theta={}",
            out.factorization_gap(),
            spec.ell,
            r,
            spec.theta
        )));
    }
    Ok(out)
}

/// Exact incomplete sum `sum_{k_i = 1..L_i} (a_1 theta^(k_1) + ... / ell*r)`
/// by residue cycling with period `t`, plus the reference envelope
/// `L_1...L_m t^(1-m) (ell r)^((m-1)/2) +
///  (L^(m-1) t^(1-m) + 1)(ell r)^((m+1)/2) log(ell r)^m`.
///
/// Hypotheses: gcd(ell*r, a_i theta) = 1, coprime orders, both orders odd.
pub fn incomplete_sum(
    spec: &CharSumSpec,
    l_bounds: &[u64],
    workload: &Workload,
) -> Result<(i128, f64), CharSumError> {
    let r = spec.r.ok_or_else(|| {
        CharSumError::HypothesisViolated("incomplete_sum needs a two-modulus spec".into())
    })?;
    let t_r = spec.t_r.unwrap();
    require(spec.b_is_zero(), || "incomplete sums take no twist".into())?;
    if crate::arith::gcd_u64(spec.t_ell, t_r) != 1 {
        return Err(CharSumError::NotCoprimeOrders {
            t_ell: spec.t_ell,
            t_r,
        });
    }
    require(spec.t_ell % 2 == 1 && t_r % 2 == 1, || {
        format!("orders must be odd, got t_ell = {}, t_r = {}", spec.t_ell, t_r)
    })?;
    require(l_bounds.len() == spec.arity(), || "one range bound per coefficient".into())?;
    let t = spec.t.unwrap();
    let modulus = spec.ell * r;
    let m = spec.arity();
    let states = (t as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    workload.admit(states).map_err(|s| CharSumError::WorkloadExceeded {
        states: s,
        budget: workload.max_states,
    })?;

    if l_bounds.contains(&0) {
        return Ok((0, 0.0));
    }

    // residue cycle theta^x mod ell*r for x = 1..=t, and per-range multiplicities
    let mut residues = vec![0u64; t as usize];
    let mut acc = 1u64 % modulus;
    for slot in residues.iter_mut() {
        acc = acc * (spec.theta % modulus) % modulus;
        *slot = acc;
    }
    let coeffs: Vec<u64> = spec.a.iter().map(|&c| c.rem_euclid(modulus as i64) as u64).collect();
    // mult[i][x] = #{k in [1, L_i] : k = x+1 mod t}, x in 0..t
    let mult: Vec<Vec<u128>> = l_bounds
        .iter()
        .map(|&l| {
            (0..t)
                .map(|x| {
                    let first = x + 1;
                    if first > l {
                        0
                    } else {
                        ((l - first) / t + 1) as u128
                    }
                })
                .collect()
        })
        .collect();

    let mut total: i128 = 0;
    let mut x = vec![0usize; m];
    'outer: loop {
        let mut value = 0u64;
        let mut weight: u128 = 1;
        for i in 0..m {
            value = (value + coeffs[i] * residues[x[i]]) % modulus;
            weight *= mult[i][x[i]];
        }
        if weight > 0 {
            total += jacobi_u64(value as i64, modulus) as i128 * weight as i128;
        }
        let mut i = m;
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            if x[i] + 1 < t as usize {
                x[i] += 1;
                for v in x.iter_mut().skip(i + 1) {
                    *v = 0;
                }
                break;
            }
        }
    }

    let l_max = *l_bounds.iter().max().unwrap() as f64;
    let l_prod: f64 = l_bounds.iter().map(|&l| l as f64).product();
    let mf = m as f64;
    let lr = modulus as f64;
    let tf = t as f64;
    let envelope = l_prod * tf.powf(1.0 - mf) * lr.powf((mf - 1.0) / 2.0)
        + (l_max.powf(mf - 1.0) * tf.powf(1.0 - mf) + 1.0) * lr.powf((mf + 1.0) / 2.0) * lr.ln().powf(mf);
    Ok((total, envelope))
}

/// Which denominator the exponential uses. `Modulus` is the reading used
/// throughout (the strict sqrt(ell) bound holds for it); `Period` divides by
/// the order instead and is kept for side-by-side comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KorobovDenominator {
    #[default]
    Modulus,
    Period,
}

/// The exponential sum `sum_{k=1}^{t} e(a theta^k / ell)` with
/// `t = tau_ell(theta)`; its magnitude is at most sqrt(ell).
pub fn korobov_sum(
    a: i64,
    theta: u64,
    ell: u64,
    denominator: KorobovDenominator,
) -> Result<(Complex64, f64), CharSumError> {
    require(is_prime_u64(ell) && ell % 2 == 1, || format!("ell = {} must be an odd prime", ell))?;
    require(theta >= 2, || "theta must be >= 2".into())?;
    if theta.is_multiple_of(ell) || a.rem_euclid(ell as i64) == 0 {
        return Err(CharSumError::NotCoprime(format!(
            "gcd(ell, a*theta) > 1 for ell = {}, a = {}, theta = {}",
            ell, a, theta
        )));
    }
    let t = mul_order(theta, ell).map_err(|e| CharSumError::NotCoprime(e.to_string()))?;
    let denom = match denominator {
        KorobovDenominator::Modulus => ell,
        KorobovDenominator::Period => t,
    };
    let roots = unit_roots(denom);
    let a_red = a.rem_euclid(ell as i64) as u64;
    let mut terms = Vec::with_capacity(t as usize);
    let mut power = 1u64;
    for _ in 0..t {
        power = power * (theta % ell) % ell;
        let residue = a_red * power % ell;
        terms.push(roots[(residue % denom) as usize]);
    }
    Ok((pairwise_sum(&terms), (ell as f64).sqrt()))
}

/// Count of solutions of `F(k) = 0 mod ell` over the box, with the strict
/// envelope `(K+1)^(m-1) ((K+1)/tau + 1)` and, when the sieve-set hypotheses
/// apply (member prime, m >= 3, K >= z), the sharper reference value
/// `K^m z^(-1) + K^m z^(m/2 - alpha(m-1) - 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TmCount {
    pub count: u64,
    pub trivial_bound: f64,
    pub lemma_bound: Option<f64>,
}

pub fn t_m_count(form: &SparseForm, k_cap: u32, ell: u64, set: Option<&SieveSet>) -> TmCount {
    assert!(!form.base().is_multiple_of(ell), "ell must not divide the base");
    let count = congruence_count(form, k_cap, ell);
    let tau = mul_order(form.base(), ell).expect("coprime checked above") as f64;
    let m = form.arity() as f64;
    let kp1 = (k_cap + 1) as f64;
    let trivial_bound = kp1.powf(m - 1.0) * (kp1 / tau + 1.0);
    let lemma_bound = set.and_then(|s| {
        let member = s.primes.iter().any(|p| p.ell == ell);
        if member && form.arity() >= 3 && k_cap as f64 >= s.z {
            let k = k_cap as f64;
            Some(k.powf(m) * s.z.powf(-1.0) + k.powf(m) * s.z.powf(m / 2.0 - s.alpha * (m - 1.0) - 1.0))
        } else {
            None
        }
    });
    assert!(count as f64 <= trivial_bound, "congruence-count envelope violated");
    TmCount {
        count,
        trivial_bound,
        lemma_bound,
    }
}

/// Exact square-sieve statistics over an exponent box against a sieve set.
#[derive(Debug, Clone, PartialEq)]
pub struct SieveStatistics {
    /// Number of square tuples (including flagged zero-value tuples).
    pub square_tuples: u64,
    pub zero_tuples: u64,
    /// `W = sum over the box of (sum_ell (F/ell))^2`.
    pub w: i128,
    /// Pairs whose `ell-1`, `r-1` share the largest prime factor (diagonal included).
    pub u: i128,
    /// Pairs with distinct largest prime factors.
    pub v: i128,
    /// Master-bound terms, for inspection: K^m z^(-alpha), K^(m-1), z^(-2) W, z^(-2) V.
    pub term_km_z_alpha: f64,
    pub term_km1: f64,
    pub term_z2_w: f64,
    pub term_z2_v: f64,
}

/// Computes M, W, U, V exactly and re-verifies the sieve identity
/// `sum_ell (F/ell) = #L - omega(F)` on every non-zero square tuple.
///
/// ```
/// use sparsity_lab::charsum::sieve_statistics;
/// use sparsity_lab::forms::SparseForm;
/// use sparsity_lab::sieve::build_sieve_set;
/// use sparsity_lab::Workload;
///
/// let set = build_sieve_set(2, 11.0, 0.5, 3.0).unwrap();
/// let form = SparseForm::new(2, vec![1, 1]).unwrap();
///
/// let stats = sieve_statistics(&form, 10, &set, &Workload::default()).unwrap();
/// assert_eq!(stats.square_tuples, 13);
/// assert_eq!((stats.w, stats.u, stats.v), (252, 242, 10));
/// assert_eq!(stats.w, stats.u + stats.v);
/// ```
pub fn sieve_statistics(
    form: &SparseForm,
    k_cap: u32,
    set: &SieveSet,
    workload: &Workload,
) -> Result<SieveStatistics, CharSumError> {
    let m = form.arity();
    let states = box_size(m, k_cap).saturating_mul(set.len() as u128);
    workload.admit(states).map_err(|s| CharSumError::WorkloadExceeded {
        states: s,
        budget: workload.max_states,
    })?;

    let squares = form.count_square_tuples(k_cap, workload)?;

    // per-prime residue cycles: g^k mod ell for k = 0..=K
    let ells: Vec<u64> = set.ells().collect();
    let tables: Vec<Vec<u64>> = ells
        .iter()
        .map(|&ell| {
            let mut t = Vec::with_capacity(k_cap as usize + 1);
            let mut acc = 1u64 % ell;
            for _ in 0..=k_cap {
                t.push(acc);
                acc = acc * (form.base() % ell) % ell;
            }
            t
        })
        .collect();
    let same_lpf: Vec<Vec<bool>> = set
        .primes
        .iter()
        .map(|a| set.primes.iter().map(|b| a.p_largest == b.p_largest).collect())
        .collect();

    // sharded on the leading exponent; the integer accumulators are
    // order-independent
    let n_l = ells.len();
    let (w, u, v) = (0..=k_cap)
        .into_par_iter()
        .map(|lead| {
            let mut w: i128 = 0;
            let mut u: i128 = 0;
            let mut v: i128 = 0;
            let mut symbols = vec![0i8; n_l];
            let mut tuple = vec![0u32; m];
            tuple[0] = lead;
            'shard: loop {
                for (j, &ell) in ells.iter().enumerate() {
                    let mut value = 0u64;
                    for (c, &k) in form.coeffs().iter().zip(tuple.iter()) {
                        let cm = c.rem_euclid(ell as i64) as u64;
                        value = (value + cm * tables[j][k as usize]) % ell;
                    }
                    symbols[j] = jacobi_u64(value as i64, ell);
                }
                let s: i64 = symbols.iter().map(|&x| x as i64).sum();
                w += (s as i128) * (s as i128);
                for i in 0..n_l {
                    for j in 0..n_l {
                        let prod = (symbols[i] as i128) * (symbols[j] as i128);
                        if same_lpf[i][j] {
                            u += prod;
                        } else {
                            v += prod;
                        }
                    }
                }
                let mut i = m;
                loop {
                    if i <= 1 {
                        break 'shard;
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
            (w, u, v)
        })
        .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));

    if w != u + v {
        return Err(CharSumError::IdentityViolated(format!(
            "W = {} but U + V = {}",
            w,
            u + v
        )));
    }

    // sieve identity on every non-zero square hit
    for hit in &squares.hits {
        use num_traits::Zero;
        if hit.value.is_zero() {
            continue;
        }
        let mut sym_sum = 0i64;
        for &ell in &ells {
            let residue = (&hit.value % ell)
                .try_into()
                .unwrap_or_else(|_| unreachable!("residue below u64 modulus"));
            sym_sum += jacobi_u64(residue, ell) as i64;
        }
        let omega = set.omega(&hit.value).expect("non-zero value") as i64;
        if sym_sum != n_l as i64 - omega {
            return Err(CharSumError::IdentityViolated(format!(
                "sieve identity failed at {:?}: symbols {} vs #L - omega {}",
                hit.k,
                sym_sum,
                n_l as i64 - omega
            )));
        }
    }

    let mf = m as f64;
    let k = k_cap as f64;
    Ok(SieveStatistics {
        square_tuples: squares.total,
        zero_tuples: squares.zero_hits,
        w,
        u,
        v,
        term_km_z_alpha: k.powf(mf) * set.z.powf(-set.alpha),
        term_km1: k.powf(mf - 1.0),
        term_z2_w: set.z.powf(-2.0) * w as f64,
        term_z2_v: set.z.powf(-2.0) * v as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::build_sieve_set;

    fn w() -> Workload {
        Workload::default()
    }

    #[test]
    fn quad_diag_golden_cases() {
        assert_eq!(quad_diag_sum(5, 2, &[1], &w()).unwrap().0, 4);
        assert_eq!(quad_diag_sum(3, 2, &[1, 1], &w()).unwrap().0, 0);
        let (s, bound) = quad_diag_sum(7, 2, &[1, 1], &w()).unwrap();
        assert_eq!(s, 0);
        assert!((s.unsigned_abs() as f64) <= bound);
        assert_eq!(quad_diag_sum(11, 4, &[1, 2, 3], &w()).unwrap().0, 110);
        assert_eq!(quad_diag_sum(13, 2, &[1, 1, 1], &w()).unwrap().0, 156);
        assert_eq!(quad_diag_sum(5, 4, &[1, 2], &w()).unwrap().0, -16);
    }

    #[test]
    fn quad_diag_rejects_odd_d_and_zero_coeff() {
        assert!(matches!(
            quad_diag_sum(7, 3, &[1], &w()),
            Err(CharSumError::OddExponent { d: 3 })
        ));
        assert!(quad_diag_sum(7, 2, &[7], &w()).is_err());
    }

    #[test]
    fn twisted_reduces_to_quad_with_principal_twists() {
        for (q, d, a) in [(5u64, 2u64, vec![1i64, 1]), (7, 2, vec![1, 3]), (11, 4, vec![1, 2, 3])] {
            let chi = vec![0u64; a.len()];
            let (tw, _) = twisted_diag_sum(q, d, &a, &chi, &w()).unwrap();
            let (pure, _) = quad_diag_sum(q, d, &a, &w()).unwrap();
            assert_eq!(tw, Complex64::new(pure as f64, 0.0));
        }
    }

    #[test]
    fn twisted_golden_cases() {
        // chi(1) + chi(2) with primitive root 2 mod 3: 1 + e(1/2) = 0
        let (v, _) = twisted_diag_sum(3, 2, &[1], &[1], &w()).unwrap();
        assert!(v.norm() < COMPLEX_EQ_TOLERANCE);
        let (v, _) = twisted_diag_sum(5, 2, &[1, 1], &[1, 0], &w()).unwrap();
        assert!(v.norm() < COMPLEX_EQ_TOLERANCE);
        let (v, bound) = twisted_diag_sum(7, 2, &[1, 1], &[2, 3], &w()).unwrap();
        assert!(v.norm() < COMPLEX_EQ_TOLERANCE);
        assert!(v.norm() <= DEFAULT_BOUND_SLACK * bound);
    }

    #[test]
    fn s_ell_golden_cases() {
        let s = s_ell(7, 2, &[1, 1], &[0, 0]).unwrap();
        assert_eq!(s.exact, Some(-3));
        assert!(s.bound_strict);
        assert!((s.value.re + 3.0).abs() < 1e-12);
        assert!(s.value.norm() <= s.bound); // 3 * sqrt(7)

        let s = s_ell(7, 2, &[1], &[0]).unwrap();
        assert_eq!(s.exact, Some(3));

        let s = s_ell(5, 4, &[1], &[1]).unwrap();
        assert!(s.value.norm() < COMPLEX_EQ_TOLERANCE);
        assert_eq!(s.exact, None);

        // t odd, b non-zero: integer-valued real part 6
        let s = s_ell(7, 2, &[1, 1], &[1, 2]).unwrap();
        assert!((s.value.re - 6.0).abs() < 1e-9);
        assert!(s.value.im.abs() < 1e-9);

        let s = s_ell(11, 3, &[1, 2], &[2, 3]).unwrap();
        assert!((s.value.re - 3.454915028125263).abs() < 1e-9);
        assert!((s.value.im - 1.1225699414489634).abs() < 1e-9);
    }

    #[test]
    fn s_ell_rejects_shared_factor() {
        assert!(s_ell(7, 14, &[1], &[0]).is_err());
        assert!(s_ell(7, 2, &[7], &[0]).is_err());
    }

    #[test]
    fn crt_split_golden_cases() {
        // orders 4 and 3 arise for theta = 2 with ell = 5, r = 7
        let spec = CharSumSpec::pair(5, 7, 2, vec![1], vec![5]).unwrap();
        assert_eq!(spec.t_ell, 4);
        assert_eq!(spec.t_r, Some(3));
        let split = crt_split(&spec).unwrap();
        assert_eq!(split.b_ell, vec![3]);
        assert_eq!(split.b_r, vec![2]);

        let spec = CharSumSpec::pair(5, 7, 2, vec![1], vec![1]).unwrap();
        let split = crt_split(&spec).unwrap();
        assert_eq!(split.b_ell, vec![3]);
        assert_eq!(split.b_r, vec![1]);

        let spec = CharSumSpec::pair(5, 7, 2, vec![1], vec![0]).unwrap();
        let split = crt_split(&spec).unwrap();
        assert_eq!(split.b_ell, vec![0]);
        assert_eq!(split.b_r, vec![0]);
    }

    #[test]
    fn crt_split_requires_coprime_orders() {
        // tau_7(2) = 3 and tau_29(2) = 28 are coprime; tau_23(2) = 11 and tau_89(2) = 11 are not
        let spec = CharSumSpec::pair(23, 89, 2, vec![1], vec![1]).unwrap();
        assert!(matches!(
            crt_split(&spec),
            Err(CharSumError::NotCoprimeOrders { t_ell: 11, t_r: 11 })
        ));
    }

    #[test]
    fn product_formula_golden_case() {
        let spec = CharSumSpec::pair(5, 7, 2, vec![1], vec![0]).unwrap();
        let p = product_sum(&spec, &w()).unwrap();
        assert_eq!(p.full.exact, Some(0));
        assert_eq!(p.factor_ell.exact, Some(0));
        assert_eq!(p.factor_r.exact, Some(3));
        assert!(p.holds());

        let spec = CharSumSpec::pair(23, 31, 2, vec![1, 1], vec![0, 0]).unwrap();
        let p = product_sum(&spec, &w()).unwrap();
        assert_eq!(p.full.exact, Some(-55));
        assert_eq!(p.factor_ell.exact, Some(-11));
        assert_eq!(p.factor_r.exact, Some(5));
    }

    #[test]
    fn product_formula_with_twists() {
        let spec = CharSumSpec::pair(23, 31, 2, vec![1], vec![4]).unwrap();
        let p = product_sum(&spec, &w()).unwrap();
        assert!(p.holds());
        assert!(p.full.value.norm() < 1e-9); // frozen: the full sum vanishes
    }

    #[test]
    fn incomplete_sum_golden_cases() {
        let spec = CharSumSpec::pair(23, 31, 2, vec![1], vec![0]).unwrap();
        let (v, _) = incomplete_sum(&spec, &[10], &w()).unwrap();
        assert_eq!(v, 10); // (2/23) = (2/31) = +1 makes every term +1
        let (v, _) = incomplete_sum(&spec, &[0], &w()).unwrap();
        assert_eq!(v, 0);

        let spec2 = CharSumSpec::pair(23, 31, 2, vec![1, 1], vec![0, 0]).unwrap();
        let (v, _) = incomplete_sum(&spec2, &[10, 7], &w()).unwrap();
        assert_eq!(v, 0);
    }

    #[test]
    fn incomplete_full_range_equals_complete_sum() {
        let spec = CharSumSpec::pair(23, 31, 2, vec![1, 1], vec![0, 0]).unwrap();
        let t = spec.t.unwrap();
        let (v, _) = incomplete_sum(&spec, &[t, t], &w()).unwrap();
        let p = product_sum(&spec, &w()).unwrap();
        assert_eq!(v, p.full.exact.unwrap() as i128);
    }

    #[test]
    fn incomplete_rejects_even_orders() {
        // tau_7(2) = 3, tau_5(2) = 4 (even)
        let spec = CharSumSpec::pair(5, 7, 2, vec![1], vec![0]).unwrap();
        assert!(matches!(
            incomplete_sum(&spec, &[5], &w()),
            Err(CharSumError::HypothesisViolated(_))
        ));
    }

    #[test]
    fn korobov_golden_cases() {
        let (v, bound) = korobov_sum(1, 2, 7, KorobovDenominator::Modulus).unwrap();
        assert!((v.re + 0.5).abs() < 1e-12);
        assert!((v.im - (7.0f64.sqrt() / 2.0)).abs() < 1e-12);
        assert!(v.norm() <= bound);

        let (v, _) = korobov_sum(1, 2, 3, KorobovDenominator::Modulus).unwrap();
        assert!((v.re + 1.0).abs() < 1e-12 && v.im.abs() < 1e-12);
        let (v, _) = korobov_sum(2, 2, 3, KorobovDenominator::Modulus).unwrap();
        assert!((v.re + 1.0).abs() < 1e-12 && v.im.abs() < 1e-12);

        let (v, _) = korobov_sum(3, 3, 11, KorobovDenominator::Modulus).unwrap();
        assert!((v.re + 0.5).abs() < 1e-9);
        assert!((v.im - 1.6583123951777).abs() < 1e-9);
    }

    #[test]
    fn korobov_rejects_shared_factor() {
        assert!(korobov_sum(7, 2, 7, KorobovDenominator::Modulus).is_err());
        assert!(korobov_sum(1, 14, 7, KorobovDenominator::Modulus).is_err());
    }

    #[test]
    fn korobov_period_variant_differs_in_general() {
        let (by_modulus, _) = korobov_sum(1, 2, 7, KorobovDenominator::Modulus).unwrap();
        let (by_period, _) = korobov_sum(1, 2, 7, KorobovDenominator::Period).unwrap();
        assert!((by_modulus - by_period).norm() > 0.1);
    }

    #[test]
    fn t_m_count_golden_cases() {
        let f = SparseForm::new(2, vec![1, 1]).unwrap();
        let t = t_m_count(&f, 3, 3, None);
        assert_eq!(t.count, 8);
        assert!(t.count as f64 <= t.trivial_bound);

        let single = SparseForm::new(2, vec![1]).unwrap();
        assert_eq!(t_m_count(&single, 5, 7, None).count, 0);

        let f16 = SparseForm::new(2, vec![1, 6]).unwrap();
        let t = t_m_count(&f16, 3, 7, None);
        assert_eq!(t.count, 6);
        assert!(t.count as f64 <= t.trivial_bound);
    }

    #[test]
    fn sieve_statistics_golden_case() {
        let set = build_sieve_set(2, 11.0, 0.5, 3.0).unwrap();
        let f = SparseForm::new(2, vec![1, 1]).unwrap();
        let stats = sieve_statistics(&f, 4, &set, &w()).unwrap();
        assert_eq!(stats.square_tuples, 4);
        assert_eq!((stats.w, stats.u, stats.v), (44, 50, -6));

        let stats = sieve_statistics(&f, 10, &set, &w()).unwrap();
        assert_eq!(stats.square_tuples, 13);
        assert_eq!((stats.w, stats.u, stats.v), (252, 242, 10));
    }

    #[test]
    fn sieve_statistics_single_prime_has_zero_v() {
        let set = build_sieve_set(2, 11.0, 0.99, 3.0).unwrap(); // {23}
        assert_eq!(set.len(), 1);
        let f = SparseForm::new(2, vec![1, 1]).unwrap();
        let stats = sieve_statistics(&f, 6, &set, &w()).unwrap();
        assert_eq!(stats.v, 0);
        assert_eq!(stats.w, stats.u);

        let single_term = SparseForm::new(2, vec![3]).unwrap();
        let stats = sieve_statistics(&single_term, 6, &set, &w()).unwrap();
        assert_eq!(stats.w, stats.u);
        assert_eq!(stats.w, 7); // 3 * 2^k is never a residue class 0 mod 23
    }

    #[test]
    fn statistics_skip_zero_tuples_in_the_identity() {
        // 2^a + 2^b - 2^(c+1) hits zero on aligned tuples; those are flagged
        // and excluded from the per-hit identity check
        let set = build_sieve_set(2, 11.0, 0.5, 3.0).unwrap();
        let f = SparseForm::new(2, vec![1, 1, -2]).unwrap();
        let stats = sieve_statistics(&f, 4, &set, &w()).unwrap();
        assert!(stats.zero_tuples > 0);
        assert_eq!(stats.w, stats.u + stats.v);
    }

    #[test]
    fn coprime_square_hits_have_full_symbol_sum() {
        let set = build_sieve_set(2, 11.0, 0.5, 3.0).unwrap();
        let f = SparseForm::new(2, vec![1, 1]).unwrap();
        let squares = f.count_square_tuples(6, &w()).unwrap();
        for hit in &squares.hits {
            let mut s = 0i64;
            for ell in set.ells() {
                let residue: i64 = (&hit.value % ell).try_into().unwrap();
                s += jacobi_u64(residue, ell) as i64;
            }
            assert_eq!(s, set.len() as i64 - set.omega(&hit.value).unwrap() as i64);
        }
    }

    #[test]
    fn root_choice_does_not_change_twisted_magnitudes() {
        // recompute the q = 7 twisted sum with the second primitive root 5
        let q = 7u64;
        let (default_v, _) = twisted_diag_sum(q, 2, &[1, 1], &[2, 3], &w()).unwrap();
        let alt_root = 5u64;
        assert_eq!(mul_order(alt_root, q).unwrap(), q - 1);
        let mut ind = vec![0u64; q as usize];
        let mut x = 1u64;
        for i in 0..(q - 1) {
            ind[x as usize] = i;
            x = x * alt_root % q;
        }
        let roots = unit_roots(q - 1);
        let mut terms = Vec::new();
        for x1 in 0..q {
            for x2 in 0..q {
                if x1 == 0 || x2 == 0 {
                    continue;
                }
                let value = (x1 * x1 + x2 * x2) % q;
                let eta = jacobi_u64(value as i64, q);
                if eta != 0 {
                    let phase = (2 * ind[x1 as usize] + 3 * ind[x2 as usize]) % (q - 1);
                    terms.push(roots[phase as usize] * eta as f64);
                }
            }
        }
        let alt_v = pairwise_sum(&terms);
        assert!((default_v.norm() - alt_v.norm()).abs() < 1e-9);
    }
}
