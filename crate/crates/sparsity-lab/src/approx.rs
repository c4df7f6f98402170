//! Bounded-exponent representation search: which integers `n <= N` admit
//! exponents `k_lo <= k_1 <= ... <= k_m <= b0 (1 + log N)` with
//! `|Q(n) - sum c_i lambda^(k_i)| <= B`?
//!
//! The instance constants are derived from coefficient magnitudes alone:
//! a threshold `n0` past which the polynomial is dominated by its leading
//! term and consecutive values separate by more than `2B`, a gap `delta`
//! past which the top power dominates the whole exponential sum, and the
//! cap slope `b0`. When every input is an integer and `B = 0` the search is
//! carried out in exact big-integer arithmetic.
//!
//! ```
//! use sparsity_lab::approx::ApproxInstance;
//! use sparsity_lab::Workload;
//!
//! // which n <= 20 have n^2 = 2^(k1) + 2^(k2)?
//! let inst = ApproxInstance::from_integers(&[0, 0, 1], 2, &[1, 1], 0.0).unwrap();
//! let witnesses = inst.search(20, 0, &Workload::default()).unwrap();
//! let mut roots: Vec<u64> = witnesses.iter().map(|w| w.n).collect();
//! roots.dedup();
//! assert_eq!(roots, vec![2, 3, 4, 6, 8, 12, 16]);
//! ```

use crate::Workload;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum ApproxError {
    /// |lambda| <= 1 or Q constant: the finiteness argument collapses.
    DegenerateInstance(String),
    WorkloadExceeded { states: u128, budget: u64 },
}

impl fmt::Display for ApproxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ApproxError::DegenerateInstance(msg) => write!(f, "degenerate instance: {}", msg),
            ApproxError::WorkloadExceeded { states, budget } => {
                write!(f, "workload exceeded: {} states > budget {}", states, budget)
            }
        }
    }
}

impl std::error::Error for ApproxError {}

/// One search instance: polynomial coefficients `a_0..a_d`, base `lambda`,
/// exponential coefficients `c_1..c_m`, and the slack `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxInstance {
    q_coeffs: Vec<Complex64>,
    lambda: Complex64,
    c: Vec<Complex64>,
    b: f64,
}

/// Derived constants of an instance; see the module docs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceConstants {
    /// Past this threshold `|Q(n)| <= 2 |a_d| n^d` and increments exceed 2B.
    pub n0: u64,
    /// Gap past which the largest power carries at least half the sum.
    pub delta: u32,
    /// Exponent-cap slope: solutions have `k_m <= b0 (1 + log n)`.
    pub b0: f64,
}

/// A found representation with its residual `|Q(n) - sum c_i lambda^(k_i)|`.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub n: u64,
    pub k: Vec<u32>,
    pub residual: f64,
}

impl ApproxInstance {
    pub fn new(
        q_coeffs: Vec<Complex64>,
        lambda: Complex64,
        c: Vec<Complex64>,
        b: f64,
    ) -> Result<Self, ApproxError> {
        let degree = q_coeffs.len().saturating_sub(1);
        if degree == 0 || q_coeffs.is_empty() {
            return Err(ApproxError::DegenerateInstance(
                "polynomial must be non-constant".into(),
            ));
        }
        if q_coeffs.last().unwrap().norm() == 0.0 {
            return Err(ApproxError::DegenerateInstance(
                "leading coefficient must be non-zero".into(),
            ));
        }
        if lambda.norm() <= 1.0 {
            return Err(ApproxError::DegenerateInstance(format!(
                "|lambda| = {} must exceed 1",
                lambda.norm()
            )));
        }
        if c.is_empty() || c.iter().any(|ci| ci.norm() == 0.0) {
            return Err(ApproxError::DegenerateInstance(
                "exponential coefficients must be non-zero".into(),
            ));
        }
        if b < 0.0 {
            return Err(ApproxError::DegenerateInstance("B must be >= 0".into()));
        }
        Ok(ApproxInstance {
            q_coeffs,
            lambda,
            c,
            b,
        })
    }

    /// Convenience constructor for integer data.
    pub fn from_integers(q_coeffs: &[i64], lambda: i64, c: &[i64], b: f64) -> Result<Self, ApproxError> {
        Self::new(
            q_coeffs.iter().map(|&x| Complex64::new(x as f64, 0.0)).collect(),
            Complex64::new(lambda as f64, 0.0),
            c.iter().map(|&x| Complex64::new(x as f64, 0.0)).collect(),
            b,
        )
    }

    pub fn degree(&self) -> usize {
        self.q_coeffs.len() - 1
    }

    pub fn arity(&self) -> usize {
        self.c.len()
    }

    pub fn slack(&self) -> f64 {
        self.b
    }

    fn leading_abs(&self) -> f64 {
        self.q_coeffs.last().unwrap().norm()
    }

    /// The rational view of the instance, available when `B = 0` and every
    /// coefficient and the base are real (each finite f64 is an exact dyadic
    /// rational); enables exact search with no rounding anywhere.
    fn exact_view(&self) -> Option<ExactInstance> {
        if self.b != 0.0 {
            return None;
        }
        let to_rational = |z: &Complex64| -> Option<BigRational> {
            if z.im == 0.0 {
                BigRational::from_f64(z.re)
            } else {
                None
            }
        };
        let q: Option<Vec<BigRational>> = self.q_coeffs.iter().map(to_rational).collect();
        let c: Option<Vec<BigRational>> = self.c.iter().map(to_rational).collect();
        let lambda = to_rational(&self.lambda)?;
        Some(ExactInstance {
            q: q?,
            lambda,
            c: c?,
        })
    }

    /// Derives `(n0, delta, b0)` from coefficient magnitudes. The defining
    /// inequalities are sufficient conditions, so the returned values are
    /// valid but not claimed minimal.
    pub fn instance_constants(&self) -> InstanceConstants {
        let d = self.degree();
        let a_d = self.leading_abs();
        let lower_sum: f64 = self.q_coeffs[..d].iter().map(|z| z.norm()).sum();
        let weighted_sum: f64 = self.q_coeffs[1..d]
            .iter()
            .enumerate()
            .map(|(i, z)| (i as f64 + 1.0) * z.norm())
            .sum();
        let mut n0 = 1u64;
        loop {
            let n = n0 as f64;
            let dominated = lower_sum <= a_d * n; // sum |a_i| n^(i-d) <= |a_d| since i <= d-1
            let slope_ok = n >= weighted_sum / a_d;
            let spaced = a_d * n.powi(d as i32) * 2f64.powi(d as i32 - 2) > 2.0 * self.b;
            if dominated && slope_ok && spaced {
                break;
            }
            n0 += 1;
        }

        let c_m = self.c.last().unwrap().norm();
        let smaller: f64 = self.c[..self.arity() - 1].iter().map(|z| z.norm()).sum();
        let lam = self.lambda.norm();
        let mut delta = 1u32;
        while c_m * lam.powi(delta as i32) < 2.0 * smaller + c_m {
            delta += 1;
        }

        let cap_num = (2.0 * (self.b + 2.0 * a_d) / c_m).ln().max(0.0);
        let b0 = cap_num.max(d as f64) / lam.ln();
        InstanceConstants { n0, delta, b0 }
    }

    /// Spot check of the two `n0` inequalities on a grid of arguments and
    /// increments above `n0`.
    pub fn verify_constants_on_grid(&self, constants: &InstanceConstants, grid_max: u64) -> bool {
        let d = self.degree() as i32;
        let a_d = self.leading_abs();
        for n in constants.n0..=grid_max.max(constants.n0) {
            if self.eval_q_f64(n).norm() > 2.0 * a_d * (n as f64).powi(d) {
                return false;
            }
            for h in constants.n0..=grid_max.max(constants.n0) {
                let gap = (self.eval_q_f64(n + h) - self.eval_q_f64(n)).norm();
                if gap <= 2.0 * self.b {
                    return false;
                }
            }
        }
        true
    }

    fn eval_q_f64(&self, n: u64) -> Complex64 {
        let x = Complex64::new(n as f64, 0.0);
        let mut acc = Complex64::zero();
        for coeff in self.q_coeffs.iter().rev() {
            acc = acc * x + coeff;
        }
        acc
    }

    /// Exponent cap for a search up to `n_max`.
    pub fn exponent_cap(&self, n_max: u64) -> u32 {
        let b0 = self.instance_constants().b0;
        (b0 * (1.0 + (n_max.max(2) as f64).ln())).ceil() as u32
    }

    /// All `(n, k)` with `n <= n_max`, `k_lo <= k_1 <= ... <= k_m <= cap`,
    /// and `|Q(n) - sum c_i lambda^(k_i)| <= B`, sorted by `(n, k)`.
    ///
    /// Real instances with `B = 0` are solved in exact rational arithmetic:
    /// the polynomial values over `[1, n_max]` are indexed once and each
    /// tuple's sum is looked up. Otherwise candidates are recovered per
    /// tuple by inverting the dominant term over a real bracket and testing
    /// nearby integers.
    pub fn search(
        &self,
        n_max: u64,
        k_lo: u32,
        workload: &Workload,
    ) -> Result<Vec<Witness>, ApproxError> {
        let cap = self.exponent_cap(n_max);
        if cap < k_lo {
            return Ok(Vec::new());
        }
        let m = self.arity();
        let choices = (cap - k_lo + 1) as u128;
        let tuples = choices.checked_pow(m as u32).unwrap_or(u128::MAX);
        let constants = self.instance_constants();
        let window = 2 * constants.n0 as u128 + 16;
        let states = tuples
            .saturating_mul(window)
            .saturating_add(n_max as u128);
        workload.admit(states).map_err(|s| ApproxError::WorkloadExceeded {
            states: s,
            budget: workload.max_states,
        })?;

        let mut out = match self.exact_view() {
            Some(exact) => exact.search(n_max, k_lo, cap, m),
            None => self.search_float(n_max, k_lo, cap, constants.n0),
        };
        out.sort_by(|a, b| (a.n, &a.k).cmp(&(b.n, &b.k)));
        out.dedup_by(|a, b| a.n == b.n && a.k == b.k);
        Ok(out)
    }

    fn search_float(&self, n_max: u64, k_lo: u32, cap: u32, n0: u64) -> Vec<Witness> {
        let d = self.degree() as f64;
        let a_d = self.leading_abs();
        let mut out = Vec::new();
        let mut powers: Vec<Complex64> = Vec::with_capacity(cap as usize + 1);
        let mut acc = Complex64::new(1.0, 0.0);
        for _ in 0..=cap {
            powers.push(acc);
            acc *= self.lambda;
        }
        let mut tuple = vec![k_lo; self.arity()];
        loop {
            let target: Complex64 = tuple
                .iter()
                .zip(&self.c)
                .map(|(&k, c)| c * powers[k as usize])
                .sum();
            // dominant-term inversion: |a_d| x^d ~ |target|
            let center = (target.norm() / a_d).powf(1.0 / d);
            let lo = (center as i64 - n0 as i64 - 8).max(1) as u64;
            let hi = ((center + 2.0) as u64 + n0 + 8).min(n_max);
            // below n0 the polynomial is not yet monotone; scan that strip too
            for n in (1..=n0.min(n_max)).chain(lo..=hi) {
                let residual = (self.eval_q_f64(n) - target).norm();
                if residual <= self.b + 1e-9 {
                    out.push(Witness {
                        n,
                        k: tuple.clone(),
                        residual,
                    });
                }
            }
            if !next_sorted_tuple(&mut tuple, cap) {
                break;
            }
        }
        out
    }
}

struct ExactInstance {
    q: Vec<BigRational>,
    lambda: BigRational,
    c: Vec<BigRational>,
}

impl ExactInstance {
    fn eval_q(&self, n: u64) -> BigRational {
        let x = BigRational::from_integer(BigInt::from(n));
        let mut acc = BigRational::zero();
        for coeff in self.q.iter().rev() {
            acc = acc * &x + coeff;
        }
        acc
    }

    fn search(&self, n_max: u64, k_lo: u32, cap: u32, m: usize) -> Vec<Witness> {
        // index Q values once; Q need not be injective on [1, n_max]
        let mut values: BTreeMap<BigRational, Vec<u64>> = BTreeMap::new();
        for n in 1..=n_max {
            values.entry(self.eval_q(n)).or_default().push(n);
        }
        let mut powers: Vec<BigRational> = Vec::with_capacity(cap as usize + 1);
        let mut acc = BigRational::one();
        for _ in 0..=cap {
            powers.push(acc.clone());
            acc *= &self.lambda;
        }
        let mut out = Vec::new();
        let mut tuple = vec![k_lo; m];
        loop {
            let mut target = BigRational::zero();
            for (&k, c) in tuple.iter().zip(&self.c) {
                target += c * &powers[k as usize];
            }
            if let Some(ns) = values.get(&target) {
                for &n in ns {
                    out.push(Witness {
                        n,
                        k: tuple.clone(),
                        residual: 0.0,
                    });
                }
            }
            if !next_sorted_tuple(&mut tuple, cap) {
                break;
            }
        }
        out
    }
}

/// Advances a non-decreasing tuple below `cap`; false when exhausted.
fn next_sorted_tuple(tuple: &mut [u32], cap: u32) -> bool {
    let mut i = tuple.len();
    while i > 0 {
        i -= 1;
        if tuple[i] < cap {
            let v = tuple[i] + 1;
            for t in tuple.iter_mut().skip(i) {
                *t = v;
            }
            return true;
        }
    }
    false
}
