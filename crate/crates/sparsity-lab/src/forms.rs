//! Sparse forms `F(k) = c_1*g^(k_1) + ... + c_m*g^(k_m)` and the counting
//! operations built on them: square tuples over an exponent box, distinct
//! representable roots below a bound, squares with few non-zero digits, and
//! the explicit lower-bound family of repeated squares.
//!
//! ```
//! use sparsity_lab::forms::{count_sparse_squares, gamma_m, SparseForm};
//! use sparsity_lab::Workload;
//! use num_rational::Rational64;
//!
//! let form = SparseForm::new(2, vec![1, 1]).unwrap();
//! let squares = form.count_square_tuples(10, &Workload::default()).unwrap();
//! assert_eq!(squares.total, 13);
//!
//! let (count, witnesses) = form.count_representable(20, 10, &Workload::default()).unwrap();
//! assert_eq!(count, 7);
//! assert_eq!(witnesses, vec![2, 3, 4, 6, 8, 12, 16]);
//!
//! assert_eq!(count_sparse_squares(2, 2, 4, &Workload::default()).unwrap(), 3);
//! assert_eq!(gamma_m(3).unwrap(), Rational64::new(677, 1969));
//! ```

use crate::arith::{is_perfect_square, perfect_square_root};
use crate::Workload;
use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormsError {
    /// The enumeration would visit more states than the workload budget allows.
    WorkloadExceeded { states: u128, budget: u64 },
    /// Parameter outside the operation's domain.
    DomainError(String),
}

impl fmt::Display for FormsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormsError::WorkloadExceeded { states, budget } => {
                write!(f, "workload exceeded: {} states > budget {}", states, budget)
            }
            FormsError::DomainError(msg) => write!(f, "domain error: {}", msg),
        }
    }
}

impl std::error::Error for FormsError {}

/// The data `(g, c_1..c_m)` of a sparse form. All coefficients are non-zero
/// and the base satisfies `g >= 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseForm {
    g: u64,
    coeffs: Vec<i64>,
}

impl SparseForm {
    pub fn new(g: u64, coeffs: Vec<i64>) -> Result<Self, FormsError> {
        if g < 2 {
            return Err(FormsError::DomainError(format!("base g = {} must be >= 2", g)));
        }
        if coeffs.is_empty() {
            return Err(FormsError::DomainError("at least one coefficient required".into()));
        }
        if coeffs.contains(&0) {
            return Err(FormsError::DomainError("coefficients must be non-zero".into()));
        }
        Ok(SparseForm { g, coeffs })
    }

    pub fn base(&self) -> u64 {
        self.g
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Arity m: the number of terms.
    pub fn arity(&self) -> usize {
        self.coeffs.len()
    }

    /// Sum of |c_i|, used by box-cap derivations.
    pub fn coeff_weight(&self) -> u64 {
        self.coeffs.iter().map(|c| c.unsigned_abs()).sum()
    }

    /// Exact value of the form at an exponent tuple.
    ///
    /// ```
    /// use sparsity_lab::forms::SparseForm;
    /// use num_bigint::BigInt;
    ///
    /// let form = SparseForm::new(2, vec![1, 1]).unwrap();
    /// assert_eq!(form.eval(&[0, 3]), BigInt::from(9));
    /// let mixed = SparseForm::new(3, vec![2, -1]).unwrap();
    /// assert_eq!(mixed.eval(&[2, 0]), BigInt::from(17));
    /// ```
    pub fn eval(&self, k: &[u32]) -> BigInt {
        assert_eq!(k.len(), self.coeffs.len(), "tuple arity mismatch");
        let g = BigInt::from(self.g);
        let mut acc = BigInt::zero();
        for (c, &e) in self.coeffs.iter().zip(k) {
            acc += BigInt::from(*c) * g.pow(e);
        }
        acc
    }

    /// Counts tuples in `{0..K}^m` whose value is a perfect square.
    ///
    /// Enumeration is lexicographic; work is sharded on the leading exponent
    /// and merged in shard order, so the hit list is deterministic.
    pub fn count_square_tuples(&self, k_cap: u32, workload: &Workload) -> Result<SquareCount, FormsError> {
        let states = box_size(self.arity(), k_cap);
        workload.admit(states).map_err(|s| FormsError::WorkloadExceeded {
            states: s,
            budget: workload.max_states,
        })?;

        let m = self.arity();
        let shards: Vec<SquareCount> = (0..=k_cap)
            .into_par_iter()
            .map(|lead| {
                let mut acc = SquareCount::default();
                let mut tuple = vec![0u32; m];
                tuple[0] = lead;
                scan_box(self, &mut tuple, 1, k_cap, &mut acc);
                acc
            })
            .collect();
        let mut out = SquareCount::default();
        for s in shards {
            out.total += s.total;
            out.zero_hits += s.zero_hits;
            out.hits.extend(s.hits);
        }
        Ok(out)
    }

    /// Same count as [`Self::count_square_tuples`], computed by a
    /// meet-in-the-middle split: both halves of the tuple are grouped by
    /// value and recombined through a hash join.
    pub fn count_square_tuples_mitm(&self, k_cap: u32, workload: &Workload) -> Result<SquareCount, FormsError> {
        let states = box_size(self.arity(), k_cap);
        workload.admit(states).map_err(|s| FormsError::WorkloadExceeded {
            states: s,
            budget: workload.max_states,
        })?;

        let m = self.arity();
        let left_m = m / 2;
        let left = half_sums(self.g, &self.coeffs[..left_m], k_cap);
        let right = half_sums(self.g, &self.coeffs[left_m..], k_cap);

        let mut out = SquareCount::default();
        for (lv, ltuples) in &left {
            for (rv, rtuples) in &right {
                let value = lv + rv;
                if let Some(root) = perfect_square_root(&value) {
                    for lt in ltuples {
                        for rt in rtuples {
                            let mut k = Vec::with_capacity(m);
                            k.extend_from_slice(lt);
                            k.extend_from_slice(rt);
                            out.total += 1;
                            if value.is_zero() {
                                out.zero_hits += 1;
                            }
                            out.hits.push(SquareHit {
                                k,
                                value: value.clone(),
                                root: root.clone(),
                            });
                        }
                    }
                }
            }
        }
        out.hits.sort_by(|a, b| a.k.cmp(&b.k));
        Ok(out)
    }

    /// Counts integers `1 <= n <= n_max` with `n^2 = F(k)` for some tuple in
    /// `{0..K}^m`; each root is counted once. Returns the sorted witnesses.
    pub fn count_representable(
        &self,
        n_max: u64,
        k_cap: u32,
        workload: &Workload,
    ) -> Result<(u64, Vec<u64>), FormsError> {
        let count = self.count_square_tuples(k_cap, workload)?;
        let bound = BigInt::from(n_max);
        let mut roots: BTreeSet<u64> = BTreeSet::new();
        for hit in &count.hits {
            if hit.root.is_positive() && hit.root <= bound {
                roots.insert(hit.root.to_u64().expect("root <= n_max fits u64"));
            }
        }
        let witnesses: Vec<u64> = roots.into_iter().collect();
        Ok((witnesses.len() as u64, witnesses))
    }

    /// All square tuples with `k_2 = k_1 + gap` and even `k_1`; the family
    /// that shows a two-term form can repeat a square pattern indefinitely.
    pub fn is_square_gap_pattern(&self, k: &[u32], gap: u32) -> bool {
        k.len() == 2 && k[1] == k[0] + gap && k[0].is_multiple_of(2)
    }
}

fn scan_box(form: &SparseForm, tuple: &mut Vec<u32>, depth: usize, k_cap: u32, acc: &mut SquareCount) {
    if depth == tuple.len() {
        let value = form.eval(tuple);
        if let Some(root) = perfect_square_root(&value) {
            acc.total += 1;
            if value.is_zero() {
                acc.zero_hits += 1;
            }
            acc.hits.push(SquareHit {
                k: tuple.clone(),
                value,
                root,
            });
        }
        return;
    }
    for v in 0..=k_cap {
        tuple[depth] = v;
        scan_box(form, tuple, depth + 1, k_cap, acc);
    }
}

fn half_sums(g: u64, coeffs: &[i64], k_cap: u32) -> BTreeMap<BigInt, Vec<Vec<u32>>> {
    let mut map: BTreeMap<BigInt, Vec<Vec<u32>>> = BTreeMap::new();
    if coeffs.is_empty() {
        map.insert(BigInt::zero(), vec![Vec::new()]);
        return map;
    }
    let mut tuple = vec![0u32; coeffs.len()];
    loop {
        let gb = BigInt::from(g);
        let mut v = BigInt::zero();
        for (c, &e) in coeffs.iter().zip(tuple.iter()) {
            v += BigInt::from(*c) * gb.pow(e);
        }
        map.entry(v).or_default().push(tuple.clone());
        // odometer increment
        let mut i = tuple.len();
        loop {
            if i == 0 {
                return map;
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

/// `(K+1)^m` as a u128 (saturating so the workload check still fires).
pub fn box_size(m: usize, k_cap: u32) -> u128 {
    let side = (k_cap as u128) + 1;
    let mut acc: u128 = 1;
    for _ in 0..m {
        acc = acc.saturating_mul(side);
    }
    acc
}

/// A witness tuple: `root^2 = value = F(k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareHit {
    pub k: Vec<u32>,
    pub value: BigInt,
    pub root: BigInt,
}

/// Result of a square scan over an exponent box. `zero_hits` counts tuples
/// whose value is exactly 0 (0 = 0^2 is counted as a square but flagged so
/// callers can exclude the root 0).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SquareCount {
    pub total: u64,
    pub zero_hits: u64,
    pub hits: Vec<SquareHit>,
}

/// Counts squares `1 <= n^2 < g^K` whose base-g expansion has at most
/// `sparsity` non-zero digits.
///
/// Two independent routes must agree: a scan over roots `n < g^(K/2)` and an
/// enumeration of digit patterns; their common value is returned.
pub fn count_sparse_squares(
    g: u64,
    sparsity: u32,
    k_digits: u32,
    workload: &Workload,
) -> Result<u64, FormsError> {
    if k_digits < 1 {
        return Err(FormsError::DomainError("digit length K must be >= 1".into()));
    }
    let limit = BigInt::from(g).pow(k_digits);
    let root_limit = limit.sqrt(); // n <= sqrt(g^K - 1) < g^(K/2) + 1
    let scan_states = root_limit
        .to_u128()
        .ok_or(FormsError::WorkloadExceeded {
            states: u128::MAX,
            budget: workload.max_states,
        })?;
    workload.admit(scan_states).map_err(|s| FormsError::WorkloadExceeded {
        states: s,
        budget: workload.max_states,
    })?;

    // Route 1: scan roots.
    let mut by_scan = 0u64;
    let mut n = BigInt::from(1);
    loop {
        let sq = &n * &n;
        if sq >= limit {
            break;
        }
        if nonzero_digits(&sq, g) <= sparsity {
            by_scan += 1;
        }
        n += 1;
    }

    // Route 2: enumerate digit patterns with <= `sparsity` non-zero digits.
    let pattern_states = pattern_count(k_digits, sparsity, g);
    workload.admit(pattern_states).map_err(|s| FormsError::WorkloadExceeded {
        states: s,
        budget: workload.max_states,
    })?;
    let mut by_pattern = 0u64;
    let positions: Vec<u32> = (0..k_digits).collect();
    let mut chosen: Vec<u32> = Vec::new();
    enumerate_patterns(g, sparsity, &positions, 0, &mut chosen, &BigInt::zero(), &mut by_pattern);

    if by_scan != by_pattern {
        return Err(FormsError::DomainError(format!(
            "digit-pattern route ({}) disagrees with scan route ({})",
            by_pattern, by_scan
        )));
    }
    Ok(by_scan)
}

fn nonzero_digits(n: &BigInt, g: u64) -> u32 {
    let mut v = n.magnitude().clone();
    let g = num_bigint::BigUint::from(g);
    let mut count = 0;
    while !v.is_zero() {
        let (q, r) = num_integer::Integer::div_rem(&v, &g);
        if !r.is_zero() {
            count += 1;
        }
        v = q;
    }
    count
}

fn pattern_count(k_digits: u32, sparsity: u32, g: u64) -> u128 {
    // sum over j <= sparsity of C(K, j) * (g-1)^j
    let mut total: u128 = 0;
    for j in 0..=sparsity.min(k_digits) {
        let mut c: u128 = 1;
        for i in 0..j {
            c = c.saturating_mul((k_digits - i) as u128) / (i as u128 + 1);
        }
        let mut pw: u128 = 1;
        for _ in 0..j {
            pw = pw.saturating_mul((g - 1) as u128);
        }
        total = total.saturating_add(c.saturating_mul(pw));
    }
    total
}

fn enumerate_patterns(
    g: u64,
    remaining: u32,
    positions: &[u32],
    start: usize,
    chosen: &mut Vec<u32>,
    partial: &BigInt,
    found: &mut u64,
) {
    if !partial.is_zero() && is_perfect_square(partial) {
        *found += 1;
    }
    if remaining == 0 {
        return;
    }
    for idx in start..positions.len() {
        let place = BigInt::from(g).pow(positions[idx]);
        for digit in 1..g {
            let next = partial + BigInt::from(digit) * &place;
            chosen.push(positions[idx]);
            enumerate_patterns(g, remaining - 1, positions, idx + 1, chosen, &next, found);
            chosen.pop();
        }
    }
}

/// One member of the lower-bound family: `square = (g^(h_1) + ... + g^(h_s))^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyEntry {
    pub exponents: Vec<u32>,
    pub square: BigInt,
    /// Coefficients of the expansion before carrying, as a sorted multiset.
    pub pattern: Vec<u64>,
}

/// The family `(g^(h_1) + ... + g^(h_s))^2 <= n_max` over sorted exponent
/// tuples, grouped by the carried-free coefficient pattern of the expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerBoundFamily {
    pub entries: Vec<FamilyEntry>,
    /// pattern -> number of exponent tuples producing it.
    pub groups: BTreeMap<Vec<u64>, u64>,
}

impl LowerBoundFamily {
    pub fn distinct_squares(&self) -> BTreeSet<BigInt> {
        self.entries.iter().map(|e| e.square.clone()).collect()
    }
}

/// Enumerates all tuples `h_1 <= ... <= h_s` with `s^2 * g^(2*h_s) <= n_max`,
/// so that every listed square is at most `n_max`.
pub fn lower_bound_family(g: u64, s: u32, n_max: u64) -> LowerBoundFamily {
    assert!(s >= 1, "term count s must be >= 1");
    assert!(g >= 2);
    let n_max = BigInt::from(n_max);
    // h_cap: largest h with s^2 * g^(2h) <= n_max, exact integer comparison.
    let s_sq = BigInt::from(s) * s;
    let mut h_cap: i64 = -1;
    loop {
        let next = BigInt::from(g).pow((2 * (h_cap + 1)) as u32);
        if s_sq.clone() * next <= n_max {
            h_cap += 1;
        } else {
            break;
        }
    }

    let mut family = LowerBoundFamily {
        entries: Vec::new(),
        groups: BTreeMap::new(),
    };
    if h_cap < 0 {
        return family;
    }
    let mut tuple = vec![0u32; s as usize];
    loop {
        // value = (sum g^(h_i))^2
        let base = BigInt::from(g);
        let mut sum = BigInt::zero();
        for &h in &tuple {
            sum += base.pow(h);
        }
        let square = &sum * &sum;
        if square <= n_max {
            // expansion before carrying: coefficient of g^(h_i + h_j) over all ordered (i, j)
            let mut coeffs: BTreeMap<u32, u64> = BTreeMap::new();
            for &hi in &tuple {
                for &hj in &tuple {
                    *coeffs.entry(hi + hj).or_insert(0) += 1;
                }
            }
            let mut pattern: Vec<u64> = coeffs.values().copied().collect();
            pattern.sort_unstable();
            *family.groups.entry(pattern.clone()).or_insert(0) += 1;
            family.entries.push(FamilyEntry {
                exponents: tuple.clone(),
                square,
                pattern,
            });
        }
        // next non-decreasing tuple below h_cap
        let mut i = tuple.len();
        loop {
            if i == 0 {
                return family;
            }
            i -= 1;
            if tuple[i] < h_cap as u32 {
                let v = tuple[i] + 1;
                for t in tuple.iter_mut().skip(i) {
                    *t = v;
                }
                break;
            }
        }
    }
}

/// The saving exponent: 677/1969 at m = 3, and `677m / (1323m + 1354)`
/// for m >= 4. Exceeds 1/2 from m = 44 on, with limit 677/1323.
pub fn gamma_m(m: u64) -> Result<Rational64, FormsError> {
    if m < 3 {
        return Err(FormsError::DomainError(format!(
            "gamma_m is defined for m >= 3, got {}",
            m
        )));
    }
    if m == 3 {
        return Ok(Rational64::new(677, 1969));
    }
    let m = i64::try_from(m).map_err(|_| FormsError::DomainError("m too large".into()))?;
    Ok(Rational64::new(677 * m, 1323 * m + 1354))
}
