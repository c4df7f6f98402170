//! Exact, desk-scale computational number theory around sparse representations
//! of squares in a fixed base.
//!
//! The library answers questions of the shape: *how often is
//! `c_1*g^(k_1) + ... + c_m*g^(k_m)` a perfect square?* and provides the
//! machinery such counting rests on:
//!
//! * [`arith`] has the exact integer primitives: primality, factorization,
//!   multiplicative orders, Jacobi symbols, perfect-square testing.
//! * [`sieve`] builds sieving prime sets (primes `ell` in `[z, c1*z]` whose
//!   `ell - 1` has a large prime factor dividing the order of `g`, with a
//!   common 2-adic valuation) and the arithmetic sums over them.
//! * [`forms`] evaluates sparse forms and counts: square tuples over
//!   exponent boxes, sparse-digit squares, the explicit lower-bound family.
//! * [`charsum`] computes complete and incomplete character sums with
//!   exponential arguments, the CRT product formula, Korobov-type
//!   exponential sums, and the square-sieve statistics `W = U + V`.
//! * [`approx`] runs the bounded-exponent search for
//!   `|Q(n) - sum c_i lambda^(k_i)| <= B` and derives its instance constants.
//! * [`example21`] verifies the lacunary counterexample built from the tower
//!   `b_{j+1} = 2^(b_j) + b_j + 1`, in interval arithmetic.
//! * [`interval`] is the dyadic interval arithmetic with directed rounding
//!   underneath that verification.
//! * [`harness`] holds experiment configuration, output formats and the CLI
//!   entry points.
//!
//! Everything that can be integer-exact is integer-exact; inequalities with
//! unspecified asymptotic constants are *reported* as ratios rather than
//! asserted.
//!
//! ```
//! use sparsity_lab::forms::SparseForm;
//! use sparsity_lab::Workload;
//!
//! // 2^(k1) + 2^(k2) over the box {0..10}^2: 13 square tuples.
//! let form = SparseForm::new(2, vec![1, 1]).unwrap();
//! let count = form.count_square_tuples(10, &Workload::default()).unwrap();
//! assert_eq!(count.hits.len(), 13);
//! ```

pub mod approx;
pub mod arith;
pub mod charsum;
pub mod example21;
pub mod forms;
pub mod harness;
pub mod interval;
pub mod sieve;

/// Cap on the number of enumerated states (lattice points, field elements)
/// a single operation may visit.
///
/// Operations that enumerate check the projected state count up front and
/// refuse to start when it exceeds the cap, so a run either completes or
/// fails fast.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Workload {
    pub max_states: u64,
}

impl Default for Workload {
    fn default() -> Self {
        Workload {
            max_states: 100_000_000,
        }
    }
}

impl Workload {
    pub fn new(max_states: u64) -> Self {
        Workload { max_states }
    }

    /// Ok when `states` fits the cap, Err(states) otherwise.
    pub fn admit(&self, states: u128) -> Result<(), u128> {
        if states <= self.max_states as u128 {
            Ok(())
        } else {
            Err(states)
        }
    }
}

/// Formats a float with 17 significant digits, the fixed width used by every
/// output writer so that reruns are byte-identical.
pub fn fmt_f64(x: f64) -> String {
    format!("{:.16e}", x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn workload_admits_up_to_cap() {
        let w = Workload::new(100);
        assert!(w.admit(100).is_ok());
        assert_eq!(w.admit(101), Err(101));
    }

    #[test]
    fn float_format_is_17_significant_digits() {
        assert_eq!(fmt_f64(0.5), "5.0000000000000000e-1");
        assert_eq!(fmt_f64(1.0 / 3.0), "3.3333333333333331e-1");
    }
}
