//! Dyadic interval arithmetic on arbitrary-precision binary floats.
//!
//! Every operation rounds the lower endpoint toward minus infinity and the
//! upper endpoint toward plus infinity, then widens each endpoint by one unit
//! in the last place. An `Ival` therefore always encloses the exact real
//! value, and a comparison between disjoint intervals is a proof.
//!
//! Only what the tower-counterexample verification needs is implemented:
//! field operations, squares, square roots, pi, and sine/cosine on arguments
//! inside [0, pi/2] where both functions are monotone.
//!
//! ```
//! use sparsity_lab::interval::IntervalCtx;
//!
//! let mut ctx = IntervalCtx::new(256);
//! let pi = ctx.pi();
//! assert!(pi.lo < pi.hi);
//!
//! // sin(pi/16) enclosed to ~2^-250
//! let theta = ctx.mul(&pi, &ctx.dyadic(1, -4));
//! let s = ctx.sin(&theta);
//! assert!(s.lo < s.hi);
//! assert!(ctx.width(&s) < ctx.pow2(-200).hi);
//! ```

use astro_float::{BigFloat, Consts, RoundingMode};
use std::fmt;

const RM_DOWN: RoundingMode = RoundingMode::Down;
const RM_UP: RoundingMode = RoundingMode::Up;

/// Precision context: working precision in bits plus the cached constants
/// (pi) of the underlying library.
pub struct IntervalCtx {
    pub bits: usize,
    consts: Consts,
}

/// A closed interval `[lo, hi]` guaranteed to contain the exact value.
#[derive(Debug, Clone)]
pub struct Ival {
    pub lo: BigFloat,
    pub hi: BigFloat,
}

impl fmt::Display for Ival {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl IntervalCtx {
    pub fn new(bits: usize) -> Self {
        IntervalCtx {
            bits,
            consts: Consts::new().expect("constants cache"),
        }
    }

    fn ulp_of(&self, x: &BigFloat) -> BigFloat {
        let e = x.exponent().unwrap_or(0);
        let mut u = BigFloat::from_u8(1, self.bits);
        let shift = e as i64 - self.bits as i64;
        let base = u.exponent().unwrap() as i64; // exponent of 1.0
        u.set_exponent((base + shift).clamp(i32::MIN as i64 + 1, i32::MAX as i64 - 1) as i32);
        u
    }

    fn widen(&self, mut v: Ival) -> Ival {
        let dl = self.ulp_of(&v.lo);
        let dh = self.ulp_of(&v.hi);
        v.lo = v.lo.sub(&dl, self.bits, RM_DOWN);
        v.hi = v.hi.add(&dh, self.bits, RM_UP);
        v
    }

    /// Exact point interval from an unsigned integer.
    pub fn from_u64(&self, v: u64) -> Ival {
        let x = BigFloat::from_u64(v, self.bits);
        Ival {
            lo: x.clone(),
            hi: x,
        }
    }

    /// Exact `mantissa * 2^shift` for small mantissa; covers every dyadic
    /// rational whose exponent fits the underlying representation.
    pub fn dyadic(&self, mantissa: u64, shift: i64) -> Ival {
        if mantissa == 0 {
            let z = BigFloat::from_u8(0, self.bits);
            return Ival {
                lo: z.clone(),
                hi: z,
            };
        }
        let mut x = BigFloat::from_u64(mantissa, self.bits);
        let e = x.exponent().unwrap() as i64 + shift;
        assert!(e > i32::MIN as i64 && e < i32::MAX as i64, "dyadic exponent out of range");
        x.set_exponent(e as i32);
        Ival {
            lo: x.clone(),
            hi: x,
        }
    }

    /// Exact power of two `2^k`.
    pub fn pow2(&self, k: i64) -> Ival {
        self.dyadic(1, k)
    }

    pub fn pi(&mut self) -> Ival {
        let lo = self.consts.pi(self.bits, RM_DOWN);
        let hi = self.consts.pi(self.bits, RM_UP);
        self.widen(Ival { lo, hi })
    }

    pub fn add(&self, a: &Ival, b: &Ival) -> Ival {
        self.widen(Ival {
            lo: a.lo.add(&b.lo, self.bits, RM_DOWN),
            hi: a.hi.add(&b.hi, self.bits, RM_UP),
        })
    }

    pub fn sub(&self, a: &Ival, b: &Ival) -> Ival {
        self.widen(Ival {
            lo: a.lo.sub(&b.hi, self.bits, RM_DOWN),
            hi: a.hi.sub(&b.lo, self.bits, RM_UP),
        })
    }

    pub fn mul(&self, a: &Ival, b: &Ival) -> Ival {
        let mut lo: Option<BigFloat> = None;
        let mut hi: Option<BigFloat> = None;
        for x in [&a.lo, &a.hi] {
            for y in [&b.lo, &b.hi] {
                let d = x.mul(y, self.bits, RM_DOWN);
                let u = x.mul(y, self.bits, RM_UP);
                lo = Some(match lo {
                    None => d,
                    Some(c) => {
                        if d < c {
                            d
                        } else {
                            c
                        }
                    }
                });
                hi = Some(match hi {
                    None => u,
                    Some(c) => {
                        if u > c {
                            u
                        } else {
                            c
                        }
                    }
                });
            }
        }
        self.widen(Ival {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
        })
    }

    /// Division; the divisor interval must not contain zero.
    pub fn div(&self, a: &Ival, b: &Ival) -> Ival {
        let zero = BigFloat::from_u8(0, self.bits);
        assert!(
            b.lo > zero || b.hi < zero,
            "division by an interval containing zero"
        );
        let mut lo: Option<BigFloat> = None;
        let mut hi: Option<BigFloat> = None;
        for x in [&a.lo, &a.hi] {
            for y in [&b.lo, &b.hi] {
                let d = x.div(y, self.bits, RM_DOWN);
                let u = x.div(y, self.bits, RM_UP);
                lo = Some(match lo {
                    None => d,
                    Some(c) => {
                        if d < c {
                            d
                        } else {
                            c
                        }
                    }
                });
                hi = Some(match hi {
                    None => u,
                    Some(c) => {
                        if u > c {
                            u
                        } else {
                            c
                        }
                    }
                });
            }
        }
        self.widen(Ival {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
        })
    }

    /// The square, tight also when the interval straddles zero.
    pub fn sqr(&self, a: &Ival) -> Ival {
        let zero = BigFloat::from_u8(0, self.bits);
        let straddles = a.lo <= zero && zero <= a.hi;
        let c = self.mul(a, a);
        if straddles {
            Ival { lo: zero, hi: c.hi }
        } else {
            c
        }
    }

    /// Square root of a non-negative interval (a slightly negative lower
    /// endpoint from earlier widening is clamped to zero).
    pub fn sqrt(&self, a: &Ival) -> Ival {
        let zero = BigFloat::from_u8(0, self.bits);
        let lo_in = if a.lo < zero { zero.clone() } else { a.lo.clone() };
        assert!(a.hi >= zero, "sqrt of a negative interval");
        self.widen(Ival {
            lo: lo_in.sqrt(self.bits, RM_DOWN),
            hi: a.hi.sqrt(self.bits, RM_UP),
        })
    }

    /// Sine on `[0, pi/2]`, where it is monotone increasing.
    pub fn sin(&mut self, a: &Ival) -> Ival {
        self.assert_first_quadrant(a);
        let lo = a.lo.sin(self.bits, RM_DOWN, &mut self.consts);
        let hi = a.hi.sin(self.bits, RM_UP, &mut self.consts);
        let zero = BigFloat::from_u8(0, self.bits);
        let mut v = self.widen(Ival { lo, hi });
        if v.lo < zero {
            v.lo = zero;
        }
        v
    }

    /// Cosine on `[0, pi/2]`, where it is monotone decreasing.
    pub fn cos(&mut self, a: &Ival) -> Ival {
        self.assert_first_quadrant(a);
        let lo = a.hi.cos(self.bits, RM_DOWN, &mut self.consts);
        let hi = a.lo.cos(self.bits, RM_UP, &mut self.consts);
        let one = BigFloat::from_u8(1, self.bits);
        let mut v = self.widen(Ival { lo, hi });
        if v.hi > one {
            v.hi = one;
        }
        v
    }

    fn assert_first_quadrant(&mut self, a: &Ival) {
        let zero = BigFloat::from_u8(0, self.bits);
        let half_pi_lo = self
            .consts
            .pi(self.bits, RM_DOWN)
            .div(&BigFloat::from_u8(2, self.bits), self.bits, RM_DOWN);
        assert!(
            a.lo >= zero && a.hi <= half_pi_lo,
            "argument outside [0, pi/2]"
        );
    }

    /// Width `hi - lo` as an upper bound.
    pub fn width(&self, a: &Ival) -> BigFloat {
        a.hi.sub(&a.lo, self.bits, RM_UP)
    }

    /// Midpoint, for reporting.
    pub fn mid(&self, a: &Ival) -> BigFloat {
        a.lo
            .add(&a.hi, self.bits, RoundingMode::ToEven)
            .div(&BigFloat::from_u8(2, self.bits), self.bits, RoundingMode::ToEven)
    }
}

impl Ival {
    /// Certainly less-or-equal: the whole interval sits at or below `other`.
    pub fn certainly_le(&self, other: &Ival) -> bool {
        self.hi <= other.lo
    }

    /// Certainly greater: the whole interval sits strictly above `other`.
    pub fn certainly_gt(&self, other: &Ival) -> bool {
        self.lo > other.hi
    }

    pub fn contains_value(&self, x: &BigFloat) -> bool {
        self.lo <= x && x <= &self.hi
    }
}

/// Best-effort f64 view of a BigFloat, for reporting only.
pub fn to_f64(x: &BigFloat) -> f64 {
    // round-trip through the decimal formatter; fine for report fields
    format!("{}", x).parse::<f64>().unwrap_or(f64::NAN)
}
