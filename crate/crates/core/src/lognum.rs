//! Nonnegative reals stored as natural logarithms.
//!
//! Multiplicities and partition sums for graphs of order ~100 run to
//! thousands of decimal digits, so all production arithmetic on them happens
//! on the log scale. Exact zero is represented by `ln = -inf`.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, MulAssign};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogNumber(f64);

impl LogNumber {
    pub const ZERO: LogNumber = LogNumber(f64::NEG_INFINITY);
    pub const ONE: LogNumber = LogNumber(0.0);

    /// Wraps a log value. `-inf` is exact zero; NaN and `+inf` are rejected.
    pub fn from_ln(ln: f64) -> Self {
        assert!(!ln.is_nan() && ln != f64::INFINITY, "invalid log value {ln}");
        LogNumber(ln)
    }

    pub fn from_f64(x: f64) -> Self {
        assert!(x >= 0.0 && x.is_finite(), "LogNumber requires finite x >= 0, got {x}");
        LogNumber(x.ln())
    }

    pub fn from_u64(x: u64) -> Self {
        LogNumber((x as f64).ln())
    }

    /// Natural log of an arbitrary-precision integer, accurate to double
    /// precision regardless of magnitude.
    pub fn from_biguint(x: &BigUint) -> Self {
        if x.is_zero() {
            return LogNumber::ZERO;
        }
        let bits = x.bits();
        let shift = bits.saturating_sub(64);
        let top = (x >> shift).to_u64().expect("top 64 bits fit in u64");
        LogNumber((top as f64).ln() + shift as f64 * std::f64::consts::LN_2)
    }

    #[inline]
    pub fn ln(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// Value on the linear scale (may overflow to `inf` or underflow to 0).
    pub fn to_f64(self) -> f64 {
        self.0.exp()
    }

    /// Multiplication by `e^x`.
    #[inline]
    pub fn scale_exp(self, x: f64) -> Self {
        if self.is_zero() {
            self
        } else {
            LogNumber(self.0 + x)
        }
    }

    /// Ratio `self / other`, as a log value. `other` must be nonzero.
    pub fn ln_ratio(self, other: LogNumber) -> f64 {
        assert!(!other.is_zero(), "division by exact zero");
        self.0 - other.0
    }
}

impl fmt::Debug for LogNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            f.write_str("LogNumber(0)")
        } else {
            write!(f, "LogNumber(e^{})", self.0)
        }
    }
}

impl PartialOrd for LogNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl Add for LogNumber {
    type Output = LogNumber;

    #[inline]
    fn add(self, rhs: LogNumber) -> LogNumber {
        let (hi, lo) = if self.0 >= rhs.0 { (self.0, rhs.0) } else { (rhs.0, self.0) };
        if lo == f64::NEG_INFINITY {
            return LogNumber(hi);
        }
        LogNumber(hi + (lo - hi).exp().ln_1p())
    }
}

impl AddAssign for LogNumber {
    fn add_assign(&mut self, rhs: LogNumber) {
        *self = *self + rhs;
    }
}

impl Mul for LogNumber {
    type Output = LogNumber;

    #[inline]
    fn mul(self, rhs: LogNumber) -> LogNumber {
        if self.is_zero() || rhs.is_zero() {
            LogNumber::ZERO
        } else {
            LogNumber(self.0 + rhs.0)
        }
    }
}

impl MulAssign for LogNumber {
    fn mul_assign(&mut self, rhs: LogNumber) {
        *self = *self * rhs;
    }
}

impl Sum for LogNumber {
    fn sum<I: Iterator<Item = LogNumber>>(iter: I) -> LogNumber {
        let mut acc = LogAccumulator::new();
        for x in iter {
            acc.push(x);
        }
        acc.total()
    }
}

/// Streaming log-sum-exp with a running maximum and compensated summation of
/// the rescaled terms. Order-dependent only at the level of rounding.
#[derive(Debug, Clone, Copy)]
pub struct LogAccumulator {
    max: f64,
    sum: f64,
    comp: f64,
}

impl Default for LogAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

impl LogAccumulator {
    pub fn new() -> Self {
        Self {
            max: f64::NEG_INFINITY,
            sum: 0.0,
            comp: 0.0,
        }
    }

    #[inline]
    pub fn push(&mut self, x: LogNumber) {
        self.push_ln(x.0);
    }

    #[inline]
    pub fn push_ln(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x > self.max {
            let r = (self.max - x).exp();
            self.sum *= r;
            self.comp *= r;
            self.max = x;
            self.kahan(1.0);
        } else {
            self.kahan((x - self.max).exp());
        }
    }

    #[inline]
    fn kahan(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> LogNumber {
        if self.max == f64::NEG_INFINITY {
            LogNumber::ZERO
        } else {
            LogNumber(self.max + (self.sum + self.comp).ln())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn zero_and_one() {
        let z = LogNumber::ZERO;
        let x = LogNumber::from_f64(3.5);
        assert_eq!(z + x, x);
        assert_eq!(x + z, x);
        assert!((z * x).is_zero());
        assert_eq!(LogNumber::ONE * x, x);
        assert!((z + z).is_zero());
        assert!(std::iter::empty::<LogNumber>().sum::<LogNumber>().is_zero());
    }

    #[test]
    fn arithmetic_matches_linear() {
        let a = LogNumber::from_f64(2.0);
        let b = LogNumber::from_f64(5.0);
        assert_relative_eq!((a + b).to_f64(), 7.0, max_relative = 1e-15);
        assert_relative_eq!((a * b).to_f64(), 10.0, max_relative = 1e-15);
    }

    #[test]
    fn biguint_log() {
        let x = BigUint::from(1u64) << 5000usize;
        assert_relative_eq!(
            LogNumber::from_biguint(&x).ln(),
            5000.0 * std::f64::consts::LN_2,
            max_relative = 1e-15
        );
        let y = BigUint::from(123_456_789u64);
        assert_relative_eq!(LogNumber::from_biguint(&y).ln(), 123_456_789f64.ln(), max_relative = 1e-15);
        assert!(LogNumber::from_biguint(&BigUint::zero()).is_zero());
    }

    #[test]
    fn geometric_series_across_600_decades() {
        let n = 1_000_000u64;
        let ln_r = -600.0 * std::f64::consts::LN_10 / n as f64;
        let mut acc = LogAccumulator::new();
        for k in 0..n {
            acc.push_ln(k as f64 * ln_r);
        }
        // sum_{k<n} r^k = (1 - r^n) / (1 - r)
        let expected = (-(n as f64 * ln_r).exp_m1()).ln() - (-ln_r.exp_m1()).ln();
        let got = acc.total().ln();
        assert!(((got.exp() / expected.exp()) - 1.0).abs() < 1e-9, "{got} vs {expected}");
        assert!((got - expected).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn add_commutes_and_associates(a in -700.0f64..700.0, b in -700.0f64..700.0, c in -700.0f64..700.0) {
            let (a, b, c) = (LogNumber::from_ln(a), LogNumber::from_ln(b), LogNumber::from_ln(c));
            prop_assert_eq!((a + b).ln(), (b + a).ln());
            let l = ((a + b) + c).ln();
            let r = (a + (b + c)).ln();
            prop_assert!((l - r).abs() <= 1e-12 * l.abs().max(1.0));
        }

        #[test]
        fn accumulator_matches_pairwise(xs in proptest::collection::vec(-50.0f64..50.0, 1..40)) {
            let pair = xs.iter().fold(LogNumber::ZERO, |s, &x| s + LogNumber::from_ln(x));
            let acc: LogNumber = xs.iter().map(|&x| LogNumber::from_ln(x)).sum();
            prop_assert!((pair.ln() - acc.ln()).abs() < 1e-12 * pair.ln().abs().max(1.0));
        }
    }
}
