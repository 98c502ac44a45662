//! Number types the linear-algebra and LP kernels are generic over.
//!
//! Two implementations are provided: `f64` with a small pivot threshold, and
//! arbitrary-precision rationals for exact runs. Every `f64` converts exactly
//! to a rational, so exact mode solves precisely the problem that was stated.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Field operations plus the few extras the kernels need.
pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    /// Exact (for rationals) or identity (for floats) conversion from `f64`.
    fn from_f64(x: f64) -> Self;
    /// Nearest `f64`.
    fn to_f64(&self) -> f64;
    /// Threshold below which a magnitude is treated as zero (0 in exact mode).
    fn eps() -> Self;
    /// Absolute value.
    fn abs_val(&self) -> Self;
    /// Whether arithmetic is exact.
    fn is_exact() -> bool;

    /// `|self| <= eps`.
    fn is_negligible(&self) -> bool {
        self.abs_val() <= Self::eps()
    }
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn eps() -> Self {
        1e-11
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn is_exact() -> bool {
        false
    }
}

impl Scalar for BigRational {
    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).unwrap_or_else(|| panic!("non-finite value {x} in exact mode"))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            // Huge numerators/denominators: fall back to a ratio of floats.
            let n = self.numer().to_f64().unwrap_or(f64::NAN);
            let d = self.denom().to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }
    fn eps() -> Self {
        BigRational::zero()
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn is_exact() -> bool {
        true
    }
}

/// Builds the rational `num / den`.
pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_to_rational_is_exact() {
        let x = 0.1_f64;
        let r = BigRational::from_f64(x);
        assert_eq!(Scalar::to_f64(&r), x);
        assert_eq!(rational(1, 4), BigRational::from_f64(0.25));
    }

    #[test]
    fn exact_mode_has_zero_threshold() {
        assert!(BigRational::eps().is_zero());
        assert!(<BigRational as Scalar>::is_exact());
        assert!(!<f64 as Scalar>::is_exact());
    }
}
