//! Scalar abstractions shared by the exact and the floating-point code paths.
//!
//! [`Coeff`] is the coefficient ring of a [`TruncatedSeries`](crate::TruncatedSeries):
//! exact rationals for coefficient work, floats (real or complex) for evaluation.
//! [`EvalFloat`] is the real floating type used to evaluate the metric; it is
//! implemented for `f64` and for [`DoubleDouble`].

mod double_double;

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive};

pub use double_double::DoubleDouble;

/// A coefficient ring for truncated power series.
///
/// Division is only ever by nonzero integers or by a checked nonzero leading
/// coefficient, so any field of characteristic zero works.
pub trait Coeff: Clone + Debug + PartialEq + Num + Neg<Output = Self> {
    fn from_integer(n: &BigInt) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_integer(&BigInt::from(n))
    }
}

impl Coeff for BigRational {
    fn from_integer(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
}

impl Coeff for f64 {
    fn from_integer(n: &BigInt) -> Self {
        n.to_f64().unwrap_or(f64::NAN)
    }
}

impl Coeff for DoubleDouble {
    fn from_integer(n: &BigInt) -> Self {
        DoubleDouble::from_bigint(n)
    }
}

impl<F: EvalFloat> Coeff for Complex<F> {
    fn from_integer(n: &BigInt) -> Self {
        Complex::new(F::from_integer(n), F::zero())
    }
}

/// Real floating type used for metric evaluation.
pub trait EvalFloat: Coeff + Copy + PartialOrd + Display + Send + Sync + 'static {
    /// Name reported in outputs ("double" / "extended").
    const NAME: &'static str;

    /// Nearest representable value to an exact rational.
    fn from_rational(r: &BigRational) -> Self;

    fn from_f64(x: f64) -> Self;

    fn to_f64(self) -> f64;

    fn ln(self) -> Self;

    fn sqrt(self) -> Self;

    fn abs(self) -> Self;

    fn is_finite(self) -> bool;

    /// Scientific notation: the shortest round-trip form for f64, 32
    /// significant digits for DoubleDouble.
    fn to_scientific(self) -> String;
}

impl EvalFloat for f64 {
    const NAME: &'static str = "double";

    fn from_rational(r: &BigRational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64(self) -> f64 {
        self
    }

    fn ln(self) -> Self {
        f64::ln(self)
    }

    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }

    fn abs(self) -> Self {
        f64::abs(self)
    }

    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }

    fn to_scientific(self) -> String {
        format!("{self:e}")
    }
}

impl EvalFloat for DoubleDouble {
    const NAME: &'static str = "extended";

    fn from_rational(r: &BigRational) -> Self {
        DoubleDouble::from_rational(r)
    }

    fn from_f64(x: f64) -> Self {
        DoubleDouble::from_f64(x)
    }

    fn to_f64(self) -> f64 {
        DoubleDouble::to_f64(self)
    }

    fn ln(self) -> Self {
        DoubleDouble::ln(self)
    }

    fn sqrt(self) -> Self {
        DoubleDouble::sqrt(self)
    }

    fn abs(self) -> Self {
        DoubleDouble::abs(self)
    }

    fn is_finite(self) -> bool {
        DoubleDouble::is_finite(self)
    }

    fn to_scientific(self) -> String {
        DoubleDouble::to_scientific(self, 32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_integers_convert_to_extended() {
        let n = BigInt::parse_bytes(b"123456789012345678901234567", 10).unwrap();
        let x = <DoubleDouble as Coeff>::from_integer(&n);
        assert_eq!(x.to_rational().unwrap(), BigRational::from_integer(n));
    }

    #[test]
    fn rationals_convert_to_double() {
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert_eq!(<f64 as EvalFloat>::from_rational(&third), 1.0 / 3.0);
    }
}
