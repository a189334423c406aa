//! Double-double floating point: an unevaluated sum hi + lo of two f64 with
//! |lo| <= ulp(hi)/2, giving about 106 bits of significand.
//!
//! Sums use two-sum, products use an FMA-based two-prod; division and square
//! root refine the f64 estimate with exact residuals.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, Copy, Default)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    /// Exact sum a + b, renormalized.
    pub fn from_sum(a: f64, b: f64) -> Self {
        let (hi, lo) = two_sum(a, b);
        Self { hi, lo }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Self { hi, lo }
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Self::from_f64(if self.hi == 0.0 { 0.0 } else { f64::NAN });
        }
        let s = self.hi.sqrt();
        let (p, e) = two_prod(s, s);
        let d = ((self.hi - p) - e + self.lo) / (2.0 * s);
        let (hi, lo) = quick_two_sum(s, d);
        Self { hi, lo }
    }

    pub fn trunc(self) -> Self {
        let hi = self.hi.trunc();
        if hi == self.hi {
            Self::from_sum(hi, self.lo.trunc())
        } else {
            Self::from_f64(hi)
        }
    }

    pub fn exp(self) -> Self {
        const LN2: DoubleDouble = DoubleDouble {
            hi: std::f64::consts::LN_2,
            lo: 2.319_046_813_846_299_6e-17,
        };
        if self.hi > 709.0 {
            return Self::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Self::zero();
        }
        let k = (self.hi / LN2.hi).round();
        // |r| <= ln2/2 / 256
        let r = (self - LN2.mul_f64(k)).mul_f64(1.0 / 256.0);
        let mut term = r;
        let mut em1 = r;
        for n in 2..=12 {
            term = term * r / Self::from_f64(f64::from(n));
            em1 = em1 + term;
        }
        // expm1(2x) = expm1(x) (2 + expm1(x))
        for _ in 0..8 {
            em1 = em1 * (em1 + Self::from_f64(2.0));
        }
        let result = em1 + Self::one();
        let pow2 = 2f64.powi(k as i32);
        Self {
            hi: result.hi * pow2,
            lo: result.lo * pow2,
        }
    }

    /// Two Newton steps y <- y + x e^{-y} - 1 from the f64 logarithm.
    pub fn ln(self) -> Self {
        if self.hi <= 0.0 || !self.hi.is_finite() {
            return Self::from_f64(self.hi.ln());
        }
        let mut y = Self::from_f64(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - Self::one();
        }
        y
    }

    pub fn to_rational(self) -> Option<BigRational> {
        Some(BigRational::from_float(self.hi)? + BigRational::from_float(self.lo)?)
    }

    pub fn from_rational(r: &BigRational) -> Self {
        let hi = r.to_f64().unwrap_or(f64::NAN);
        if !hi.is_finite() || hi == 0.0 {
            return Self::from_f64(hi);
        }
        let Some(hi_exact) = BigRational::from_float(hi) else {
            return Self::from_f64(hi);
        };
        let lo = (r - hi_exact).to_f64().unwrap_or(0.0);
        Self::from_sum(hi, lo)
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        Self::from_rational(&BigRational::from_integer(n.clone()))
    }

    /// Scientific notation with `digits` significant digits, computed exactly.
    pub fn to_scientific(self, digits: usize) -> String {
        if !self.is_finite() {
            return format!("{}", self.hi);
        }
        let Some(x) = self.to_rational() else {
            return format!("{}", self.hi);
        };
        if x.is_zero() {
            return "0".into();
        }
        let neg = x.is_negative();
        let x = x.abs();
        let digits = digits.max(1);
        let mut exp10 = self.hi.abs().log10().floor() as i64;
        let ten = BigRational::from_integer(BigInt::from(10));
        let scaled = |e: i64| -> BigInt {
            let shift = digits as i64 - 1 - e;
            let factor = if shift >= 0 {
                ten.pow(shift as i32)
            } else {
                ten.pow(-shift as i32).recip()
            };
            (x.clone() * factor).round().to_integer()
        };
        let mut mant = scaled(exp10);
        let limit = num_traits::pow(BigInt::from(10), digits);
        if mant >= limit {
            exp10 += 1;
            mant = scaled(exp10);
        } else if mant < limit.clone() / BigInt::from(10) {
            exp10 -= 1;
            mant = scaled(exp10);
        }
        let s = mant.to_string();
        let (lead, rest) = s.split_at(1);
        let sign = if neg { "-" } else { "" };
        if rest.is_empty() {
            format!("{sign}{lead}e{exp10}")
        } else {
            format!("{sign}{lead}.{rest}e{exp10}")
        }
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl PartialEq for DoubleDouble {
    fn eq(&self, other: &Self) -> bool {
        self.hi == other.hi && self.lo == other.lo
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            o => Some(o),
        }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;

    fn div(self, rhs: Self) -> Self {
        let q1 = self.hi / rhs.hi;
        if !q1.is_finite() {
            return Self::from_f64(q1);
        }
        let r = self - rhs.mul_f64(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs.mul_f64(q2);
        let q3 = r.hi / rhs.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo } + Self::from_f64(q3)
    }
}

impl Rem for DoubleDouble {
    type Output = Self;

    fn rem(self, rhs: Self) -> Self {
        self - (self / rhs).trunc() * rhs
    }
}

impl Zero for DoubleDouble {
    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn is_zero(&self) -> bool {
        self.hi == 0.0 && self.lo == 0.0
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        Self::from_f64(1.0)
    }
}

impl Num for DoubleDouble {
    type FromStrRadixErr = num_traits::ParseFloatError;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        f64::from_str_radix(s, radix).map(Self::from_f64)
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(32);
        f.write_str(&self.to_scientific(digits))
    }
}
