//! Truncated formal power series over a generic coefficient ring.
//!
//! A [`TruncatedSeries`] knows its coefficients for degrees `low_degree..order`
//! and knows that degrees below `low_degree` vanish; nothing is known at or
//! beyond `order`. Every operation returns the largest order its inputs
//! justify and never invents coefficients past it.

mod bell;
pub(crate) mod schwarzian;

use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{Coeff, EvalFloat};
use crate::Rational;

pub use bell::{bell_polynomial, BellIndex, BellTable};
pub use schwarzian::log_derivative_coefficients;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries<C> {
    coeffs: Vec<C>,
    low_degree: usize,
    order: usize,
}

impl<C: Coeff> TruncatedSeries<C> {
    /// Series whose coefficient of degree `low_degree + i` is `coeffs[i]`;
    /// the order is `low_degree + coeffs.len()`.
    pub fn new(low_degree: usize, coeffs: Vec<C>) -> Self {
        let order = low_degree + coeffs.len();
        Self {
            coeffs,
            low_degree,
            order,
        }
    }

    /// Dense coefficients starting at degree 0.
    pub fn from_dense(coeffs: Vec<C>) -> Self {
        Self::new(0, coeffs)
    }

    /// Dense coefficients from degree 0, padded with exact zeros (or cut) to `order`.
    pub fn with_order(mut coeffs: Vec<C>, order: usize) -> Self {
        coeffs.resize(order, C::zero());
        Self::new(0, coeffs)
    }

    pub fn zero(order: usize) -> Self {
        Self::with_order(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::with_order(vec![C::one()], order)
    }

    /// The series `x` known to `order`.
    pub fn identity(order: usize) -> Self {
        Self::with_order(vec![C::zero(), C::one()], order)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn low_degree(&self) -> usize {
        self.low_degree
    }

    /// Stored coefficients, beginning at `low_degree`.
    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficient of `x^degree`, or `None` past the truncation order.
    pub fn coeff(&self, degree: usize) -> Option<C> {
        if degree >= self.order {
            None
        } else if degree < self.low_degree {
            Some(C::zero())
        } else {
            Some(self.coeffs[degree - self.low_degree].clone())
        }
    }

    /// All known coefficients from degree 0 (length `order`).
    pub fn dense(&self) -> Vec<C> {
        let mut out = vec![C::zero(); self.low_degree];
        out.extend(self.coeffs.iter().cloned());
        out
    }

    /// Degree of the first nonzero known coefficient, or `order` if none.
    pub fn valuation(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map_or(self.order, |i| i + self.low_degree)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        if order <= self.low_degree {
            return Self {
                coeffs: Vec::new(),
                low_degree: order,
                order,
            };
        }
        Self::new(
            self.low_degree,
            self.coeffs[..order - self.low_degree].to_vec(),
        )
    }

    /// Known coefficients all vanish except `x^1`, which is one.
    pub fn is_identity(&self) -> bool {
        self.dense()
            .iter()
            .enumerate()
            .all(|(d, c)| if d == 1 { c.is_one() } else { c.is_zero() })
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> TruncatedSeries<D> {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
            low_degree: self.low_degree,
            order: self.order,
        }
    }

    pub fn scale(&self, s: &C) -> Self {
        self.map(|c| c.clone() * s.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let a = self.dense();
        let b = other.dense();
        Self::from_dense((0..order).map(|d| a[d].clone() + b[d].clone()).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-C::one()))
    }

    /// Cauchy product, known up to min(order_a + low_b, order_b + low_a).
    pub fn mul(&self, other: &Self) -> Self {
        let order = (self.order + other.low_degree).min(other.order + self.low_degree);
        let low = (self.low_degree + other.low_degree).min(order);
        let mut out = vec![C::zero(); order - low];
        for (i, a) in self.coeffs.iter().enumerate() {
            let di = i + self.low_degree;
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let d = di + j + other.low_degree;
                if d >= order {
                    break;
                }
                out[d - low] = out[d - low].clone() + a.clone() * b.clone();
            }
        }
        Self::new(low, out)
    }

    /// Term-wise derivative; the order drops by one.
    pub fn derivative(&self) -> Self {
        let order = self.order.saturating_sub(1);
        let dense = self.dense();
        Self::from_dense(
            (0..order)
                .map(|d| dense[d + 1].clone() * C::from_i64(d as i64 + 1))
                .collect(),
        )
    }

    /// `self(inner(x))`; `inner` must have a zero constant term.
    ///
    /// If inner has valuation v, the result is known to min(order_outer * v, order_inner).
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        match inner.coeff(0) {
            Some(c0) if !c0.is_zero() => return Err(Error::NonzeroConstantTerm),
            None if inner.order == 0 => return Err(Error::NonzeroConstantTerm),
            _ => {}
        }
        let v = inner.valuation().max(1);
        let order = (self.order.saturating_mul(v)).min(inner.order);
        let outer = self.dense();
        let inner_dense = inner.truncate(order).dense();
        let mut acc = vec![C::zero(); order];
        if order == 0 {
            return Ok(Self::from_dense(acc));
        }
        // sum a_k inner^k; inner^k vanishes below degree k * v
        let mut power = vec![C::zero(); order];
        power[0] = C::one();
        for (k, a) in outer.iter().enumerate() {
            if k > 0 {
                if k * v >= order {
                    break;
                }
                power = dense_mul(&power, &inner_dense, order);
            }
            if a.is_zero() {
                continue;
            }
            for (slot, x) in acc.iter_mut().zip(&power) {
                if !x.is_zero() {
                    *slot = slot.clone() + a.clone() * x.clone();
                }
            }
        }
        Ok(Self::from_dense(acc))
    }

    /// Multiplicative inverse of a series with nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        let a = self.dense();
        let a0 = match a.first() {
            Some(a0) if !a0.is_zero() => a0.clone(),
            _ => return Err(Error::NotInvertible),
        };
        let mut inv: Vec<C> = Vec::with_capacity(self.order);
        inv.push(C::one() / a0.clone());
        for n in 1..self.order {
            let s = (1..=n).fold(C::zero(), |s, k| s + a[k].clone() * inv[n - k].clone());
            inv.push(-s / a0.clone());
        }
        Ok(Self::from_dense(inv))
    }

    /// Formal logarithm of a series with constant term 1.
    ///
    /// Uses L' = a'/a written as n L_n = n a_n - sum_{k<n} k L_k a_{n-k}.
    pub fn log_unit(&self) -> Result<Self> {
        let a = self.dense();
        match a.first() {
            Some(a0) if a0.is_one() => {}
            _ => return Err(Error::NotUnitSeries),
        }
        let mut log = vec![C::zero(); self.order];
        for n in 1..self.order {
            let s = (1..n).fold(C::zero(), |s, k| {
                s + C::from_i64(k as i64) * log[k].clone() * a[n - k].clone()
            });
            log[n] = a[n].clone() - s / C::from_i64(n as i64);
        }
        Ok(Self::from_dense(log))
    }

    /// Formal exponential of a series with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        let g = self.dense();
        if g.first().is_some_and(|g0| !g0.is_zero()) {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut e = vec![C::zero(); self.order];
        if self.order > 0 {
            e[0] = C::one();
        }
        for n in 1..self.order {
            let s = (1..=n).fold(C::zero(), |s, k| {
                s + C::from_i64(k as i64) * g[k].clone() * e[n - k].clone()
            });
            e[n] = s / C::from_i64(n as i64);
        }
        Ok(Self::from_dense(e))
    }

    /// Compositional inverse by Newton iteration g <- g - (f(g) - x) / f'(g),
    /// doubling the number of correct coefficients per step. Uses only series
    /// composition, reciprocal and products; no Bell polynomials are involved.
    pub fn invert_newton(&self) -> Result<Self> {
        let c = self.dense();
        if c.len() < 2 || !c[0].is_zero() {
            return Err(Error::NotInvertible);
        }
        if c[1].is_zero() {
            return Err(Error::ZeroLinearCoefficient);
        }
        let order = self.order;
        let mut g = vec![C::zero(), C::one() / c[1].clone()];
        let mut prec = 2;
        while prec < order {
            prec = (2 * prec).min(order);
            let f = Self::from_dense(c[..prec].to_vec());
            let inner = Self::with_order(g.clone(), prec);
            let residual = f.compose(&inner)?.sub(&Self::identity(prec)).dense();
            let slope = f.derivative().compose(&inner)?.reciprocal()?.dense();
            // residual = O(x^{prec/2}), so the slope is needed only to prec/2
            let step = dense_mul(&residual, &slope, prec);
            g = inner
                .dense()
                .into_iter()
                .zip(step)
                .map(|(a, b)| a - b)
                .collect();
        }
        g.resize(order, C::zero());
        Ok(Self::from_dense(g))
    }
}

impl TruncatedSeries<Rational> {
    /// Explicit conversion of exact coefficients to a float type.
    pub fn to_float<F: EvalFloat>(&self) -> TruncatedSeries<F> {
        self.map(F::from_rational)
    }
}

impl<F: EvalFloat> TruncatedSeries<F> {
    /// Horner evaluation of the known part at a complex point.
    pub fn eval_complex(&self, z: Complex<F>) -> Complex<F> {
        self.dense()
            .iter()
            .rev()
            .fold(Complex::new(F::zero(), F::zero()), |acc, c| {
                acc * z + Complex::new(*c, F::zero())
            })
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for TruncatedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                write!(f, " + ")?;
            }
            match i + self.low_degree {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                d => write!(f, "({c})x^{d}")?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.order)
    }
}

impl<C: fmt::Debug> fmt::Debug for TruncatedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TruncatedSeries")
            .field("low_degree", &self.low_degree)
            .field("order", &self.order)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

/// Product of two dense coefficient vectors, cut at `order`.
fn dense_mul<C: Coeff>(a: &[C], b: &[C], order: usize) -> Vec<C> {
    let mut out = vec![C::zero(); order];
    for (i, x) in a.iter().enumerate().take(order) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(order - i) {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}
