//! The Schwarzian derivative {f,q} = 2 (f''/f')' - (f''/f')^2.
//!
//! This is twice the classical normalization f'''/f' - (3/2)(f''/f')^2; with
//! it, a level-N hauptmodul satisfies E_4 = 1 - q^2 {f,q} in q = q_N.

use super::{bell_polynomial, BellIndex, TruncatedSeries};
use crate::error::{Error, Result};
use crate::rational::factorial;
use crate::scalar::Coeff;

/// Coefficients l~_1, ..., l~_count of the expansion
/// log(f'(q)) = log c_1 + sum_m l~_m q^m / m!, where `c[0]` is c_1.
///
/// l~_m = sum_{k=1}^m (-1)^{k-1} (k-1)! / c_1^k B_{m,k}(2! c_2, ..., (m-k+2)! c_{m-k+2}),
/// so `c` must hold at least c_1 .. c_{count+1}.
pub fn log_derivative_coefficients<C: Coeff>(c: &[C], count: usize) -> Result<Vec<C>> {
    if c.len() < count + 1 {
        return Err(Error::InsufficientCoefficients {
            needed: count + 1,
            got: c.len(),
        });
    }
    let c1 = c.first().cloned().unwrap_or_else(C::zero);
    if c1.is_zero() {
        return Err(Error::ZeroLinearCoefficient);
    }
    // a_j = (j+1)! c_{j+1}: the Taylor data of f'/1 written as an exponential series.
    let args: Vec<C> = (1..=count)
        .map(|j| C::from_integer(&factorial(j + 1)) * c[j].clone())
        .collect();
    (1..=count)
        .map(|m| log_derivative_coefficient(&c1, &args, m))
        .collect()
}

/// Single l~_m from the exponential-form arguments `args[j-1] = (j+1)! c_{j+1}`.
pub(crate) fn log_derivative_coefficient<C: Coeff>(c1: &C, args: &[C], m: usize) -> Result<C> {
    let mut total = C::zero();
    let mut c1_pow = C::one();
    for k in 1..=m {
        c1_pow = c1_pow * c1.clone();
        let bell = bell_polynomial(BellIndex::new(m, k)?, args)?;
        let weight = C::from_integer(&factorial(k - 1)) / c1_pow.clone();
        let term = weight * bell;
        total = if k % 2 == 1 {
            total + term
        } else {
            total - term
        };
    }
    Ok(total)
}

/// Coefficient of q^m in {f,q} given l~_1..l~_{m+2} (`lt[j-1]` = l~_j):
/// 2 l~_{m+2} / m! - sum_{k=0}^m l~_{k+1} l~_{m-k+1} / (k! (m-k)!).
pub(crate) fn schwarzian_coefficient<C: Coeff>(lt: &[C], m: usize) -> C {
    let fact = |n: usize| C::from_integer(&factorial(n));
    let quadratic = (0..=m).fold(C::zero(), |s, k| {
        s + lt[k].clone() * lt[m - k].clone() / (fact(k) * fact(m - k))
    });
    C::from_i64(2) * lt[m + 1].clone() / fact(m) - quadratic
}

fn check_schwarzian_input<C: Coeff>(f: &TruncatedSeries<C>) -> Result<Vec<C>> {
    let dense = f.dense();
    if dense.len() < 2 || !dense[0].is_zero() {
        return Err(Error::NotInvertible);
    }
    if dense[1].is_zero() {
        return Err(Error::ZeroLinearCoefficient);
    }
    Ok(dense)
}

impl<C: Coeff> TruncatedSeries<C> {
    /// {f,q} through the Bell-polynomial coefficients of (log f')'.
    ///
    /// `f` needs zero constant term and nonzero linear term. A series known to
    /// order O yields {f,q} known to order O - 3.
    pub fn schwarzian(&self) -> Result<Self> {
        let dense = check_schwarzian_input(self)?;
        let out_order = dense.len().saturating_sub(3);
        if out_order == 0 {
            return Ok(Self::zero(0));
        }
        let c = &dense[1..];
        let lt = log_derivative_coefficients(c, out_order + 1)?;
        Ok(Self::from_dense(
            (0..out_order)
                .map(|m| schwarzian_coefficient(&lt, m))
                .collect(),
        ))
    }

    /// {f,q} from f''/f' by series division and differentiation.
    pub fn schwarzian_direct(&self) -> Result<Self> {
        check_schwarzian_input(self)?;
        let d1 = self.derivative();
        let d2 = d1.derivative();
        let ratio = d2.mul(&d1.reciprocal()?);
        let two = C::from_i64(2);
        let result = ratio.derivative().scale(&two).sub(&ratio.mul(&ratio));
        let out_order = self.order().saturating_sub(3);
        Ok(result.truncate(out_order))
    }
}
