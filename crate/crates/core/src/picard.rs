//! Upper bound on the radius R of a disk D_R admitting a holomorphic map into
//! the punctured sphere with phi(0) = p and phi'(0) = 1, from R < 1 / chi(p; 1).
//!
//! 1/chi = |f| |L| |1 + sum_m (c~_m f^m / m! + sum_{k=1}^m c~_{m-k} f^{m-k} Re(l_k f^k) / ((m-k)! k! L))|,
//! with L = log|b_1 f|, c~_0 = 1 and 1 + sum c~_m f^m / m! the reciprocal of
//! 1 + sum m l_m f^m / m!.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::metric::{float_factorial, modulus, ComplexPoint, MetricEvaluator};
use crate::rational::{factorial, int};
use crate::scalar::EvalFloat;
use crate::series::{BellIndex, BellTable};
use crate::{CoveringData, Rational};

/// c~_1..c~_order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpCoefficients {
    pub c_tilde: Vec<Rational>,
}

/// c~_m = sum_{k=1}^m (-1)^k k! B_{m,k}(l_1, 2 l_2, ..., (m-k+1) l_{m-k+1}).
pub fn exp_reciprocal_coefficients(l: &[Rational], order: usize) -> Result<ExpCoefficients> {
    if l.len() < order {
        return Err(Error::InsufficientCoefficients {
            needed: order,
            got: l.len(),
        });
    }
    let t: Vec<Rational> = l[..order]
        .iter()
        .enumerate()
        .map(|(i, x)| int(i as i64 + 1) * x.clone())
        .collect();
    let table = BellTable::new(&t, order);
    let c_tilde = (1..=order)
        .map(|m| {
            let mut total = Rational::zero();
            for k in 1..=m {
                let term = Rational::from_integer(factorial(k))
                    * table.get(BellIndex::new(m, k)?)?.clone();
                total = if k % 2 == 1 {
                    total - term
                } else {
                    total + term
                };
            }
            Ok(total)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExpCoefficients { c_tilde })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadiusBound<F> {
    pub bound: F,
    pub p: ComplexPoint<F>,
    pub truncation_order: usize,
    /// |p| |log|b_1 p||, the bound with every correction dropped.
    pub leading_term: F,
}

#[derive(Debug, Clone)]
pub struct RadiusEvaluator<F> {
    metric: MetricEvaluator<F>,
    c_tilde: Vec<F>,
}

impl<F: EvalFloat> RadiusEvaluator<F> {
    pub fn new(cov: &CoveringData) -> Result<Self> {
        let exp = exp_reciprocal_coefficients(cov.l(), cov.l().len())?;
        Ok(Self {
            metric: MetricEvaluator::new(cov),
            c_tilde: exp.c_tilde.iter().map(F::from_rational).collect(),
        })
    }

    pub fn with_validity_radius(mut self, radius: F) -> Self {
        self.metric = self.metric.with_validity_radius(radius);
        self
    }

    pub fn bound(&self, p: ComplexPoint<F>, order: usize) -> Result<RadiusBound<F>> {
        if order > self.c_tilde.len() {
            return Err(Error::TruncationExceedsData {
                requested: order,
                available: self.c_tilde.len(),
            });
        }
        let log = self.metric.log_modulus(p)?;
        let z = p.to_complex();
        let re_l = self.metric.real_parts(p, order);
        let mut powers = vec![Complex::new(F::one(), F::zero())];
        for j in 1..=order {
            powers.push(powers[j - 1] * z);
        }
        let ct = |j: usize| {
            if j == 0 {
                F::one()
            } else {
                self.c_tilde[j - 1]
            }
        };

        let mut sum = Complex::new(F::one(), F::zero());
        for m in 1..=order {
            sum = sum + powers[m] * (ct(m) / float_factorial::<F>(m));
            for k in 1..=m {
                let w = ct(m - k) * re_l[k - 1]
                    / (float_factorial::<F>(m - k) * float_factorial::<F>(k) * log);
                sum = sum + powers[m - k] * w;
            }
        }
        let leading_term = p.modulus() * log.abs();
        Ok(RadiusBound {
            bound: leading_term * modulus(sum),
            p,
            truncation_order: order,
            leading_term,
        })
    }

    /// 1 / chi(p; 1) from the direct route, for cross-checking `bound`.
    pub fn direct_reciprocal(&self, p: ComplexPoint<F>) -> Result<F> {
        Ok(F::one() / self.metric.direct(p, F::one())?.value)
    }

    pub fn c_tilde(&self) -> &[F] {
        &self.c_tilde
    }
}

pub fn picard_radius_bound<F: EvalFloat>(
    p: ComplexPoint<F>,
    cov: &CoveringData,
    order: usize,
) -> Result<RadiusBound<F>> {
    RadiusEvaluator::new(cov)?.bound(p, order)
}
