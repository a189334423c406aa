//! Kobayashi-Royden metric near the puncture 0.
//!
//! With q(f) = sum b_m f^m the inverse covering series and L = log|b_1 p|,
//!
//! chi(p; v) = |1 + sum_{m>=1} R_m(p)| / (|p| |L|) * ||v||,
//!
//! C_m(p) = sum_{k=1}^m (-1)^k k! / L^k * B_{m,k}(Re(l_1 p), ..., Re(l_{m-k+1} p^{m-k+1})),
//! R_m(p) = sum_{k=1}^m l_k p^k C~_{m-k}(p) / ((k-1)! (m-k)!) + C_m(p) / m!,
//!
//! where C~_0 = 1 and C~_j = C_j for j >= 1: R_m is the degree-m part of
//! (1 + sum m l_m p^m / m!) (1 + sum C_m / m!). The direct route
//! |q'(p)| / (|q(p)| |log|q(p)||) is kept alongside as an oracle.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::rational::factorial;
use crate::scalar::EvalFloat;
use crate::series::{BellIndex, BellTable};
use crate::CoveringData;

/// Default bound on |b_1 p| inside which evaluation is attempted.
pub const DEFAULT_VALIDITY_RADIUS: f64 = 0.25;

/// Largest accepted |last term| / |partial sum| of q(p) in the direct route.
pub const DIVERGENCE_RATIO: f64 = 1e-3;

/// A nonzero evaluation point p.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPoint<F> {
    pub re: F,
    pub im: F,
}

impl<F: EvalFloat> ComplexPoint<F> {
    pub fn new(re: F, im: F) -> Result<Self> {
        if !re.is_finite() || !im.is_finite() || (re.is_zero() && im.is_zero()) {
            return Err(Error::ZeroPoint);
        }
        Ok(Self { re, im })
    }

    /// Point r e^{i theta}; the angle is rounded to f64 before cos/sin.
    pub fn from_polar(r: F, theta: f64) -> Result<Self> {
        Self::new(r * F::from_f64(theta.cos()), r * F::from_f64(theta.sin()))
    }

    pub fn real(x: F) -> Result<Self> {
        Self::new(x, F::zero())
    }

    pub fn to_complex(self) -> Complex<F> {
        Complex::new(self.re, self.im)
    }

    pub fn modulus(self) -> F {
        modulus(self.to_complex())
    }

    pub fn conj(self) -> Self {
        Self {
            re: self.re,
            im: -self.im,
        }
    }
}

/// Evaluated metric with the per-order contributions that produced it.
///
/// For the expansion route `term_breakdown[m-1]` is R_m(p); for the direct
/// route it is b_m p^m, the terms of q(p).
#[derive(Debug, Clone, PartialEq)]
pub struct MetricValue<F> {
    pub value: F,
    pub truncation_order: usize,
    pub term_breakdown: Vec<Complex<F>>,
}

pub(crate) fn modulus<F: EvalFloat>(z: Complex<F>) -> F {
    (z.re * z.re + z.im * z.im).sqrt()
}

pub(crate) fn float_factorial<F: EvalFloat>(n: usize) -> F {
    F::from_integer(&factorial(n))
}

/// Float copies of the covering coefficients plus the validity settings.
#[derive(Debug, Clone)]
pub struct MetricEvaluator<F> {
    b: Vec<F>,
    l: Vec<F>,
    validity_radius: F,
}

impl<F: EvalFloat> MetricEvaluator<F> {
    pub fn new(cov: &CoveringData) -> Self {
        Self {
            b: cov.b().iter().map(F::from_rational).collect(),
            l: cov.l().iter().map(F::from_rational).collect(),
            validity_radius: F::from_f64(DEFAULT_VALIDITY_RADIUS),
        }
    }

    /// Replaces the |b_1 p| validity bound (must stay below 1).
    pub fn with_validity_radius(mut self, radius: F) -> Self {
        self.validity_radius = radius;
        self
    }

    /// Highest truncation order the data supports (number of l_m).
    pub fn max_order(&self) -> usize {
        self.l.len()
    }

    /// log|b_1 p|, after the validity checks.
    pub fn log_modulus(&self, p: ComplexPoint<F>) -> Result<F> {
        let m = (self.b[0] * p.modulus()).abs();
        if m.is_zero() {
            return Err(Error::ZeroPoint);
        }
        if m == F::one() {
            return Err(Error::SingularLog);
        }
        if m > self.validity_radius {
            return Err(Error::OutsideValidityRegion {
                modulus: m.to_f64(),
                radius: self.validity_radius.to_f64(),
            });
        }
        let log = m.ln();
        if log.is_zero() {
            return Err(Error::SingularLog);
        }
        Ok(log)
    }

    fn check_order(&self, requested: usize) -> Result<()> {
        if requested > self.l.len() {
            return Err(Error::TruncationExceedsData {
                requested,
                available: self.l.len(),
            });
        }
        Ok(())
    }

    /// Re(l_j p^j) for j = 1..=count.
    pub(crate) fn real_parts(&self, p: ComplexPoint<F>, count: usize) -> Vec<F> {
        let z = p.to_complex();
        let mut power = Complex::new(F::one(), F::zero());
        (0..count)
            .map(|j| {
                power = power * z;
                (power * self.l[j]).re
            })
            .collect()
    }

    /// C_0, ..., C_count with C_0 = 0.
    fn c_terms(&self, p: ComplexPoint<F>, log: F, count: usize) -> Result<Vec<F>> {
        let x = self.real_parts(p, count);
        let table = BellTable::new(&x, count);
        let mut out = vec![F::zero()];
        for m in 1..=count {
            let mut total = F::zero();
            let mut log_pow = F::one();
            for k in 1..=m {
                log_pow = log_pow * log;
                let bell = *table.get(BellIndex::new(m, k)?)?;
                let term = float_factorial::<F>(k) * bell / log_pow;
                total = if k % 2 == 1 {
                    total - term
                } else {
                    total + term
                };
            }
            out.push(total);
        }
        Ok(out)
    }

    /// C_m(p); C_0 = 0.
    pub fn c_term(&self, m: usize, p: ComplexPoint<F>) -> Result<F> {
        self.check_order(m)?;
        let log = self.log_modulus(p)?;
        Ok(self.c_terms(p, log, m)?[m])
    }

    fn r_terms(&self, p: ComplexPoint<F>, log: F, count: usize) -> Result<Vec<Complex<F>>> {
        let c = self.c_terms(p, log, count)?;
        let z = p.to_complex();
        let mut powers = vec![Complex::new(F::one(), F::zero())];
        for j in 1..=count {
            powers.push(powers[j - 1] * z);
        }
        let lp: Vec<Complex<F>> = (1..=count).map(|k| powers[k] * self.l[k - 1]).collect();
        Ok((1..=count)
            .map(|m| {
                let mut r = Complex::new(c[m] / float_factorial::<F>(m), F::zero());
                for k in 1..=m {
                    let weight = if k == m { F::one() } else { c[m - k] };
                    let denom = float_factorial::<F>(k - 1) * float_factorial::<F>(m - k);
                    r = r + lp[k - 1] * (weight / denom);
                }
                r
            })
            .collect())
    }

    /// R_m(p) for m >= 1.
    pub fn r_term(&self, m: usize, p: ComplexPoint<F>) -> Result<Complex<F>> {
        if m == 0 {
            return Err(Error::OrderTooSmall { got: 0, min: 1 });
        }
        self.check_order(m)?;
        let log = self.log_modulus(p)?;
        Ok(self.r_terms(p, log, m)?[m - 1])
    }

    /// The asymptotic expansion truncated after R_order.
    pub fn expansion(&self, p: ComplexPoint<F>, v_norm: F, order: usize) -> Result<MetricValue<F>> {
        self.check_order(order)?;
        let log = self.log_modulus(p)?;
        let terms = self.r_terms(p, log, order)?;
        let sum = terms
            .iter()
            .fold(Complex::new(F::one(), F::zero()), |acc, r| acc + r);
        let value = modulus(sum) / (p.modulus() * log.abs()) * v_norm;
        Ok(MetricValue {
            value,
            truncation_order: order,
            term_breakdown: terms,
        })
    }

    /// |q'(p)| / (|q(p)| |log|q(p)||) ||v|| from the truncated inverse series.
    pub fn direct(&self, p: ComplexPoint<F>, v_norm: F) -> Result<MetricValue<F>> {
        self.log_modulus(p)?;
        let z = p.to_complex();
        let zero = Complex::new(F::zero(), F::zero());
        let mut power = Complex::new(F::one(), F::zero());
        let mut terms = Vec::with_capacity(self.b.len());
        let mut q = zero;
        let mut dq = zero;
        for (i, b) in self.b.iter().enumerate() {
            // power = p^i here
            dq = dq + power * (*b * F::from_i64(i as i64 + 1));
            power = power * z;
            let t = power * *b;
            q = q + t;
            terms.push(t);
        }
        if terms.len() >= 2 {
            let ratio = modulus(terms[terms.len() - 1]) / modulus(q);
            // NaN counts as divergence
            let converged = ratio < F::from_f64(DIVERGENCE_RATIO);
            if !converged {
                return Err(Error::SeriesDivergence {
                    ratio: ratio.to_f64(),
                });
            }
        }
        let q_abs = modulus(q);
        if q_abs.is_zero() {
            return Err(Error::ZeroPoint);
        }
        let log = q_abs.ln();
        if log.is_zero() {
            return Err(Error::SingularLog);
        }
        let value = modulus(dq) / (q_abs * log.abs()) * v_norm;
        Ok(MetricValue {
            value,
            truncation_order: self.b.len(),
            term_breakdown: terms,
        })
    }
}

pub fn c_m_term<F: EvalFloat>(m: usize, p: ComplexPoint<F>, cov: &CoveringData) -> Result<F> {
    MetricEvaluator::new(cov).c_term(m, p)
}

pub fn r_m_term<F: EvalFloat>(
    m: usize,
    p: ComplexPoint<F>,
    cov: &CoveringData,
) -> Result<Complex<F>> {
    MetricEvaluator::new(cov).r_term(m, p)
}

pub fn metric_expansion_eval<F: EvalFloat>(
    p: ComplexPoint<F>,
    v_norm: F,
    cov: &CoveringData,
    order: usize,
) -> Result<MetricValue<F>> {
    MetricEvaluator::new(cov).expansion(p, v_norm, order)
}

pub fn metric_direct_eval<F: EvalFloat>(
    p: ComplexPoint<F>,
    v_norm: F,
    cov: &CoveringData,
) -> Result<MetricValue<F>> {
    MetricEvaluator::new(cov).direct(p, v_norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::{gamma3_covering, lambda_covering, Level};

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn c0_vanishes() {
        let cov = lambda_covering(6).unwrap();
        let p = ComplexPoint::new(0.01, 0.003).unwrap();
        assert_eq!(c_m_term(0, p, &cov).unwrap(), 0.0);
    }

    #[test]
    fn first_c_term() {
        let p = 0.002;
        let lambda = lambda_covering(6).unwrap();
        let c1 = c_m_term(1, ComplexPoint::real(p).unwrap(), &lambda).unwrap();
        assert!(rel(c1, -(p / 2.0) / (p / 16.0).ln()) < 1e-14);

        let g3 = gamma3_covering(6).unwrap();
        let c1 = c_m_term(1, ComplexPoint::real(p).unwrap(), &g3).unwrap();
        assert!(rel(c1, 3.0 * p / p.ln()) < 1e-14);
    }

    #[test]
    fn first_r_term_lambda() {
        let cov = lambda_covering(6).unwrap();
        let p = Complex::<f64>::new(0.004, -0.002);
        let log = (p.norm() / 16.0).ln();
        let want = (p - Complex::new(p.re / log, 0.0)) * 0.5;
        let got = r_m_term(1, ComplexPoint::new(p.re, p.im).unwrap(), &cov).unwrap();
        assert!((got - want).norm() < 1e-15);
    }

    #[test]
    fn first_r_term_vanishes_without_l1() {
        // c = (2, 0, 1): b = (1/2, 0, -1/16), l_1 = b_2 / b_1 = 0.
        let cov = CoveringData::from_coefficients(
            Level::UserSupplied,
            int(1),
            vec![int(2), int(0), int(1)],
        )
        .unwrap();
        assert_eq!(cov.l()[0], int(0));
        let r = r_m_term(1, ComplexPoint::new(0.01, 0.02).unwrap(), &cov).unwrap();
        assert_eq!(r, Complex::new(0.0, 0.0));
    }

    #[test]
    fn second_r_term_gamma3() {
        let cov = gamma3_covering(6).unwrap();
        let p = Complex::<f64>::new(0.003, 0.001);
        let log = p.norm().ln();
        let want = (p * p - p * (p.re / log) - Complex::new((p * p).re / (2.0 * log), 0.0)
            + Complex::new(p.re * p.re / (log * log), 0.0))
            * 9.0;
        let got = r_m_term(2, ComplexPoint::new(p.re, p.im).unwrap(), &cov).unwrap();
        assert!((got - want).norm() < 1e-16, "{got} vs {want}");
    }

    #[test]
    fn zero_vector_gives_zero() {
        let cov = lambda_covering(6).unwrap();
        let p = ComplexPoint::new(1e-3, 0.0).unwrap();
        assert_eq!(metric_expansion_eval(p, 0.0, &cov, 3).unwrap().value, 0.0);
    }

    #[test]
    fn leading_order_law() {
        let cov = lambda_covering(4).unwrap();
        for p in [1e-2f64, 3e-4, 1e-6] {
            let pt = ComplexPoint::new(p, p / 3.0).unwrap();
            let v = metric_expansion_eval(pt, 2.5, &cov, 0).unwrap();
            let scaled = v.value * pt.modulus() * (pt.modulus() / 16.0).ln().abs();
            assert!(rel(scaled, 2.5) < 1e-15);
        }
    }

    #[test]
    fn identity_covering_direct() {
        let cov =
            CoveringData::from_coefficients(Level::UserSupplied, int(1), vec![int(1)]).unwrap();
        let r: f64 = 0.1;
        let v = metric_direct_eval(ComplexPoint::real(r).unwrap(), 1.0, &cov).unwrap();
        assert!(rel(v.value, 1.0 / (r * r.ln().abs())) < 1e-15);
    }

    #[test]
    fn expansion_tracks_direct_for_lambda() {
        let cov = lambda_covering(12).unwrap();
        let p = ComplexPoint::real(1e-3).unwrap();
        let e = metric_expansion_eval(p, 1.0, &cov, 6).unwrap();
        let d = metric_direct_eval(p, 1.0, &cov).unwrap();
        assert!(rel(e.value, d.value) < 1e-8);
        let p = ComplexPoint::real(1e-2).unwrap();
        let e = metric_expansion_eval(p, 1.0, &cov, 6).unwrap();
        let d = metric_direct_eval(p, 1.0, &cov).unwrap();
        assert!(rel(e.value, d.value) < 1e-4);
    }

    #[test]
    fn gamma3_second_order_matches_printed_expansion() {
        let cov = gamma3_covering(12).unwrap();
        let p: f64 = 1e-3;
        let log = p.ln();
        let printed = (1.0 - 3.0 * (p - p / log)
            + 9.0 * (p * p - p * p / log - 0.5 * p * p / log + p * p / (log * log)))
            .abs()
            / (p * log.abs());
        let d = metric_direct_eval(ComplexPoint::real(p).unwrap(), 1.0, &cov).unwrap();
        assert!(rel(printed, d.value) < 1e-6);
    }

    #[test]
    fn guards() {
        let cov = lambda_covering(6).unwrap();
        let far = ComplexPoint::real(8.0).unwrap();
        assert!(matches!(
            metric_expansion_eval(far, 1.0, &cov, 2),
            Err(Error::OutsideValidityRegion { .. })
        ));
        let unit = ComplexPoint::real(16.0).unwrap();
        let wide = MetricEvaluator::<f64>::new(&cov).with_validity_radius(2.0);
        assert_eq!(wide.expansion(unit, 1.0, 2), Err(Error::SingularLog));
        let near = ComplexPoint::real(1e-3).unwrap();
        assert_eq!(
            metric_expansion_eval(near, 1.0, &cov, 9),
            Err(Error::TruncationExceedsData {
                requested: 9,
                available: 5
            })
        );
        assert_eq!(ComplexPoint::new(0.0, 0.0), Err(Error::ZeroPoint));
        // Near the edge of convergence the truncated q-series is rejected.
        let edge = wide.with_validity_radius(0.99);
        assert!(matches!(
            edge.direct(ComplexPoint::real(14.0).unwrap(), 1.0),
            Err(Error::SeriesDivergence { .. })
        ));
    }
}
