//! Dedekind eta quotients expanded as integral power series in q_k.
//!
//! eta(s tau) = q^{s/24} prod_{n>=1} (1 - q^{s n}) with q = exp(2 pi i tau);
//! writing q = q_k^k turns every factor into a power series in q_k once all
//! k s and the net prefactor exponent are integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, ratio};
use crate::{Rational, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaFactor {
    /// s in eta(s tau); positive.
    pub scale: Rational,
    pub exponent: i64,
}

/// multiplier * prod eta(s_i tau)^{e_i}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaQuotientSpec {
    factors: Vec<EtaFactor>,
    multiplier: Rational,
    leading_q_power: Rational,
}

impl EtaQuotientSpec {
    pub fn new(multiplier: Rational, factors: Vec<EtaFactor>) -> Result<Self> {
        if factors.iter().any(|f| !f.scale.is_positive()) {
            return Err(Error::NonPositiveEtaScale);
        }
        let leading_q_power = factors.iter().fold(Rational::zero(), |acc, f| {
            acc + f.scale.clone() * int(f.exponent)
        }) / int(24);
        Ok(Self {
            factors,
            multiplier,
            leading_q_power,
        })
    }

    /// The empty product, identically 1.
    pub fn empty() -> Self {
        Self {
            factors: Vec::new(),
            multiplier: Rational::one(),
            leading_q_power: Rational::zero(),
        }
    }

    /// Modular lambda: 16 eta(tau/2)^8 eta(2 tau)^16 / eta(tau)^24, a series in q_2.
    pub fn modular_lambda() -> Self {
        let factors = vec![
            EtaFactor {
                scale: ratio(1, 2),
                exponent: 8,
            },
            EtaFactor {
                scale: int(2),
                exponent: 16,
            },
            EtaFactor {
                scale: int(1),
                exponent: -24,
            },
        ];
        Self::new(int(16), factors).expect("scales are positive")
    }

    /// (eta(3 tau) / eta(tau/3))^3, the Gamma(3) hauptmodul in q_3.
    pub fn gamma3() -> Self {
        let factors = vec![
            EtaFactor {
                scale: int(3),
                exponent: 3,
            },
            EtaFactor {
                scale: ratio(1, 3),
                exponent: -3,
            },
        ];
        Self::new(int(1), factors).expect("scales are positive")
    }

    pub fn factors(&self) -> &[EtaFactor] {
        &self.factors
    }

    pub fn multiplier(&self) -> &Rational {
        &self.multiplier
    }

    /// Net power of q = exp(2 pi i tau) contributed by the q^{s/24} prefactors.
    pub fn leading_q_power(&self) -> &Rational {
        &self.leading_q_power
    }

    /// Smallest k making every exponent integral in q_k: the lcm of all denominators.
    pub fn natural_scale(&self) -> Rational {
        let den = self
            .factors
            .iter()
            .map(|f| f.scale.denom().clone())
            .chain(std::iter::once(self.leading_q_power.denom().clone()))
            .fold(BigInt::one(), |acc, d| acc.lcm(&d));
        Rational::from_integer(den)
    }
}

/// Expansion in q_k for the natural k of the spec.
pub fn eta_quotient_expansion(
    spec: &EtaQuotientSpec,
    order: usize,
) -> Result<TruncatedSeries<Rational>> {
    eta_quotient_expansion_at(spec, &spec.natural_scale(), order)
}

/// Expansion in q_k = exp(2 pi i tau / k), known to `order` (exclusive degree bound).
pub fn eta_quotient_expansion_at(
    spec: &EtaQuotientSpec,
    scale_k: &Rational,
    order: usize,
) -> Result<TruncatedSeries<Rational>> {
    let lead = spec.leading_q_power.clone() * scale_k.clone();
    if !lead.is_integer() {
        return Err(Error::NonIntegralEtaExponent(format_rational(&lead)));
    }
    if lead.is_negative() {
        return Err(Error::NegativeLeadingPower(format_rational(&lead)));
    }
    let lead = lead
        .to_integer()
        .to_usize()
        .ok_or_else(|| Error::NonIntegralEtaExponent(format_rational(&spec.leading_q_power)))?;
    if order <= lead {
        return Ok(TruncatedSeries::new(order, Vec::new()));
    }
    let len = order - lead;
    let mut coeffs = vec![Rational::zero(); len];
    coeffs[0] = spec.multiplier.clone();

    for factor in &spec.factors {
        let step = factor.scale.clone() * scale_k.clone();
        if !step.is_integer() {
            return Err(Error::NonIntegralEtaExponent(format_rational(&step)));
        }
        let step = step
            .to_integer()
            .to_usize()
            .ok_or_else(|| Error::NonIntegralEtaExponent(format_rational(&step)))?;
        // Factors (1 - x^{step n}) with step n >= len cannot reach kept degrees.
        for n in 1..=(len.saturating_sub(1) / step) {
            let d = step * n;
            for _ in 0..factor.exponent.unsigned_abs() {
                if factor.exponent > 0 {
                    // times (1 - x^d)
                    for i in (d..len).rev() {
                        let t = coeffs[i - d].clone();
                        coeffs[i] -= t;
                    }
                } else {
                    // divided by (1 - x^d)
                    for i in d..len {
                        let t = coeffs[i - d].clone();
                        coeffs[i] += t;
                    }
                }
            }
        }
    }
    Ok(TruncatedSeries::new(lead, coeffs))
}
