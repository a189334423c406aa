//! Asymptotics of the Kobayashi-Royden metric near a puncture of
//! CP^1 minus {0, a_2, ..., a_n}, computed from the q-expansion of a covering
//! map H -> CP^1 minus the punctures.
//!
//! Coefficient work ([`series`], [`covering`]) is exact over [`Rational`];
//! evaluation ([`metric`], [`picard`]) is generic over an [`EvalFloat`],
//! with `f64` and the double-double [`Extended`] provided.

pub mod covering;
pub mod error;
pub mod metric;
pub mod picard;
pub mod rational;
pub mod scalar;
pub mod series;
pub mod verify;

pub use covering::{
    eta_quotient_expansion, invert_covering_series, log_series_coefficients, sigma3,
    solve_covering_coefficients, CoveringData, EtaQuotientSpec, Level,
};
pub use error::{Error, Result};
pub use metric::{ComplexPoint, MetricEvaluator, MetricValue};
pub use picard::{exp_reciprocal_coefficients, ExpCoefficients, RadiusBound};
pub use scalar::{Coeff, DoubleDouble, EvalFloat};
pub use series::{bell_polynomial, BellIndex, BellTable, TruncatedSeries};

/// Exact rational coefficients.
pub type Rational = num_rational::BigRational;
/// Double-double float (about 32 significant digits).
pub type Extended = scalar::DoubleDouble;

pub type RationalSeries = TruncatedSeries<Rational>;
pub type ComplexPoint64 = ComplexPoint<f64>;
pub type ComplexPointExt = ComplexPoint<Extended>;
pub type MetricValue64 = MetricValue<f64>;
pub type MetricValueExt = MetricValue<Extended>;
pub type RadiusBound64 = RadiusBound<f64>;
pub type RadiusBoundExt = RadiusBound<Extended>;

/// Built-in covering data for the modular lambda function (N = 2, c_1 = 16, c_2 = -128).
pub fn lambda_covering(order: usize) -> Result<CoveringData> {
    solve_covering_coefficients(2, rational::int(16), rational::int(-128), order)
}

/// Built-in covering data for the Gamma(3) hauptmodul (N = 3, c_1 = 1, c_2 = 3).
pub fn gamma3_covering(order: usize) -> Result<CoveringData> {
    solve_covering_coefficients(3, rational::int(1), rational::int(3), order)
}
