use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid Bell index B_{{{n},{k}}}: need 1 <= k <= n")]
    InvalidBellIndex { n: usize, k: usize },
    #[error("Bell polynomial B_{{{n},{k}}} needs {needed} arguments, got {got}")]
    BellArgumentsTooShort {
        n: usize,
        k: usize,
        needed: usize,
        got: usize,
    },
    #[error("inner series of a composition must have zero constant term")]
    NonzeroConstantTerm,
    #[error("logarithm needs a series with constant term 1")]
    NotUnitSeries,
    #[error("c1 must be nonzero")]
    ZeroLinearCoefficient,
    #[error("b1 must be nonzero")]
    ZeroInverseLinearCoefficient,
    #[error("series must have zero constant term and nonzero linear term")]
    NotInvertible,
    #[error("level N = {0} is not supported (expected 2, 3, 4 or 5)")]
    UnsupportedLevel(u32),
    #[error("order {got} is too small (need at least {min})")]
    OrderTooSmall { got: usize, min: usize },
    #[error("not enough coefficients: need {needed}, got {got}")]
    InsufficientCoefficients { needed: usize, got: usize },
    #[error("sigma3 is defined for m >= 1, got {0}")]
    SigmaDomain(u64),
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
    #[error("zero denominator in rational {0:?}")]
    ZeroDenominator(String),
    #[error("eta quotient exponent {0} is not integral at the requested q power")]
    NonIntegralEtaExponent(String),
    #[error("eta quotient has negative leading q power {0}")]
    NegativeLeadingPower(String),
    #[error("eta quotient scales must be positive")]
    NonPositiveEtaScale,
    #[error("log|b1 p| vanishes: |b1 p| = 1")]
    SingularLog,
    #[error("point p = 0 is the puncture itself")]
    ZeroPoint,
    #[error("|b1 p| = {modulus} lies outside the validity region |b1 p| <= {radius}")]
    OutsideValidityRegion { modulus: f64, radius: f64 },
    #[error("inversion series does not converge at p: last term / partial sum = {ratio}")]
    SeriesDivergence { ratio: f64 },
    #[error("truncation order {requested} exceeds the available data ({available})")]
    TruncationExceedsData { requested: usize, available: usize },
    #[error("invalid covering data: {0}")]
    InvalidCoveringData(String),
}

impl Error {
    /// Stable machine-readable tag for the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidBellIndex { .. } => "invalid-bell-index",
            Error::BellArgumentsTooShort { .. } => "bell-arguments-too-short",
            Error::NonzeroConstantTerm => "nonzero-constant-term",
            Error::NotUnitSeries => "not-unit-series",
            Error::ZeroLinearCoefficient => "zero-c1",
            Error::ZeroInverseLinearCoefficient => "zero-b1",
            Error::NotInvertible => "not-invertible",
            Error::UnsupportedLevel(_) => "unsupported-level",
            Error::OrderTooSmall { .. } => "order-too-small",
            Error::InsufficientCoefficients { .. } => "insufficient-coefficients",
            Error::SigmaDomain(_) => "sigma-domain",
            Error::ParseRational(_) => "parse-rational",
            Error::ZeroDenominator(_) => "zero-denominator",
            Error::NonIntegralEtaExponent(_) => "non-integral-eta-exponent",
            Error::NegativeLeadingPower(_) => "negative-leading-power",
            Error::NonPositiveEtaScale => "non-positive-eta-scale",
            Error::SingularLog => "singular-log",
            Error::ZeroPoint => "zero-point",
            Error::OutsideValidityRegion { .. } => "outside-validity-region",
            Error::SeriesDivergence { .. } => "series-divergence",
            Error::TruncationExceedsData { .. } => "truncation-exceeds-data",
            Error::InvalidCoveringData(_) => "invalid-covering-data",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
