//! Covering-map coefficient data: c_m of f(q_k), b_m of the inverse q_k(f),
//! and the logarithmic coefficients l_m, either solved from the Eisenstein
//! relation at levels N = 2..5 or derived from user-supplied c_m.
//!
//! Level N and puncture count n correspond as N = 2, 3, 4, 5 <-> n = 3, 4, 6, 12.

mod eta;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{factorial, int, serde_str};
use crate::series::schwarzian::log_derivative_coefficient;
use crate::series::{BellIndex, BellTable};
use crate::{Rational, TruncatedSeries};

pub use eta::{eta_quotient_expansion, eta_quotient_expansion_at, EtaFactor, EtaQuotientSpec};

pub const SUPPORTED_LEVELS: [u32; 4] = [2, 3, 4, 5];

/// Sum of the cubes of the divisors of m.
pub fn sigma3(m: u64) -> Result<u64> {
    if m < 1 {
        return Err(Error::SigmaDomain(m));
    }
    let mut total = 0u64;
    let mut d = 1u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            total += d.pow(3);
            let e = m / d;
            if e != d {
                total += e.pow(3);
            }
        }
        d += 1;
    }
    Ok(total)
}

/// Where the covering coefficients came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    /// Solved (or solvable) from the Eisenstein relation at this N.
    Modular(u32),
    UserSupplied,
}

/// Exact coefficient data for one covering map f: H -> CP^1 minus punctures.
///
/// With `order` = M: `c` holds c_1..c_M, `b` holds b_1..b_M and `l` holds
/// l_1..l_{M-1} (l_m reads b_{m+1}).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringData {
    level: Level,
    scale_k: Rational,
    c: Vec<Rational>,
    b: Vec<Rational>,
    l: Vec<Rational>,
}

impl CoveringData {
    /// Builds b and l from c by the Bell-polynomial formulas.
    pub fn from_coefficients(level: Level, scale_k: Rational, c: Vec<Rational>) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::OrderTooSmall { got: 0, min: 1 });
        }
        if !scale_k.is_positive() {
            return Err(Error::InvalidCoveringData(
                "scale_k must be positive".into(),
            ));
        }
        let order = c.len();
        let b = invert_covering_series(&c, order)?;
        let l = log_series_coefficients(&b, order - 1)?;
        Ok(Self {
            level,
            scale_k,
            c,
            b,
            l,
        })
    }

    /// Assembles data without checking the relations between c, b and l.
    /// Only shapes are checked; see [`CoveringData::validate`].
    pub fn from_parts(
        level: Level,
        scale_k: Rational,
        c: Vec<Rational>,
        b: Vec<Rational>,
        l: Vec<Rational>,
    ) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::OrderTooSmall { got: 0, min: 1 });
        }
        if b.len() != c.len() || l.len() + 1 != c.len() {
            return Err(Error::InvalidCoveringData(format!(
                "lengths c={}, b={}, l={} are inconsistent",
                c.len(),
                b.len(),
                l.len()
            )));
        }
        if c[0].is_zero() {
            return Err(Error::ZeroLinearCoefficient);
        }
        if b[0].is_zero() {
            return Err(Error::ZeroInverseLinearCoefficient);
        }
        if !scale_k.is_positive() {
            return Err(Error::InvalidCoveringData(
                "scale_k must be positive".into(),
            ));
        }
        if let Level::Modular(n) = level {
            if !SUPPORTED_LEVELS.contains(&n) {
                return Err(Error::UnsupportedLevel(n));
            }
        }
        Ok(Self {
            level,
            scale_k,
            c,
            b,
            l,
        })
    }

    /// Checks b_1 = 1/c_1, c(b(x)) = x and that l is the logarithmic data of b.
    pub fn validate(&self) -> Result<()> {
        if self.b[0] != Rational::one() / self.c[0].clone() {
            return Err(Error::InvalidCoveringData("b1 != 1/c1".into()));
        }
        if !self
            .composition_residual()?
            .coeffs()
            .iter()
            .all(Zero::is_zero)
        {
            return Err(Error::InvalidCoveringData("c(b(x)) != x".into()));
        }
        if log_series_coefficients(&self.b, self.order() - 1)? != self.l {
            return Err(Error::InvalidCoveringData("l does not match b".into()));
        }
        Ok(())
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn scale_k(&self) -> &Rational {
        &self.scale_k
    }

    /// c_1..c_M.
    pub fn c(&self) -> &[Rational] {
        &self.c
    }

    /// b_1..b_M.
    pub fn b(&self) -> &[Rational] {
        &self.b
    }

    /// l_1..l_{M-1}.
    pub fn l(&self) -> &[Rational] {
        &self.l
    }

    /// Number of c (and b) coefficients.
    pub fn order(&self) -> usize {
        self.c.len()
    }

    /// f(q) = sum c_m q^m, known below degree M + 1.
    pub fn c_series(&self) -> TruncatedSeries<Rational> {
        TruncatedSeries::new(1, self.c.clone())
    }

    /// q(f) = sum b_m f^m, known below degree M + 1.
    pub fn b_series(&self) -> TruncatedSeries<Rational> {
        TruncatedSeries::new(1, self.b.clone())
    }

    /// c(b(x)) - x; identically zero for consistent data.
    pub fn composition_residual(&self) -> Result<TruncatedSeries<Rational>> {
        let composed = self.c_series().compose(&self.b_series())?;
        Ok(composed.sub(&TruncatedSeries::identity(composed.order())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&CoveringJson::from(self)).expect("covering data serializes")
    }

    /// Parses the JSON form; shapes are checked, the algebra is not.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: CoveringJson =
            serde_json::from_str(text).map_err(|e| Error::InvalidCoveringData(e.to_string()))?;
        let level = match raw.level_n {
            LevelRepr::Number(n) => Level::Modular(n),
            LevelRepr::Text(t) if t == USER_SUPPLIED => Level::UserSupplied,
            LevelRepr::Text(t) => {
                return Err(Error::InvalidCoveringData(format!("unknown level_N {t:?}")))
            }
        };
        if raw.order != raw.c.len() {
            return Err(Error::InvalidCoveringData(format!(
                "order {} but {} c coefficients",
                raw.order,
                raw.c.len()
            )));
        }
        Self::from_parts(level, raw.scale_k, raw.c, raw.b, raw.l)
    }
}

const USER_SUPPLIED: &str = "user-supplied";

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum LevelRepr {
    Number(u32),
    Text(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoveringJson {
    #[serde(rename = "level_N")]
    level_n: LevelRepr,
    #[serde(with = "serde_str")]
    scale_k: Rational,
    #[serde(with = "serde_str::vec")]
    c: Vec<Rational>,
    #[serde(with = "serde_str::vec")]
    b: Vec<Rational>,
    #[serde(with = "serde_str::vec")]
    l: Vec<Rational>,
    order: usize,
}

impl From<&CoveringData> for CoveringJson {
    fn from(d: &CoveringData) -> Self {
        Self {
            level_n: match d.level {
                Level::Modular(n) => LevelRepr::Number(n),
                Level::UserSupplied => LevelRepr::Text(USER_SUPPLIED.into()),
            },
            scale_k: d.scale_k.clone(),
            c: d.c.clone(),
            b: d.b.clone(),
            l: d.l.clone(),
            order: d.order(),
        }
    }
}

/// Solves c_3, ..., c_order from c_1, c_2 through E_4 = 1 - q_N^2 {f, q_N}.
///
/// Matching q_N^{m+2} gives, for m >= 0,
/// 2 l~_{m+2}/m! - sum_{k=0}^m l~_{k+1} l~_{m-k+1}/(k!(m-k)!) = -240 sigma3((m+2)/N) if N | m+2, else 0,
/// which fixes l~_{m+2}; l~_{m+2} is (m+3)! c_{m+3}/c_1 plus terms in c_1..c_{m+2}.
pub fn solve_covering_coefficients(
    level: u32,
    c1: Rational,
    c2: Rational,
    order: usize,
) -> Result<CoveringData> {
    if !SUPPORTED_LEVELS.contains(&level) {
        return Err(Error::UnsupportedLevel(level));
    }
    if c1.is_zero() {
        return Err(Error::ZeroLinearCoefficient);
    }
    if order < 2 {
        return Err(Error::OrderTooSmall { got: order, min: 2 });
    }
    let n = level as usize;
    let mut c = vec![c1.clone(), c2.clone()];
    // args[j-1] = (j+1)! c_{j+1}
    let mut args = vec![int(2) * c2];
    let mut lt = vec![args[0].clone() / c1.clone()];

    for m in 0..order.saturating_sub(2) {
        let slot = m + 2;
        let rhs = if slot % n == 0 {
            int(-240) * int(sigma3((slot / n) as u64)? as i64)
        } else {
            Rational::zero()
        };
        let quadratic = (0..=m).fold(Rational::zero(), |s, k| {
            s + lt[k].clone() * lt[m - k].clone()
                / Rational::from_integer(factorial(k) * factorial(m - k))
        });
        let next_lt = (rhs + quadratic) * Rational::from_integer(factorial(m)) / int(2);

        args.push(Rational::zero());
        let rest = log_derivative_coefficient(&c1, &args, slot)?;
        let top = (next_lt.clone() - rest) * c1.clone();
        let c_next = top.clone() / Rational::from_integer(factorial(slot + 1));
        *args.last_mut().expect("just pushed") = top;
        lt.push(next_lt);
        c.push(c_next);
    }
    c.truncate(order);
    CoveringData::from_coefficients(Level::Modular(level), int(level as i64), c)
}

/// b_1..b_order of the compositional inverse, by the Bell-polynomial reversion
/// b_m = (1/m!) sum_{k=1}^{m-1} (-1)^k / c_1^{m+k} B_{m+k-1,k}(0, 2! c_2, ..., m! c_m).
///
/// `c[0]` is c_1; `c` needs at least `order` entries.
pub fn invert_covering_series(c: &[Rational], order: usize) -> Result<Vec<Rational>> {
    if c.len() < order {
        return Err(Error::InsufficientCoefficients {
            needed: order,
            got: c.len(),
        });
    }
    if order == 0 {
        return Ok(Vec::new());
    }
    let c1 = c[0].clone();
    if c1.is_zero() {
        return Err(Error::ZeroLinearCoefficient);
    }
    // t_1 = 0, t_j = j! c_j
    let t: Vec<Rational> = (1..=order)
        .map(|j| {
            if j == 1 {
                Rational::zero()
            } else {
                Rational::from_integer(factorial(j)) * c[j - 1].clone()
            }
        })
        .collect();
    let table = BellTable::new(&t, 2 * order - 2);
    let mut b = vec![Rational::one() / c1.clone()];
    for m in 2..=order {
        let mut sum = Rational::zero();
        for k in 1..m {
            let bell = table.get(BellIndex::new(m + k - 1, k)?)?.clone();
            let term = bell / c1.pow((m + k) as i32);
            sum = if k % 2 == 1 { sum - term } else { sum + term };
        }
        b.push(sum / Rational::from_integer(factorial(m)));
    }
    Ok(b)
}

/// l_1..l_order with log(q / (b_1 f)) = sum l_m f^m / m!:
/// l_m = sum_{k=1}^m (-1)^{k-1} (k-1)! / b_1^k B_{m,k}(1! b_2, 2! b_3, ..., (m-k+1)! b_{m-k+2}).
///
/// `b[0]` is b_1; `b` needs at least `order + 1` entries.
pub fn log_series_coefficients(b: &[Rational], order: usize) -> Result<Vec<Rational>> {
    if b.len() < order + 1 {
        return Err(Error::InsufficientCoefficients {
            needed: order + 1,
            got: b.len(),
        });
    }
    let b1 = b[0].clone();
    if b1.is_zero() {
        return Err(Error::ZeroInverseLinearCoefficient);
    }
    let t: Vec<Rational> = (1..=order)
        .map(|j| Rational::from_integer(factorial(j)) * b[j].clone())
        .collect();
    let table = BellTable::new(&t, order);
    (1..=order)
        .map(|m| {
            let mut total = Rational::zero();
            for k in 1..=m {
                let bell = table.get(BellIndex::new(m, k)?)?.clone();
                let term = Rational::from_integer(factorial(k - 1)) * bell / b1.pow(k as i32);
                total = if k % 2 == 1 {
                    total + term
                } else {
                    total - term
                };
            }
            Ok(total)
        })
        .collect()
}

/// Same l_m read off from the formal logarithm of 1 + sum_m (b_{m+1}/b_1) f^m.
pub fn log_series_coefficients_via_series(b: &[Rational], order: usize) -> Result<Vec<Rational>> {
    if b.len() < order + 1 {
        return Err(Error::InsufficientCoefficients {
            needed: order + 1,
            got: b.len(),
        });
    }
    let b1 = b[0].clone();
    if b1.is_zero() {
        return Err(Error::ZeroInverseLinearCoefficient);
    }
    let unit: Vec<Rational> = std::iter::once(Rational::one())
        .chain(b[1..=order].iter().map(|x| x.clone() / b1.clone()))
        .collect();
    let log = TruncatedSeries::from_dense(unit).log_unit()?;
    Ok((1..=order)
        .map(|m| log.coeff(m).expect("within order") * Rational::from_integer(factorial(m)))
        .collect())
}

/// E_4 = 1 + 240 sum sigma3(j) q^j written in q_N (q = q_N^N), known to `order`.
pub fn eisenstein_e4(level: u32, order: usize) -> Result<TruncatedSeries<Rational>> {
    if level == 0 {
        return Err(Error::UnsupportedLevel(level));
    }
    let n = level as usize;
    let coeffs = (0..order)
        .map(|j| {
            if j == 0 {
                Ok(Rational::one())
            } else if j % n == 0 {
                Ok(int(240) * int(sigma3((j / n) as u64)? as i64))
            } else {
                Ok(Rational::zero())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TruncatedSeries::from_dense(coeffs))
}

/// 1 - q^2 {f, q} computed from the c-series, in q = q_N.
pub fn schwarzian_side(c: &[Rational]) -> Result<TruncatedSeries<Rational>> {
    let f = TruncatedSeries::new(1, c.to_vec());
    let s = f.schwarzian()?;
    let mut dense = vec![Rational::one(), Rational::zero()];
    dense.extend(s.dense().into_iter().map(|x| -x));
    Ok(TruncatedSeries::from_dense(dense))
}

/// (1 - q^2 {f,q}) - E_4 for data at a modular level; zero when consistent.
pub fn eisenstein_residual(data: &CoveringData) -> Result<TruncatedSeries<Rational>> {
    let Level::Modular(level) = data.level() else {
        return Err(Error::InvalidCoveringData(
            "Eisenstein relation needs a modular level".into(),
        ));
    };
    let lhs = schwarzian_side(data.c())?;
    let e4 = eisenstein_e4(level, lhs.order())?;
    Ok(lhs.sub(&e4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn sigma3_values() {
        // brute-force divisor scans
        for m in 1..60u64 {
            let brute: u64 = (1..=m).filter(|d| m % d == 0).map(|d| d.pow(3)).sum();
            assert_eq!(sigma3(m).unwrap(), brute);
        }
        assert_eq!(sigma3(1).unwrap(), 1);
        assert_eq!(sigma3(2).unwrap(), 9);
        assert_eq!(sigma3(6).unwrap(), 252);
        assert_eq!(sigma3(0), Err(Error::SigmaDomain(0)));
    }

    #[test]
    fn lambda_c3() {
        let d = solve_covering_coefficients(2, int(16), int(-128), 3).unwrap();
        assert_eq!(d.c(), &[int(16), int(-128), int(704)]);
        assert_eq!(d.b()[0], ratio(1, 16));
        assert_eq!(d.b()[1], ratio(1, 32));
        assert_eq!(d.l()[0], ratio(1, 2));
    }

    #[test]
    fn gamma3_data() {
        let d = solve_covering_coefficients(3, int(1), int(3), 3).unwrap();
        assert_eq!(d.c(), &[int(1), int(3), int(9)]);
        assert_eq!(d.b(), &[int(1), int(-3), int(9)]);
        assert_eq!(d.l()[0], int(-3));
        assert_eq!(d.scale_k(), &int(3));
    }

    #[test]
    fn order_two_solves_nothing() {
        let d = solve_covering_coefficients(3, int(1), int(3), 2).unwrap();
        assert_eq!(d.c(), &[int(1), int(3)]);
    }

    #[test]
    fn solver_rejects_bad_input() {
        assert_eq!(
            solve_covering_coefficients(6, int(1), int(0), 4),
            Err(Error::UnsupportedLevel(6))
        );
        assert_eq!(
            solve_covering_coefficients(2, int(0), int(1), 3),
            Err(Error::ZeroLinearCoefficient)
        );
        assert_eq!(
            solve_covering_coefficients(2, int(1), int(1), 1),
            Err(Error::OrderTooSmall { got: 1, min: 2 })
        );
    }

    #[test]
    fn bell_reversion_small_cases() {
        assert_eq!(invert_covering_series(&[int(1)], 1).unwrap(), vec![int(1)]);
        assert_eq!(
            invert_covering_series(&[int(1), int(3), int(9)], 3).unwrap(),
            vec![int(1), int(-3), int(9)]
        );
        assert_eq!(
            invert_covering_series(&[int(0), int(1)], 2),
            Err(Error::ZeroLinearCoefficient)
        );
    }

    #[test]
    fn log_coefficients_small_cases() {
        assert_eq!(
            log_series_coefficients(&[int(1), int(0), int(0), int(0)], 3).unwrap(),
            vec![int(0); 3]
        );
        let l = log_series_coefficients(&[ratio(1, 16), ratio(1, 32)], 1).unwrap();
        assert_eq!(l, vec![ratio(1, 2)]);
        let l = log_series_coefficients(&[int(1), int(-3), int(9)], 2).unwrap();
        assert_eq!(l, vec![int(-3), int(9)]);
        assert_eq!(
            log_series_coefficients(&[int(0), int(1)], 1),
            Err(Error::ZeroInverseLinearCoefficient)
        );
    }

    #[test]
    fn solved_levels_satisfy_the_eisenstein_relation() {
        for (level, c1, c2) in [(2, 16, -128), (3, 1, 3), (4, 1, 2), (5, 1, 1)] {
            let d = solve_covering_coefficients(level, int(c1), int(c2), 10).unwrap();
            let r = eisenstein_residual(&d).unwrap();
            assert!(r.coeffs().iter().all(Zero::is_zero), "level {level}: {r:?}");
            d.validate().unwrap();
        }
    }

    #[test]
    fn json_round_trip_is_exact() {
        let d = solve_covering_coefficients(2, int(16), int(-128), 6).unwrap();
        let text = d.to_json();
        assert!(text.contains("\"1/32\""));
        let back = CoveringData::from_json(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn json_shape_errors() {
        let d = solve_covering_coefficients(3, int(1), int(3), 4).unwrap();
        let text = d.to_json().replace("\"order\": 4", "\"order\": 5");
        assert!(matches!(
            CoveringData::from_json(&text),
            Err(Error::InvalidCoveringData(_))
        ));
        let user =
            CoveringData::from_coefficients(Level::UserSupplied, int(1), vec![int(2), int(1)])
                .unwrap();
        let back = CoveringData::from_json(&user.to_json()).unwrap();
        assert_eq!(back.level(), Level::UserSupplied);
    }

    #[test]
    fn corrupted_data_fails_validation() {
        let d = solve_covering_coefficients(2, int(16), int(-128), 5).unwrap();
        let mut b = d.b().to_vec();
        b[2] += int(1);
        let bad = CoveringData::from_parts(
            d.level(),
            d.scale_k().clone(),
            d.c().to_vec(),
            b,
            d.l().to_vec(),
        )
        .unwrap();
        assert!(matches!(bad.validate(), Err(Error::InvalidCoveringData(_))));
    }
}
