//! The activation `φ` and its nearest-value approximation `φₙ` on the chain.
//!
//! `φₙ` is never evaluated through `φ` at query time. For each level `j`
//! (`1 ≤ j ≤ n`) a threshold `k_j` on the scaled weight axis is precomputed so
//! that `φ(w / (n·10^k)) > (2j-1)/(2n)` holds exactly when `w > k_j`; the level
//! of `w` is then the number of thresholds it exceeds. A value sitting exactly
//! on a band boundary rounds down.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::degree::{format_decimal, parse_decimal, TruthDegree};
use crate::error::{Error, Result};
use crate::numeric::ln_bounds;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PhiConfig {
    /// `1 / (1 + e^(-gain·x))`
    Logistic { gain: BigRational },
    /// `clamp(slope·x + offset, 0, 1)`
    ClampedLinear { slope: BigRational, offset: BigRational },
}

impl Default for PhiConfig {
    fn default() -> Self {
        PhiConfig::Logistic {
            gain: BigRational::one(),
        }
    }
}

impl PhiConfig {
    pub fn logistic(gain: &str) -> Result<Self> {
        Ok(PhiConfig::Logistic {
            gain: parse_decimal(gain)?,
        })
    }

    pub fn clamped_linear(slope: &str, offset: &str) -> Result<Self> {
        Ok(PhiConfig::ClampedLinear {
            slope: parse_decimal(slope)?,
            offset: parse_decimal(offset)?,
        })
    }

    /// `None` when the configuration is a monotone non-decreasing map into `[0,1]`.
    pub fn problem(&self) -> Option<String> {
        match self {
            PhiConfig::Logistic { gain } if !gain.is_positive() => {
                Some(format!("logistic gain must be positive (got {})", format_decimal(gain)))
            }
            PhiConfig::ClampedLinear { slope, .. } if slope.is_negative() => Some(format!(
                "clamped-linear slope must be non-negative (got {})",
                format_decimal(slope)
            )),
            _ => None,
        }
    }

    pub fn is_strictly_increasing(&self) -> bool {
        matches!(self, PhiConfig::Logistic { gain } if gain.is_positive())
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        match self {
            PhiConfig::Logistic { gain } => {
                let g = gain.to_f64().unwrap_or(1.0);
                1.0 / (1.0 + (-g * x).exp())
            }
            PhiConfig::ClampedLinear { slope, offset } => {
                let y = slope.to_f64().unwrap_or(0.0) * x + offset.to_f64().unwrap_or(0.0);
                y.clamp(0.0, 1.0)
            }
        }
    }
}

impl fmt::Display for PhiConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhiConfig::Logistic { gain } => write!(f, "logistic:{}", format_decimal(gain)),
            PhiConfig::ClampedLinear { slope, offset } => {
                write!(f, "clamped-linear:{}:{}", format_decimal(slope), format_decimal(offset))
            }
        }
    }
}

impl FromStr for PhiConfig {
    type Err = Error;

    /// `logistic`, `logistic:<gain>`, or `clamped-linear:<slope>:<offset>`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let phi = match parts.as_slice() {
            ["logistic"] => PhiConfig::default(),
            ["logistic", gain] => PhiConfig::logistic(gain)?,
            ["clamped-linear", slope, offset] => PhiConfig::clamped_linear(slope, offset)?,
            _ => return Err(Error::Schema(format!("unrecognized phi `{s}`"))),
        };
        match phi.problem() {
            Some(p) => Err(Error::Schema(p)),
            None => Ok(phi),
        }
    }
}

/// A threshold on the scaled weight axis. Infinite thresholds arise when `φ`
/// never crosses (or always exceeds) a band boundary.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Threshold {
    NegInfinity,
    Finite(BigInt),
    PosInfinity,
}

impl Threshold {
    /// `w > self`
    pub fn exceeded_by(&self, w: &BigInt) -> bool {
        match self {
            Threshold::NegInfinity => true,
            Threshold::Finite(t) => w > t,
            Threshold::PosInfinity => false,
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::NegInfinity => f.write_str("-inf"),
            Threshold::Finite(t) => write!(f, "{t}"),
            Threshold::PosInfinity => f.write_str("+inf"),
        }
    }
}

/// Precomputed `φₙ` for one `(φ, n, k)` configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiN {
    n: u32,
    precision: u32,
    thresholds: Vec<Threshold>,
}

impl PhiN {
    pub fn resolution(&self) -> u32 {
        self.n
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// `k_1 .. k_n`, non-decreasing.
    pub fn thresholds(&self) -> &[Threshold] {
        &self.thresholds
    }

    /// Numerator of `φₙ` at scaled weight `w`.
    pub fn level(&self, w: &BigInt) -> u32 {
        self.thresholds.partition_point(|t| t.exceeded_by(w)) as u32
    }

    pub fn apply(&self, w: &BigInt) -> TruthDegree {
        TruthDegree::new(self.level(w), self.n).expect("level bounded by n")
    }
}

/// `n · 10^k`, the factor between real weights and the scaled axis.
pub fn axis_scale(n: u32, precision: u32) -> BigInt {
    BigInt::from(n) * num_traits::pow(BigInt::from(10), precision as usize)
}

/// Band boundary `(2j-1)/(2n)`.
pub fn band_boundary(j: u32, n: u32) -> BigRational {
    BigRational::new(BigInt::from(2 * j - 1), BigInt::from(2 * n))
}

pub fn compute_thresholds(phi: &PhiConfig, n: u32, precision: u32) -> Result<PhiN> {
    if n == 0 {
        return Err(Error::InvalidResolution(0));
    }
    if let Some(p) = phi.problem() {
        return Err(Error::Schema(p));
    }
    let scale = BigRational::from_integer(axis_scale(n, precision));
    let thresholds = (1..=n)
        .map(|j| {
            let p = band_boundary(j, n);
            match phi {
                PhiConfig::Logistic { gain } => logistic_threshold(&p, gain, &scale, j),
                PhiConfig::ClampedLinear { slope, offset } => Ok(linear_threshold(&p, slope, offset, &scale)),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PhiN {
        n,
        precision,
        thresholds,
    })
}

pub fn phi_n_apply(pn: &PhiN, w: &BigInt) -> TruthDegree {
    pn.apply(w)
}

fn linear_threshold(p: &BigRational, slope: &BigRational, offset: &BigRational, scale: &BigRational) -> Threshold {
    // clamp(y) > p  <=>  y > p  for p strictly inside (0,1)
    if slope.is_zero() {
        return if offset > p {
            Threshold::NegInfinity
        } else {
            Threshold::PosInfinity
        };
    }
    let x = (p - offset) / slope;
    Threshold::Finite((x * scale).floor().to_integer())
}

fn logistic_threshold(p: &BigRational, gain: &BigRational, scale: &BigRational, level: u32) -> Result<Threshold> {
    // φ(x) > p  <=>  x > ln(p / (1 - p)) / gain
    let odds = p / (BigRational::one() - p);
    if odds.is_one() {
        return Ok(Threshold::Finite(BigInt::zero()));
    }
    let factor = scale / gain;
    let mut bits = 64;
    while bits <= 1 << 14 {
        let (lo, hi) = ln_bounds(&odds, bits);
        let lo = (lo * &factor).floor().to_integer();
        let hi = (hi * &factor).floor().to_integer();
        if lo == hi {
            return Ok(Threshold::Finite(lo));
        }
        bits *= 2;
    }
    Err(Error::ThresholdPrecision { level })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn finite(ts: &PhiN) -> Vec<i64> {
        ts.thresholds()
            .iter()
            .map(|t| match t {
                Threshold::Finite(v) => v.to_i64().unwrap(),
                other => panic!("unexpected {other}"),
            })
            .collect()
    }

    #[test]
    fn logistic_single_level() {
        let pn = compute_thresholds(&PhiConfig::default(), 1, 0).unwrap();
        assert_eq!(finite(&pn), [0]);
        // φ(0) = 1/2 sits on the boundary and rounds down
        assert_eq!(pn.level(&BigInt::zero()), 0);
        assert_eq!(pn.level(&BigInt::one()), 1);
    }

    #[test]
    fn logistic_two_levels() {
        let pn = compute_thresholds(&PhiConfig::default(), 2, 0).unwrap();
        // 2·logit(1/4) = -2.197.., 2·logit(3/4) = 2.197..
        assert_eq!(finite(&pn), [-3, 2]);
        assert_eq!(phi_n_apply(&pn, &BigInt::zero()), TruthDegree::new(1, 2).unwrap());
    }

    #[test]
    fn clamped_linear_is_exact() {
        let phi = PhiConfig::clamped_linear("1", "0").unwrap();
        let pn = compute_thresholds(&phi, 5, 3).unwrap();
        let expect: Vec<i64> = (1..=5).map(|j| 5000 * (2 * j - 1) / 10).collect();
        assert_eq!(finite(&pn), expect);
        // exactly on the first boundary: φ = 1/10 rounds down to 0
        assert_eq!(pn.level(&BigInt::from(500)), 0);
        assert_eq!(pn.level(&BigInt::from(501)), 1);
    }

    #[test]
    fn flat_linear_uses_sentinels() {
        let phi = PhiConfig::clamped_linear("0", "0.5").unwrap();
        let pn = compute_thresholds(&phi, 2, 0).unwrap();
        assert_eq!(pn.thresholds(), &[Threshold::NegInfinity, Threshold::PosInfinity]);
        assert_eq!(pn.level(&BigInt::from(-1_000_000)), 1);
    }

    #[test]
    fn invalid_configs_rejected() {
        assert!(compute_thresholds(&PhiConfig::logistic("0").unwrap(), 2, 0).is_err());
        assert!(compute_thresholds(&PhiConfig::clamped_linear("-1", "0").unwrap(), 2, 0).is_err());
        assert!(compute_thresholds(&PhiConfig::default(), 0, 0).is_err());
        assert!("logistic:-2".parse::<PhiConfig>().is_err());
        assert!("tanh".parse::<PhiConfig>().is_err());
    }

    #[test]
    fn phi_parses_and_displays() {
        let phi: PhiConfig = "clamped-linear:0.5:0.25".parse().unwrap();
        assert_eq!(phi.to_string(), "clamped-linear:0.5:0.25");
        assert_eq!("logistic".parse::<PhiConfig>().unwrap(), PhiConfig::default());
    }

    #[test]
    fn thresholds_non_decreasing() {
        for phi in ["logistic", "logistic:0.3", "logistic:4", "clamped-linear:0.7:0.1"] {
            let phi: PhiConfig = phi.parse().unwrap();
            for n in 1..=12 {
                for k in 0..=3 {
                    let pn = compute_thresholds(&phi, n, k).unwrap();
                    assert!(pn.thresholds().windows(2).all(|w| w[0] <= w[1]));
                    if phi.is_strictly_increasing() {
                        assert!(pn.thresholds().windows(2).all(|w| w[0] < w[1]) || n == 1 || k == 0);
                    }
                }
            }
        }
    }
}
