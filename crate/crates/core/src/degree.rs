//! Truth degrees on the finite chain `{0, 1/n, ..., 1}`, comparison relations,
//! and exact decimal handling for thresholds and weights.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A membership degree `numerator / n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TruthDegree {
    numerator: u32,
    n: u32,
}

impl TruthDegree {
    pub fn new(numerator: u32, n: u32) -> Option<Self> {
        (n >= 1 && numerator <= n).then_some(TruthDegree { numerator, n })
    }

    pub fn zero(n: u32) -> Self {
        TruthDegree { numerator: 0, n }
    }

    pub fn one(n: u32) -> Self {
        TruthDegree { numerator: n, n }
    }

    pub fn numerator(self) -> u32 {
        self.numerator
    }

    pub fn resolution(self) -> u32 {
        self.n
    }

    pub fn is_zero(self) -> bool {
        self.numerator == 0
    }

    pub fn to_rational(self) -> BigRational {
        BigRational::new(self.numerator.into(), self.n.into())
    }

    pub fn to_f64(self) -> f64 {
        f64::from(self.numerator) / f64::from(self.n)
    }

    /// Exact comparison against a rational by cross-multiplication.
    pub fn cmp_rational(self, r: &BigRational) -> Ordering {
        let lhs = BigInt::from(self.numerator) * r.denom();
        let rhs = BigInt::from(self.n) * r.numer();
        // denominators of BigRational are kept positive
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for TruthDegree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TruthDegree {
    fn cmp(&self, other: &Self) -> Ordering {
        (u64::from(self.numerator) * u64::from(other.n)).cmp(&(u64::from(other.numerator) * u64::from(self.n)))
    }
}

impl fmt::Display for TruthDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.n)
    }
}

/// Comparison relation θ used by axioms, assertions and queries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Ge => ">=",
            Relation::Gt => ">",
            Relation::Le => "<=",
            Relation::Lt => "<",
        }
    }

    /// Whether `lhs θ rhs` holds given `lhs.cmp(rhs)`.
    pub fn holds(self, ord: Ordering) -> bool {
        match self {
            Relation::Ge => ord != Ordering::Less,
            Relation::Gt => ord == Ordering::Greater,
            Relation::Le => ord != Ordering::Greater,
            Relation::Lt => ord == Ordering::Less,
        }
    }

    pub fn degree_holds(self, d: TruthDegree, alpha: &BigRational) -> bool {
        self.holds(d.cmp_rational(alpha))
    }

    /// The numerators `v` in `0..=n` with `v/n θ alpha`, as an inclusive range.
    pub fn numerator_range(self, alpha: &BigRational, n: u32) -> Option<NumeratorRange> {
        let scaled = alpha * BigRational::from_integer(n.into());
        let floor = scaled.floor().to_integer();
        let ceil = scaled.ceil().to_integer();
        let (lo, hi) = match self {
            Relation::Ge => (ceil, BigInt::from(n)),
            Relation::Gt => (floor + 1, BigInt::from(n)),
            Relation::Le => (BigInt::zero(), floor),
            Relation::Lt => (BigInt::zero(), ceil - 1),
        };
        let lo = lo.max(BigInt::zero());
        let hi = hi.min(BigInt::from(n));
        if lo > hi {
            return None;
        }
        Some(NumeratorRange {
            lo: lo.to_u32().expect("bounded by n"),
            hi: hi.to_u32().expect("bounded by n"),
        })
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            ">=" | "≥" => Ok(Relation::Ge),
            ">" => Ok(Relation::Gt),
            "<=" | "≤" => Ok(Relation::Le),
            "<" => Ok(Relation::Lt),
            other => Err(Error::Schema(format!("unknown relation `{other}`"))),
        }
    }
}

/// Inclusive range of admissible numerators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NumeratorRange {
    pub lo: u32,
    pub hi: u32,
}

impl NumeratorRange {
    pub fn contains(self, v: u32) -> bool {
        self.lo <= v && v <= self.hi
    }
}

/// Parses a decimal literal (`-0.25`, `3`, `1e-2` is rejected) into an exact rational.
pub fn parse_decimal(text: &str) -> Result<BigRational> {
    let s = text.trim();
    let bad = || Error::MalformedDecimal(text.to_string());
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    if neg {
        numer = -numer;
    }
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    Ok(BigRational::new(numer, denom))
}

/// Renders a rational whose denominator divides a power of ten as a plain decimal.
/// Other rationals fall back to `p/q`.
pub fn format_decimal(r: &BigRational) -> String {
    let mut denom = r.denom().clone();
    let mut places = 0usize;
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut twos = 0usize;
    let mut fives = 0usize;
    while denom.is_even() {
        denom /= &two;
        twos += 1;
    }
    while (&denom % &five).is_zero() {
        denom /= &five;
        fives += 1;
    }
    if !denom.is_one() {
        return format!("{}/{}", r.numer(), r.denom());
    }
    places += twos.max(fives);
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled = (r * BigRational::from_integer(scale)).to_integer();
    scaled_to_decimal(&scaled, places as u32)
}

/// Parses a decimal weight into an integer scaled by `10^precision`.
pub fn parse_scaled(text: &str, precision: u32) -> Result<i64> {
    let value = parse_decimal(text)?;
    let scale = num_traits::pow(BigInt::from(10), precision as usize);
    let scaled = value * BigRational::from_integer(scale);
    let overflow = || Error::WeightPrecision {
        value: text.trim().to_string(),
        precision,
    };
    if !scaled.is_integer() {
        return Err(overflow());
    }
    scaled.to_integer().to_i64().ok_or_else(overflow)
}

/// Formats `value / 10^precision` with trailing zeros trimmed.
pub fn scaled_to_decimal(value: &BigInt, precision: u32) -> String {
    let neg = value.is_negative();
    let digits = value.abs().to_string();
    let p = precision as usize;
    let (int_part, frac_part) = if digits.len() > p {
        let (i, f) = digits.split_at(digits.len() - p);
        (i.to_string(), f.to_string())
    } else {
        ("0".to_string(), format!("{}{}", "0".repeat(p - digits.len()), digits))
    };
    let frac = frac_part.trim_end_matches('0');
    let sign = if neg { "-" } else { "" };
    if frac.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    }
}

/// Whether `r` lies in the closed unit interval.
pub fn in_unit_interval(r: &BigRational) -> bool {
    !r.is_negative() && *r <= BigRational::one()
}
