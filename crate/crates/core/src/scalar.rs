//! Scalar types usable as structure constants.
//!
//! Tables built from Cayley tables are exactly rational; tables that need
//! square roots or spectral data are floating point. Everything in the core
//! layer is generic over [`Scalar`]; the spectral layer works in `f64`.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// Exact rational scalar.
pub type Rational = BigRational;

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialOrd
    + Num
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    /// `true` when arithmetic is exact and violations are expected to be zero.
    const EXACT: bool;

    /// Short tag used in file headers.
    const TAG: &'static str;

    fn parse_value(s: &str) -> Option<Self>;

    /// Canonical text form; `parse_value(format_value(x)) == x` bit for bit.
    fn format_value(&self) -> String;

    fn ratio(num: i64, den: i64) -> Self;

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    const TAG: &'static str = "float";

    fn parse_value(s: &str) -> Option<Self> {
        if let Some((n, d)) = s.split_once('/') {
            let n: f64 = n.trim().parse().ok()?;
            let d: f64 = d.trim().parse().ok()?;
            return Some(n / d);
        }
        s.trim().parse().ok()
    }

    fn format_value(&self) -> String {
        format!("{self:?}")
    }

    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;
    const TAG: &'static str = "float32";

    fn parse_value(s: &str) -> Option<Self> {
        if let Some((n, d)) = s.split_once('/') {
            let n: f32 = n.trim().parse().ok()?;
            let d: f32 = d.trim().parse().ok()?;
            return Some(n / d);
        }
        s.trim().parse().ok()
    }

    fn format_value(&self) -> String {
        format!("{self:?}")
    }

    fn ratio(num: i64, den: i64) -> Self {
        num as f32 / den as f32
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;
    const TAG: &'static str = "rational";

    fn parse_value(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            return Some(BigRational::new(n, d));
        }
        if s.contains(['.', 'e', 'E']) {
            return parse_decimal(s);
        }
        let n: BigInt = s.parse().ok()?;
        Some(BigRational::from_integer(n))
    }

    fn format_value(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

/// Parses a plain decimal such as `-0.125` exactly.
fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let mut value = BigRational::from_integer(digits.parse::<BigInt>().ok()?);
    let shift = exp - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    for _ in 0..shift.unsigned_abs() {
        if shift > 0 {
            value *= ten.clone();
        } else {
            value /= ten.clone();
        }
    }
    Some(if neg { -value } else { value })
}

/// Converts between scalar types through `f64` (or exactly, rational to rational).
pub fn convert<A: Scalar, B: Scalar>(a: &A) -> B {
    if A::EXACT && B::EXACT {
        // Both exact means both are `Rational`.
        return B::parse_value(&a.format_value()).expect("exact scalar round trip");
    }
    B::from_f64(a.to_f64_lossy()).expect("finite scalar")
}
