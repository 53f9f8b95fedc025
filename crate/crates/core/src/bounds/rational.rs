//! Small helpers around [`BigRational`]: construction, parsing and the
//! textual forms used by the CSV exports.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `num / den` as an exact rational. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    BigRational::from_integer(BigInt::from(value))
}

/// Parses `a`, `a/b`, or a finite decimal such as `-2.625` exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if frac.is_empty() && whole_digits.is_empty() {
            return Err(bad());
        }
        if !whole_digits.chars().all(|c| c.is_ascii_digit())
            || !frac.chars().all(|c| c.is_ascii_digit())
        {
            return Err(bad());
        }
        let digits = format!("{whole_digits}{frac}");
        let mut num: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| bad())?
        };
        if negative {
            num = -num;
        }
        let den = BigInt::from(10u32).pow(frac.len() as u32);
        return Ok(BigRational::new(num, den));
    }
    let num: BigInt = text.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(num))
}

/// Exact decimal expansion when the denominator has only the prime factors
/// 2 and 5, `None` otherwise.
pub fn terminating_decimal(value: &Rational) -> Option<String> {
    let mut den = value.denom().clone();
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    let mut twos = 0u32;
    let mut fives = 0u32;
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return None;
    }
    let digits = twos.max(fives);
    let scaled = value * BigRational::from_integer(BigInt::from(10u32).pow(digits));
    debug_assert!(scaled.is_integer());
    let scaled = scaled.to_integer();
    let negative = scaled.is_negative();
    let magnitude = scaled.abs().to_string();
    let body = if digits == 0 {
        magnitude
    } else {
        let width = digits as usize + 1;
        let padded = format!("{magnitude:0>width$}");
        let (whole, frac) = padded.split_at(padded.len() - digits as usize);
        format!("{whole}.{frac}")
    };
    Some(if negative { format!("-{body}") } else { body })
}

/// CSV form: exact decimal when terminating, else `num/den`.
pub fn format_exact(value: &Rational) -> String {
    terminating_decimal(value).unwrap_or_else(|| value.to_string())
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Rational approximation of `x` on the grid `1/den`, rounded to nearest.
pub fn from_f64_on_grid(x: f64, den: i64) -> Rational {
    rat((x * den as f64).round() as i64, den)
}
