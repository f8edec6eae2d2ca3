//! Exact rational scalars: parsing of decimal and `p/q` literals, formatting
//! and conversion helpers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Exact rational scalar used throughout the crate.
pub type Q = BigRational;

/// Error produced when a numeric literal cannot be parsed exactly.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid number {text:?} at column {column}: {reason}")]
pub struct NumberError {
    pub text: String,
    /// 1-based column inside the literal where parsing failed.
    pub column: usize,
    pub reason: &'static str,
}

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses an integer, a decimal (`-1.25`, `3e-4`, `.5`) or a fraction (`-7/3`)
/// into an exact rational.
pub fn parse_rational(text: &str) -> Result<Q, NumberError> {
    let err = |column: usize, reason: &'static str| NumberError {
        text: text.to_string(),
        column,
        reason,
    };
    if text.is_empty() {
        return Err(err(1, "empty literal"));
    }
    if let Some((num, den)) = text.split_once('/') {
        let n = parse_integer(num).map_err(|c| err(c, "bad numerator"))?;
        let d = parse_integer(den).map_err(|c| err(num.len() + 1 + c, "bad denominator"))?;
        if d.is_zero() {
            return Err(err(num.len() + 2, "zero denominator"));
        }
        return Ok(Q::new(n, d));
    }
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut negative = false;
    if bytes[0] == b'+' || bytes[0] == b'-' {
        negative = bytes[0] == b'-';
        pos = 1;
    }
    let mut mantissa = BigInt::zero();
    let mut digits = 0usize;
    let mut frac_digits: i64 = 0;
    let mut seen_point = false;
    while pos < bytes.len() {
        let c = bytes[pos];
        match c {
            b'0'..=b'9' => {
                mantissa = mantissa * 10 + BigInt::from(c - b'0');
                digits += 1;
                if seen_point {
                    frac_digits += 1;
                }
            }
            b'.' if !seen_point => seen_point = true,
            b'.' => return Err(err(pos + 1, "second decimal point")),
            b'e' | b'E' => break,
            _ => return Err(err(pos + 1, "unexpected character")),
        }
        pos += 1;
    }
    if digits == 0 {
        return Err(err(pos.max(1), "no digits"));
    }
    let mut exponent: i64 = -frac_digits;
    if pos < bytes.len() {
        let exp_text = &text[pos + 1..];
        let e = parse_integer(exp_text).map_err(|c| err(pos + 1 + c, "bad exponent"))?;
        let e = e.to_i64().ok_or_else(|| err(pos + 2, "exponent out of range"))?;
        if e.abs() > 10_000 {
            return Err(err(pos + 2, "exponent out of range"));
        }
        exponent += e;
    }
    let ten = BigInt::from(10);
    let mut value = if exponent >= 0 {
        Q::from_integer(mantissa * num_traits::pow(ten, exponent as usize))
    } else {
        Q::new(mantissa, num_traits::pow(ten, (-exponent) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Parses a signed decimal integer; on failure returns the 1-based column.
fn parse_integer(text: &str) -> Result<BigInt, usize> {
    let bytes = text.as_bytes();
    if bytes.is_empty() {
        return Err(1);
    }
    let start = usize::from(bytes[0] == b'+' || bytes[0] == b'-');
    if start == bytes.len() {
        return Err(start + 1);
    }
    for (i, b) in bytes.iter().enumerate().skip(start) {
        if !b.is_ascii_digit() {
            return Err(i + 1);
        }
    }
    text.trim_start_matches('+').parse::<BigInt>().map_err(|_| 1)
}

/// Formats as `p/q`, or `p` for integers.
pub fn fraction_string(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Nearest `f64` to `x`.
pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a finite `f64`.
pub fn from_f64_exact(x: f64) -> Option<Q> {
    Q::from_float(x)
}

/// Rounds `x` to the nearest multiple of `1/den` (ties away from zero).
pub fn round_to(x: f64, den: i64) -> Q {
    let scaled = (x * den as f64).round() as i64;
    qf(scaled, den)
}
