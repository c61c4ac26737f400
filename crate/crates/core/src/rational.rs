//! Exact rational scalars.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational token")]
    Empty,
    #[error("malformed rational `{0}` (expected `p` or `p/q`)")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// `p/q` as a rational. Panics on `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Parses `p` or `p/q` with decimal integers; the denominator must be
/// strictly positive as written.
pub fn parse_rational(token: &str) -> Result<Rational, ParseRationalError> {
    let token = token.trim();
    if token.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let malformed = || ParseRationalError::Malformed(token.to_string());
    let parse_int = |s: &str, allow_sign: bool| -> Result<BigInt, ParseRationalError> {
        let digits = if allow_sign {
            s.strip_prefix('-')
                .or_else(|| s.strip_prefix('+'))
                .unwrap_or(s)
        } else {
            s
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        s.parse::<BigInt>().map_err(|_| malformed())
    };
    match token.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(token, true)?)),
        Some((p, q)) => {
            let numer = parse_int(p, true)?;
            let denom = parse_int(q, false)?;
            if denom.is_zero() {
                return Err(ParseRationalError::ZeroDenominator(token.to_string()));
            }
            Ok(Rational::new(numer, denom))
        }
    }
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn format_vector(xs: &[Rational]) -> String {
    let parts: Vec<String> = xs.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

/// Infinity norm of the difference of two equal-length vectors.
pub fn max_abs_diff(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .max()
        .unwrap_or_else(Rational::zero)
}
