//! Exact rational numbers and their string forms.
//!
//! Every quantity a game document carries (probabilities, payoffs, rates,
//! bounds) is an arbitrary-precision rational. The accepted string forms are
//! `"p/q"`, a plain integer `"p"`, and exact decimals like `"-3.25"` or
//! `"1.5e-3"`; all of them convert without rounding.

use num::bigint::BigInt;
use num::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;

pub type Rational = num::BigRational;

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"`, or an exact decimal (optionally with a base-10
/// exponent) into a rational. The error message quotes the offending token.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let t = text.trim();
    if t.is_empty() {
        return Err("empty number".to_string());
    }
    if let Some((num, den)) = t.split_once('/') {
        let n = parse_bigint(num, t)?;
        let d = parse_bigint(den, t)?;
        if d.is_zero() {
            return Err(format!("zero denominator in \"{t}\""));
        }
        return Ok(Rational::new(n, d));
    }
    // Split off a decimal exponent, if any.
    let (mantissa, exp) = match t.split_once(['e', 'E']) {
        Some((m, e)) => {
            let exp: i64 = e
                .parse()
                .map_err(|_| format!("bad exponent in \"{t}\""))?;
            (m, exp)
        }
        None => (t, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if !frac_part.is_empty() && !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("cannot parse number \"{t}\""));
    }
    let digits = if int_part.is_empty() || int_part == "-" || int_part == "+" {
        if frac_part.is_empty() {
            return Err(format!("cannot parse number \"{t}\""));
        }
        format!("{int_part}0{frac_part}")
    } else {
        format!("{int_part}{frac_part}")
    };
    let n = parse_bigint(&digits, t)?;
    let scale = frac_part.len() as i64 - exp;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::new(n, ten.pow(scale as u32))
    } else {
        Rational::from_integer(n * ten.pow((-scale) as u32))
    };
    Ok(value)
}

fn parse_bigint(s: &str, whole: &str) -> Result<BigInt, String> {
    BigInt::from_str(s.trim()).map_err(|_| format!("cannot parse number \"{whole}\""))
}

/// Lowest-terms string form: `"p"` when the denominator is 1, else `"p/q"`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest binary64 value.
pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Out-of-range only for astronomically large terms; saturate by sign.
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// The exact rational equal to a finite binary64 value.
pub fn f64_to_rational(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}
