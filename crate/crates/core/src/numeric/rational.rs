//! Exact rational scalars: parsing, formatting and a few interval helpers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d`; panics on `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Accepts `"p/q"`, integers and plain decimals such as `"-0.125"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Schema(format!("not a rational literal: {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = parse_int(n.trim()).ok_or_else(bad)?;
        let d: BigInt = parse_int(d.trim()).ok_or_else(bad)?;
        if d.is_zero() {
            return Err(Error::DivZero(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let (neg, whole) = match whole.strip_prefix('-') {
            Some(w) => (true, w),
            None => (false, whole.strip_prefix('+').unwrap_or(whole)),
        };
        if (whole.is_empty() && frac.is_empty())
            || !whole.bytes().all(|b| b.is_ascii_digit())
            || !frac.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(bad());
        }
        let digits = format!("{whole}{frac}");
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let v = Rational::new(n, d);
        return Ok(if neg { -v } else { v });
    }
    parse_int(t).map(Rational::from_integer).ok_or_else(bad)
}

fn parse_int(s: &str) -> Option<BigInt> {
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal rendering rounded half away from zero to `digits` fractional digits.
pub fn format_decimal(r: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = r.abs() * Rational::from_integer(scale.clone());
    let rounded = (scaled + ratio(1, 2)).floor().to_integer();
    let (whole, frac) = rounded.div_rem(&scale);
    let sign = if r.is_negative() && !rounded.is_zero() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{:0>width$}", frac.to_string(), width = digits)
    }
}

/// Nearest `f64`; used only for human-facing output.
pub fn to_f64(r: &Rational) -> f64 {
    format_decimal(r, 20).parse().unwrap_or(f64::NAN)
}

/// The rational with the smallest denominator (then smallest magnitude) in the
/// open interval `(lo, hi)`; `hi = None` means `+∞`.
pub fn simplest_between(lo: &Rational, hi: Option<&Rational>) -> Rational {
    if let Some(h) = hi {
        debug_assert!(lo < h);
        if lo.is_negative() && h.is_positive() {
            return Rational::zero();
        }
        if !h.is_positive() {
            return -simplest_between(&-h, Some(&-lo));
        }
    }
    let fl = lo.floor();
    let next = &fl + Rational::one();
    match hi {
        None => next,
        Some(h) if &next < h => next,
        Some(h) => {
            // lo and hi share the integer part fl.
            let inv_lo = &Rational::one() / (h - &fl);
            let frac_lo = lo - &fl;
            let inv_hi = if frac_lo.is_zero() { None } else { Some(frac_lo.recip()) };
            fl + simplest_between(&inv_lo, inv_hi.as_ref()).recip()
        }
    }
}

/// `2^-k` as a rational.
pub fn pow2_neg(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_literal_forms() {
        assert_eq!(parse_rational("0.5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert_eq!(parse_rational(" 6/4 ").unwrap(), ratio(3, 2));
        assert_eq!(parse_rational("1.5").unwrap(), ratio(3, 2));
        assert_eq!(parse_rational("-.25").unwrap(), ratio(-1, 4));
        assert_eq!(parse_rational("-2/-4").unwrap(), ratio(1, 2));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "abc", "1/", "/2", "1.2.3", "1e5", ".", "--1"] {
            assert_eq!(parse_rational(s).unwrap_err().code(), "E_SCHEMA", "{s}");
        }
        assert_eq!(parse_rational("1/0").unwrap_err().code(), "E_DIV_ZERO");
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(format_rational(&ratio(4, 6)), "2/3");
        assert_eq!(format_rational(&int(-7)), "-7");
        assert_eq!(format_decimal(&ratio(2, 3), 4), "0.6667");
        assert_eq!(format_decimal(&ratio(-1, 8), 2), "-0.13");
        assert_eq!(format_decimal(&ratio(-1, 1000), 2), "0.00");
        assert_eq!(format_decimal(&ratio(7, 2), 0), "4");
    }

    #[test]
    fn simplest_rational_in_interval() {
        assert_eq!(simplest_between(&ratio(1, 3), Some(&ratio(2, 3))), ratio(1, 2));
        assert_eq!(simplest_between(&ratio(3, 10), Some(&ratio(7, 20))), ratio(1, 3));
        assert_eq!(simplest_between(&ratio(-1, 2), Some(&ratio(1, 2))), int(0));
        assert_eq!(simplest_between(&ratio(-7, 3), Some(&ratio(-2, 1))), ratio(-9, 4));
        assert_eq!(simplest_between(&int(2), None), int(3));
        assert_eq!(simplest_between(&int(1), Some(&int(2))), ratio(3, 2));
    }
}
