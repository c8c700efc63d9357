//! Exact rational helpers on top of `num-rational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("malformed rational `{0}`")]
pub struct ParseRationalError(pub String);

pub fn int(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Falling factorial `[a]_b` as an exact integer; zero when `b > a`.
pub fn falling_factorial(a: u64, b: u64) -> BigInt {
    if b > a {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..b {
        acc *= a - i;
    }
    acc
}

/// Canonical `num/den` string; integers keep the `/1`.
pub fn to_ratio_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_ratio(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| err())?;
    let d: BigInt = d.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(n, d))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Sign, `sig` rounded significant digits and decimal exponent of a nonzero value.
fn significant(r: &Rational, sig: usize) -> (bool, String, i64) {
    let neg = r.is_negative();
    let a = r.abs();
    // Find e with 10^e <= a < 10^(e+1).
    let mut e: i64 = (a.numer().bits() as i64 - a.denom().bits() as i64) * 3 / 10;
    loop {
        if a < pow10(e) {
            e -= 1;
        } else if a >= pow10(e + 1) {
            e += 1;
        } else {
            break;
        }
    }
    let scaled = &a * pow10(sig as i64 - 1 - e);
    // Round half up.
    let (q, rem) = scaled.numer().div_rem(scaled.denom());
    let mut digits = if rem * 2u32 >= *scaled.denom() {
        q + 1u32
    } else {
        q
    };
    let ten = BigInt::from(10u32);
    if digits == ten.pow(sig as u32) {
        digits /= &ten;
        e += 1;
    }
    (neg, digits.to_string(), e)
}

/// Decimal rendering with `sig` significant digits, computed from the exact
/// value so it never depends on f64 rounding.
pub fn to_decimal(r: &Rational, sig: usize) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let (neg, s, e) = significant(r, sig);
    let shift = sig as i64 - 1 - e;
    let body = if shift <= 0 {
        let mut s = s;
        s.extend(std::iter::repeat_n('0', (-shift) as usize));
        s
    } else if (shift as usize) < s.len() {
        let (i, f) = s.split_at(s.len() - shift as usize);
        trim_fraction(format!("{i}.{f}"))
    } else {
        let zeros = shift as usize - s.len();
        trim_fraction(format!("0.{}{}", "0".repeat(zeros), s))
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Scientific rendering such as `1.25e-7`, exact like [`to_decimal`].
pub fn to_scientific(r: &Rational, sig: usize) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let (neg, s, e) = significant(r, sig);
    let (head, tail) = s.split_at(1);
    let mantissa = trim_fraction(format!("{head}.{tail}"));
    format!("{}{mantissa}e{e}", if neg { "-" } else { "" })
}

/// Plain decimal for moderate magnitudes, scientific otherwise.
pub fn to_display(r: &Rational, sig: usize) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let (_, _, e) = significant(r, sig);
    if (-6..=15).contains(&e) {
        to_decimal(r, sig)
    } else {
        to_scientific(r, sig)
    }
}

/// `log10 |r|` for nonzero `r`, accurate far outside the f64 range.
pub fn log10_abs(r: &Rational) -> f64 {
    fn log10_int(v: &BigInt) -> f64 {
        let bits = v.bits();
        if bits <= 1000 {
            return v.to_f64().unwrap_or(f64::NAN).abs().log10();
        }
        let shift = bits - 60;
        let top = (v.abs() >> shift).to_f64().unwrap_or(f64::NAN);
        top.log10() + shift as f64 * std::f64::consts::LOG10_2
    }
    log10_int(r.numer()) - log10_int(r.denom())
}

fn trim_fraction(s: String) -> String {
    let t = s.trim_end_matches('0');
    t.strip_suffix('.').unwrap_or(t).to_string()
}

fn pow10(e: i64) -> Rational {
    let p = BigInt::from(10u32).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

/// Smallest integer `>= r`.
pub fn ceil_i128(r: &Rational) -> Option<i128> {
    r.ceil().to_integer().to_i128()
}

pub fn min_rational(a: Rational, b: Rational) -> Rational {
    if a <= b {
        a
    } else {
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scientific_and_log() {
        assert_eq!(to_scientific(&ratio(1, 8000), 3), "1.25e-4");
        assert_eq!(to_scientific(&ratio(-9_999, 1), 2), "-1e4");
        assert_eq!(to_display(&ratio(1, 8), 12), "0.125");
        let tiny = Rational::new(BigInt::one(), BigInt::from(10u32).pow(5000));
        assert_eq!(to_display(&(tiny.clone() * int(3)), 4), "3e-5000");
        assert!((log10_abs(&tiny) + 5000.0).abs() < 1e-9);
        assert!((log10_abs(&ratio(1000, 1)) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn ratio_strings_round_trip() {
        for r in [ratio(7, 207), ratio(-3, 4), int(5), Rational::zero()] {
            assert_eq!(parse_ratio(&to_ratio_string(&r)).unwrap(), r);
        }
        assert_eq!(to_ratio_string(&int(5)), "5/1");
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("x").is_err());
    }

    #[test]
    fn decimals() {
        assert_eq!(to_decimal(&ratio(1, 19), 12), "0.0526315789474");
        assert_eq!(to_decimal(&ratio(2, 3), 4), "0.6667");
        assert_eq!(to_decimal(&ratio(200, 147), 12), "1.36054421769");
        assert_eq!(to_decimal(&int(12), 12), "12");
        assert_eq!(to_decimal(&ratio(1, 8), 12), "0.125");
        assert_eq!(to_decimal(&ratio(-1, 3), 3), "-0.333");
        assert_eq!(to_decimal(&ratio(9999, 10000), 3), "1");
        assert_eq!(to_decimal(&int(123456), 2), "120000");
    }

    #[test]
    fn falling() {
        assert_eq!(falling_factorial(5, 2), BigInt::from(20));
        assert_eq!(falling_factorial(3, 0), BigInt::one());
        assert_eq!(falling_factorial(1, 2), BigInt::zero());
    }
}
