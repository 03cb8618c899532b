//! Exact rationals and their canonical text form.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;

use crate::error::ParseError;

/// Arbitrary-precision rational, always reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parse `p` or `p/q`. Surrounding whitespace is ignored.
pub fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    let t = s.trim();
    let bad = || ParseError::new(format!("not a rational: {t:?}"));
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.is_zero() || d.is_negative() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Canonical text: `p` for integers, `p/q` otherwise.
pub fn fmt_rational(r: &Rational) -> String {
    r.to_string()
}

/// Midpoint of two rationals.
pub fn mid(a: &Rational, b: &Rational) -> Rational {
    (a + b) / int(2)
}

/// Integer power with exponent `k >= 0`.
pub fn pow(r: &Rational, k: u64) -> Rational {
    let mut acc = one();
    let mut base = r.clone();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms() {
        let r = rat(6, -4);
        assert_eq!(r, rat(-3, 2));
        assert!(r.denom().is_positive());
        assert_eq!(fmt_rational(&r), "-3/2");
        assert_eq!(fmt_rational(&int(5)), "5");
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["0", "-7", "3/2", "-22/7", "123456789012345678901234567891/2"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(fmt_rational(&r), s);
        }
        assert_eq!(parse_rational(" 4/8 ").unwrap(), rat(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn powers() {
        assert_eq!(pow(&rat(1, 2), 0), one());
        assert_eq!(pow(&rat(1, 2), 10), rat(1, 1024));
        assert_eq!(pow(&rat(-2, 3), 3), rat(-8, 27));
    }
}
