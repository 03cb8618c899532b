//! Numbers `a + b*sqrt2` with rational `a`, `b`, ordered exactly.

use num_traits::Zero;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::ParseError;
use crate::rational::{int, parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExt {
    pub a: Rational,
    pub b: Rational,
}

/// Sign of `x + y*sqrt2`, decided with rational arithmetic only.
pub fn sign_of(x: &Rational, y: &Rational) -> Ordering {
    let sx = x.cmp(&Rational::zero());
    let sy = y.cmp(&Rational::zero());
    match (sx, sy) {
        (Ordering::Equal, s) | (s, Ordering::Equal) => s,
        (a, b) if a == b => a,
        // opposite signs: compare x^2 with 2 y^2
        (sx, _) => {
            let lhs = x * x;
            let rhs = y * y * int(2);
            match lhs.cmp(&rhs) {
                Ordering::Greater => sx,
                Ordering::Less => sx.reverse(),
                Ordering::Equal => Ordering::Equal,
            }
        }
    }
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational) -> Self {
        QuadExt { a, b }
    }

    pub fn rational(a: Rational) -> Self {
        QuadExt { a, b: Rational::zero() }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    /// `p * self + q` for rationals `p`, `q`.
    pub fn affine(&self, p: &Rational, q: &Rational) -> QuadExt {
        QuadExt { a: p * &self.a + q, b: p * &self.b }
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        sign_of(&(&self.a - r), &self.b)
    }

    pub fn parse(s: &str) -> Result<QuadExt, ParseError> {
        let t = s.trim();
        match t.strip_suffix("*sqrt2") {
            None => Ok(QuadExt::rational(parse_rational(t)?)),
            Some(body) => {
                let (a, b) = body
                    .rsplit_once(" + ")
                    .ok_or_else(|| ParseError::new(format!("malformed quadratic number {t:?}")))?;
                Ok(QuadExt::new(parse_rational(a)?, parse_rational(b)?))
            }
        }
    }
}

impl From<Rational> for QuadExt {
    fn from(r: Rational) -> Self {
        QuadExt::rational(r)
    }
}

impl Ord for QuadExt {
    fn cmp(&self, other: &Self) -> Ordering {
        sign_of(&(&self.a - &other.a), &(&self.b - &other.b))
    }
}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &QuadExt {
    type Output = QuadExt;
    fn add(self, o: &QuadExt) -> QuadExt {
        QuadExt::new(&self.a + &o.a, &self.b + &o.b)
    }
}

impl Sub for &QuadExt {
    type Output = QuadExt;
    fn sub(self, o: &QuadExt) -> QuadExt {
        QuadExt::new(&self.a - &o.a, &self.b - &o.b)
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt::new(-&self.a, -&self.b)
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}*sqrt2", self.a, self.b)
        }
    }
}

/// Rational bounds `lo <= x <= hi` tightening with `k` (exact when `x` is rational).
pub fn rational_bounds(x: &QuadExt, k: u64) -> (Rational, Rational) {
    if x.is_rational() {
        return (x.a.clone(), x.a.clone());
    }
    // u/v < sqrt2 < 2v/u for the Pell convergents u^2 - 2v^2 = -1
    let (mut u, mut v) = (num_bigint::BigInt::from(1), num_bigint::BigInt::from(1));
    for _ in 0..k {
        let nu = &u * 3 + &v * 4;
        let nv = &u * 2 + &v * 3;
        u = nu;
        v = nv;
    }
    let below = Rational::new(u.clone(), v.clone());
    let above = Rational::new(v * 2, u);
    let (p, r) = (&x.a + &x.b * &below, &x.a + &x.b * &above);
    if p < r {
        (p, r)
    } else {
        (r, p)
    }
}

/// A rational strictly between `lo < hi`; `None` bounds are infinite.
pub fn rational_between(lo: Option<&QuadExt>, hi: Option<&QuadExt>) -> Rational {
    let one = Rational::from_integer(1.into());
    match (lo, hi) {
        (None, None) => Rational::zero(),
        (Some(l), None) => rational_bounds(l, 1).1.floor() + one,
        (None, Some(h)) => rational_bounds(h, 1).0.ceil() - one,
        (Some(l), Some(h)) => {
            assert!(l < h, "empty interval");
            let mut k = 0;
            loop {
                let (_, lu) = rational_bounds(l, k);
                let (hl, _) = rational_bounds(h, k);
                if lu < hl {
                    return (lu + hl) / Rational::from_integer(2.into());
                }
                if l.is_rational() && h.is_rational() {
                    return (&l.a + &h.a) / Rational::from_integer(2.into());
                }
                k += 1;
            }
        }
    }
}

/// `true` when `x` is strictly positive as a member of Q(sqrt2).
pub fn is_positive(q: &QuadExt) -> bool {
    sign_of(&q.a, &q.b) == Ordering::Greater
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn exact_sign() {
        // sqrt2 - 7/5 > 0, sqrt2 - 3/2 < 0
        assert_eq!(sign_of(&rat(-7, 5), &int(1)), Ordering::Greater);
        assert_eq!(sign_of(&rat(-3, 2), &int(1)), Ordering::Less);
        assert_eq!(sign_of(&rat(3, 2), &int(-1)), Ordering::Greater);
        assert_eq!(sign_of(&int(0), &int(0)), Ordering::Equal);
        // 577/408 lies above sqrt2, 1393/985 and 239/169 below
        assert_eq!(sign_of(&rat(-1393, 985), &int(1)), Ordering::Greater);
        assert_eq!(sign_of(&rat(-577, 408), &int(1)), Ordering::Less);
        assert_eq!(sign_of(&rat(-239, 169), &int(1)), Ordering::Greater);
    }

    #[test]
    fn ordering_and_text() {
        let s2 = QuadExt::new(int(0), int(1));
        assert!(s2 > QuadExt::rational(rat(7, 5)));
        assert!(s2 < QuadExt::rational(rat(3, 2)));
        assert!(!s2.is_rational());
        let q = QuadExt::new(rat(-1, 2), rat(3, 4));
        assert_eq!(q.to_string(), "-1/2 + 3/4*sqrt2");
        assert_eq!(QuadExt::parse(&q.to_string()).unwrap(), q);
        let neg = QuadExt::new(rat(1, 3), rat(-2, 1));
        assert_eq!(QuadExt::parse(&neg.to_string()).unwrap(), neg);
        assert_eq!(QuadExt::parse("5/7").unwrap(), QuadExt::rational(rat(5, 7)));
    }

    #[test]
    fn between_irrationals() {
        let s2 = QuadExt::new(int(0), int(1));
        let t = QuadExt::new(rat(1, 1000000), int(1));
        let r = rational_between(Some(&s2), Some(&t));
        assert!(s2 < QuadExt::rational(r.clone()) && QuadExt::rational(r) < t);
        let r = rational_between(None, Some(&s2));
        assert!(QuadExt::rational(r) < s2);
        let r = rational_between(Some(&QuadExt::rational(int(1))), Some(&QuadExt::rational(int(1) + rat(1, 3))));
        assert_eq!(r, rat(7, 6));
    }

    #[test]
    fn affine_image() {
        let q = QuadExt::new(int(1), int(1));
        let r = q.affine(&int(2), &int(-1));
        assert_eq!(r, QuadExt::new(int(1), int(2)));
    }
}
