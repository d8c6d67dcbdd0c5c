//! Exact rational helpers and a small quadratic-surd field `Q(√d)`.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `"p/q"`, or `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Schema(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Best rational approximation of `x` with denominator at most `max_denom`,
/// taken from the continued-fraction convergents (last one within the bound).
pub fn approximate(x: f64, max_denom: u64) -> Rational {
    assert!(x.is_finite(), "cannot approximate {x}");
    let negative = x < 0.0;
    let mut rest = x.abs();
    let (mut p0, mut q0, mut p1, mut q1): (u128, u128, u128, u128) = (0, 1, 1, 0);
    for _ in 0..64 {
        let a = rest.floor();
        if a > 1e18 {
            break;
        }
        let a_int = a as u128;
        let p2 = a_int * p1 + p0;
        let q2 = a_int * q1 + q0;
        if q2 > max_denom as u128 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = rest - a;
        if frac < 1e-15 {
            break;
        }
        rest = 1.0 / frac;
    }
    if q1 == 0 {
        return Rational::zero();
    }
    let r = Rational::new(BigInt::from(p1), BigInt::from(q1));
    if negative {
        -r
    } else {
        r
    }
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod serde_rational {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// `a + b·√d` with rational `a`, `b` and a fixed squarefree `d > 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Surd {
    pub a: Rational,
    pub b: Rational,
    pub d: u64,
}

impl Surd {
    pub fn new(a: Rational, b: Rational, d: u64) -> Self {
        Surd { a, b, d }
    }

    pub fn rational(a: Rational, d: u64) -> Self {
        Surd { a, b: Rational::zero(), d }
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.a) + to_f64(&self.b) * (self.d as f64).sqrt()
    }

    /// Exact sign of `a + b√d`.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        if sa == sb || sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal {
            return sb;
        }
        // Opposite signs: compare a² with d·b².
        let a2 = &self.a * &self.a;
        let db2 = &self.b * &self.b * Rational::from_integer(BigInt::from(self.d));
        match a2.cmp(&db2) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        (self.clone() - Surd::rational(r.clone(), self.d)).signum()
    }

    pub fn pow(&self, k: u32) -> Surd {
        let mut out = Surd::rational(Rational::one(), self.d);
        for _ in 0..k {
            out = out * self.clone();
        }
        out
    }

    fn check(&self, other: &Surd) {
        assert_eq!(self.d, other.d, "mixing Q(√{}) and Q(√{})", self.d, other.d);
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(self, o: Surd) -> Surd {
        self.check(&o);
        Surd::new(self.a + o.a, self.b + o.b, self.d)
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, o: Surd) -> Surd {
        self.check(&o);
        Surd::new(self.a - o.a, self.b - o.b, self.d)
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd::new(-self.a, -self.b, self.d)
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, o: Surd) -> Surd {
        self.check(&o);
        let d = Rational::from_integer(BigInt::from(self.d));
        Surd::new(
            &self.a * &o.a + &self.b * &o.b * d,
            &self.a * &o.b + &self.b * &o.a,
            self.d,
        )
    }
}

impl Mul<Rational> for Surd {
    type Output = Surd;
    fn mul(self, r: Rational) -> Surd {
        Surd::new(self.a * &r, self.b * r, self.d)
    }
}

/// Exact square root of a nonnegative rational when it is a perfect square.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn approximation_recovers_simple_fractions() {
        assert_eq!(approximate(1.0 / 3.0, 1_000_000), rat(1, 3));
        assert_eq!(approximate(0.375, 1_000_000), rat(3, 8));
        assert_eq!(approximate(0.0, 1_000_000), rat(0, 1));
        assert_eq!(approximate(-2.5, 10), rat(-5, 2));
        let pi = approximate(std::f64::consts::PI, 1000);
        assert_eq!(pi, rat(355, 113));
    }

    #[test]
    fn rational_text_round_trip() {
        for r in [rat(688, 1521), rat(-3, 7), int(4)] {
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn surd_signs() {
        // √3 - 1 > 0, 1 - √3 < 0, 2 - √3 > 0, 7/4 - √3 > 0, 12/7 - √3 < 0
        let s = |a: Rational, b: i64| Surd::new(a, int(b), 3);
        assert_eq!(s(int(-1), 1).signum(), Ordering::Greater);
        assert_eq!(s(int(1), -1).signum(), Ordering::Less);
        assert_eq!(s(rat(7, 4), -1).signum(), Ordering::Greater);
        assert_eq!(s(rat(12, 7), -1).signum(), Ordering::Less);
        assert_eq!(s(int(0), 0).signum(), Ordering::Equal);
    }

    #[test]
    fn perfect_square_roots() {
        assert_eq!(rational_sqrt(&rat(4, 9)), Some(rat(2, 3)));
        assert_eq!(rational_sqrt(&rat(1, 2)), None);
    }

    proptest! {
        #[test]
        fn surd_arithmetic_matches_floats(a in -50i64..50, b in -50i64..50, c in -50i64..50, e in -50i64..50) {
            let x = Surd::new(rat(a, 7), rat(b, 5), 3);
            let y = Surd::new(rat(c, 3), rat(e, 11), 3);
            let prod = (x.clone() * y.clone()).to_f64();
            prop_assert!((prod - x.to_f64() * y.to_f64()).abs() < 1e-9);
            let sign = x.signum();
            let f = x.to_f64();
            if f.abs() > 1e-12 {
                prop_assert_eq!(sign, f.partial_cmp(&0.0).unwrap());
            }
        }
    }
}
