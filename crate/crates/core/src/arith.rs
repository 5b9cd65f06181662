//! Integer and rational helpers shared by every module.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// p-adic valuation of a nonzero integer; `None` for zero.
pub fn val(n: &BigInt, p: &BigInt) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let mut m = n.abs();
    let mut k = 0;
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return Some(k);
        }
        m = q;
        k += 1;
    }
}

/// Valuation with the convention ord(0) = +inf represented by `i64::MAX`.
pub fn ord(n: &BigInt, p: &BigInt) -> i64 {
    val(n, p).map_or(i64::MAX, |v| v as i64)
}

pub fn ord_rat(q: &Rational, p: &BigInt) -> i64 {
    if q.is_zero() {
        return i64::MAX;
    }
    ord(q.numer(), p) - ord(q.denom(), p)
}

/// Exact integer square root, if `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub fn exact_sqrt_rat(q: &Rational) -> Option<Rational> {
    Some(Rational::new(exact_sqrt(q.numer())?, exact_sqrt(q.denom())?))
}

/// Exact rational cube root, if one exists.
pub fn exact_cbrt_rat(q: &Rational) -> Option<Rational> {
    let cb = |n: &BigInt| {
        let r = n.cbrt();
        (&r * &r * &r == *n).then_some(r)
    };
    Some(Rational::new(cb(q.numer())?, cb(q.denom())?))
}

pub fn modp(a: &BigInt, p: &BigInt) -> BigInt {
    a.mod_floor(p)
}

/// Inverse of `a` modulo prime `p`.
pub fn inv_mod(a: &BigInt, p: &BigInt) -> BigInt {
    let e = a.mod_floor(p).extended_gcd(p);
    assert!(e.gcd.is_one(), "not invertible mod p");
    e.x.mod_floor(p)
}

/// Reduce a p-integral rational modulo p.
pub fn rat_mod(q: &Rational, p: &BigInt) -> BigInt {
    modp(&(q.numer() * inv_mod(q.denom(), p)), p)
}

pub fn to_biguint(n: &BigInt) -> BigUint {
    n.magnitude().clone()
}

pub fn from_biguint(n: BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, n)
}

pub fn small(n: &BigInt) -> Option<i64> {
    n.to_i64()
}

/// Parses `a/b` or `a`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n.trim().parse().ok()?, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Repeatedly removes from `x` every prime that also divides `base`.
pub fn strip_common(x: &BigInt, base: &BigInt) -> BigInt {
    let mut x = x.abs();
    if base.is_zero() {
        return x;
    }
    loop {
        let g = x.gcd(base);
        if g.is_one() {
            return x;
        }
        x /= g;
    }
}


/// Serde adapter writing big integers as decimal strings.
pub mod dec {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
