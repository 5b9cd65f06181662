//! Arbitrary-precision reals backed by `astro_float::BigFloat`.
//!
//! Every value carries the precision (in bits) it was produced at; binary
//! operations run at the larger of the two operand precisions.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as ISign};
use num_rational::BigRational;

pub const DEFAULT_PRECISION: usize = 192;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    // Constant cache only (pi, ln 2, ...); holds no precision state.
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

fn with_cc<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

#[derive(Clone)]
pub struct Real {
    v: BigFloat,
    prec: usize,
}

impl Real {
    fn wrap(v: BigFloat, prec: usize) -> Real {
        Real { v, prec }
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn zero(prec: usize) -> Real {
        Real::from_i64(0, prec)
    }

    pub fn one(prec: usize) -> Real {
        Real::from_i64(1, prec)
    }

    pub fn from_i64(n: i64, prec: usize) -> Real {
        Real::wrap(BigFloat::from_i64(n, prec), prec)
    }

    pub fn from_f64(f: f64, prec: usize) -> Real {
        Real::wrap(BigFloat::from_f64(f, prec), prec)
    }

    pub fn from_int(n: &BigInt, prec: usize) -> Real {
        let (sign, digits) = n.to_u64_digits();
        if digits.is_empty() {
            return Real::zero(prec);
        }
        let s = if sign == ISign::Minus { Sign::Neg } else { Sign::Pos };
        let e = (64 * digits.len()) as i32;
        let mut v = BigFloat::from_words(&digits, s, e);
        v.set_precision(prec, RM).expect("precision");
        Real::wrap(v, prec)
    }

    pub fn from_rat(q: &BigRational, prec: usize) -> Real {
        let n = Real::from_int(q.numer(), prec + 64);
        let d = Real::from_int(q.denom(), prec + 64);
        let mut r = n.v.div(&d.v, prec, RM);
        r.set_precision(prec, RM).expect("precision");
        Real::wrap(r, prec)
    }

    /// Parses a decimal literal such as `5.9e43` or `1.07`.
    pub fn parse(s: &str, prec: usize) -> Real {
        let v = with_cc(|cc| BigFloat::parse(s, Radix::Dec, prec, RM, cc));
        assert!(!v.is_nan(), "bad decimal literal {s}");
        Real::wrap(v, prec)
    }

    pub fn pi(prec: usize) -> Real {
        Real::wrap(with_cc(|cc| cc.pi(prec, RM)), prec)
    }

    pub fn with_precision(&self, prec: usize) -> Real {
        let mut v = self.v.clone();
        v.set_precision(prec, RM).expect("precision");
        Real::wrap(v, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        !self.v.is_zero() && self.v.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        !self.v.is_zero() && self.v.is_positive()
    }

    pub fn is_finite(&self) -> bool {
        !self.v.is_nan() && !self.v.is_inf()
    }

    pub fn abs(&self) -> Real {
        Real::wrap(self.v.abs(), self.prec)
    }

    pub fn ln(&self) -> Real {
        Real::wrap(with_cc(|cc| self.v.ln(self.prec, RM, cc)), self.prec)
    }

    pub fn exp(&self) -> Real {
        Real::wrap(with_cc(|cc| self.v.exp(self.prec, RM, cc)), self.prec)
    }

    pub fn sqrt(&self) -> Real {
        Real::wrap(self.v.sqrt(self.prec, RM), self.prec)
    }

    pub fn powi(&self, n: usize) -> Real {
        Real::wrap(self.v.powi(n, self.prec, RM), self.prec)
    }

    pub fn pow(&self, e: &Real) -> Real {
        let p = self.prec.max(e.prec);
        Real::wrap(with_cc(|cc| self.v.pow(&e.v, p, RM, cc)), p)
    }

    pub fn max(&self, o: &Real) -> Real {
        if self >= o {
            self.clone()
        } else {
            o.clone()
        }
    }

    pub fn min(&self, o: &Real) -> Real {
        if self <= o {
            self.clone()
        } else {
            o.clone()
        }
    }

    pub fn mul_i64(&self, k: i64) -> Real {
        self * &Real::from_i64(k, self.prec)
    }

    pub fn div_i64(&self, k: i64) -> Real {
        self / &Real::from_i64(k, self.prec)
    }

    /// Lossy conversion, mainly for rounding small integers and diagnostics.
    pub fn to_f64(&self) -> f64 {
        if self.v.is_zero() {
            return 0.0;
        }
        if self.v.is_nan() {
            return f64::NAN;
        }
        if self.v.is_inf() {
            return if self.v.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        let (m, _, s, e, _) = self.v.as_raw_parts().expect("finite");
        let top = *m.last().unwrap() as f64 / 18446744073709551616.0;
        let mag = top * 2f64.powi(e);
        if s == Sign::Neg {
            -mag
        } else {
            mag
        }
    }

    /// Nearest integer (ties away from zero); panics on non-finite input.
    pub fn round_to_int(&self) -> BigInt {
        assert!(self.is_finite());
        let half = Real::parse("0.5", self.prec);
        let t = if self.is_negative() { self - &half } else { self + &half };
        let i = t.v.int();
        real_int_to_bigint(&i)
    }

    /// Scientific-notation decimal string with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.v.is_zero() {
            return "0".to_string();
        }
        let prec = self.prec;
        let neg = self.is_negative();
        let a = self.abs();
        // Scale into [1, 10) by a power of ten estimated from the binary exponent.
        let e2 = a.v.exponent().unwrap_or(0) as f64;
        let mut e10 = ((e2 - 1.0) * std::f64::consts::LOG10_2).floor() as i64;
        let ten = Real::from_i64(10, prec + 32);
        let scaled = |k: i64| -> Real {
            let p = ten.powi(k.unsigned_abs() as usize);
            if k >= 0 {
                &a.with_precision(prec + 32) / &p
            } else {
                &a.with_precision(prec + 32) * &p
            }
        };
        let mut m = scaled(e10);
        while m >= ten {
            e10 += 1;
            m = scaled(e10);
        }
        while m < Real::one(prec) {
            e10 -= 1;
            m = scaled(e10);
        }
        let shift = ten.powi(digits.saturating_sub(1));
        let mut mant = (&m * &shift).round_to_int();
        let limit = BigInt::from(10u8).pow(digits as u32);
        if mant >= limit {
            mant /= 10;
            e10 += 1;
        }
        let s = mant.to_string();
        let (head, tail) = s.split_at(1);
        let tail = tail.trim_end_matches('0');
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(head);
        if !tail.is_empty() {
            out.push('.');
            out.push_str(tail);
        }
        if e10 != 0 {
            out.push_str(&format!("e{e10}"));
        }
        out
    }
}

fn real_int_to_bigint(v: &BigFloat) -> BigInt {
    if v.is_zero() {
        return BigInt::from(0);
    }
    let (m, _, s, e, _) = v.as_raw_parts().expect("finite");
    let mut n = BigInt::from(0u8);
    for w in m.iter().rev() {
        n = (n << 64) + BigInt::from(*w);
    }
    let shift = e as i64 - 64 * m.len() as i64;
    let n = if shift >= 0 { n << shift as usize } else { n >> (-shift) as usize };
    if s == Sign::Neg {
        -n
    } else {
        n
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (self.prec as f64 * std::f64::consts::LOG10_2) as usize;
        write!(f, "{}", self.to_decimal(digits.max(1)))
    }
}

impl PartialEq for Real {
    fn eq(&self, o: &Real) -> bool {
        self.v.cmp(&o.v) == Some(0)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, o: &Real) -> Option<Ordering> {
        self.v.cmp(&o.v).map(|c| c.cmp(&0))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $m(self, o: &Real) -> Real {
                let p = self.prec.max(o.prec);
                Real::wrap(self.v.$m(&o.v, p, RM), p)
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, o: Real) -> Real {
                (&self).$m(&o)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, o: &Real) -> Real {
                (&self).$m(o)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $m(self, o: Real) -> Real {
                self.$m(&o)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(BigFloat::neg(&self.v), self.prec)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(BigFloat::neg(&self.v), self.prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_roundtrip() {
        let n: BigInt = "-123456789012345678901234567890123".parse().unwrap();
        let r = Real::from_int(&n, 256);
        assert_eq!(r.round_to_int(), n);
        assert_eq!(Real::from_i64(37, 64).round_to_int(), BigInt::from(37));
    }

    #[test]
    fn ln_and_exp() {
        let two = Real::from_i64(2, 192);
        let l = two.ln();
        assert!((l.to_f64() - std::f64::consts::LN_2).abs() < 1e-15);
        let back = l.exp();
        assert!((&back - &two).abs() < Real::parse("1e-50", 192));
    }

    #[test]
    fn decimal_output() {
        assert_eq!(Real::parse("2.56e14", 128).to_decimal(6), "2.56e14");
        assert_eq!(Real::from_i64(-5, 64).to_decimal(4), "-5");
        assert_eq!(Real::parse("0.0255", 128).to_decimal(3), "2.55e-2");
    }

    #[test]
    fn rational_conversion() {
        let q = BigRational::new(BigInt::from(1), BigInt::from(3));
        let r = Real::from_rat(&q, 192);
        assert!((r.to_f64() - 1.0 / 3.0).abs() < 1e-16);
    }
}
