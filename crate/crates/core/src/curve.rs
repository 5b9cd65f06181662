//! Weierstrass models y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6 and the
//! group law on their rational points.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{exact_sqrt, fmt_rational, parse_rational, Rational};
use crate::error::{Error, Result};

/// Weierstrass model with rational coefficients, used for intermediate
/// models (Vélu codomains, changes of variables) before they are made integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatModel {
    pub a: [Rational; 5],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BInvariants<T> {
    pub b2: T,
    pub b4: T,
    pub b6: T,
    pub b8: T,
    pub c4: T,
    pub c6: T,
    pub disc: T,
}

macro_rules! binv {
    ($a1:expr, $a2:expr, $a3:expr, $a4:expr, $a6:expr, $k:expr) => {{
        let (a1, a2, a3, a4, a6) = ($a1, $a2, $a3, $a4, $a6);
        let k = |n: i64| -> _ { $k(n) };
        let b2 = a1 * a1 + k(4) * a2;
        let b4 = k(2) * a4 + a1 * a3;
        let b6 = a3 * a3 + k(4) * a6;
        let b8 = a1 * a1 * a6 + k(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        let c4 = &b2 * &b2 - k(24) * &b4;
        let c6 = -(&b2 * &b2 * &b2) + k(36) * &b2 * &b4 - k(216) * &b6;
        let disc = -(&b2 * &b2 * &b8) - k(8) * &b4 * &b4 * &b4 - k(27) * &b6 * &b6 + k(9) * &b2 * &b4 * &b6;
        BInvariants { b2, b4, b6, b8, c4, c6, disc }
    }};
}

pub fn b_invariants_int(a: &[BigInt; 5]) -> BInvariants<BigInt> {
    binv!(&a[0], &a[1], &a[2], &a[3], &a[4], BigInt::from)
}

pub fn b_invariants_rat(a: &[Rational; 5]) -> BInvariants<Rational> {
    binv!(&a[0], &a[1], &a[2], &a[3], &a[4], |n: i64| Rational::from_integer(BigInt::from(n)))
}

impl RatModel {
    pub fn invariants(&self) -> BInvariants<Rational> {
        b_invariants_rat(&self.a)
    }

    pub fn transform(&self, iso: &Iso) -> RatModel {
        let [a1, a2, a3, a4, a6] = &self.a;
        let Iso { u, r, s, t } = iso;
        let two = Rational::from_integer(2.into());
        let three = Rational::from_integer(3.into());
        let n1 = a1 + &two * s;
        let n2 = a2 - s * a1 + &three * r - s * s;
        let n3 = a3 + r * a1 + &two * t;
        let n4 = a4 - s * a3 + &two * r * a2 - (t + r * s) * a1 + &three * r * r - &two * s * t;
        let n6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
        let u2 = u * u;
        let u3 = &u2 * u;
        let u4 = &u2 * &u2;
        let u6 = &u3 * &u3;
        RatModel { a: [n1 / u, n2 / u2, n3 / u3, n4 / u4, n6 / u6] }
    }

    pub fn is_integral(&self) -> bool {
        self.a.iter().all(|x| x.is_integer())
    }

    /// Scale by u = 1/D so every coefficient becomes integral.
    pub fn integral_scaling(&self) -> Iso {
        let mut d = BigInt::one();
        for x in &self.a {
            d = d.lcm(x.denom());
        }
        Iso::scaling(Rational::new(BigInt::one(), d))
    }

    pub fn to_curve(&self) -> Result<Curve> {
        assert!(self.is_integral(), "model must be integral");
        let a: Vec<BigInt> = self.a.iter().map(|x| x.to_integer()).collect();
        Curve::new(a[0].clone(), a[1].clone(), a[2].clone(), a[3].clone(), a[4].clone())
    }
}

/// Change of variables x = u²x' + r, y = u³y' + su²x' + t.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Iso {
    pub u: Rational,
    pub r: Rational,
    pub s: Rational,
    pub t: Rational,
}

impl Iso {
    pub fn identity() -> Iso {
        Iso::scaling(Rational::one())
    }

    pub fn scaling(u: Rational) -> Iso {
        Iso { u, r: Rational::zero(), s: Rational::zero(), t: Rational::zero() }
    }

    pub fn rst(r: Rational, s: Rational, t: Rational) -> Iso {
        Iso { u: Rational::one(), r, s, t }
    }

    /// First apply `self`, then `next` on the resulting model.
    pub fn then(&self, next: &Iso) -> Iso {
        let u2 = &self.u * &self.u;
        Iso {
            u: &self.u * &next.u,
            r: &self.r + &u2 * &next.r,
            s: &self.s + &self.u * &next.s,
            t: &self.t + &self.s * &u2 * &next.r + &u2 * &self.u * &next.t,
        }
    }

    /// Image of a point in the new coordinates.
    pub fn map_point(&self, p: &Point) -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => {
                let u2 = &self.u * &self.u;
                let xr = x - &self.r;
                let nx = &xr / &u2;
                let ny = (y - &self.s * &xr - &self.t) / (&u2 * &self.u);
                Point::Affine { x: nx, y: ny }
            }
        }
    }

    pub fn inverse(&self) -> Iso {
        let ui = Rational::one() / &self.u;
        let ui2 = &ui * &ui;
        Iso {
            u: ui.clone(),
            r: -&self.r * &ui2,
            s: -&self.s * &ui,
            t: (&self.r * &self.s - &self.t) * &ui2 * &ui,
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Curve {
    a: [BigInt; 5],
    inv: BInvariants<BigInt>,
    j: Rational,
}

impl Curve {
    pub fn new(a1: BigInt, a2: BigInt, a3: BigInt, a4: BigInt, a6: BigInt) -> Result<Curve> {
        let a = [a1, a2, a3, a4, a6];
        let inv = b_invariants_int(&a);
        if inv.disc.is_zero() {
            return Err(Error::SingularCurve);
        }
        let j = Rational::new(&inv.c4 * &inv.c4 * &inv.c4, inv.disc.clone());
        Ok(Curve { a, inv, j })
    }

    pub fn from_ints(a: [i64; 5]) -> Result<Curve> {
        let [a1, a2, a3, a4, a6] = a.map(BigInt::from);
        Curve::new(a1, a2, a3, a4, a6)
    }

    /// The curve y² = x³ − A·x.
    pub fn ea(a: i64) -> Curve {
        Curve::from_ints([0, 0, 0, -a, 0]).expect("A ≠ 0")
    }

    pub fn a(&self) -> &[BigInt; 5] {
        &self.a
    }
    pub fn a1(&self) -> &BigInt {
        &self.a[0]
    }
    pub fn a2(&self) -> &BigInt {
        &self.a[1]
    }
    pub fn a3(&self) -> &BigInt {
        &self.a[2]
    }
    pub fn a4(&self) -> &BigInt {
        &self.a[3]
    }
    pub fn a6(&self) -> &BigInt {
        &self.a[4]
    }
    pub fn b2(&self) -> &BigInt {
        &self.inv.b2
    }
    pub fn b4(&self) -> &BigInt {
        &self.inv.b4
    }
    pub fn b6(&self) -> &BigInt {
        &self.inv.b6
    }
    pub fn b8(&self) -> &BigInt {
        &self.inv.b8
    }
    pub fn c4(&self) -> &BigInt {
        &self.inv.c4
    }
    pub fn c6(&self) -> &BigInt {
        &self.inv.c6
    }
    pub fn disc(&self) -> &BigInt {
        &self.inv.disc
    }
    pub fn j(&self) -> &Rational {
        &self.j
    }

    pub fn rat_model(&self) -> RatModel {
        RatModel { a: self.a.clone().map(Rational::from_integer) }
    }

    /// a1, a3 ∈ {0, 1} and a2 ∈ {−1, 0, 1}.
    pub fn is_standardized(&self) -> bool {
        let bit = |x: &BigInt| x.is_zero() || x.is_one();
        bit(self.a1()) && bit(self.a3()) && self.a2().abs() <= BigInt::one()
    }

    /// 4x³ + b2x² + 2b4x + b6, i.e. (2y + a1x + a3)² on the curve.
    pub fn two_torsion_poly(&self) -> crate::poly::Poly {
        crate::poly::Poly::from_bigints(&[self.b6().clone(), BigInt::from(2) * self.b4(), self.b2().clone(), BigInt::from(4)])
    }

    pub fn contains(&self, p: &Point) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine { x, y } => {
                let [a1, a2, a3, a4, a6] = self.a.clone().map(Rational::from_integer);
                y * y + &a1 * x * y + &a3 * y == x * x * x + &a2 * x * x + &a4 * x + &a6
            }
        }
    }

    pub fn check(&self, p: &Point) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::PointNotOnCurve)
        }
    }

    pub fn neg(&self, p: &Point) -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => {
                let a1 = Rational::from_integer(self.a1().clone());
                let a3 = Rational::from_integer(self.a3().clone());
                Point::Affine { x: x.clone(), y: -y - a1 * x - a3 }
            }
        }
    }

    fn add_unchecked(&self, p: &Point, q: &Point) -> Point {
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Infinity, _) => return q.clone(),
            (_, Point::Infinity) => return p.clone(),
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let [a1, a2, a3, a4, a6] = self.a.clone().map(Rational::from_integer);
        let (lam, nu);
        if x1 == x2 {
            let den = y1 + y2 + &a1 * x2 + &a3;
            if den.is_zero() {
                return Point::Infinity;
            }
            let two = Rational::from_integer(2.into());
            let three = Rational::from_integer(3.into());
            let d = &two * y1 + &a1 * x1 + &a3;
            lam = (&three * x1 * x1 + &two * &a2 * x1 + &a4 - &a1 * y1) / &d;
            nu = (-(x1 * x1 * x1) + &a4 * x1 + &two * &a6 - &a3 * y1) / &d;
        } else {
            let dx = x2 - x1;
            lam = (y2 - y1) / &dx;
            nu = (y1 * x2 - y2 * x1) / &dx;
        }
        let x3 = &lam * &lam + &a1 * &lam - &a2 - x1 - x2;
        let y3 = -(&lam + &a1) * &x3 - &nu - &a3;
        Point::Affine { x: x3, y: y3 }
    }

    pub fn add(&self, p: &Point, q: &Point) -> Result<Point> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.add_unchecked(p, q))
    }

    pub fn double(&self, p: &Point) -> Point {
        self.add_unchecked(p, p)
    }

    /// [n]P by signed binary (NAF) double-and-add.
    pub fn mul(&self, n: i64, p: &Point) -> Result<Point> {
        self.check(p)?;
        Ok(self.mul_unchecked(&BigInt::from(n), p))
    }

    pub fn mul_big(&self, n: &BigInt, p: &Point) -> Result<Point> {
        self.check(p)?;
        Ok(self.mul_unchecked(n, p))
    }

    pub(crate) fn mul_unchecked(&self, n: &BigInt, p: &Point) -> Point {
        if n.is_negative() {
            let q = self.mul_unchecked(&-n, p);
            return self.neg(&q);
        }
        let negp = self.neg(p);
        let mut digits = Vec::new();
        let mut k = n.clone();
        let four = BigInt::from(4);
        while !k.is_zero() {
            if k.is_odd() {
                let m = k.mod_floor(&four);
                let d: i8 = if m == BigInt::one() { 1 } else { -1 };
                k -= BigInt::from(d);
                digits.push(d);
            } else {
                digits.push(0);
            }
            k >>= 1;
        }
        let mut acc = Point::Infinity;
        for d in digits.iter().rev() {
            acc = self.double(&acc);
            match d {
                1 => acc = self.add_unchecked(&acc, p),
                -1 => acc = self.add_unchecked(&acc, &negp),
                _ => {}
            }
        }
        acc
    }

    pub fn transform(&self, iso: &Iso) -> RatModel {
        self.rat_model().transform(iso)
    }

    pub fn parse(s: &str) -> Result<Curve> {
        let t = s.trim().trim_start_matches('[').trim_end_matches(']');
        let parts: Vec<&str> = t.split(',').map(str::trim).collect();
        if parts.len() != 5 {
            return Err(Error::Parse(format!("expected five coefficients in {s:?}")));
        }
        let mut a = Vec::with_capacity(5);
        for x in parts {
            a.push(x.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad integer {x:?}")))?);
        }
        let [a1, a2, a3, a4, a6]: [BigInt; 5] = a.try_into().unwrap();
        Curve::new(a1, a2, a3, a4, a6)
    }

    pub fn to_text(&self) -> String {
        format!("[{},{},{},{},{}]", self.a[0], self.a[1], self.a[2], self.a[3], self.a[4])
    }
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Curve{}", self.to_text())
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Point {
    Infinity,
    Affine { x: Rational, y: Rational },
}

/// x = A/B², y = C/B³ in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Abc {
    #[serde(with = "crate::arith::dec")]
    pub a: BigInt,
    #[serde(with = "crate::arith::dec")]
    pub b: BigInt,
    #[serde(with = "crate::arith::dec")]
    pub c: BigInt,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Point {
        Point::Affine { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Point {
        Point::Affine { x: Rational::from_integer(x.into()), y: Rational::from_integer(y.into()) }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn x(&self) -> Option<&Rational> {
        match self {
            Point::Infinity => None,
            Point::Affine { x, .. } => Some(x),
        }
    }

    pub fn y(&self) -> Option<&Rational> {
        match self {
            Point::Infinity => None,
            Point::Affine { y, .. } => Some(y),
        }
    }

    /// The triple (A_P, B_P, C_P); `None` at infinity or when the
    /// denominators are not of the form B², B³ (non-integral model).
    pub fn abc(&self) -> Option<Abc> {
        let (x, y) = match self {
            Point::Infinity => return None,
            Point::Affine { x, y } => (x, y),
        };
        let b = exact_sqrt(x.denom())?;
        if *y.denom() != &b * &b * &b {
            return None;
        }
        Some(Abc { a: x.numer().clone(), b, c: y.numer().clone() })
    }

    /// B_P, with B = 0 standing for the point at infinity.
    pub fn denom_b(&self) -> BigInt {
        self.abc().map_or_else(BigInt::zero, |t| t.b)
    }

    pub fn parse(s: &str) -> Result<Point> {
        let s = s.trim();
        if s == "inf" {
            return Ok(Point::Infinity);
        }
        let (xs, ys) = s.split_once(',').ok_or_else(|| Error::Parse(format!("bad point {s:?}")))?;
        let x = parse_rational(xs).ok_or_else(|| Error::Parse(format!("bad x {xs:?}")))?;
        let y = parse_rational(ys).ok_or_else(|| Error::Parse(format!("bad y {ys:?}")))?;
        Ok(Point::Affine { x, y })
    }

    pub fn to_text(&self) -> String {
        match self {
            Point::Infinity => "inf".into(),
            Point::Affine { x, y } => format!("{},{}", fmt_rational(x), fmt_rational(y)),
        }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_text())
    }
}

/// Finds an isomorphism taking `from` to `to` (u > 0), if one exists over ℚ.
pub fn isomorphism(from: &RatModel, to: &RatModel) -> Option<Iso> {
    let fi = from.invariants();
    let ti = to.invariants();
    let u2 = if !fi.c6.is_zero() && !fi.c4.is_zero() {
        if ti.c6.is_zero() || ti.c4.is_zero() {
            return None;
        }
        // c4' = c4/u⁴, c6' = c6/u⁶ ⇒ u² = (c6/c6')/(c4/c4')
        (&fi.c6 / &ti.c6) / (&fi.c4 / &ti.c4)
    } else if fi.c4.is_zero() {
        if !ti.c4.is_zero() || ti.c6.is_zero() {
            return None;
        }
        crate::arith::exact_cbrt_rat(&(&fi.c6 / &ti.c6))?
    } else {
        if !ti.c6.is_zero() || ti.c4.is_zero() {
            return None;
        }
        crate::arith::exact_sqrt_rat(&(&fi.c4 / &ti.c4))?
    };
    if !u2.is_positive() {
        return None;
    }
    let u = crate::arith::exact_sqrt_rat(&u2)?;
    let [a1, a2, a3, ..] = &from.a;
    let [b1, b2, b3, ..] = &to.a;
    let two = Rational::from_integer(2.into());
    let three = Rational::from_integer(3.into());
    let s = (&u * b1 - a1) / &two;
    let r = (&u2 * b2 - a2 + &s * a1 + &s * &s) / &three;
    let t = (&u2 * &u * b3 - a3 - &r * a1) / &two;
    let iso = Iso { u, r, s, t };
    (from.transform(&iso) == *to).then_some(iso)
}
