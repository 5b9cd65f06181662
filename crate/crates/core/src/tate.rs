//! Tate's algorithm: Kodaira type, conductor exponent and local minimality,
//! followed by global minimal models and the conductor/Szpiro ratio.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{inv_mod, modp, ord, val, Rational};
use crate::curve::{b_invariants_int, Curve, Iso, RatModel};
use crate::error::{Error, Result};
use crate::factor::{prime_divisors, Budget};
use crate::real::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kodaira {
    I0,
    In(u32),
    II,
    III,
    IV,
    I0Star,
    InStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl fmt::Display for Kodaira {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kodaira::I0 => write!(f, "I0"),
            Kodaira::In(n) => write!(f, "I{n}"),
            Kodaira::II => write!(f, "II"),
            Kodaira::III => write!(f, "III"),
            Kodaira::IV => write!(f, "IV"),
            Kodaira::I0Star => write!(f, "I0*"),
            Kodaira::InStar(n) => write!(f, "I{n}*"),
            Kodaira::IVStar => write!(f, "IV*"),
            Kodaira::IIIStar => write!(f, "III*"),
            Kodaira::IIStar => write!(f, "II*"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionInfo {
    pub p: BigInt,
    pub kodaira: Kodaira,
    /// ord_p of the minimal discriminant.
    pub ord_disc: u64,
    pub f_p: u64,
    pub is_minimal_at_p: bool,
    /// Change of variables from the input model to a model minimal at p.
    pub to_minimal: Iso,
}

type A5 = [BigInt; 5];

fn rst(a: &A5, r: &BigInt, s: &BigInt, t: &BigInt) -> A5 {
    let m = RatModel { a: a.clone().map(Rational::from_integer) };
    let iso = Iso::rst(Rational::from_integer(r.clone()), Rational::from_integer(s.clone()), Rational::from_integer(t.clone()));
    m.transform(&iso).a.map(|x| x.to_integer())
}

/// Runs Tate's algorithm for the prime `p` on an integral model.
pub fn tate_reduction(e: &Curve, p: &BigInt) -> ReductionInfo {
    let p = p.clone();
    let two = BigInt::from(2);
    let three = BigInt::from(3);
    let pdiv = |x: &BigInt| x.is_zero() || x.is_multiple_of(&p);
    let pv = |x: &BigInt| ord(x, &p);
    let pr = |x: &BigInt| modp(x, &p);
    let pinv = |x: &BigInt| inv_mod(x, &p);
    // square root mod 2 and cube root mod 3 are the identity on residues
    let proot = |x: &BigInt| modp(x, &p);
    let half = if p == two { BigInt::zero() } else { pinv(&two) };

    let mut a: A5 = e.a().clone();
    let mut total = Iso::identity();
    let mut minimal = true;
    loop {
        let inv = b_invariants_int(&a);
        let vd = pv(&inv.disc) as u64;
        let done = |k: Kodaira, f: u64, total: Iso, minimal: bool| ReductionInfo {
            p: p.clone(),
            kodaira: k,
            ord_disc: vd,
            f_p: f,
            is_minimal_at_p: minimal,
            to_minimal: total,
        };
        if vd == 0 {
            return done(Kodaira::I0, 0, total, minimal);
        }
        if !pdiv(&inv.c4) {
            return done(Kodaira::In(vd as u32), 1, total, minimal);
        }
        // Move the singular point to (0, 0).
        let [a1, a2, a3, a4, a6] = a.clone();
        let (r, t);
        if p == two {
            if pdiv(&inv.b2) {
                r = proot(&a4);
                t = proot(&(((&r + &a2) * &r + &a4) * &r + &a6));
            } else {
                let ia1 = pinv(&a1);
                r = pr(&(&ia1 * &a3));
                t = pr(&(&ia1 * (&a4 + &r * &r)));
            }
        } else if p == three {
            r = if pdiv(&inv.b2) { pr(&-&inv.b6) } else { pr(&(-pinv(&inv.b2) * &inv.b4)) };
            t = pr(&(&a1 * &r + &a3));
        } else {
            let rr = if pdiv(&inv.c4) {
                -pinv(&BigInt::from(12)) * &inv.b2
            } else {
                -pinv(&(BigInt::from(12) * &inv.c4)) * (&inv.c6 + &inv.b2 * &inv.c4)
            };
            r = pr(&rr);
            t = pr(&(-&half * (&a1 * &r + &a3)));
        }
        a = rst(&a, &r, &BigInt::zero(), &t);
        total = total.then(&Iso::rst(r.into(), Rational::zero(), t.into()));
        let inv = b_invariants_int(&a);
        if pv(&a[4]) < 2 {
            return done(Kodaira::II, vd, total, minimal);
        }
        if pv(&inv.b8) < 3 {
            return done(Kodaira::III, vd - 1, total, minimal);
        }
        if pv(&inv.b6) < 3 {
            return done(Kodaira::IV, vd - 2, total, minimal);
        }

        let [a1, a2, a3, _, a6] = a.clone();
        let (s, t) = if p == two {
            (proot(&a2), &p * proot(&(&a6 / (&p * &p))))
        } else if p == three {
            (a1.clone(), a3.clone())
        } else {
            (-&a1 * &half, -&a3 * &half)
        };
        a = rst(&a, &BigInt::zero(), &s, &t);
        total = total.then(&Iso::rst(Rational::zero(), s.into(), t.into()));

        let [_, a2, _, a4, a6] = a.clone();
        let p2 = &p * &p;
        let p3 = &p2 * &p;
        let b = pr(&(&a2 / &p));
        let c = pr(&(&a4 / &p2));
        let d = pr(&(&a6 / &p3));
        let bb = &b * &b;
        let cc = &c * &c;
        let bc = &b * &c;
        let w = BigInt::from(27) * &d * &d - &bb * &cc + BigInt::from(4) * &b * &bb * &d - BigInt::from(18) * &bc * &d
            + BigInt::from(4) * &c * &cc;
        let x = BigInt::from(3) * &c - &bb;
        let sw = if pdiv(&w) {
            if pdiv(&x) {
                3
            } else {
                2
            }
        } else {
            1
        };

        if sw == 1 {
            return done(Kodaira::I0Star, vd - 4, total, minimal);
        }
        if sw == 2 {
            let r0 = if p == two {
                proot(&c)
            } else if p == three {
                &c * pinv(&b)
            } else {
                (&bc - BigInt::from(9) * &d) * pinv(&(BigInt::from(2) * &x))
            };
            let r = &p * pr(&r0);
            a = rst(&a, &r, &BigInt::zero(), &BigInt::zero());
            total = total.then(&Iso::rst(r.into(), Rational::zero(), Rational::zero()));
            let mut ix = 3u32;
            let mut iy = 3u32;
            let mut mx = p2.clone();
            let mut my = p2.clone();
            loop {
                let a3t = &a[2] / &my;
                let a6t = &a[4] / (&mx * &my);
                if !pdiv(&(&a3t * &a3t + BigInt::from(4) * &a6t)) {
                    break;
                }
                let t = if p == two { &my * proot(&a6t) } else { &my * pr(&(-&a3t * &half)) };
                a = rst(&a, &BigInt::zero(), &BigInt::zero(), &t);
                total = total.then(&Iso::rst(Rational::zero(), Rational::zero(), t.into()));
                my *= &p;
                iy += 1;
                let a2t = &a[1] / &p;
                let a4t = &a[3] / (&p * &mx);
                let a6t = &a[4] / (&mx * &my);
                if !pdiv(&(&a4t * &a4t - BigInt::from(4) * &a6t * &a2t)) {
                    break;
                }
                let r = if p == two {
                    &mx * proot(&(&a6t * pinv(&a2t)))
                } else {
                    &mx * pr(&(-&a4t * pinv(&(BigInt::from(2) * &a2t))))
                };
                a = rst(&a, &r, &BigInt::zero(), &BigInt::zero());
                total = total.then(&Iso::rst(r.into(), Rational::zero(), Rational::zero()));
                mx *= &p;
                ix += 1;
            }
            let m = ix + iy - 5;
            return done(Kodaira::InStar(m), vd - m as u64 - 4, total, minimal);
        }

        // triple root
        let r0 = if p == two {
            b.clone()
        } else if p == three {
            proot(&-&d)
        } else {
            -&b * pinv(&three)
        };
        let r = &p * pr(&r0);
        a = rst(&a, &r, &BigInt::zero(), &BigInt::zero());
        total = total.then(&Iso::rst(r.into(), Rational::zero(), Rational::zero()));
        let [_, _, a3, _, a6] = a.clone();
        let x3t = pr(&(&a3 / &p2));
        let x6t = pr(&(&a6 / (&p2 * &p2)));
        if !pdiv(&(&x3t * &x3t + BigInt::from(4) * &x6t)) {
            return done(Kodaira::IVStar, vd - 6, total, minimal);
        }
        let t = if p == two { -&p2 * proot(&x6t) } else { &p2 * pr(&(-&x3t * &half)) };
        a = rst(&a, &BigInt::zero(), &BigInt::zero(), &t);
        total = total.then(&Iso::rst(Rational::zero(), Rational::zero(), t.into()));
        let [_, _, _, a4, a6] = a.clone();
        if pv(&a4) < 4 {
            return done(Kodaira::IIIStar, vd - 7, total, minimal);
        }
        if pv(&a6) < 6 {
            return done(Kodaira::IIStar, vd - 8, total, minimal);
        }
        // Not minimal: divide a_i by p^i and start over.
        let [a1, a2, a3, a4, a6] = a.clone();
        a = [&a1 / &p, &a2 / &p2, &a3 / &p3, &a4 / (&p2 * &p2), &a6 / (&p3 * &p3)];
        total = total.then(&Iso::scaling(Rational::from_integer(p.clone())));
        minimal = false;
    }
}

/// Changes of variables making a1, a3 ∈ {0,1}, a2 ∈ {−1,0,1} (u = 1).
pub fn standardize(e: &Curve) -> Iso {
    let a1 = e.a1();
    let s = -a1.div_floor(&BigInt::from(2));
    let c = e.a2() - &s * a1 - &s * &s;
    let r = -(&c + BigInt::one()).div_floor(&BigInt::from(3));
    let a3r = e.a3() + &r * a1;
    let t = -a3r.div_floor(&BigInt::from(2));
    Iso::rst(r.into(), s.into(), t.into())
}

/// Primes dividing the discriminant, or `BudgetExhausted`.
pub fn bad_primes(e: &Curve) -> Result<Vec<BigInt>> {
    prime_divisors(e.disc(), &Budget::default()).ok_or_else(|| Error::BudgetExhausted(format!("factoring Δ = {}", e.disc())))
}

#[derive(Clone, Debug)]
pub struct MinimalModel {
    pub curve: Curve,
    /// Change of variables from the input model.
    pub iso: Iso,
}

/// Global minimal standardized model of an integral curve.
pub fn minimal_model(e: &Curve) -> Result<MinimalModel> {
    let mut cur = e.clone();
    let mut iso = Iso::identity();
    for p in bad_primes(e)? {
        if val(cur.disc(), &p).unwrap_or(0) < 12 {
            continue;
        }
        let info = tate_reduction(&cur, &p);
        if !info.is_minimal_at_p {
            let m = cur.transform(&info.to_minimal);
            cur = m.to_curve()?;
            iso = iso.then(&info.to_minimal);
        }
    }
    let st = standardize(&cur);
    let m = cur.transform(&st).to_curve()?;
    Ok(MinimalModel { curve: m, iso: iso.then(&st) })
}

/// Minimal standardized model of a rational model, with the change of variables.
pub fn minimal_model_rat(m: &RatModel) -> Result<MinimalModel> {
    let sc = m.integral_scaling();
    let ci = m.transform(&sc).to_curve()?;
    let mm = minimal_model(&ci)?;
    Ok(MinimalModel { curve: mm.curve, iso: sc.then(&mm.iso) })
}

pub fn reduction_table(e: &Curve) -> Result<Vec<ReductionInfo>> {
    Ok(bad_primes(e)?.iter().map(|p| tate_reduction(e, p)).collect())
}

/// Errors with `NotMinimal` if some prime admits a smaller model.
pub fn ensure_minimal(e: &Curve) -> Result<()> {
    for p in bad_primes(e)? {
        if val(e.disc(), &p).unwrap_or(0) >= 12 && !tate_reduction(e, &p).is_minimal_at_p {
            return Err(Error::NotMinimal(p.to_string()));
        }
    }
    Ok(())
}

pub fn is_minimal_at(e: &Curve, p: &BigInt) -> bool {
    val(e.disc(), p).unwrap_or(0) < 12 || tate_reduction(e, p).is_minimal_at_p
}

#[derive(Clone, Debug)]
pub struct ConductorReport {
    pub conductor: BigInt,
    pub szpiro: Real,
    pub table: Vec<ReductionInfo>,
}

pub fn conductor_and_szpiro(e: &Curve, prec: usize) -> Result<ConductorReport> {
    let table = reduction_table(e)?;
    if let Some(bad) = table.iter().find(|r| !r.is_minimal_at_p) {
        return Err(Error::NotMinimal(bad.p.to_string()));
    }
    let mut f = BigInt::one();
    for r in &table {
        f *= r.p.pow(r.f_p as u32);
    }
    if f.is_one() {
        return Err(Error::DegenerateSzpiro);
    }
    let num = Real::from_int(&e.disc().abs(), prec).ln();
    let den = Real::from_int(&f, prec).ln();
    Ok(ConductorReport { conductor: f, szpiro: num / den, table })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn kod(a: [i64; 5], p: i64) -> (Kodaira, u64, u64) {
        let r = tate_reduction(&Curve::from_ints(a).unwrap(), &int(p));
        (r.kodaira, r.ord_disc, r.f_p)
    }

    #[test]
    fn ea_types() {
        assert_eq!(kod([0, 0, 0, -25, 0], 5).0, Kodaira::I0Star);
        assert_eq!(kod([0, 0, 0, -20, 0], 2).0, Kodaira::InStar(2));
        assert_eq!(kod([0, 0, 0, -12, 0], 2).0, Kodaira::InStar(3));
        assert_eq!(kod([0, 0, 0, -3, 0], 2).0, Kodaira::II);
        assert_eq!(kod([0, 0, 0, -5, 0], 2).0, Kodaira::III);
        assert_eq!(kod([0, 0, 0, -5, 0], 3), (Kodaira::I0, 0, 0));
    }

    #[test]
    fn known_conductors() {
        // 11a1, 37a1, 389a1, 5077a1 and the conductor-800 curve y² = x³ − 25x
        for (a, n) in [
            ([0, -1, 1, -10, -20], 11),
            ([0, 0, 1, -1, 0], 37),
            ([0, 1, 1, -2, 0], 389),
            ([0, 0, 1, -7, 6], 5077),
            ([0, 0, 0, -25, 0], 800),
        ] {
            let e = Curve::from_ints(a).unwrap();
            let r = conductor_and_szpiro(&e, 128).unwrap();
            assert_eq!(r.conductor, int(n), "{a:?}");
            assert!(r.szpiro.to_f64() >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn szpiro_of_37a() {
        let r = conductor_and_szpiro(&Curve::from_ints([0, 0, 1, -1, 0]).unwrap(), 128).unwrap();
        assert!((r.szpiro.to_f64() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn nonminimal_is_detected_and_fixed() {
        // 11a1 scaled by u = 1/2 and shifted.
        let e = Curve::from_ints([0, -1, 1, -10, -20]).unwrap();
        let iso = Iso { u: Rational::new(1.into(), 2.into()), r: crate::arith::rat(3, 1), s: crate::arith::rat(1, 1), t: crate::arith::rat(-2, 1) };
        let big = e.transform(&iso).to_curve().unwrap();
        assert!(matches!(conductor_and_szpiro(&big, 64), Err(Error::NotMinimal(_))));
        let mm = minimal_model(&big).unwrap();
        assert_eq!(mm.curve, e);
        assert_eq!(big.transform(&mm.iso), e.rat_model());
    }

    #[test]
    fn additive_types_at_2_and_3() {
        // 36a1: y² = x³ + 1
        let e = Curve::from_ints([0, 0, 0, 0, 1]).unwrap();
        assert_eq!(conductor_and_szpiro(&e, 64).unwrap().conductor, int(36));
        // 27a1: y² + y = x³ − 7
        let e = Curve::from_ints([0, 0, 1, 0, -7]).unwrap();
        assert_eq!(conductor_and_szpiro(&e, 64).unwrap().conductor, int(27));
        // 24a1
        let e = Curve::from_ints([0, -1, 0, -4, 4]).unwrap();
        assert_eq!(conductor_and_szpiro(&e, 64).unwrap().conductor, int(24));
    }
}
