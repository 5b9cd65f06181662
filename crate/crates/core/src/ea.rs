//! The j = 1728 family E_A: y² = x³ − Ax, with A positive and fourth-power free.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{strip_common, to_biguint, val};
use crate::curve::{Curve, Point};
use crate::error::{Error, Result};
use crate::factor::{factor_complete, is_prime, Budget};
use crate::heights::{canonical_height, is_torsion};
use crate::isogeny::{ayad_criterion, Reduction};
use crate::real::Real;
use crate::tate::{tate_reduction, Kodaira};

/// Behaviour of A at 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Class2 {
    MinusOneMod4,
    OneMod4,
    Ord2One,
    FourMod16,
    TwelveMod16,
    Ord2Three,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EaParams {
    pub a: BigInt,
    pub class2: Class2,
    /// Odd primes of A with their valuations.
    pub odd_part: Vec<(BigInt, u32)>,
}

impl EaParams {
    pub fn new(a: &BigInt) -> Result<EaParams> {
        if !a.is_positive() {
            return Err(Error::InvalidA(format!("A = {a} must be positive")));
        }
        let f = factor_complete(a, &Budget::default()).ok_or_else(|| Error::BudgetExhausted(format!("factoring A = {a}")))?;
        if let Some((p, e)) = f.iter().find(|(_, e)| *e >= 4) {
            return Err(Error::InvalidA(format!("ord_{p}(A) = {e} exceeds 3")));
        }
        let r16 = a.mod_floor(&BigInt::from(16)).to_string().parse::<u32>().expect("small");
        let class2 = match (val(a, &BigInt::from(2)).unwrap_or(0), r16 % 4, r16) {
            (0, 3, _) => Class2::MinusOneMod4,
            (0, _, _) => Class2::OneMod4,
            (1, _, _) => Class2::Ord2One,
            (2, _, 4) => Class2::FourMod16,
            (2, _, _) => Class2::TwelveMod16,
            _ => Class2::Ord2Three,
        };
        let odd_part = f.into_iter().filter(|(p, _)| p != &BigInt::from(2)).collect();
        Ok(EaParams { a: a.clone(), class2, odd_part })
    }

    pub fn from_i64(a: i64) -> Result<EaParams> {
        EaParams::new(&BigInt::from(a))
    }

    pub fn curve(&self) -> Curve {
        let z = BigInt::zero;
        Curve::new(z(), z(), z(), -self.a.clone(), z()).expect("A ≠ 0")
    }

    pub fn is_twelve_mod_16(&self) -> bool {
        self.class2 == Class2::TwelveMod16
    }

    pub fn disc(&self) -> BigInt {
        BigInt::from(64) * self.a.pow(3)
    }
}

/// Kodaira types at 2 and at every odd prime of A, from the closed-form table.
pub fn ea_reduction_table(params: &EaParams) -> Vec<(BigInt, Kodaira)> {
    let at2 = match params.class2 {
        Class2::MinusOneMod4 => Kodaira::II,
        Class2::OneMod4 | Class2::Ord2One => Kodaira::III,
        Class2::FourMod16 => Kodaira::InStar(2),
        Class2::TwelveMod16 => Kodaira::InStar(3),
        Class2::Ord2Three => Kodaira::IIIStar,
    };
    let mut out = vec![(BigInt::from(2), at2)];
    for (p, e) in &params.odd_part {
        let k = match e {
            1 => Kodaira::III,
            2 => Kodaira::I0Star,
            _ => Kodaira::IIIStar,
        };
        out.push((p.clone(), k));
    }
    out
}

/// Table rows that disagree with Tate's algorithm.
pub fn ea_reduction_mismatches(params: &EaParams) -> Vec<(BigInt, Kodaira, Kodaira)> {
    let e = params.curve();
    ea_reduction_table(params)
        .into_iter()
        .filter_map(|(p, k)| {
            let t = tate_reduction(&e, &p).kodaira;
            (t != k).then_some((p, k, t))
        })
        .collect()
}

fn check_point(params: &EaParams, p: &Point) -> Result<Curve> {
    let e = params.curve();
    e.check(p)?;
    if p.is_infinity() {
        return Err(Error::IdentityPoint);
    }
    if is_torsion(&e, p) {
        return Err(Error::TorsionPoint);
    }
    Ok(e)
}

#[derive(Clone, Debug)]
pub struct LowerBoundCheck {
    pub bound: Real,
    pub height: Real,
    /// 1/16, or 1/64 when A ≡ 12 mod 16.
    pub factor_denominator: i64,
    pub ok: bool,
}

pub fn ea_height_lower_bound(params: &EaParams, p: &Point, prec: usize) -> Result<LowerBoundCheck> {
    let e = check_point(params, p)?;
    if p.x().expect("affine").is_negative() {
        return Err(Error::BoundedComponent);
    }
    let den = if params.is_twelve_mod_16() { 64 } else { 16 };
    let bound = Real::from_int(&(BigInt::from(2) * &params.a), prec).ln().div_i64(den);
    let height = canonical_height(&e, p, prec)?.canonical_h;
    let ok = height >= &bound - crate::heights::tolerance(prec);
    Ok(LowerBoundCheck { bound, height, factor_denominator: den, ok })
}

#[derive(Clone, Debug)]
pub struct DifferenceCheck {
    /// ĥ(P) − ¼·log|A_P² + A·B_P⁴|.
    pub value: Real,
    pub low: Real,
    pub high: Real,
    pub ok: bool,
}

pub fn ea_height_difference_check(params: &EaParams, p: &Point, prec: usize) -> Result<DifferenceCheck> {
    let e = check_point(params, p)?;
    let t = p.abc().expect("affine");
    let s = &t.a * &t.a + &params.a * t.b.pow(4);
    let h = canonical_height(&e, p, prec)?.canonical_h;
    let value = h - Real::from_int(&s, prec).ln().div_i64(4);
    let ln2 = Real::from_i64(2, prec).ln();
    let low = -(Real::from_int(&params.a, prec).ln().div_i64(4) + ln2.mul_i64(3).div_i64(8));
    let high = ln2.div_i64(12);
    let tol = crate::heights::tolerance(prec);
    let ok = &low - &tol <= value && value <= &high + &tol;
    Ok(DifferenceCheck { value, low, high, ok })
}

/// Whether 2P reduces to a nonsingular point at every bad prime.
pub fn double_has_good_reduction(params: &EaParams, p: &Point) -> Result<bool> {
    let e = check_point(params, p)?;
    let q = e.double(p);
    let mut ok = true;
    for (prime, _) in ea_reduction_table(params) {
        ok &= matches!(ayad_criterion(&e, &q, &prime), Ok(Reduction::Nonsingular) | Err(Error::ReducesToIdentity(_)));
    }
    Ok(ok)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    CompositeProven,
    OutsideRange,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Primality {
    One,
    ProbablePrime,
    Composite,
}

fn primality(b: &BigInt) -> Primality {
    if b.abs().is_one() {
        Primality::One
    } else if is_prime(&to_biguint(b)) {
        Primality::ProbablePrime
    } else {
        Primality::Composite
    }
}

pub const EVEN_INDEX_THRESHOLD: u64 = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvenIndexReport {
    pub n: u64,
    pub verdict: Verdict,
    #[serde(with = "crate::arith::dec")]
    pub b_2n: BigInt,
    pub direct: Primality,
    /// The three sufficient conditions on (A_{nP}, B_{nP}) for B_{2nP} to be composite.
    pub criteria: [bool; 3],
}

/// Compositeness of B_{2nP}, claimed for n ≥ 10 in both congruence classes.
pub fn ea_even_index_composite(params: &EaParams, p: &Point, n: u64) -> Result<EvenIndexReport> {
    let e = check_point(params, p)?;
    if n == 0 {
        return Err(Error::PreconditionViolated("n must be positive".into()));
    }
    let k = e.mul_big(&BigInt::from(n), p)?.abc().ok_or(Error::TorsionPoint)?;
    let b_2n = e.mul_big(&BigInt::from(2 * n), p)?.abc().ok_or(Error::TorsionPoint)?.b;
    let a = &params.a;
    let a2 = a * a;
    let four_a2 = BigInt::from(4) * &a2;
    let bk4 = a * k.b.pow(4);
    let ak_sq = &k.a * &k.a;
    let criteria = [
        k.b > BigInt::one() && k.a.abs() > a2,
        k.b > BigInt::one() && &bk4 - &ak_sq > four_a2,
        k.a.abs() > a2 * a && &ak_sq - &bk4 > four_a2,
    ];
    let direct = primality(&b_2n);
    let in_range = n >= EVEN_INDEX_THRESHOLD;
    if direct != Primality::Composite && (in_range || criteria.iter().any(|&c| c)) {
        return Err(Error::CompositenessContradiction(format!("B_{{{}P}} = {b_2n} tests {direct:?}", 2 * n)));
    }
    let verdict = if in_range { Verdict::CompositeProven } else { Verdict::OutsideRange };
    Ok(EvenIndexReport { n, verdict, b_2n, direct, criteria })
}

#[derive(Clone, Debug)]
pub struct OddMultipleReport {
    pub n: u64,
    pub threshold: u64,
    pub verdict: Verdict,
    pub b_np: BigInt,
    pub direct: Primality,
    /// B_{nP} has a prime not dividing B_{nP′}.
    pub new_prime: bool,
    /// n²ĥ(P′) ≤ log B_{nP′} + ¼log 2A + (1/12)log 2, for odd n.
    pub siegel_p_prime: Option<bool>,
    /// m²n²ĥ(P′) ≤ log B_{nP} + ¼log 2A + (1/12)log 2, for odd n.
    pub siegel_p: Option<bool>,
}

pub fn odd_multiple_threshold(params: &EaParams) -> u64 {
    if params.is_twelve_mod_16() { 8 } else { 4 }
}

/// Compositeness of B_{nP} for P = [m]P′ on the bounded component, m odd.
pub fn ea_odd_multiple_composite(params: &EaParams, p_prime: &Point, m: u64, n: u64, prec: usize) -> Result<OddMultipleReport> {
    if m.is_multiple_of(2) {
        return Err(Error::EvenM);
    }
    if m < 3 || n == 0 {
        return Err(Error::PreconditionViolated("need m ≥ 3 and n ≥ 1".into()));
    }
    let e = check_point(params, p_prime)?;
    let p = e.mul_big(&BigInt::from(m), p_prime)?;
    if !p.x().ok_or(Error::TorsionPoint)?.is_negative() {
        return Err(Error::NotOnBoundedComponent);
    }
    let threshold = odd_multiple_threshold(params);
    let b_np = e.mul_big(&BigInt::from(n), &p)?.abc().ok_or(Error::TorsionPoint)?.b;
    let b_npp = e.mul_big(&BigInt::from(n), p_prime)?.abc().ok_or(Error::TorsionPoint)?.b;
    let direct = primality(&b_np);
    let in_range = n >= threshold;
    if in_range && direct != Primality::Composite {
        return Err(Error::CompositenessContradiction(format!("B_{{{n}P}} = {b_np} tests {direct:?}")));
    }
    let (siegel_p_prime, siegel_p) = if n % 2 == 1 {
        let h = canonical_height(&e, p_prime, prec)?.canonical_h;
        let ln2 = Real::from_i64(2, prec).ln();
        let c = Real::from_int(&(BigInt::from(2) * &params.a), prec).ln().div_i64(4) + ln2.div_i64(12);
        let tol = crate::heights::tolerance(prec);
        let n2h = h.mul_i64((n * n) as i64);
        let lhs1 = n2h.clone();
        let rhs1 = Real::from_int(&b_npp, prec).ln() + &c + &tol;
        let lhs2 = n2h.mul_i64((m * m) as i64);
        let rhs2 = Real::from_int(&b_np, prec).ln() + &c + &tol;
        (Some(lhs1 <= rhs1), Some(lhs2 <= rhs2))
    } else {
        (None, None)
    };
    Ok(OddMultipleReport {
        n,
        threshold,
        verdict: if in_range { Verdict::CompositeProven } else { Verdict::OutsideRange },
        new_prime: !strip_common(&b_np, &b_npp).is_one(),
        b_np,
        direct,
        siegel_p_prime,
        siegel_p,
    })
}
