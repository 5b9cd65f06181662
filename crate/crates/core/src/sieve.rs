//! Sieving magnified sequences for indices with at most one new prime, and
//! the Thue equations that such indices must satisfy.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{from_biguint, rat_int, strip_common, to_biguint, val};
use crate::curve::{Abc, Point};
use crate::error::{Error, Result};
use crate::factor::{factor, Budget, CofactorStatus};
use crate::heights::{curve_height, is_torsion};
use crate::isogeny::Isogeny;
use crate::poly::Poly;
use crate::real::Real;
use crate::tate::{bad_primes, ensure_minimal};

/// Refuse divisor enumerations beyond this many candidates.
pub const MAX_DIVISORS: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorClassification {
    #[serde(with = "crate::arith::dec")]
    pub b: BigInt,
    pub known_factors: Vec<(String, u32)>,
    #[serde(with = "crate::arith::dec")]
    pub cofactor: BigInt,
    pub cofactor_status: CofactorStatus,
}

impl FactorClassification {
    pub fn primes(&self) -> Vec<BigInt> {
        self.known_factors.iter().map(|(p, _)| p.parse().expect("decimal")).collect()
    }
}

pub fn classify(b: &BigInt, base_primes: &[BigInt], budget: &Budget) -> Result<FactorClassification> {
    if !b.is_positive() {
        return Err(Error::PreconditionViolated("classify needs B ≥ 1".into()));
    }
    let extra: Vec<BigUint> = base_primes.iter().map(to_biguint).collect();
    let f = factor(&to_biguint(b), &extra, budget);
    Ok(FactorClassification {
        b: b.clone(),
        known_factors: f.factors.into_iter().map(|(p, e)| (p.to_string(), e)).collect(),
        cofactor: from_biguint(f.cofactor),
        cofactor_status: f.status,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeCount {
    Zero,
    One,
    TwoOrMore,
    Unknown,
}

impl PrimeCount {
    pub fn at_most_one(self) -> Option<bool> {
        match self {
            PrimeCount::Zero | PrimeCount::One => Some(true),
            PrimeCount::TwoOrMore => Some(false),
            PrimeCount::Unknown => None,
        }
    }
}

/// Distinct primes of `x` not dividing `base`.
pub fn count_new_primes(x: &BigInt, base: &BigInt, budget: &Budget) -> PrimeCount {
    let c = strip_common(x, base);
    if c.is_one() {
        return PrimeCount::Zero;
    }
    let (k, exact) = factor(&to_biguint(&c), &[], budget).distinct_primes();
    prime_count(k, exact)
}

fn prime_count(k: usize, exact: bool) -> PrimeCount {
    match (k, exact) {
        (0, true) => PrimeCount::Zero,
        (1, true) => PrimeCount::One,
        (k, _) if k >= 2 => PrimeCount::TwoOrMore,
        _ => PrimeCount::Unknown,
    }
}

/// Same count as `count_new_primes`, read off an existing classification.
pub fn count_from_class(c: &FactorClassification, base: &BigInt) -> PrimeCount {
    let mut k = c.primes().iter().filter(|p| !(base % *p).is_zero()).count();
    let mut exact = true;
    if !strip_common(&c.cofactor, base).is_one() {
        match c.cofactor_status {
            CofactorStatus::One => {}
            CofactorStatus::ProbablePrime => k += 1,
            CofactorStatus::Composite => {
                // a cofactor sharing primes with the base may leave a single new prime
                k += if c.cofactor.gcd(base).is_one() { 2 } else { 1 };
                exact = false;
            }
            CofactorStatus::Unknown => {
                k += 1;
                exact = false;
            }
        }
    }
    prime_count(k, exact)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveRecord {
    pub n: u64,
    /// B_{nP′}.
    pub domain: FactorClassification,
    /// B_{nσ(P′)}.
    pub image: FactorClassification,
    /// Primes of B_{nP′} outside S(P′).
    pub domain_new: PrimeCount,
    /// Primes of B_{nσ(P′)} outside primes(B_{nP′}) ∪ S(σ(P′)).
    pub new_prime_count: PrimeCount,
    /// nP′ is an S(P′)-integer point.
    pub s_integral: bool,
    /// B_{nσ(P′)} has at most one prime not dividing B_{P′}; None when the budget ran out.
    pub in_i: Option<bool>,
    /// B_{nP′} | B_{nσ(P′)}.
    pub divides: bool,
}

fn multiples(e: &crate::curve::Curve, p: &Point, n_max: u64) -> Result<Vec<Abc>> {
    let mut out = Vec::with_capacity(n_max as usize);
    let mut q = p.clone();
    for n in 1..=n_max {
        out.push(q.abc().ok_or(Error::TorsionPoint)?);
        if n < n_max {
            q = e.add(&q, p)?;
        }
    }
    Ok(out)
}

pub fn sieve_magnified(sigma: &Isogeny, p: &Point, n_max: u64, budget: &Budget) -> Result<Vec<SieveRecord>> {
    if n_max == 0 {
        return Err(Error::PreconditionViolated("n_max must be positive".into()));
    }
    sigma.domain.check(p)?;
    if p.is_infinity() {
        return Err(Error::IdentityPoint);
    }
    if is_torsion(&sigma.domain, p) {
        return Err(Error::TorsionPoint);
    }
    let sp = sigma.image(p)?;
    let dom = multiples(&sigma.domain, p, n_max)?;
    let img = multiples(&sigma.codomain, &sp, n_max)?;
    let b1 = dom[0].b.clone();
    let bs1 = img[0].b.clone();
    let mut base: Vec<BigInt> = Vec::new();
    for b in [&b1, &bs1] {
        if let Some(ps) = crate::factor::prime_divisors(b, budget) {
            base.extend(ps);
        }
    }
    base.sort();
    base.dedup();

    (0..n_max as usize)
        .into_par_iter()
        .map(|i| {
            let (bn, bsn) = (&dom[i].b, &img[i].b);
            let domain = classify(bn, &base, budget)?;
            let mut image_base = base.clone();
            image_base.extend(domain.primes());
            let image = classify(bsn, &image_base, budget)?;
            let domain_new = count_from_class(&domain, &b1);
            let new_prime_count = count_from_class(&image, &(bn * &bs1));
            let in_i = count_from_class(&image, &b1).at_most_one();
            Ok(SieveRecord {
                n: i as u64 + 1,
                domain,
                image,
                domain_new,
                new_prime_count,
                s_integral: domain_new == PrimeCount::Zero,
                in_i,
                divides: (bsn % bn).is_zero(),
            })
        })
        .collect()
}

/// One equation F(X, Y) = rhs_value, with (X, Y) = (A_{nP′}, B_{nP′}²) the
/// expected solution. For odd degree F is the homogenized ψ_σ of degree
/// (deg σ − 1)/2 and rhs_value = d. Even-degree isogenies have no ψ_σ in
/// ℚ[x], so F is the homogenized ψ_σ² of degree deg σ − 1 and rhs_value = ±d².
#[derive(Clone, Debug)]
pub struct ThueInstance {
    pub form: Poly,
    pub form_degree: usize,
    pub squared: bool,
    pub rhs: BigInt,
    pub rhs_value: BigInt,
    pub rhs_bound: Real,
    /// Least r with d | deg(σ)²·Δ^r.
    pub r: u32,
}

impl ThueInstance {
    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        hom_eval_int(&self.form, self.form_degree, x, y)
    }
}

#[derive(Clone, Debug)]
pub struct ThueReport {
    pub n: u64,
    pub a: BigInt,
    pub b: BigInt,
    pub form: Poly,
    pub form_degree: usize,
    pub squared: bool,
    /// F(A_{nP′}, B_{nP′}²).
    pub value: BigInt,
    /// Least r ≤ r_max such that the value divides deg(σ)²·Δ^r (its square
    /// for a squared form).
    pub divides_at_r: Option<u32>,
    pub matched: Option<usize>,
    pub instances: Vec<ThueInstance>,
}

fn hom_eval_int(f: &Poly, deg: usize, x: &BigInt, y: &BigInt) -> BigInt {
    let v = f.hom_eval(deg, &rat_int(x.clone()), &rat_int(y.clone()));
    assert!(v.is_integer(), "integral form");
    v.to_integer()
}

/// The Thue form attached to σ and whether it is the squared one.
pub fn thue_form(sigma: &Isogeny) -> (Poly, usize, bool) {
    let d = sigma.degree as usize;
    if d % 2 == 1 {
        if let Some(g) = sigma.psi_sq.sqrt() {
            let g = if g.lead() < crate::arith::Rational::zero() { -&g } else { g };
            if g.is_integral() {
                return (g, (d - 1) / 2, false);
            }
        }
    }
    (sigma.psi_sq.clone(), d - 1, true)
}

fn divisors_bounded(primes: &[(BigInt, u64)], bound: &BigInt) -> Result<Vec<BigInt>> {
    let mut out = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::new();
        for d in &out {
            let mut q = d.clone();
            for _ in 0..=*e {
                if &q > bound {
                    break;
                }
                next.push(q.clone());
                q *= p;
            }
        }
        if next.len() > MAX_DIVISORS {
            return Err(Error::PreconditionViolated(format!("more than {MAX_DIVISORS} divisors below the bound")));
        }
        out = next;
    }
    out.sort();
    Ok(out)
}

fn least_r(d: &BigInt, deg_sq: &BigInt, disc: &BigInt, r_max: u32, squared: bool) -> Option<u32> {
    let mut n = deg_sq.clone();
    for r in 0..=r_max {
        let target = if squared { &n * &n } else { n.clone() };
        if (&target % d).is_zero() {
            return Some(r);
        }
        n *= disc;
    }
    None
}

pub fn emit_thue(sigma: &Isogeny, n: u64, p: &Point, r_max: u32, prec: usize) -> Result<ThueReport> {
    let e = &sigma.domain;
    ensure_minimal(e)?;
    e.check(p)?;
    if n == 0 {
        return Err(Error::PreconditionViolated("n must be positive".into()));
    }
    let t1 = p.abc().ok_or(Error::IdentityPoint)?;
    let t = e.mul_big(&BigInt::from(n), p)?.abc().ok_or(Error::TorsionPoint)?;
    if strip_common(&t.b, &t1.b).is_one() {
        return Err(Error::FirstAlternative);
    }

    let deg = BigInt::from(sigma.degree);
    let disc = e.disc().abs();
    let deg_sq = &deg * &deg;
    let h = curve_height(e, prec)?;
    let rhs_bound = Real::from_int(&deg, prec) * h.mul_i64(3 * sigma.degree as i64).div_i64(2).exp();
    let bound_int = {
        let f = rhs_bound.round_to_int();
        if Real::from_int(&f, prec) > rhs_bound { f - 1 } else { f }
    };

    let mut primes: Vec<BigInt> = bad_primes(e)?;
    let mut m = deg.clone();
    for q in &primes {
        while (&m % q).is_zero() {
            m /= q;
        }
    }
    if !m.is_one() {
        let extra = crate::factor::prime_divisors(&m, &Budget::default())
            .ok_or_else(|| Error::BudgetExhausted("factoring the degree".into()))?;
        primes.extend(extra);
    }
    primes.sort();
    primes.dedup();
    let exps: Vec<(BigInt, u64)> = primes
        .iter()
        .map(|q| {
            let e = 2 * val(&deg, q).unwrap_or(0) + r_max as u64 * val(&disc, q).unwrap_or(0);
            (q.clone(), e)
        })
        .collect();

    let (form, form_degree, squared) = thue_form(sigma);
    let mut instances = Vec::new();
    for d in divisors_bounded(&exps, &bound_int)? {
        let r = least_r(&d, &deg_sq, &disc, r_max, false).expect("divisor of the r_max product");
        for sign in [1, -1] {
            let rhs: BigInt = &d * sign;
            let rhs_value: BigInt = if squared { &d * &d * sign } else { rhs.clone() };
            instances.push(ThueInstance { form: form.clone(), form_degree, squared, rhs, rhs_value, rhs_bound: rhs_bound.clone(), r });
        }
    }

    let y = &t.b * &t.b;
    let value = hom_eval_int(&form, form_degree, &t.a, &y);
    if value.is_zero() {
        return Err(Error::KernelPoint);
    }
    let divides_at_r = least_r(&value.abs(), &deg_sq, &disc, r_max, squared);
    let matched = instances.iter().position(|i| i.rhs_value == value);
    Ok(ThueReport { n, a: t.a, b: t.b, form, form_degree, squared, value, divides_at_r, matched, instances })
}

/// All (X, Y) with |X|, |Y| ≤ box and F(X, Y) = rhs_value, Y ≠ 0 first sorted by (Y, X).
pub fn brute_force_thue(inst: &ThueInstance, bx: u64) -> Result<Vec<(BigInt, BigInt)>> {
    if bx == 0 {
        return Err(Error::PreconditionViolated("box must be at least 1".into()));
    }
    let coeffs = inst
        .form
        .int_coeffs()
        .ok_or_else(|| Error::PreconditionViolated("form must have integer coefficients".into()))?;
    let b = bx as i64;
    let sols: Vec<Vec<(BigInt, BigInt)>> = (-b..=b)
        .into_par_iter()
        .map(|y| {
            let y = BigInt::from(y);
            // F(X, y) as a polynomial in X
            let mut ypow = BigInt::one();
            let mut cx = vec![BigInt::zero(); inst.form_degree + 1];
            for i in (0..=inst.form_degree).rev() {
                cx[i] = coeffs.get(i).cloned().unwrap_or_default() * &ypow;
                ypow *= &y;
            }
            let mut found = Vec::new();
            for x in -b..=b {
                if x == 0 && y.is_zero() {
                    continue;
                }
                let x = BigInt::from(x);
                let mut acc = BigInt::zero();
                for c in cx.iter().rev() {
                    acc = acc * &x + c;
                }
                if acc == inst.rhs_value {
                    found.push((x, y.clone()));
                }
            }
            found
        })
        .collect();
    Ok(sols.into_iter().flatten().collect())
}

/// Eq. (2) and B_{nP′} | B_{nσ(P′)} across a sieve run.
pub fn record_invariants_hold(records: &[SieveRecord]) -> bool {
    records.iter().all(|r| r.divides)
        && records.iter().all(|s| {
            records.iter().all(|t| {
                let g = s.n.gcd(&t.n);
                s.domain.b.gcd(&t.domain.b) == records[(g - 1) as usize].domain.b
            })
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Curve;

    fn e25_sigma() -> Isogeny {
        Isogeny::velu(&Curve::ea(25), &Poly::x()).unwrap()
    }

    #[test]
    fn classify_small_cases() {
        let b = Budget::default();
        let c = classify(&BigInt::one(), &[], &b).unwrap();
        assert!(c.known_factors.is_empty());
        assert_eq!(c.cofactor_status, CofactorStatus::One);
        let c = classify(&BigInt::from(8), &[], &b).unwrap();
        assert_eq!(c.known_factors, vec![("2".to_string(), 3)]);
        assert!(classify(&BigInt::zero(), &[], &b).is_err());
    }

    #[test]
    fn sieve_37a_with_doubling() {
        let e = Curve::from_ints([0, 0, 1, -1, 0]).unwrap();
        let two = Isogeny::multiplication(&e, 2).unwrap();
        let recs = sieve_magnified(&two, &Point::from_ints(0, 0), 30, &Budget::default()).unwrap();
        assert_eq!(recs.len(), 30);
        assert!(recs[0].s_integral);
        assert!(record_invariants_hold(&recs));
        // B_{n·2P} = B_{2nP}
        let seq = crate::eds::sequence(&e, &Point::from_ints(0, 0), 60).unwrap();
        for r in &recs {
            assert_eq!(r.image.b, seq[(2 * r.n - 1) as usize].b);
        }
    }

    #[test]
    fn sieve_e25_and_thue() {
        let s = e25_sigma();
        let p = Point::from_ints(-4, 6);
        let recs = sieve_magnified(&s, &p, 20, &Budget::default()).unwrap();
        assert!(record_invariants_hold(&recs));
        for r in recs.iter().filter(|r| r.in_i == Some(true) && !r.s_integral) {
            let rep = emit_thue(&s, r.n, &p, 3, 128).unwrap();
            assert!(rep.divides_at_r.is_some(), "n = {}", r.n);
        }
        assert!(matches!(emit_thue(&s, 1, &p, 3, 128), Err(Error::FirstAlternative)));
    }

    #[test]
    fn thue_instances_and_brute_force() {
        let s = e25_sigma();
        let p = Point::from_ints(-4, 6);
        let rep = emit_thue(&s, 2, &p, 3, 128).unwrap();
        assert!(rep.squared);
        // ψ_σ² = x, so F(A, B²) = A
        assert_eq!(rep.value, rep.a);
        let pos = rep.instances.iter().filter(|i| i.rhs.is_positive()).count();
        assert_eq!(pos * 2, rep.instances.len());
        for i in &rep.instances {
            assert!(Real::from_int(&i.rhs.abs(), 128) <= i.rhs_bound);
        }
        if let Some(k) = rep.matched {
            let inst = &rep.instances[k];
            let y = &rep.b * &rep.b;
            let bx = rep.a.abs().max(y.clone()).to_string().parse::<u64>().unwrap();
            if bx <= 400 {
                let sols = brute_force_thue(inst, bx).unwrap();
                assert!(sols.contains(&(rep.a.clone(), y)));
            }
        }
    }

    #[test]
    fn brute_force_small_form() {
        // X² + XY + Y² = 7 has twelve solutions.
        let inst = ThueInstance {
            form: Poly::from_ints(&[1, 1, 1]),
            form_degree: 2,
            squared: false,
            rhs: BigInt::from(7),
            rhs_value: BigInt::from(7),
            rhs_bound: Real::from_i64(7, 64),
            r: 0,
        };
        assert_eq!(brute_force_thue(&inst, 5).unwrap().len(), 12);
        let big = ThueInstance { rhs_value: BigInt::from(10_000), ..inst };
        assert!(brute_force_thue(&big, 3).unwrap().is_empty());
    }
}
