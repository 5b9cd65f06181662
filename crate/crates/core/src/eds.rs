//! Elliptic divisibility sequences B_{nP} and the isogeny valuation lemmas.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{ord, val, Rational};
use crate::curve::{Curve, Point};
use crate::error::{Error, Result};
use crate::heights::curve_height_unchecked;
use crate::isogeny::{ayad_criterion, Isogeny, Reduction};
use crate::real::Real;
use crate::tate::{bad_primes, ensure_minimal, is_minimal_at};

/// [n]P = (A/B², C/B³); `is_infinity` marks [n]P = O, with A = C = 0, B = 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdsTerm {
    pub n: u64,
    #[serde(with = "crate::arith::dec")]
    pub a: BigInt,
    #[serde(with = "crate::arith::dec")]
    pub b: BigInt,
    #[serde(with = "crate::arith::dec")]
    pub c: BigInt,
    pub is_infinity: bool,
}

impl EdsTerm {
    fn of(n: u64, q: &Point) -> EdsTerm {
        match q.abc() {
            Some(t) => EdsTerm { n, a: t.a, b: t.b, c: t.c, is_infinity: false },
            None => EdsTerm { n, a: BigInt::zero(), b: BigInt::zero(), c: BigInt::zero(), is_infinity: true },
        }
    }
}

pub fn term(e: &Curve, p: &Point, n: u64) -> Result<EdsTerm> {
    if n == 0 {
        return Err(Error::PreconditionViolated("n must be positive".into()));
    }
    let q = e.mul_big(&BigInt::from(n), p)?;
    Ok(EdsTerm::of(n, &q))
}

/// Terms 1..=n_max, one point addition per step.
pub fn sequence(e: &Curve, p: &Point, n_max: u64) -> Result<Vec<EdsTerm>> {
    e.check(p)?;
    let mut out = Vec::with_capacity(n_max as usize);
    let mut q = p.clone();
    for n in 1..=n_max {
        out.push(EdsTerm::of(n, &q));
        if n < n_max {
            q = e.add(&q, p)?;
        }
    }
    Ok(out)
}

/// Pairs (n, m) violating gcd(B_n, B_m) = B_gcd(n,m); torsion indices are skipped.
pub fn strong_divisibility_failures(seq: &[EdsTerm]) -> Vec<(u64, u64)> {
    use num_integer::Integer;
    let mut bad = Vec::new();
    for s in seq {
        for t in seq {
            if t.n < s.n || s.is_infinity || t.is_infinity {
                continue;
            }
            let g = s.n.gcd(&t.n);
            let tg = &seq[(g - 1) as usize];
            if !tg.is_infinity && s.b.gcd(&t.b) != tg.b {
                bad.push((s.n, t.n));
            }
        }
    }
    bad
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationTransfer {
    pub v_bp: u64,
    pub v_bsp: u64,
    pub ok: bool,
}

/// v(B_P) ≤ v(B_σP), and v(B_σP) ≤ v(B_P) + v(deg σ) when v(B_P) > 0.
pub fn valuation_transfer_check(sigma: &Isogeny, p: &Point, prime: &BigInt) -> Result<ValuationTransfer> {
    for c in [&sigma.domain, &sigma.codomain] {
        if !is_minimal_at(c, prime) {
            return Err(Error::NotMinimal(prime.to_string()));
        }
    }
    if p.is_infinity() {
        return Err(Error::IdentityPoint);
    }
    let sp = sigma.image(p)?;
    if sp.is_infinity() {
        return Err(Error::KernelPoint);
    }
    let v_bp = val(&p.denom_b(), prime).expect("affine");
    let v_bsp = val(&sp.denom_b(), prime).expect("affine");
    let vd = val(&BigInt::from(sigma.degree), prime).unwrap_or(0);
    let ok = v_bp <= v_bsp && (v_bp == 0 || v_bsp <= v_bp + vd);
    Ok(ValuationTransfer { v_bp, v_bsp, ok })
}

/// `valuation_transfer_check` at every prime at once, without factoring:
/// B_P | B_σP, and the part of B_σP/B_P supported on primes of B_P divides deg σ.
pub fn valuation_transfer_all(sigma: &Isogeny, p: &Point) -> Result<bool> {
    ensure_minimal(&sigma.domain)?;
    ensure_minimal(&sigma.codomain)?;
    if p.is_infinity() {
        return Err(Error::IdentityPoint);
    }
    let sp = sigma.image(p)?;
    if sp.is_infinity() {
        return Err(Error::KernelPoint);
    }
    let (bp, bsp) = (p.denom_b(), sp.denom_b());
    if !(&bsp % &bp).is_zero() {
        return Ok(false);
    }
    let g = &bsp / &bp;
    let shared = &g / crate::arith::strip_common(&g, &bp);
    Ok((BigInt::from(sigma.degree) % shared).is_zero())
}

#[derive(Clone, Debug)]
pub struct LinkCheck {
    /// log B_σP.
    pub low: Real,
    /// log |B_P^{deg σ}·ψ_σ(P)|.
    pub middle: Real,
    /// log B_σP + (3/2)·deg σ·h(E′).
    pub high: Real,
    /// Some(equality of B_σP² and B_P^{2 deg σ}·|ψ_σ²(P)|) when P has
    /// nonsingular reduction at every bad prime of the domain.
    pub exact: Option<bool>,
    pub ok: bool,
}

/// B_σP = B_P^{deg σ}·|ψ_σ(P)| under everywhere-nonsingular reduction,
/// otherwise log B_σP ≤ log|B_P^{deg σ}ψ_σ(P)| ≤ log B_σP + (3/2)·deg σ·h(E′).
pub fn division_poly_link_check(sigma: &Isogeny, p: &Point, prec: usize) -> Result<LinkCheck> {
    ensure_minimal(&sigma.domain)?;
    ensure_minimal(&sigma.codomain)?;
    let x = p.x().ok_or(Error::IdentityPoint)?;
    let psq = sigma.psi_sq.eval(x);
    if psq.is_zero() {
        return Err(Error::KernelPoint);
    }
    let sp = sigma.image(p)?;
    let d = sigma.degree;
    let bp = p.denom_b();
    let bsp = sp.denom_b();
    let lhs_sq = Rational::from_integer(bp.pow(2 * d as u32)) * &psq;
    let lhs_sq = if lhs_sq < Rational::zero() { -lhs_sq } else { lhs_sq };

    let primes = bad_primes(&sigma.domain)?;
    let good = primes.iter().all(|q| matches!(ayad_criterion(&sigma.domain, p, q), Ok(Reduction::Nonsingular) | Err(Error::ReducesToIdentity(_))));
    let exact = good.then(|| lhs_sq == Rational::from_integer(&bsp * &bsp));

    let low = Real::from_int(&bsp, prec).ln();
    let middle = Real::from_rat(&lhs_sq, prec).ln().div_i64(2);
    let high = &low + curve_height_unchecked(&sigma.domain, prec).mul_i64(3 * d as i64).div_i64(2);
    let slack = crate::heights::tolerance(prec);
    let ok = exact.unwrap_or(true) && &low - &slack <= middle && middle <= &high + &slack;
    Ok(LinkCheck { low, middle, high, exact, ok })
}

/// ord_p(B_P) for convenience in reports; 0 when p ∤ B_P.
pub fn ord_b(p: &Point, prime: &BigInt) -> i64 {
    let b = p.denom_b();
    if b.is_one() {
        0
    } else {
        ord(&b, prime)
    }
}
