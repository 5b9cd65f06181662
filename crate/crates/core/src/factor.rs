//! Trial division, Miller–Rabin, Pollard rho (Brent) and p−1, all driven by
//! operation-count budgets so results never depend on wall-clock time.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub const TRIAL_BOUND: u32 = 1_000_000;

/// Miller–Rabin bases. The first twelve make the test deterministic below
/// 3.3·10^24 (in particular below 2^64); the rest only harden the
/// probable-prime verdict for larger inputs.
pub const MR_BASES: [u32; 20] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Total Pollard rho iterations across the whole classification.
    pub rho_iterations: u64,
    /// Stage-1 smoothness bound for p−1.
    pub pm1_bound: u64,
    /// Cofactors longer than this are not primality-tested.
    pub max_test_bits: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { rho_iterations: 200_000, pm1_bound: 20_000, max_test_bits: 8192 }
    }
}

impl Budget {
    pub fn with_rho(rho_iterations: u64) -> Budget {
        Budget { rho_iterations, ..Budget::default() }
    }
}

pub fn small_primes() -> &'static [u32] {
    static P: OnceLock<Vec<u32>> = OnceLock::new();
    P.get_or_init(|| {
        let n = TRIAL_BOUND as usize;
        let mut sieve = vec![true; n + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= n {
            if sieve[i] {
                let mut j = i * i;
                while j <= n {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        (0..=n).filter(|&k| sieve[k]).map(|k| k as u32).collect()
    })
}

fn mr_round(n: &BigUint, a: &BigUint, d: &BigUint, s: u32) -> bool {
    let nm1 = n - 1u32;
    let mut x = a.modpow(d, n);
    if x.is_one() || x == nm1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == nm1 {
            return true;
        }
        if x.is_one() {
            return false;
        }
    }
    false
}

/// Primality test: exact below 3.3·10^24, probable-prime above.
pub fn is_prime(n: &BigUint) -> bool {
    if n < &BigUint::from(2u32) {
        return false;
    }
    for &p in &small_primes()[..168] {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let nm1 = n - 1u32;
    let s = nm1.trailing_zeros().unwrap_or(0) as u32;
    let d = &nm1 >> s;
    MR_BASES.iter().all(|&a| mr_round(n, &BigUint::from(a), &d, s))
}

pub fn is_prime_int(n: &BigInt) -> bool {
    n.sign() == num_bigint::Sign::Plus && is_prime(n.magnitude())
}

/// Largest k with n = r^k, returning (r, k); k = 1 when n is not a perfect power.
pub fn perfect_power(n: &BigUint) -> (BigUint, u32) {
    if *n <= BigUint::one() {
        return (n.clone(), 1);
    }
    let bits = n.bits() as u32;
    for k in (2..=bits).rev() {
        let r = n.nth_root(k);
        if r > BigUint::one() && r.pow(k) == *n {
            let (rr, kk) = perfect_power(&r);
            return (rr, kk * k);
        }
    }
    (n.clone(), 1)
}

/// Brent's variant of Pollard rho. Consumes iterations from `left`.
pub fn pollard_rho(n: &BigUint, left: &mut u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let one = BigUint::one();
    for c in 1u32.. {
        if *left == 0 {
            return None;
        }
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut x;
        let mut r: u64 = 1;
        let mut q = one.clone();
        let mut g = one.clone();
        let mut ys = y.clone();
        let m: u64 = 64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let steps = m.min(r - k);
                for _ in 0..steps {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                *left = left.saturating_sub(steps);
                g = q.gcd(n);
                k += steps;
                if *left == 0 && g.is_one() {
                    return None;
                }
            }
            r *= 2;
            if g.is_one() {
                continue;
            }
            if g == *n {
                // Backtrack one step at a time.
                loop {
                    ys = f(&ys);
                    let diff = if x > ys { &x - &ys } else { &ys - &x };
                    g = diff.gcd(n);
                    if !g.is_one() {
                        break;
                    }
                }
            }
        }
        if g != *n {
            return Some(g);
        }
    }
    None
}

/// Pollard p−1 stage 1 with smoothness bound `bound`.
pub fn pollard_pm1(n: &BigUint, bound: u64) -> Option<BigUint> {
    let mut a = BigUint::from(2u32);
    for &p in small_primes() {
        let p = p as u64;
        if p > bound {
            break;
        }
        let mut pk = p;
        while pk * p <= bound {
            pk *= p;
        }
        a = a.modpow(&BigUint::from(pk), n);
    }
    if a.is_zero() {
        return None;
    }
    let g = (a + n - 1u32).gcd(n);
    (!g.is_one() && g != *n).then_some(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CofactorStatus {
    One,
    ProbablePrime,
    Composite,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// Primes with exponents, sorted by prime.
    pub factors: Vec<(BigUint, u32)>,
    pub cofactor: BigUint,
    pub status: CofactorStatus,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.status == CofactorStatus::One
    }

    /// Lower bound on the number of distinct primes, and whether it is exact.
    pub fn distinct_primes(&self) -> (usize, bool) {
        let k = self.factors.len();
        match self.status {
            CofactorStatus::One => (k, true),
            CofactorStatus::ProbablePrime => (k + 1, true),
            CofactorStatus::Composite => (k + 2, false),
            CofactorStatus::Unknown => (k + 1, false),
        }
    }
}

fn push_factor(v: &mut Vec<(BigUint, u32)>, p: BigUint, e: u32) {
    if let Some(slot) = v.iter_mut().find(|(q, _)| *q == p) {
        slot.1 += e;
    } else {
        v.push((p, e));
    }
}

fn divide_out(n: &mut BigUint, p: &BigUint) -> u32 {
    let mut e = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return e;
        }
        *n = q;
        e += 1;
    }
}

/// Factor `n` as far as the budget allows.
///
/// `extra` primes are tried first (typically a base prime set), then all
/// primes up to `TRIAL_BOUND`, then p−1 and rho on what remains.
pub fn factor(n: &BigUint, extra: &[BigUint], budget: &Budget) -> Factorization {
    assert!(!n.is_zero(), "factor(0)");
    let mut m = n.clone();
    let mut found = Vec::new();
    for p in extra {
        if *p > BigUint::one() {
            let e = divide_out(&mut m, p);
            if e > 0 {
                push_factor(&mut found, p.clone(), e);
            }
        }
    }
    for &p in small_primes() {
        if m.is_one() {
            break;
        }
        let pb = BigUint::from(p);
        if &pb * &pb > m {
            break;
        }
        let e = divide_out(&mut m, &pb);
        if e > 0 {
            push_factor(&mut found, pb, e);
        }
    }
    let status;
    let mut cofactor = BigUint::one();
    if m.is_one() {
        status = CofactorStatus::One;
    } else if m.bits() > budget.max_test_bits {
        status = CofactorStatus::Unknown;
        cofactor = m;
    } else if is_prime(&m) {
        // Below 2^64 the test is deterministic, so the prime is certified.
        if m.bits() <= 64 {
            push_factor(&mut found, m, 1);
            status = CofactorStatus::One;
        } else {
            status = CofactorStatus::ProbablePrime;
            cofactor = m;
        }
    } else {
        let mut left = budget.rho_iterations;
        let mut work = vec![(m, 1u32)];
        let mut unsplit: Vec<(BigUint, u32)> = Vec::new();
        while let Some((c, mult)) = work.pop() {
            if c.is_one() {
                continue;
            }
            let (r, k) = perfect_power(&c);
            if k > 1 {
                work.push((r, mult * k));
                continue;
            }
            if is_prime(&c) {
                push_factor(&mut found, c, mult);
                continue;
            }
            let d = pollard_pm1(&c, budget.pm1_bound).or_else(|| pollard_rho(&c, &mut left));
            match d {
                Some(d) => {
                    let mut rest = c.clone();
                    let e = divide_out(&mut rest, &d);
                    work.push((d, mult * e));
                    work.push((rest, mult));
                }
                None => unsplit.push((c, mult)),
            }
        }
        if unsplit.is_empty() {
            status = CofactorStatus::One;
        } else {
            status = CofactorStatus::Composite;
            for (c, e) in unsplit {
                cofactor *= c.pow(e);
            }
        }
    }
    found.sort();
    // split branches can report the same prime twice
    let mut merged: Vec<(BigUint, u32)> = Vec::new();
    for (p, e) in found {
        push_factor(&mut merged, p, e);
    }
    Factorization { factors: merged, cofactor, status }
}

/// Complete factorization of a small-ish integer; `None` if the budget ran out.
pub fn factor_complete(n: &BigInt, budget: &Budget) -> Option<Vec<(BigInt, u32)>> {
    let f = factor(n.magnitude(), &[], budget);
    match f.status {
        CofactorStatus::One => {}
        CofactorStatus::ProbablePrime => {
            let mut v: Vec<(BigInt, u32)> = f.factors.into_iter().map(|(p, e)| (p.into(), e)).collect();
            v.push((f.cofactor.into(), 1));
            v.sort();
            return Some(v);
        }
        _ => return None,
    }
    Some(f.factors.into_iter().map(|(p, e)| (p.into(), e)).collect())
}

pub fn prime_divisors(n: &BigInt, budget: &Budget) -> Option<Vec<BigInt>> {
    Some(factor_complete(n, budget)?.into_iter().map(|(p, _)| p).collect())
}

pub fn u64_of(n: &BigUint) -> Option<u64> {
    n.to_u64()
}

pub fn isqrt(n: &BigUint) -> BigUint {
    n.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bu(s: &str) -> BigUint {
        s.parse().unwrap()
    }

    #[test]
    fn primality_small_and_carmichael() {
        assert!(is_prime(&bu("2")));
        assert!(is_prime(&bu("1000003")));
        assert!(!is_prime(&bu("561")));
        assert!(!is_prime(&bu("3215031751")));
        assert!(is_prime(&bu("18446744073709551557")));
        assert!(!is_prime(&bu("3825123056546413051")));
    }

    #[test]
    fn mersenne_127() {
        let m = (BigUint::one() << 127) - 1u32;
        assert!(is_prime(&m));
    }

    #[test]
    fn perfect_powers() {
        assert_eq!(perfect_power(&bu("1024")), (bu("2"), 10));
        assert_eq!(perfect_power(&bu("216")), (bu("6"), 3));
        assert_eq!(perfect_power(&bu("12")), (bu("12"), 1));
    }

    #[test]
    fn factor_eight() {
        let f = factor(&bu("8"), &[], &Budget::default());
        assert_eq!(f.factors, vec![(bu("2"), 3)]);
        assert_eq!(f.status, CofactorStatus::One);
    }

    #[test]
    fn rho_splits_semiprime() {
        // 1000000007 · 998244353 needs rho (both above the trial bound).
        let n = bu("1000000007") * bu("998244353");
        let f = factor(&n, &[], &Budget::default());
        assert_eq!(f.status, CofactorStatus::One);
        assert_eq!(f.factors, vec![(bu("998244353"), 1), (bu("1000000007"), 1)]);
    }

    #[test]
    fn tiny_budget_leaves_composite() {
        let p = bu("1000000000000000000000000000057");
        let q = bu("1000000000000000000000000000099");
        assert!(is_prime(&p) && is_prime(&q));
        let b = Budget { rho_iterations: 10, pm1_bound: 10, max_test_bits: 8192 };
        let f = factor(&(&p * &q), &[], &b);
        assert_eq!(f.status, CofactorStatus::Composite);
        assert_eq!(f.distinct_primes(), (2, false));
    }
}
